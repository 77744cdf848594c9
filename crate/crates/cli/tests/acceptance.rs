//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{brute_force_dimension, leads, xy, Q};
use divmod::bourbaki::{generic_bourbaki, HilbertBurch};
use divmod::corpus::{builtin, verify_all, CorpusEntry};
use divmod::divisors::{det0, is_free_local, nonfree_locus_ideal, norm_representative};
use divmod::groebner::{audit_stats, dimension, height_and_grade, set_audit};
use divmod::job::{ideal_mu, load_module, with_field, FieldVisitor};
use divmod::presmod::{
    fitting_ideal, mu_local, presentation_of_embedded, theta_generators, theta_image, PresentedModule,
};
use divmod::rees::{
    analytic_spread, analytic_spread_of_ideal, fiber_cone, reduction_number, reduction_number_of, rees_presentation,
    ReductionOutcome,
};
use divmod::ring::{Field, Monomial, PolyMatrix, Polynomial, Ring};
use divmod::{EmbeddedModule, Error, Ideal, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<(bool, String)>;

/// Number, title, optional time limit, check.
type Criterion = (u8, &'static str, Option<Duration>, fn() -> Verdict);

fn gb<F: Field>(i: &Ideal<F>) -> Result<Vec<String>> {
    i.to_strings()
}

fn pd_one<F: Field>(p: &PresentedModule<F>, rank: usize) -> bool {
    p.presentation().cols() + rank == p.num_generators()
}

/// Runs criterion `n` on one corpus entry, over the field of the entry.
struct Probe<'a> {
    n: u8,
    entry: &'a CorpusEntry,
}

impl FieldVisitor for Probe<'_> {
    type Output = Verdict;

    fn visit<F: Field>(self) -> Verdict {
        let ring = self.entry.job.effective_ring().ring()?;
        let e: EmbeddedModule<F> = load_module(&self.entry.job.module, &ring)?.embedded()?;
        let rank = e.ambient_rank();
        let name = &self.entry.name;
        match self.n {
            1 => {
                let f0 = fitting_ideal(&PresentedModule::new(e.matrix().clone()), 0)?;
                let d = det0(&e)?;
                Ok((gb(&d)? == gb(&f0)?, format!("{name}: {}", d.render()?)))
            }
            2 => {
                let p = presentation_of_embedded(&e)?;
                let norm = norm_representative(&p, self.entry.job.options.seed)?.ideal;
                let fe = fitting_ideal(&p, rank)?;
                let contained = fe.contains_ideal(&norm)?;
                let equal = norm.equals(&fe)?;
                let must_equal = matches!(name.as_str(), "m-plus-free" | "m-squared");
                Ok((contained && (equal || !must_equal), format!("{name}: ⊆ {contained}, = {equal}")))
            }
            4 => match generic_bourbaki(&e, None, self.entry.job.options.seed) {
                Ok(b) => {
                    let (ell_e, ell_i) = (analytic_spread(&e)?, analytic_spread_of_ideal(&b.ideal)?);
                    Ok((ell_e + 1 == ell_i + rank, format!("{name}: {ell_e} = {ell_i} + {rank} - 1")))
                }
                Err(Error::Precondition(why)) => Ok((true, format!("{name}: skipped ({why})"))),
                Err(err) => Err(err),
            },
            5 => {
                if is_free_local(&e)? {
                    return Ok((true, format!("{name}: free, bounds vacuous")));
                }
                let p = presentation_of_embedded(&e)?;
                let ell = analytic_spread_of_ideal(&det0(&e)?)?;
                let e1 = norm_representative(&p, self.entry.job.options.seed)?.e1;
                let (ht_e1, _) = height_and_grade(&fitting_ideal(&e1, rank)?)?;
                let (ht_e, _) = height_and_grade(&fitting_ideal(&p, rank)?)?;
                let pd1 = pd_one(&p, rank);
                let ok = ell >= ht_e1 && (!pd1 || ell >= ht_e);
                Ok((ok, format!("{name}: l={ell} ht(E1)={ht_e1} ht(E)={ht_e} pd1={pd1}")))
            }
            9 => {
                let mut vars = ring.vars().to_vec();
                vars.push(ring.fresh_name("w"));
                let wider = Ring::new(vars, ring.order());
                let map: Vec<usize> = (0..ring.nvars()).collect();
                let lifted = det0(&e.map_into(&wider, &map))?;
                let extended = det0(&e)?.map_into(&wider, &map);
                Ok((
                    lifted.equals(&extended)? && gb(&lifted)? == gb(&extended)?,
                    format!("{name}: {}", lifted.render()?),
                ))
            }
            10 => {
                let p = presentation_of_embedded(&e)?;
                let mut ideals = vec![det0(&e)?, nonfree_locus_ideal(&e)?];
                for i in 0..=p.num_generators() {
                    ideals.push(fitting_ideal(&p, i)?);
                }
                ideals.push(rees_presentation(&e)?.defining_ideal);
                ideals.push(fiber_cone(&e)?.ideal);
                let mut mismatches = 0;
                for i in &ideals {
                    let nvars = i.ring().nvars();
                    let lm: Vec<Monomial> = leads(i);
                    if dimension(i)? != brute_force_dimension(nvars, &lm) {
                        mismatches += 1;
                    }
                }
                let sum = (0..e.num_generators()).fold(vec![Polynomial::zero(&ring); rank], |acc, j| {
                    acc.iter().enumerate().map(|(i, a)| a + e.matrix().get(i, j)).collect()
                });
                let perturbed = presentation_of_embedded(&e.with_generator(sum)?)?;
                let mut independent = true;
                for i in 0..=p.num_generators() + 1 {
                    independent &= fitting_ideal(&p, i)?.equals(&fitting_ideal(&perturbed, i)?)?;
                }
                Ok((
                    mismatches == 0 && independent,
                    format!(
                        "{name}: {} ideals, {mismatches} dimension mismatches, fitting invariant {independent}",
                        ideals.len()
                    ),
                ))
            }
            _ => unreachable!("criterion {} is not per entry", self.n),
        }
    }
}

fn over_corpus(n: u8) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    for entry in builtin() {
        match with_field(&entry.job.ring.field, Probe { n, entry: &entry }).and_then(|v| v) {
            Ok((passed, detail)) => {
                ok &= passed;
                lines.push(format!("{}{detail}", if passed { "" } else { "MISMATCH " }));
            }
            Err(err) => {
                ok = false;
                lines.push(format!("{}: error {err}", entry.name));
            }
        }
    }
    (ok, lines)
}

fn criterion_3() -> Verdict {
    let r = xy();
    let e: EmbeddedModule<Q> = common::module(&r, &[&["x", "y", "0"], &["0", "0", "1"]]);
    let mu_e = mu_local(&presentation_of_embedded(&e)?);
    let mut seeds = Vec::new();
    let mut ok = true;
    for seed in [1, 2, 3] {
        let b = generic_bourbaki(&e, None, seed)?;
        seeds.push(b.seed);
        let (ht, grade) = height_and_grade(&b.ideal)?;
        let mu_i = ideal_mu(&b.ideal)?;
        ok &= gb(&b.ideal)? == ["x", "y"]
            && mu_i == 2
            && mu_i == mu_e - 2 + 1
            && (ht, grade) == (2, 2)
            && b.certificates.hilbert_burch == HilbertBurch::Exact;
    }
    seeds.dedup();
    Ok((ok && seeds.len() >= 2, format!("accepted seeds {seeds:?}, I = (x, y), mu 2, ht = grade = 2, HB exact")))
}

fn criterion_4() -> Verdict {
    let r = xy();
    let e: EmbeddedModule<Q> = common::module(&r, &[&["x", "y", "0"], &["0", "0", "1"]]);
    let m = common::ideal::<Q>(&r, &["x", "y"]);
    let m2 = common::ideal::<Q>(&r, &["x^2", "x*y", "y^2"]);
    let fc = fiber_cone(&common::module::<Q>(&r, &[&["x^2", "x*y", "y^2"]]))?;
    let ells = (analytic_spread(&e)?, analytic_spread_of_ideal(&m)?, analytic_spread_of_ideal(&m2)?);
    let fiber = gb(&fc.ideal)?;
    let (ok_corpus, lines) = over_corpus(4);
    let ok = ells == (3, 2, 2) && fiber == ["y2^2 - y1*y3"] && fc.dimension == 2 && ok_corpus;
    Ok((ok, format!("l = {ells:?}, fiber {fiber:?} dim {}; {}", fc.dimension, lines.join("; "))))
}

fn fitting_as_module<F: Field>(i: &Ideal<F>) -> Result<EmbeddedModule<F>> {
    Ok(EmbeddedModule::new(PolyMatrix::from_rows(i.ring(), vec![i.groebner_basis()?.to_vec()])))
}

fn criterion_6() -> Verdict {
    let r = xy();
    let e: EmbeddedModule<Q> = common::module(&r, &[&["x^2", "x*y", "y^2"]]);
    let u = e.select(&[0, 2])?;
    let module_r = reduction_number(&[0, 2], &e, 5)?;
    let trivial = reduction_number(&[0, 1, 2], &e, 5)?;
    let fe = fitting_as_module(&fitting_ideal(&presentation_of_embedded(&e)?, 1)?)?;
    let fu = fitting_as_module(&fitting_ideal(&presentation_of_embedded(&u)?, 1)?)?;
    let fitting_r = reduction_number_of(&fu, &fe, 5)?;
    let ok = module_r == ReductionOutcome::Number(1) && trivial == ReductionOutcome::Number(0) && fitting_r == module_r;
    Ok((ok, format!("r_U(E) = {module_r:?}, r_E(E) = {trivial:?}, fitting {fitting_r:?}")))
}

fn criterion_7() -> Verdict {
    let r = xy();
    let free2 = EmbeddedModule::<Q>::new(PolyMatrix::identity(&r, 2));
    let x_split: EmbeddedModule<Q> = common::module(&r, &[&["x", "0"], &["0", "1"]]);
    let e: EmbeddedModule<Q> = common::module(&r, &[&["x", "y", "0"], &["0", "0", "1"]]);
    let locus = gb(&nonfree_locus_ideal(&e)?)?;
    let ok = is_free_local(&free2)? && is_free_local(&x_split)? && locus == ["x", "y"];
    Ok((ok, format!("free2 and x-split free; non-free locus of m-plus-free {locus:?}")))
}

fn random_poly(rng: &mut ChaCha8Rng, r: &std::sync::Arc<Ring>) -> Polynomial<Q> {
    if rng.gen_bool(0.25) {
        return Polynomial::zero(r);
    }
    let terms: Vec<(Monomial, Q)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let a = rng.gen_range(0..=2u32);
            let b = rng.gen_range(0..=2 - a);
            (Monomial::from_exponents(vec![a, b]), Q::from_i64(rng.gen_range(-3..=3)))
        })
        .collect();
    Polynomial::from_terms(r, terms)
}

fn criterion_8() -> Verdict {
    let r = xy();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=n);
        let cols: Vec<Vec<Polynomial<Q>>> =
            (0..m).map(|_| (0..n).map(|_| random_poly(&mut rng, &r)).collect()).collect();
        let psi = PolyMatrix::from_columns(&r, n, cols);
        let wedge = Ideal::new(&r, theta_generators(&psi)?);
        let minors = Ideal::new(&r, psi.minors(m)?);
        let same = wedge.equals(&minors)? && gb(&wedge)? == gb(&minors)? && theta_image(&psi).is_ok();
        mismatches += usize::from(!same);
    }
    Ok((mismatches == 0, format!("200 matrices, {mismatches} mismatches")))
}

fn criterion_10() -> Verdict {
    set_audit(true);
    let before = audit_stats();
    let summary = verify_all(None, None)?;
    let (ok_corpus, lines) = over_corpus(10);
    let (audited, failures) = audit_stats();
    let (audited, failures) = (audited - before.0, failures - before.1);
    set_audit(false);
    let ok = audited > 0 && failures == 0 && summary.passed && ok_corpus;
    Ok((ok, format!("{audited} bases audited, {failures} failures; {}", lines.join("; "))))
}

fn criterion_11() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_divmod");
    let run = || Command::new(bin).args(["verify-corpus", "--seed", "1"]).output();
    let start = Instant::now();
    let a = run().map_err(|e| Error::Input(e.to_string()))?;
    let elapsed = start.elapsed();
    let b = run().map_err(|e| Error::Input(e.to_string()))?;
    let ok = a.status.success() && a.stdout == b.stdout && elapsed < Duration::from_secs(60);
    Ok((ok, format!("{} bytes, identical {}, one run {elapsed:.2?}", a.stdout.len(), a.stdout == b.stdout)))
}

fn from_corpus(n: u8) -> Verdict {
    let (ok, lines) = over_corpus(n);
    Ok((ok, lines.join("; ")))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "det0 equals F0 of the quotient", Some(Duration::from_secs(5)), || from_corpus(1)),
        (2, "norm ideal inside F_e, equal for pd 1", None, || from_corpus(2)),
        (3, "generic Bourbaki ideal of m-plus-free", Some(Duration::from_secs(10)), criterion_3),
        (4, "analytic spreads and the Bourbaki spread formula", Some(Duration::from_secs(10)), criterion_4),
        (5, "Zak bounds", None, || from_corpus(5)),
        (6, "reduction numbers", None, criterion_6),
        (7, "freeness and the non-free locus", None, criterion_7),
        (8, "theta image equals maximal minors", None, criterion_8),
        (9, "det0 commutes with adjoining a variable", None, || from_corpus(9)),
        (10, "engine audit, dimensions, Fitting invariance", None, criterion_10),
        (11, "verify-corpus is deterministic and fast", Some(Duration::from_secs(60)), criterion_11),
    ];
    let mut failed = Vec::new();
    for (n, title, limit, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let elapsed = start.elapsed();
        let (passed, detail) = match verdict {
            Ok((p, d)) => (p && limit.is_none_or(|l| elapsed < l), d),
            Err(e) => (false, format!("error: {e}")),
        };
        println!("criterion {n:>2} {:<4} {title} [{elapsed:.2?}] {detail}", if passed { "PASS" } else { "FAIL" });
        if !passed {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
