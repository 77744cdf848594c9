//! Shipped example modules with hand-derived ground truth, and the harness
//! that checks the structural theorems on each of them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use once_cell::unsync::OnceCell;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bourbaki::{generic_bourbaki, verify_bourbaki, BourbakiResult, HilbertBurch};
use crate::divisors::{det0, is_free_local, is_ideal_module, nonfree_locus_ideal, norm_representative, zak_report};
use crate::error::{Error, Result};
use crate::groebner::{height_and_grade, saturate, Ideal};
use crate::job::{ideal_mu, ideal_value, load_module, with_field, FieldVisitor, JobSpec};
use crate::presmod::{
    exterior_power, fitting_ideal, image_in_free, mu_local, presentation_of_embedded, quotient_by_generators,
    theta_image, EmbeddedModule, PresentedModule,
};
use crate::rees::{
    analytic_spread, analytic_spread_of_ideal, classify_module, fiber_cone, reduction_number, reduction_number_of,
    rees_presentation, ReductionOutcome,
};
use crate::ring::{Field, PolyMatrix, Polynomial, Ring};

/// Tag of the comparisons against `expected`.
pub const GROUND_TRUTH: &str = "ground-truth";

/// Every tag the harness knows, with the statement it checks.
pub const TAGS: [(&str, &str); 16] = [
    (GROUND_TRUTH, "computed values match the hand-derived ones"),
    ("order-determinant", "det0(E) = F0(G/E)"),
    ("norm", "I_{n-e}(rho) = F_e(E1) ⊆ F_e(E), with equality for pd 1; det0(E) = I_{n-e}(rho) for ideal modules"),
    ("fitting-chain", "F_i = 0 for i < e and F_e ⊆ F_{e+1} ⊆ ... ⊆ F_n = (1)"),
    ("presentation-independence", "Fitting ideals unchanged by a redundant generator"),
    ("exterior-minors", "im theta equals the ideal of maximal minors"),
    ("freeness", "E free ⟺ det0(E) principal ⟺ mu(E) = e"),
    ("nonfree-locus", "V(det0 · det0^-1) = V(F_e(E))"),
    ("zak", "l(det0(E)) ≥ ht F0(G/E), ht F_e(E1), and ht F_e(E) for pd 1"),
    ("bourbaki", "generic Bourbaki ideal: mu(I) = mu(E) - e + 1, rank-1 quotient, I = I_{n-e}(psi)"),
    ("spread-bourbaki", "l(E) = l(I) + e - 1"),
    ("hilbert-burch", "0 → S^m → S^{m+1} → I → 0 exact for the Bourbaki ideal"),
    ("reduction", "mu(E) = mu(U) + mu(E/U), mu(U) ≥ l(E), module and Fitting reduction numbers agree"),
    ("classification", "mu ≥ l ≥ ht F_e + e - 1 ≥ grade F_e + e - 1 ≥ e + 1, and the mu = e+1 / l = e+1 cases"),
    ("base-change", "det0(E ⊗ S[w]) = det0(E) S[w]"),
    ("height-bound", "ht F_e(E) ≤ e + 1 when pd E = 1"),
];

const EXTRA_TAG: &str = "exterior-spread";

pub fn known_tags() -> Vec<&'static str> {
    let mut t: Vec<&str> = TAGS.iter().map(|t| t.0).collect();
    t.push(EXTRA_TAG);
    t
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witnessed {
    pub value: Value,
    /// How the value was derived by hand.
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub job: JobSpec,
    pub tags: Vec<String>,
    /// `job.reduction` is a minimal reduction, so `μ(U) = ℓ(E)`.
    #[serde(default)]
    pub reduction_minimal: bool,
    pub expected: BTreeMap<String, Witnessed>,
}

const SHIPPED: [&str; 6] = [
    include_str!("../../../corpus/free2.json"),
    include_str!("../../../corpus/m-plus-free.json"),
    include_str!("../../../corpus/m-squared.json"),
    include_str!("../../../corpus/x-split.json"),
    include_str!("../../../corpus/ci-pair.json"),
    include_str!("../../../corpus/quadric-3var.json"),
];

pub fn builtin() -> Vec<CorpusEntry> {
    SHIPPED.iter().map(|s| serde_json::from_str(s).expect("shipped corpus parses")).collect()
}

/// Reads every `*.json` file of a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let read = |e: std::io::Error| Error::Input(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(read)?
        .filter_map(|d| d.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let src = std::fs::read_to_string(p).map_err(read)?;
            serde_json::from_str(&src).map_err(|e| Error::Input(format!("{}: {e}", p.display())))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub entry: String,
    pub tag: String,
    pub check: String,
    pub passed: bool,
    pub computed: Value,
    pub expected: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub filter: Option<String>,
    pub seed: Option<u64>,
    pub entries: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    pub tags: BTreeMap<String, Tally>,
    pub passed: bool,
}

impl Summary {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(
                out,
                "{:<14} {:<26} {:<46} {}  {}",
                c.entry,
                c.tag,
                c.check,
                if c.passed { "PASS" } else { "FAIL" },
                c.computed
            );
            if !c.expected.is_null() {
                let _ = write!(out, "  expected {}", c.expected);
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        out.push('\n');
        for (tag, t) in &self.tags {
            let _ = writeln!(out, "{tag:<26} {:>3} passed {:>3} failed", t.passed, t.failed);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "\n{} entries, {} checks, {failed} failed", self.entries.len(), self.checks.len());
        out
    }
}

/// Runs the harness on the shipped corpus.
pub fn verify_all(filter: Option<&str>, seed: Option<u64>) -> Result<Summary> {
    verify_entries(&builtin(), filter, seed)
}

/// Runs the checks of every entry carrying `filter` (all entries when
/// `None`); `seed` overrides the seeds of the entries.
pub fn verify_entries(entries: &[CorpusEntry], filter: Option<&str>, seed: Option<u64>) -> Result<Summary> {
    if let Some(f) = filter {
        if !known_tags().contains(&f) {
            return Err(Error::Input(format!("unknown tag {f:?}; known tags: {}", known_tags().join(", "))));
        }
    }
    let selected: Vec<&CorpusEntry> =
        entries.iter().filter(|e| filter.is_none_or(|f| f == GROUND_TRUTH || e.tags.iter().any(|t| t == f))).collect();
    let per_entry: Vec<Vec<CheckOutcome>> = selected.par_iter().map(|e| check_entry(e, filter, seed)).collect();
    let checks: Vec<CheckOutcome> = per_entry.into_iter().flatten().collect();
    let mut tags: BTreeMap<String, Tally> = BTreeMap::new();
    for c in &checks {
        let t = tags.entry(c.tag.clone()).or_default();
        if c.passed {
            t.passed += 1;
        } else {
            t.failed += 1;
        }
    }
    Ok(Summary {
        filter: filter.map(str::to_owned),
        seed,
        entries: selected.iter().map(|e| e.name.clone()).collect(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        tags,
    })
}

pub fn check_entry(entry: &CorpusEntry, filter: Option<&str>, seed: Option<u64>) -> Vec<CheckOutcome> {
    struct Visit<'a>(&'a CorpusEntry, Option<&'a str>, u64);
    impl FieldVisitor for Visit<'_> {
        type Output = Vec<CheckOutcome>;
        fn visit<F: Field>(self) -> Vec<CheckOutcome> {
            Harness::<F>::run(self.0, self.1, self.2)
        }
    }
    let s = seed.unwrap_or(entry.job.options.seed);
    with_field(&entry.job.ring.field, Visit(entry, filter, s)).unwrap_or_else(|e| {
        vec![CheckOutcome {
            entry: entry.name.clone(),
            tag: GROUND_TRUTH.into(),
            check: "load".into(),
            passed: false,
            computed: Value::Null,
            expected: Value::Null,
            detail: Some(e.to_string()),
        }]
    })
}

type Verdict = Result<(bool, Value, Value)>;

struct Harness<'a, F: Field> {
    entry: &'a CorpusEntry,
    seed: u64,
    module: EmbeddedModule<F>,
    pres: PresentedModule<F>,
    rank: usize,
    bourbaki: OnceCell<Result<BourbakiResult<F>>>,
    out: Vec<CheckOutcome>,
}

fn cmp(computed: Value, expected: Value) -> Verdict {
    Ok((computed == expected, computed, expected))
}

fn holds(ok: bool, computed: Value) -> Verdict {
    Ok((ok, computed, Value::Null))
}

fn gb<F: Field>(i: &Ideal<F>) -> Result<Vec<String>> {
    i.to_strings()
}

fn proper<F: Field>(i: &Ideal<F>) -> Result<bool> {
    Ok(!i.is_zero() && !i.is_unit()?)
}

fn fitting_chain<F: Field>(m: &PresentedModule<F>) -> Result<Vec<Ideal<F>>> {
    (0..=m.num_generators()).map(|i| fitting_ideal(m, i)).collect()
}

/// `V(a) = V(b)`: each generator of one ideal is nilpotent modulo the other.
fn same_zero_set<F: Field>(a: &Ideal<F>, b: &Ideal<F>) -> Result<bool> {
    for (p, q) in [(a, b), (b, a)] {
        for g in p.generators() {
            if !saturate(q, g)?.is_unit()? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl<'a, F: Field> Harness<'a, F> {
    fn run(entry: &'a CorpusEntry, filter: Option<&str>, seed: u64) -> Vec<CheckOutcome> {
        let fail = |detail: String| {
            vec![CheckOutcome {
                entry: entry.name.clone(),
                tag: GROUND_TRUTH.into(),
                check: "load".into(),
                passed: false,
                computed: Value::Null,
                expected: Value::Null,
                detail: Some(detail),
            }]
        };
        let setup = || -> Result<(EmbeddedModule<F>, PresentedModule<F>, usize)> {
            let ring = entry.job.effective_ring().ring()?;
            let module = load_module::<F>(&entry.job.module, &ring)?.embedded()?;
            let pres = presentation_of_embedded(&module)?;
            let rank = module.rank()?;
            Ok((module, pres, rank))
        };
        let (module, pres, rank) = match setup() {
            Ok(s) => s,
            Err(e) => return fail(e.to_string()),
        };
        let mut h = Harness { entry, seed, module, pres, rank, bourbaki: OnceCell::new(), out: Vec::new() };
        let wants = |t: &str| filter.is_none_or(|f| f == t);
        if wants(GROUND_TRUTH) {
            for (key, w) in &entry.expected {
                let r = h.observe(key, &w.value).map(|v| (v == w.value, v, w.value.clone()));
                h.record(GROUND_TRUTH, key, r);
            }
        }
        for tag in &entry.tags {
            if wants(tag) {
                h.theorem_checks(tag);
            }
        }
        h.out
    }

    fn record(&mut self, tag: &str, check: &str, r: Verdict) {
        let (passed, computed, expected, detail) = match r {
            Ok((p, c, e)) => (p, c, e, None),
            Err(e) => (false, Value::Null, Value::Null, Some(e.to_string())),
        };
        self.out.push(CheckOutcome {
            entry: self.entry.name.clone(),
            tag: tag.into(),
            check: check.into(),
            passed,
            computed,
            expected,
            detail,
        });
    }

    fn ring(&self) -> &std::sync::Arc<Ring> {
        self.module.ring()
    }

    fn bourbaki(&self) -> Result<&BourbakiResult<F>> {
        self.bourbaki.get_or_init(|| generic_bourbaki(&self.module, None, self.seed)).as_ref().map_err(Clone::clone)
    }

    fn reduction_u(&self) -> Result<EmbeddedModule<F>> {
        let u = self.entry.job.reduction.as_ref().ok_or_else(|| Error::Input("entry names no reduction".into()))?;
        self.module.select(u)
    }

    fn observe(&self, key: &str, expected: &Value) -> Result<Value> {
        let e = &self.module;
        Ok(match key {
            "rank" => json!(self.rank),
            "det0" => ideal_value(&det0(e)?)?,
            "fitting" => {
                let idx = expected.as_object().ok_or_else(|| Error::Input("fitting expects an object".into()))?;
                let mut m = serde_json::Map::new();
                for k in idx.keys() {
                    let i: usize = k.parse().map_err(|_| Error::Input(format!("bad fitting index {k:?}")))?;
                    m.insert(k.clone(), ideal_value(&fitting_ideal(&self.pres, i)?)?);
                }
                Value::Object(m)
            }
            "presentation" => json!(self.pres.presentation().to_strings()),
            "mu" => json!(mu_local(&self.pres)),
            "analytic_spread" => json!(analytic_spread(e)?),
            "rees_ideal" => ideal_value(&rees_presentation(e)?.defining_ideal)?,
            "fiber_ideal" => ideal_value(&fiber_cone(e)?.ideal)?,
            "fiber_dimension" => json!(fiber_cone(e)?.dimension),
            "nonfree_locus" => ideal_value(&nonfree_locus_ideal(e)?)?,
            "free_local" => json!(is_free_local(e)?),
            "ideal_module" => json!(is_ideal_module(e)?),
            "pd_one" => json!(self.pd_one()),
            "bourbaki_ideal" => ideal_value(&self.bourbaki()?.ideal)?,
            "ell_det0" => json!(analytic_spread_of_ideal(&det0(e)?)?),
            "classification" => serde_json::to_value(classify_module(e)?).expect("serializes"),
            "zak" => serde_json::to_value(zak_report(e, self.seed)?).expect("serializes"),
            "reduction_number" => json!(self.module_reduction()?),
            "fitting_reduction_number" => json!(self.fitting_reduction()?),
            "u_mu" => json!(mu_local(&presentation_of_embedded(&self.reduction_u()?)?)),
            "quotient_mu" => json!(mu_local(&self.quotient_by_u()?)),
            other => return Err(Error::Input(format!("unknown expected key {other:?}"))),
        })
    }

    fn pd_one(&self) -> bool {
        self.pres.presentation().cols() + self.rank == self.pres.num_generators()
    }

    fn module_reduction(&self) -> Result<ReductionOutcome> {
        let u = self.entry.job.reduction.as_ref().ok_or_else(|| Error::Input("entry names no reduction".into()))?;
        reduction_number(u, &self.module, self.entry.job.options.rmax)
    }

    /// Reduction number of `F_e(U)` in `F_e(E)`.
    fn fitting_reduction(&self) -> Result<ReductionOutcome> {
        let u = presentation_of_embedded(&self.reduction_u()?)?;
        let as_module = |i: Ideal<F>| -> Result<EmbeddedModule<F>> {
            Ok(EmbeddedModule::new(PolyMatrix::from_rows(self.ring(), vec![i.groebner_basis()?.to_vec()])))
        };
        let fu = as_module(fitting_ideal(&u, self.rank)?)?;
        let fe = as_module(fitting_ideal(&self.pres, self.rank)?)?;
        reduction_number_of(&fu, &fe, self.entry.job.options.rmax)
    }

    fn quotient_by_u(&self) -> Result<PresentedModule<F>> {
        let u = self.entry.job.reduction.as_ref().ok_or_else(|| Error::Input("entry names no reduction".into()))?;
        quotient_by_generators(&self.pres, u)
    }

    fn theorem_checks(&mut self, tag: &str) {
        match tag {
            "order-determinant" => {
                let r = (|| {
                    let f0 = fitting_ideal(&PresentedModule::new(self.module.matrix().clone()), 0)?;
                    cmp(json!(gb(&det0(&self.module)?)?), json!(gb(&f0)?))
                })();
                self.record(tag, "det0 = F0(G/E)", r);
            }
            "norm" => self.norm_checks(tag),
            "fitting-chain" => {
                let r = (|| {
                    let chain = fitting_chain(&self.pres)?;
                    let mut ok = chain[..self.rank].iter().all(Ideal::is_zero);
                    ok &= chain.last().expect("n + 1 ideals").is_unit()?;
                    for w in chain.windows(2) {
                        ok &= w[1].contains_ideal(&w[0])?;
                    }
                    let shown: Vec<Vec<String>> = chain.iter().map(gb).collect::<Result<_>>()?;
                    holds(ok, json!(shown))
                })();
                self.record(tag, "chain", r);
            }
            "presentation-independence" => {
                let r = (|| {
                    let gens = self.module.generators();
                    let mut extra = vec![Polynomial::zero(self.ring()); self.module.ambient_rank()];
                    for g in &gens {
                        for (s, p) in extra.iter_mut().zip(g) {
                            *s = &*s + p;
                        }
                    }
                    let bigger = presentation_of_embedded(&self.module.with_generator(extra)?)?;
                    let a = fitting_chain(&self.pres)?;
                    let b = fitting_chain(&bigger)?;
                    let mut ok = b.last().expect("nonempty").is_unit()?;
                    for (x, y) in a.iter().zip(&b) {
                        ok &= x.equals(y)?;
                    }
                    holds(ok, json!(bigger.num_generators()))
                })();
                self.record(tag, "redundant generator", r);
            }
            "exterior-minors" => {
                let r = (|| {
                    let phi = self.pres.presentation();
                    let theta = theta_image(phi)?;
                    let minors = Ideal::new(self.ring(), phi.minors(phi.cols())?);
                    holds(theta.equals(&minors)?, json!(gb(&theta)?))
                })();
                self.record(tag, "theta = maximal minors", r);
            }
            "freeness" => {
                let r = (|| {
                    let free = is_free_local(&self.module)?;
                    let principal = ideal_mu(&det0(&self.module)?)? == 1;
                    let minimal = mu_local(&self.pres) == self.rank;
                    holds(
                        free == principal && free == minimal,
                        json!({"free": free, "principal_det0": principal, "mu_equals_rank": minimal}),
                    )
                })();
                self.record(tag, "free ⟺ principal ⟺ mu = e", r);
            }
            "nonfree-locus" => {
                let r = (|| {
                    let locus = nonfree_locus_ideal(&self.module)?;
                    let fe = fitting_ideal(&self.pres, self.rank)?;
                    holds(same_zero_set(&locus, &fe)?, json!({"locus": gb(&locus)?, "fitting": gb(&fe)?}))
                })();
                self.record(tag, "V(locus) = V(F_e)", r);
            }
            "zak" => {
                let r = (|| {
                    let z = zak_report(&self.module, self.seed)?;
                    holds(z.passed(), serde_json::to_value(&z).expect("serializes"))
                })();
                self.record(tag, "bounds", r);
            }
            "bourbaki" => self.bourbaki_checks(tag),
            "spread-bourbaki" => {
                let r = (|| {
                    let b = self.bourbaki()?;
                    let v = verify_bourbaki(b, &self.module)?;
                    holds(v.ell_check, json!({"ell_e": v.ell_e, "ell_ideal": v.ell_ideal, "rank": self.rank}))
                })();
                self.record(tag, "l(E) = l(I) + e - 1", r);
            }
            "hilbert-burch" => {
                let r = (|| {
                    let hb = self.bourbaki()?.certificates.hilbert_burch;
                    holds(hb == HilbertBurch::Exact, serde_json::to_value(hb).expect("serializes"))
                })();
                self.record(tag, "exact", r);
            }
            "reduction" => self.reduction_checks(tag),
            "classification" => self.classification_checks(tag),
            "base-change" => {
                let r = (|| {
                    let ring = self.ring();
                    let mut vars = ring.vars().to_vec();
                    vars.push(ring.fresh_name("w"));
                    let wider = Ring::new(vars, ring.order());
                    let map: Vec<usize> = (0..ring.nvars()).collect();
                    let lifted = det0(&self.module.map_into(&wider, &map))?;
                    let extended = det0(&self.module)?.map_into(&wider, &map);
                    holds(lifted.equals(&extended)? && gb(&lifted)? == gb(&extended)?, json!(gb(&lifted)?))
                })();
                self.record(tag, "det0 commutes with S → S[w]", r);
            }
            "height-bound" => {
                let r = (|| {
                    let fe = fitting_ideal(&self.pres, self.rank)?;
                    if !self.pd_one() || !proper(&fe)? {
                        return Err(Error::precondition("needs pd 1 and a proper nonzero F_e"));
                    }
                    let (h, _) = height_and_grade(&fe)?;
                    holds(h <= self.rank + 1, json!({"height": h, "rank": self.rank}))
                })();
                self.record(tag, "ht F_e ≤ e + 1", r);
            }
            EXTRA_TAG => {
                let r = (|| {
                    let wedge = exterior_power(&self.pres, self.rank)?;
                    let image = image_in_free(&wedge)?;
                    let a = analytic_spread(&image)?;
                    let b = analytic_spread_of_ideal(&det0(&self.module)?)?;
                    cmp(json!(a), json!(b))
                })();
                self.record(tag, "l(wedge^e E) = l(det0)", r);
            }
            other => {
                let r = Err(Error::Input(format!("unknown tag {other:?}")));
                self.record(other, "tag", r);
            }
        }
    }

    fn norm_checks(&mut self, tag: &str) {
        let cert = norm_representative(&self.pres, self.seed);
        let cert = match cert {
            Ok(c) => c,
            Err(e) => return self.record(tag, "representative", Err(e)),
        };
        let r = (|| {
            let fe = fitting_ideal(&self.pres, self.rank)?;
            let ok = fe.contains_ideal(&cert.ideal)?;
            if self.pd_one() {
                return holds(
                    ok && fe.equals(&cert.ideal)?,
                    json!({"norm": gb(&cert.ideal)?, "fitting": gb(&fe)?, "pd_one": true}),
                );
            }
            holds(ok, json!({"norm": gb(&cert.ideal)?, "fitting": gb(&fe)?, "pd_one": false}))
        })();
        self.record(tag, "I(rho) ⊆ F_e(E)", r);
        let r = (|| cmp(json!(gb(&cert.ideal)?), json!(gb(&fitting_ideal(&cert.e1, self.rank)?)?)))();
        self.record(tag, "I(rho) = F_e(E1)", r);
        let r = (|| {
            if !is_ideal_module(&self.module)? {
                return holds(true, json!("not an ideal module"));
            }
            cmp(json!(gb(&det0(&self.module)?)?), json!(gb(&cert.ideal)?))
        })();
        self.record(tag, "det0 = I(rho)", r);
    }

    fn bourbaki_checks(&mut self, tag: &str) {
        let r = (|| {
            let b = self.bourbaki()?;
            let v = verify_bourbaki(b, &self.module)?;
            holds(v.passed(), serde_json::to_value(&v).expect("serializes"))
        })();
        self.record(tag, "verify", r);
        let r = (|| {
            let b = self.bourbaki()?;
            let mu_e = mu_local(&self.pres);
            cmp(json!(ideal_mu(&b.ideal)?), json!(mu_e + 1 - self.rank))
        })();
        self.record(tag, "mu(I) = mu(E) - e + 1", r);
        let r = (|| {
            let b = self.bourbaki()?;
            let (h, g) = height_and_grade(&b.ideal)?;
            let minors = Ideal::new(self.ring(), b.psi.minors(b.psi.cols())?);
            let ok = minors.equals(&b.ideal)? && (!self.pd_one() || (h == 2 && g == 2));
            holds(ok, json!({"height": h, "grade": g}))
        })();
        self.record(tag, "I = I_{n-e}(psi), perfect of grade 2", r);
        let r = (|| {
            let b = self.bourbaki()?;
            let other = generic_bourbaki(&self.module, None, self.seed.wrapping_add(1000))?;
            let invariants = |x: &BourbakiResult<F>| -> Result<Value> {
                let mut degrees = x.ideal.basis_degrees()?;
                degrees.sort_unstable();
                Ok(json!({
                    "mu": ideal_mu(&x.ideal)?,
                    "height": height_and_grade(&x.ideal)?.0,
                    "degrees": degrees,
                }))
            };
            // F_1(Ē) = I for each seed; I itself may move with the specialization.
            let f1_is_i = |x: &BourbakiResult<F>| -> Result<bool> { fitting_ideal(&x.e_bar, 1)?.equals(&x.ideal) };
            let consistent = f1_is_i(b)? && f1_is_i(&other)?;
            let same_ideal = b.ideal.equals(&other.ideal)?;
            let (mine, theirs) = (invariants(b)?, invariants(&other)?);
            holds(
                mine == theirs && consistent,
                json!({"seed": mine, "other_seed": theirs, "f1_is_ideal": consistent, "same_ideal": same_ideal}),
            )
        })();
        self.record(tag, "seed independence", r);
        if mu_local(&self.pres) == self.rank + 1 {
            let r = (|| {
                let i = &self.bourbaki()?.ideal;
                let (mu, ell, ht) = (ideal_mu(i)?, analytic_spread_of_ideal(i)?, height_and_grade(i)?.0);
                holds((mu, ell, ht) == (2, 2, 2), json!({"mu": mu, "ell": ell, "height": ht}))
            })();
            self.record(tag, "mu(E) = e + 1 gives mu = l = ht = 2", r);
        }
        if let Some(w) = self.entry.expected.get("bourbaki_ideal") {
            let expected = w.value.clone();
            let r = (|| {
                let other = generic_bourbaki(&self.module, None, self.seed.wrapping_add(1000))?;
                cmp(ideal_value(&other.ideal)?, expected)
            })();
            self.record(tag, "second seed", r);
        }
    }

    fn reduction_checks(&mut self, tag: &str) {
        let r = (|| {
            let mu_u = mu_local(&presentation_of_embedded(&self.reduction_u()?)?);
            let mu_q = mu_local(&self.quotient_by_u()?);
            let mu_e = mu_local(&self.pres);
            holds(mu_e == mu_u + mu_q, json!({"mu_e": mu_e, "mu_u": mu_u, "mu_quotient": mu_q}))
        })();
        self.record(tag, "mu(E) = mu(U) + mu(E/U)", r);
        let r = (|| {
            let (mu_q, mu_e) = (mu_local(&self.quotient_by_u()?), mu_local(&self.pres));
            holds(mu_q < mu_e, json!({"mu_e": mu_e, "mu_quotient": mu_q}))
        })();
        self.record(tag, "U not in mE", r);
        let r = (|| {
            if !matches!(self.module_reduction()?, ReductionOutcome::Number(_)) {
                return Err(Error::precondition("U is not a reduction within rmax"));
            }
            let mu_u = mu_local(&presentation_of_embedded(&self.reduction_u()?)?);
            let ell = analytic_spread(&self.module)?;
            let ok = mu_u >= ell && (!self.entry.reduction_minimal || mu_u == ell);
            holds(ok, json!({"mu_u": mu_u, "ell": ell, "minimal": self.entry.reduction_minimal}))
        })();
        self.record(tag, "mu(U) ≥ l(E)", r);
        let r = (|| {
            if !self.pd_one() {
                return Err(Error::precondition("the Fitting criterion needs pd 1"));
            }
            cmp(json!(self.module_reduction()?), json!(self.fitting_reduction()?))
        })();
        self.record(tag, "module and Fitting reduction numbers", r);
    }

    fn classification_checks(&mut self, tag: &str) {
        let c = match classify_module(&self.module) {
            Ok(c) => c,
            Err(e) => return self.record(tag, "classify", Err(e)),
        };
        let e = self.rank;
        let chain = c.mu >= c.ell && c.ell + 1 >= c.height + e && c.height >= c.grade && c.grade >= 2;
        let value = serde_json::to_value(&c).expect("serializes");
        self.record(tag, "mu ≥ l ≥ ht + e - 1 ≥ grade + e - 1 ≥ e + 1", holds(chain, value.clone()));
        let mut ok = true;
        if c.mu == e + 1 {
            ok &= c.principal_class && c.ell == e + 1;
        }
        if c.ell == e + 1 {
            ok &= c.equimultiple && c.height == 2 && c.grade == 2;
        }
        self.record(tag, "mu = e + 1 or l = e + 1", holds(ok, value));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_entries_are_well_formed() {
        let entries = builtin();
        let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["free2", "m-plus-free", "m-squared", "x-split", "ci-pair", "quadric-3var"]);
        let known = known_tags();
        for e in &entries {
            assert!(!e.expected.is_empty(), "{}", e.name);
            for t in &e.tags {
                assert!(known.contains(&t.as_str()), "{}: {t}", e.name);
            }
            for (k, w) in &e.expected {
                assert!(!w.provenance.trim().is_empty(), "{}: {k}", e.name);
            }
        }
        for t in known {
            if t != GROUND_TRUTH {
                assert!(entries.iter().any(|e| e.tags.iter().any(|x| x == t)), "tag {t} unused");
            }
        }
    }

    #[test]
    fn full_run_passes() {
        let s = verify_all(None, None).unwrap();
        assert!(s.passed, "{}", s.render());
        assert_eq!(s.entries.len(), 6);
        if std::env::var_os("SHOW_SUMMARY").is_some() {
            println!("{}", s.render());
        }
    }

    #[test]
    fn empty_corpus() {
        let s = verify_entries(&[], None, None).unwrap();
        assert!(s.passed && s.checks.is_empty() && s.entries.is_empty());
    }

    #[test]
    fn filter_selects_tagged_entries() {
        let s = verify_all(Some("zak"), None).unwrap();
        assert!(s.checks.iter().all(|c| c.tag == "zak"));
        assert!(!s.entries.contains(&"free2".to_string()));
        assert!(s.passed, "{}", s.render());
        assert!(matches!(verify_all(Some("no-such-tag"), None), Err(Error::Input(_))));
    }

    #[test]
    fn wrong_expectation_is_reported() {
        let mut entries = builtin();
        entries.truncate(2);
        entries[1].expected.get_mut("mu").unwrap().value = json!(4);
        let s = verify_entries(&entries, Some(GROUND_TRUTH), None).unwrap();
        let bad: Vec<_> = s.failures().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].check.as_str(), &bad[0].computed), ("mu", &json!(3)));
    }
}
