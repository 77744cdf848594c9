//! Buchberger's algorithm with the Gebauer–Möller pair update.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering as AtomicOrdering};

use once_cell::sync::Lazy;

use super::vector::{sub_scaled, Term, Vector};
use crate::error::{Error, Result};
use crate::ring::{Field, Monomial, MonomialOrder};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

static ENV_BUDGET: Lazy<u64> =
    Lazy::new(|| std::env::var("DIVMOD_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET));
static BUDGET_OVERRIDE: AtomicU64 = AtomicU64::new(0);

static AUDIT: AtomicBool = AtomicBool::new(false);
static AUDITED: AtomicUsize = AtomicUsize::new(0);
static AUDIT_FAILURES: AtomicUsize = AtomicUsize::new(0);

/// Reduction steps allowed per Gröbner basis computation. Taken from
/// `DIVMOD_BUDGET` unless overridden with [`set_step_budget`].
pub fn step_budget() -> u64 {
    match BUDGET_OVERRIDE.load(AtomicOrdering::Relaxed) {
        0 => *ENV_BUDGET,
        n => n,
    }
}

/// Overrides the step budget for the whole process; `0` restores the default.
pub fn set_step_budget(n: u64) {
    BUDGET_OVERRIDE.store(n, AtomicOrdering::Relaxed);
}

/// When on, every basis produced is re-checked: all S-pairs must reduce to zero.
pub fn set_audit(on: bool) {
    AUDIT.store(on, AtomicOrdering::Relaxed);
}

/// `(bases audited, bases that failed)` since process start.
pub fn audit_stats() -> (usize, usize) {
    (AUDITED.load(AtomicOrdering::Relaxed), AUDIT_FAILURES.load(AtomicOrdering::Relaxed))
}

pub(crate) struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    pub fn new() -> Self {
        Budget { used: 0, limit: step_budget() }
    }

    fn unlimited() -> Self {
        Budget { used: 0, limit: u64::MAX }
    }

    fn step(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded(self.limit));
        }
        Ok(())
    }
}

fn find_reducer<'a, F: Field>(
    basis: &'a [Vector<F>],
    skip: Option<usize>,
    pos: usize,
    m: &Monomial,
) -> Option<&'a Vector<F>> {
    basis.iter().enumerate().find_map(|(k, b)| {
        if Some(k) == skip {
            return None;
        }
        let (bp, bm, _) = b.lead()?;
        (*bp == pos && bm.divides(m)).then_some(b)
    })
}

/// Fully reduces `v` modulo monic `basis`, skipping index `skip`.
pub(crate) fn reduce<F: Field>(
    v: Vector<F>,
    basis: &[Vector<F>],
    skip: Option<usize>,
    order: MonomialOrder,
    budget: &mut Budget,
) -> Result<Vector<F>> {
    let mut terms = v.terms;
    let mut done = 0;
    while done < terms.len() {
        let (pos, m, c) = terms[done].clone();
        match find_reducer(basis, skip, pos, &m) {
            Some(b) => {
                budget.step()?;
                let q = b.terms[0].1.quotient_of(&m);
                let tail = sub_scaled(order, &terms[done..], &c, &q, &b.terms);
                terms.truncate(done);
                terms.extend(tail);
            }
            None => done += 1,
        }
    }
    Ok(Vector { terms })
}

fn s_vector<F: Field>(a: &Vector<F>, b: &Vector<F>, order: MonomialOrder) -> Vector<F> {
    let (_, am, _) = a.lead().expect("nonzero");
    let (_, bm, _) = b.lead().expect("nonzero");
    let l = am.lcm(bm);
    let fa = a.mul_term(&am.quotient_of(&l), &F::one());
    let fb = b.terms.clone();
    Vector { terms: sub_scaled(order, &fa.terms, &F::one(), &bm.quotient_of(&l), &fb) }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
    coprime: bool,
}

impl Pair {
    fn key(&self) -> (u32, usize, usize) {
        (self.lcm.degree(), self.i, self.j)
    }
}

struct State<F: Field> {
    product_criterion: bool,
    basis: Vec<Vector<F>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<F: Field> State<F> {
    fn lead(&self, k: usize) -> (usize, &Monomial) {
        let t: &Term<F> = &self.basis[k].terms[0];
        (t.0, &t.1)
    }

    fn insert(&mut self, h: Vector<F>) {
        let k = self.basis.len();
        let (hp, hm) = {
            let t = &h.terms[0];
            (t.0, t.1.clone())
        };
        let mut fresh: Vec<Pair> = (0..k)
            .filter(|&i| self.active[i] && self.lead(i).0 == hp)
            .map(|i| {
                let gm = self.lead(i).1;
                Pair { i, j: k, pos: hp, lcm: gm.lcm(&hm), coprime: gm.is_coprime(&hm) }
            })
            .collect();

        // drop pairs whose lcm is a proper multiple of another new lcm
        let lcms: Vec<Monomial> = fresh.iter().map(|p| p.lcm.clone()).collect();
        fresh.retain(|p| !lcms.iter().any(|l| l != &p.lcm && l.divides(&p.lcm)));

        // one pair per lcm; a coprime member kills the whole group
        let mut kept: Vec<Pair> = Vec::new();
        let mut groups: Vec<(Monomial, bool)> = Vec::new();
        for p in fresh {
            match groups.iter_mut().find(|(l, _)| *l == p.lcm) {
                Some(g) => g.1 |= p.coprime,
                None => {
                    groups.push((p.lcm.clone(), p.coprime));
                    kept.push(p);
                }
            }
        }
        if self.product_criterion {
            kept.retain(|p| !groups.iter().any(|(l, c)| *c && *l == p.lcm));
        }

        // chain criterion on the queued pairs
        let leads: Vec<(usize, Monomial)> = (0..k).map(|i| (self.lead(i).0, self.lead(i).1.clone())).collect();
        self.pairs.retain(|p| {
            if p.pos != hp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = leads[p.i].1.lcm(&hm);
            let lj = leads[p.j].1.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });

        for (active, (pos, m)) in self.active.iter_mut().zip(&leads).take(k) {
            if *active && *pos == hp && hm.divides(m) {
                *active = false;
            }
        }
        self.basis.push(h);
        self.active.push(true);
        self.pairs.extend(kept);
    }

    fn pop_pair(&mut self) -> Option<Pair> {
        let (idx, _) = self.pairs.iter().enumerate().min_by_key(|(_, p)| p.key())?;
        Some(self.pairs.swap_remove(idx))
    }
}

/// Reduced Gröbner basis of the span of `gens`: monic, sorted descending by
/// leading term.
pub(crate) fn groebner<F: Field>(gens: Vec<Vector<F>>, order: MonomialOrder) -> Result<Vec<Vector<F>>> {
    let mut budget = Budget::new();
    let single_position = gens.iter().all(|g| g.terms.iter().all(|t| t.0 == 0));
    let mut st = State { product_criterion: single_position, basis: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    for g in gens {
        let r = reduce(g, &st.basis, None, order, &mut budget)?;
        if !r.is_zero() {
            st.insert(r.monic());
        }
    }
    while let Some(p) = st.pop_pair() {
        let s = s_vector(&st.basis[p.i], &st.basis[p.j], order);
        let r = reduce(s, &st.basis, None, order, &mut budget)?;
        if !r.is_zero() {
            st.insert(r.monic());
        }
    }
    let out = interreduce(st.basis, order, &mut budget)?;
    if AUDIT.load(AtomicOrdering::Relaxed) {
        AUDITED.fetch_add(1, AtomicOrdering::Relaxed);
        if !s_pairs_vanish(&out, order) {
            AUDIT_FAILURES.fetch_add(1, AtomicOrdering::Relaxed);
        }
    }
    Ok(out)
}

fn interreduce<F: Field>(basis: Vec<Vector<F>>, order: MonomialOrder, budget: &mut Budget) -> Result<Vec<Vector<F>>> {
    let leads: Vec<(usize, Monomial)> = basis.iter().map(|b| (b.terms[0].0, b.terms[0].1.clone())).collect();
    let minimal: Vec<Vector<F>> = basis
        .into_iter()
        .enumerate()
        .filter(|(i, _)| {
            !leads.iter().enumerate().any(|(j, (p, m))| {
                j != *i && *p == leads[*i].0 && m.divides(&leads[*i].1) && (m != &leads[*i].1 || j < *i)
            })
        })
        .map(|(_, b)| b)
        .collect();
    let mut out = Vec::with_capacity(minimal.len());
    for (k, b) in minimal.iter().enumerate() {
        out.push(reduce(b.clone(), &minimal, Some(k), order, budget)?.monic());
    }
    out.sort_by(|a, b| {
        let (ap, am, _) = &a.terms[0];
        let (bp, bm, _) = &b.terms[0];
        super::vector::term_cmp(order, (*bp, bm), (*ap, am))
    });
    Ok(out)
}

/// Buchberger's criterion: every S-vector of `basis` reduces to zero.
pub(crate) fn s_pairs_vanish<F: Field>(basis: &[Vector<F>], order: MonomialOrder) -> bool {
    let mut budget = Budget::unlimited();
    let monic: Vec<Vector<F>> = basis.iter().filter(|b| !b.is_zero()).cloned().map(Vector::monic).collect();
    for i in 0..monic.len() {
        for j in i + 1..monic.len() {
            if monic[i].terms[0].0 != monic[j].terms[0].0 {
                continue;
            }
            let s = s_vector(&monic[i], &monic[j], order);
            match reduce(s, &monic, None, order, &mut budget) {
                Ok(r) if r.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}
