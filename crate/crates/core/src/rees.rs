//! Rees algebras and fiber cones of embedded modules, reductions, and the
//! numerical classification of ideal modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::divisors::is_ideal_module;
use crate::error::{Error, Result};
use crate::groebner::{dimension, eliminate, height_and_grade, Ideal, Submodule};
use crate::presmod::{fitting_ideal, mu_local, presentation_of_embedded, EmbeddedModule};
use crate::ring::{Field, Monomial, MonomialOrder, PolyMatrix, Polynomial, Ring};

/// Default largest reduction number tried.
pub const DEFAULT_RMAX: usize = 5;

/// Refuse reduction tests with more degree-`r` products than this.
pub const PRODUCT_CAP: usize = 20_000;

/// `R(E) ≅ S[y₁..y_n]/K`, where `y_i ↦ ℓ_i = Σ_j A_{ji} t_j`.
#[derive(Clone, Debug)]
pub struct ReesPresentation<F: Field> {
    /// The base variables followed by `y₁..y_n`.
    pub ring: Arc<Ring>,
    pub base_vars: usize,
    pub defining_ideal: Ideal<F>,
}

impl<F: Field> ReesPresentation<F> {
    pub fn y_vars(&self) -> Vec<usize> {
        (self.base_vars..self.ring.nvars()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct FiberCone<F: Field> {
    /// Polynomial ring in `y₁..y_n` only.
    pub ring: Arc<Ring>,
    pub ideal: Ideal<F>,
    pub dimension: usize,
}

fn y_names(base: &Ring, n: usize) -> Vec<String> {
    (1..=n).map(|i| base.fresh_name(&format!("y{i}"))).collect()
}

/// The kernel of `S[y] → S[t]`, obtained by eliminating `t` from the graph
/// ideal `(y_i − ℓ_i)`.
pub fn rees_presentation<F: Field>(e: &EmbeddedModule<F>) -> Result<ReesPresentation<F>> {
    let base = e.ring();
    let (d, r, n) = (base.nvars(), e.ambient_rank(), e.num_generators());
    let ys = y_names(base, n);
    let mut names: Vec<String> = Vec::new();
    for j in 1..=r {
        let mut t = format!("t{j}");
        while base.vars().contains(&t) || ys.contains(&t) {
            t.insert(0, '_');
        }
        names.push(t);
    }
    names.extend(base.vars().iter().cloned());
    names.extend(ys.iter().cloned());
    let big = Ring::new(names.clone(), MonomialOrder::Block(r));
    let shift: Vec<usize> = (r..r + d).collect();
    let a = e.matrix().map_into(&big, &shift);
    let graph = (0..n).map(|i| {
        let mut l = Polynomial::var(&big, r + d + i);
        for j in 0..r {
            let c = a.get(j, i);
            if !c.is_zero() {
                l = &l - &(c * &Polynomial::var(&big, j));
            }
        }
        l
    });
    let keep: Vec<usize> = (r..r + d + n).collect();
    let k = eliminate(&Ideal::new(&big, graph), &keep)?;
    let xy = Ring::new(names[r..].to_vec(), base.order());
    let down: Vec<usize> = (0..r + d + n).map(|v| v.saturating_sub(r)).collect();
    let gens = k.generators().iter().map(|g| g.map_into(&xy, &down));
    Ok(ReesPresentation { ring: xy.clone(), base_vars: d, defining_ideal: Ideal::new(&xy, gens) })
}

/// `y_i ↦ ℓ_i` applied to a polynomial of the Rees ring; zero exactly for
/// elements of the kernel.
pub fn substitute_forms<F: Field>(rp: &ReesPresentation<F>, e: &EmbeddedModule<F>, f: &Polynomial<F>) -> Polynomial<F> {
    let base = e.ring();
    let (d, r, n) = (base.nvars(), e.ambient_rank(), e.num_generators());
    let mut names: Vec<String> = (1..=r).map(|j| format!("_t{j}")).collect();
    names.extend(rp.ring.vars().iter().cloned());
    let big = Ring::new(names, MonomialOrder::Grevlex);
    let to_big: Vec<usize> = (r..r + d).collect();
    let a = e.matrix().map_into(&big, &to_big);
    let forms: Vec<Polynomial<F>> = (0..n)
        .map(|i| {
            let mut l = Polynomial::zero(&big);
            for j in 0..r {
                l = &l + &(a.get(j, i) * &Polynomial::var(&big, j));
            }
            l
        })
        .collect();
    let mut acc = Polynomial::zero(&big);
    for (m, c) in f.terms() {
        let exps = m.exponents();
        let mut xs = vec![0u32; big.nvars()];
        xs[r..r + d].copy_from_slice(&exps[..d]);
        let mut t = Polynomial::monomial(&big, Monomial::from_exponents(xs), c.clone());
        for (i, &k) in exps[d..].iter().enumerate() {
            t = &t * &forms[i].pow(k);
        }
        acc = &acc + &t;
    }
    acc
}

/// `F(E) = k[y]/((K + (x)) ∩ k[y])`.
pub fn fiber_cone<F: Field>(e: &EmbeddedModule<F>) -> Result<FiberCone<F>> {
    let rp = rees_presentation(e)?;
    fiber_of(&rp)
}

pub(crate) fn fiber_of<F: Field>(rp: &ReesPresentation<F>) -> Result<FiberCone<F>> {
    let d = rp.base_vars;
    let xs = (0..d).map(|v| Polynomial::var(&rp.ring, v));
    let with_x = Ideal::new(&rp.ring, rp.defining_ideal.generators().iter().cloned().chain(xs));
    let cut = eliminate(&with_x, &rp.y_vars())?;
    let yring = Ring::new(rp.ring.vars()[d..].to_vec(), rp.ring.order());
    let down: Vec<usize> = (0..rp.ring.nvars()).map(|v| v.saturating_sub(d)).collect();
    let ideal = Ideal::new(&yring, cut.generators().iter().map(|g| g.map_into(&yring, &down)));
    let dimension = dimension(&ideal)?.ok_or_else(|| Error::Internal("fiber cone ideal is the unit ideal".into()))?;
    Ok(FiberCone { ring: yring, ideal, dimension })
}

/// `ℓ(E) = dim F(E)`.
pub fn analytic_spread<F: Field>(e: &EmbeddedModule<F>) -> Result<usize> {
    Ok(fiber_cone(e)?.dimension)
}

/// Analytic spread of an ideal, viewed as a rank-one module.
pub fn analytic_spread_of_ideal<F: Field>(i: &Ideal<F>) -> Result<usize> {
    let gens = i.generators().to_vec();
    if gens.is_empty() {
        return Ok(0);
    }
    analytic_spread(&EmbeddedModule::new(PolyMatrix::from_rows(i.ring(), vec![gens])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionOutcome {
    /// Least `r` with `R(E)_{r+1} = U·R(E)_r`.
    Number(usize),
    /// No `r ≤ rmax` works.
    Unknown { rmax: usize },
}

/// Multisets of size `k` from `0..n`, as sorted index vectors.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The linear forms `ℓ_i = Σ_j A_{ji} t_j` as maps from t-exponent vectors.
type Form<F> = BTreeMap<Vec<u32>, Polynomial<F>>;

fn forms_of<F: Field>(m: &PolyMatrix<F>) -> Vec<Form<F>> {
    (0..m.cols())
        .map(|i| {
            let mut f = BTreeMap::new();
            for j in 0..m.rows() {
                let c = m.get(j, i);
                if !c.is_zero() {
                    let mut t = vec![0u32; m.rows()];
                    t[j] = 1;
                    f.insert(t, c.clone());
                }
            }
            f
        })
        .collect()
}

fn form_mul<F: Field>(a: &Form<F>, b: &Form<F>) -> Form<F> {
    let mut out: Form<F> = BTreeMap::new();
    for (ta, ca) in a {
        for (tb, cb) in b {
            let t: Vec<u32> = ta.iter().zip(tb).map(|(x, y)| x + y).collect();
            let p = ca * cb;
            match out.get_mut(&t) {
                Some(v) => *v = &*v + &p,
                None => {
                    out.insert(t, p);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn t_monomials(e: usize, deg: u32) -> Vec<Vec<u32>> {
    multisets(e, deg as usize)
        .into_iter()
        .map(|ms| {
            let mut t = vec![0u32; e];
            for i in ms {
                t[i] += 1;
            }
            t
        })
        .collect()
}

fn products<F: Field>(
    forms: &[Form<F>],
    one: &Form<F>,
    k: usize,
    cache: &mut BTreeMap<Vec<usize>, Form<F>>,
) -> Vec<Form<F>> {
    let mut out = Vec::new();
    for ms in multisets(forms.len(), k) {
        let p = match ms.split_last() {
            None => one.clone(),
            Some((&last, rest)) => {
                let base = cache
                    .get(rest)
                    .cloned()
                    .unwrap_or_else(|| rest.iter().fold(one.clone(), |acc, &i| form_mul(&acc, &forms[i])));
                form_mul(&base, &forms[last])
            }
        };
        cache.insert(ms, p.clone());
        out.push(p);
    }
    out
}

fn to_vector<F: Field>(f: &Form<F>, basis: &[Vec<u32>], ring: &Arc<Ring>) -> Vec<Polynomial<F>> {
    basis.iter().map(|t| f.get(t).cloned().unwrap_or_else(|| Polynomial::zero(ring))).collect()
}

/// Reduction number of `E` with respect to the submodule `U ⊆ E` (both in
/// the same ambient free module), trying `r = 0..=rmax`.
pub fn reduction_number_of<F: Field>(
    u: &EmbeddedModule<F>,
    e: &EmbeddedModule<F>,
    rmax: usize,
) -> Result<ReductionOutcome> {
    if u.ambient_rank() != e.ambient_rank() {
        return Err(Error::RankMismatch { expected: e.ambient_rank(), got: u.ambient_rank() });
    }
    let (ru, re) = (u.rank()?, e.rank()?);
    if ru != re {
        return Err(Error::precondition(format!("U has rank {ru} but E has rank {re}; U cannot be a reduction")));
    }
    let whole = Submodule::from_columns(e.matrix());
    for g in u.generators() {
        if !whole.contains(&g)? {
            return Err(Error::precondition("U is not contained in E"));
        }
    }
    let ring = e.ring();
    let rank = e.ambient_rank();
    let ef = forms_of(e.matrix());
    let uf = forms_of(u.matrix());
    let mut one: Form<F> = BTreeMap::new();
    one.insert(vec![0; rank], Polynomial::one(ring));
    let mut cache = BTreeMap::new();
    for r in 0..=rmax {
        let count = multisets(ef.len(), r + 1).len();
        if count > PRODUCT_CAP {
            return Err(Error::ProductCap { degree: r + 1, count, cap: PRODUCT_CAP });
        }
        let basis = t_monomials(rank, r as u32 + 1);
        let lower = products(&ef, &one, r, &mut cache);
        let mut spanning: Vec<Vec<Polynomial<F>>> = Vec::new();
        for w in &lower {
            for uf in &uf {
                let v = to_vector(&form_mul(w, uf), &basis, ring);
                if !spanning.contains(&v) {
                    spanning.push(v);
                }
            }
        }
        let sub = Submodule::new(ring, basis.len(), spanning)?;
        let upper = products(&ef, &one, r + 1, &mut cache);
        let mut all = true;
        for p in &upper {
            if !sub.contains(&to_vector(p, &basis, ring))? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(ReductionOutcome::Number(r));
        }
    }
    Ok(ReductionOutcome::Unknown { rmax })
}

/// Reduction number of `E` with respect to the submodule spanned by the
/// given columns.
pub fn reduction_number<F: Field>(u: &[usize], e: &EmbeddedModule<F>, rmax: usize) -> Result<ReductionOutcome> {
    reduction_number_of(&e.select(u)?, e, rmax)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub mu: usize,
    pub ell: usize,
    pub rank: usize,
    pub height: usize,
    pub grade: usize,
    pub analytic_deviation: i64,
    pub equimultiple: bool,
    pub principal_class: bool,
    pub complete_intersection: bool,
}

/// Numerical invariants of a non-free ideal module, with the chain
/// `μ ≥ ℓ ≥ ht F_e + e − 1 ≥ grade F_e + e − 1 ≥ e + 1` enforced.
pub fn classify_module<F: Field>(e: &EmbeddedModule<F>) -> Result<Classification> {
    if !is_ideal_module(e)? {
        return Err(Error::precondition("classification needs a non-free ideal module"));
    }
    let rank = e.ambient_rank();
    let pres = presentation_of_embedded(e)?;
    let mu = mu_local(&pres);
    let ell = analytic_spread(e)?;
    let (height, grade) = height_and_grade(&fitting_ideal(&pres, rank)?)?;
    let analytic_deviation = ell as i64 - rank as i64 + 1 - height as i64;
    let chain = [mu, ell, height + rank - 1, grade + rank - 1, rank + 1];
    if chain.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Internal(format!("invariant chain violated: {chain:?}")));
    }
    Ok(Classification {
        mu,
        ell,
        rank,
        height,
        grade,
        analytic_deviation,
        equimultiple: analytic_deviation == 0,
        principal_class: mu == height + rank - 1,
        complete_intersection: mu == grade + rank - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, Rational};

    fn ring() -> Arc<Ring> {
        Ring::new(["x", "y"], MonomialOrder::Grevlex)
    }

    fn module(rows: &[&[&str]]) -> EmbeddedModule<Rational> {
        let r = ring();
        EmbeddedModule::new(PolyMatrix::from_rows(
            &r,
            rows.iter().map(|row| row.iter().map(|s| parse_poly(s, &r).unwrap()).collect()).collect(),
        ))
    }

    fn e1() -> EmbeddedModule<Rational> {
        module(&[&["x", "y", "0"], &["0", "0", "1"]])
    }

    fn msq() -> EmbeddedModule<Rational> {
        module(&[&["x^2", "x*y", "y^2"]])
    }

    #[test]
    fn rees_ideals() {
        let rp = rees_presentation(&e1()).unwrap();
        assert_eq!(rp.ring.vars(), ["x", "y", "y1", "y2", "y3"]);
        assert_eq!(rp.defining_ideal.to_strings().unwrap(), ["y*y1 - x*y2"]);
        let rq = rees_presentation(&msq()).unwrap();
        let veronese = Ideal::parse(&rq.ring, &["y*y1 - x*y2", "y*y2 - x*y3", "y1*y3 - y2^2"]).unwrap();
        assert!(rq.defining_ideal.contains_ideal(&veronese).unwrap());
        for g in rq.defining_ideal.groebner_basis().unwrap() {
            assert!(substitute_forms(&rq, &msq(), g).is_zero());
        }
        let free = EmbeddedModule::new(PolyMatrix::<Rational>::identity(&ring(), 2));
        assert!(rees_presentation(&free).unwrap().defining_ideal.groebner_basis().unwrap().is_empty());
    }

    #[test]
    fn fiber_cones() {
        let f = fiber_cone(&e1()).unwrap();
        assert!(f.ideal.groebner_basis().unwrap().is_empty());
        assert_eq!(f.dimension, 3);
        let g = fiber_cone(&msq()).unwrap();
        assert_eq!(g.ideal.to_strings().unwrap(), ["y2^2 - y1*y3"]);
        assert_eq!(g.dimension, 2);
        let free = EmbeddedModule::new(PolyMatrix::<Rational>::identity(&ring(), 2));
        assert_eq!(analytic_spread(&free).unwrap(), 2);
        assert_eq!(analytic_spread(&module(&[&["x", "y"]])).unwrap(), 2);
    }

    #[test]
    fn reduction_numbers() {
        assert_eq!(reduction_number(&[0, 2], &msq(), 5).unwrap(), ReductionOutcome::Number(1));
        assert_eq!(reduction_number(&[0, 1, 2], &msq(), 5).unwrap(), ReductionOutcome::Number(0));
        assert_eq!(reduction_number(&[0], &msq(), 2).unwrap(), ReductionOutcome::Unknown { rmax: 2 });
        assert_eq!(reduction_number(&[0, 1, 2], &e1(), 3).unwrap(), ReductionOutcome::Number(0));
        assert!(reduction_number(&[2], &e1(), 3).is_err());
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(2, 0), vec![Vec::<usize>::new()]);
        assert_eq!(t_monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn classifications() {
        let c = classify_module(&e1()).unwrap();
        assert_eq!((c.mu, c.ell, c.height, c.grade, c.analytic_deviation), (3, 3, 2, 2, 0));
        assert!(c.equimultiple && c.principal_class && c.complete_intersection);
        let c = classify_module(&msq()).unwrap();
        assert_eq!((c.mu, c.ell, c.height, c.analytic_deviation), (3, 2, 2, 0));
        assert!(c.equimultiple && !c.principal_class && !c.complete_intersection);
        let c = classify_module(&module(&[&["x", "y"]])).unwrap();
        assert_eq!((c.mu, c.ell, c.height), (2, 2, 2));
        assert!(c.equimultiple && c.principal_class && c.complete_intersection);
        assert!(classify_module(&module(&[&["x", "0"], &["0", "1"]])).is_err());
    }
}
