#![allow(dead_code)]

use std::sync::Arc;

use divmod::ring::{parse_poly, Field, Monomial, MonomialOrder, PolyMatrix, Polynomial, Rational, Ring, ScalarMatrix};
use divmod::{EmbeddedModule, Ideal};

pub type Q = Rational;

pub fn ring(vars: &[&str]) -> Arc<Ring> {
    Ring::new(vars.iter().copied(), MonomialOrder::Grevlex)
}

pub fn xy() -> Arc<Ring> {
    ring(&["x", "y"])
}

pub fn poly<F: Field>(r: &Arc<Ring>, s: &str) -> Polynomial<F> {
    parse_poly(s, r).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn ideal<F: Field>(r: &Arc<Ring>, gens: &[&str]) -> Ideal<F> {
    Ideal::parse(r, gens).unwrap()
}

pub fn matrix<F: Field>(r: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix<F> {
    PolyMatrix::from_rows(r, rows.iter().map(|row| row.iter().map(|s| poly(r, s)).collect()).collect())
}

pub fn module<F: Field>(r: &Arc<Ring>, rows: &[&[&str]]) -> EmbeddedModule<F> {
    EmbeddedModule::new(matrix(r, rows))
}

pub fn strings<F: Field>(i: &Ideal<F>) -> Vec<String> {
    i.to_strings().unwrap()
}

/// Leibniz expansion over all permutations.
pub fn leibniz<F: Field>(m: &PolyMatrix<F>, rows: &[usize], cols: &[usize]) -> Polynomial<F> {
    let k = rows.len();
    let ring = m.ring().clone();
    let mut total = Polynomial::zero(&ring);
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let inversions =
            (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = Polynomial::one(&ring);
        for i in 0..k {
            term = &term * m.get(rows[i], cols[perm[i]]);
        }
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
        if !next_permutation(&mut perm) {
            return total;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out.sort();
    out
}

/// All `t × t` minors via Leibniz, in lexicographic order of (rows, cols).
pub fn all_minors<F: Field>(m: &PolyMatrix<F>, t: usize) -> Vec<Polynomial<F>> {
    let mut out = Vec::new();
    for r in combinations(m.rows(), t) {
        for c in combinations(m.cols(), t) {
            out.push(leibniz(m, &r, &c));
        }
    }
    out
}

/// Krull dimension from leading monomials: the largest set of variables
/// containing the support of no leading monomial, by exhaustive search.
pub fn brute_force_dimension(nvars: usize, leads: &[Monomial]) -> Option<usize> {
    if leads.iter().any(Monomial::is_one) {
        return None;
    }
    let mut best = 0;
    for mask in 0u32..(1 << nvars) {
        let free = |m: &Monomial| m.support().all(|v| mask & (1 << v) != 0);
        if !leads.iter().any(free) {
            best = best.max(mask.count_ones() as usize);
        }
    }
    Some(best)
}

pub fn leads<F: Field>(i: &Ideal<F>) -> Vec<Monomial> {
    i.groebner_basis().unwrap().iter().map(|g| g.lead_monomial().unwrap().clone()).collect()
}

pub fn derivative<F: Field>(p: &Polynomial<F>, v: usize) -> Polynomial<F> {
    Polynomial::from_terms(
        p.ring(),
        p.terms().iter().filter(|(m, _)| m.exponents()[v] > 0).map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            let k = e[v];
            e[v] -= 1;
            (Monomial::from_exponents(e), c.clone() * F::from_i64(k as i64))
        }),
    )
}

/// Transcendence degree of `k[f₁..f_n]` in characteristic zero: the rank
/// of the Jacobian at a point where it is maximal.
pub fn jacobian_rank(fs: &[Polynomial<Q>], points: &[Vec<i64>]) -> usize {
    let nvars = fs[0].ring().nvars();
    points
        .iter()
        .map(|pt| {
            let pt: Vec<Q> = pt.iter().map(|&v| Q::from_i64(v)).collect();
            let cols: Vec<Vec<Q>> =
                fs.iter().map(|f| (0..nvars).map(|v| derivative(f, v).eval(&pt)).collect()).collect();
            ScalarMatrix::from_columns(nvars, &cols).rank()
        })
        .max()
        .unwrap_or(0)
}

/// Every monomial of degree `d` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if v + 1 == cur.len() {
            cur[v] = left;
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for k in 0..=left {
            cur[v] = k;
            rec(v + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

pub fn is_zero_matrix<F: Field>(m: &PolyMatrix<F>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).is_zero()))
}

pub fn nonzero<F: Field>(f: &F) -> bool {
    !f.is_zero()
}
