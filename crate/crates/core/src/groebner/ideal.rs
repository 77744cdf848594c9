use std::fmt;
use std::sync::Arc;

use once_cell::sync::OnceCell;

use super::engine::{groebner, reduce, s_pairs_vanish, Budget};
use super::vector::Vector;
use crate::error::{Error, Result};
use crate::ring::{check_same_ring, parse_poly, same_ring, Field, Monomial, MonomialOrder, Polynomial, Ring};

/// A finitely generated ideal with a lazily computed reduced Gröbner basis
/// in the ring's own order.
#[derive(Clone)]
pub struct Ideal<F: Field> {
    ring: Arc<Ring>,
    gens: Vec<Polynomial<F>>,
    gb: OnceCell<Vec<Polynomial<F>>>,
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(ToString::to_string).collect();
        write!(f, "Ideal{gens:?}")
    }
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped.
    pub fn new(ring: &Arc<Ring>, gens: impl IntoIterator<Item = Polynomial<F>>) -> Self {
        let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        assert!(gens.iter().all(|g| same_ring(g.ring(), ring)), "generator from a foreign ring");
        Ideal { ring: ring.clone(), gens, gb: OnceCell::new() }
    }

    pub fn parse(ring: &Arc<Ring>, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| parse_poly(s, ring)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ring, polys))
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::new(ring, [])
    }

    pub fn unit(ring: &Arc<Ring>) -> Self {
        Self::new(ring, [Polynomial::one(ring)])
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn groebner_basis(&self) -> Result<&[Polynomial<F>]> {
        self.gb
            .get_or_try_init(|| {
                let vs = self.gens.iter().map(|g| Vector::from_poly(g, 0)).collect();
                let gb = groebner(vs, self.ring.order())?;
                Ok(gb.iter().map(|v| v.to_poly(&self.ring)).collect())
            })
            .map(Vec::as_slice)
    }

    /// Reduced basis under another order, in the correspondingly ordered ring.
    pub fn groebner_basis_in(&self, order: MonomialOrder) -> Result<Vec<Polynomial<F>>> {
        if order == self.ring.order() {
            return Ok(self.groebner_basis()?.to_vec());
        }
        let target = self.ring.with_order(order);
        let moved = Ideal::new(&target, self.gens.iter().map(|g| g.reorder(&target)));
        Ok(moved.groebner_basis()?.to_vec())
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner_basis()?.first().is_some_and(Polynomial::is_constant))
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        check_same_ring(f.ring(), &self.ring)?;
        let gb: Vec<Vector<F>> = self.groebner_basis()?.iter().map(|g| Vector::from_poly(g, 0)).collect();
        let r = reduce(Vector::from_poly(f, 0), &gb, None, self.ring.order(), &mut Budget::new())?;
        Ok(r.to_poly(&self.ring))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> Result<bool> {
        check_same_ring(&self.ring, &other.ring)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal<F>) -> Result<bool> {
        check_same_ring(&self.ring, &other.ring)?;
        Ok(self.groebner_basis()? == other.groebner_basis()?)
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        check_same_ring(&self.ring, &other.ring)?;
        Ok(Ideal::new(&self.ring, self.gens.iter().chain(&other.gens).cloned()))
    }

    pub fn product(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        check_same_ring(&self.ring, &other.ring)?;
        let gens = self.gens.iter().flat_map(|a| other.gens.iter().map(move |b| a * b));
        Ok(Ideal::new(&self.ring, gens))
    }

    /// Image under the variable map of [`Polynomial::map_into`].
    pub fn map_into(&self, target: &Arc<Ring>, var_map: &[usize]) -> Ideal<F> {
        Ideal::new(target, self.gens.iter().map(|g| g.map_into(target, var_map)))
    }

    /// Reduced basis printed canonically.
    pub fn to_strings(&self) -> Result<Vec<String>> {
        Ok(self.groebner_basis()?.iter().map(ToString::to_string).collect())
    }

    /// Total degrees of the reduced basis, sorted.
    pub fn basis_degrees(&self) -> Result<Vec<u32>> {
        let mut d: Vec<u32> = self.groebner_basis()?.iter().filter_map(Polynomial::total_degree).collect();
        d.sort_unstable();
        Ok(d)
    }

    /// `(g₁, …, g_k)`, with `(0)` for the zero ideal.
    pub fn render(&self) -> Result<String> {
        Ok(render_generators(&self.to_strings()?))
    }
}

pub fn render_generators(gens: &[String]) -> String {
    if gens.is_empty() {
        "(0)".to_string()
    } else {
        format!("({})", gens.join(", "))
    }
}

pub fn groebner_basis<F: Field>(i: &Ideal<F>) -> Result<Vec<Polynomial<F>>> {
    Ok(i.groebner_basis()?.to_vec())
}

pub fn normal_form<F: Field>(f: &Polynomial<F>, i: &Ideal<F>) -> Result<Polynomial<F>> {
    i.normal_form(f)
}

pub fn ideal_equal<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<bool> {
    i.equals(j)
}

/// Whether every S-polynomial of `polys` reduces to zero modulo `polys`.
pub fn is_groebner_basis<F: Field>(polys: &[Polynomial<F>]) -> bool {
    let Some(first) = polys.first() else { return true };
    let vs: Vec<Vector<F>> = polys.iter().map(|p| Vector::from_poly(p, 0)).collect();
    s_pairs_vanish(&vs, first.ring().order())
}

/// `i ∩ k[keep]`, returned inside the original ring.
pub fn eliminate<F: Field>(i: &Ideal<F>, keep: &[usize]) -> Result<Ideal<F>> {
    let ring = i.ring();
    let n = ring.nvars();
    let gone: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
    if gone.is_empty() {
        return Ok(Ideal::new(ring, i.groebner_basis()?.to_vec()));
    }
    // eliminated variables first, under a block order
    let perm: Vec<usize> = gone.iter().chain(keep.iter().filter(|&&v| v < n)).copied().collect();
    let names: Vec<String> = perm.iter().map(|&v| ring.vars()[v].clone()).collect();
    let elim = Ring::new(names, MonomialOrder::Block(gone.len()));
    let mut fwd = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        fwd[old] = new;
    }
    let moved = i.map_into(&elim, &fwd);
    let kept: Vec<Polynomial<F>> = moved
        .groebner_basis()?
        .iter()
        .filter(|g| g.support_vars().iter().all(|&v| v >= gone.len()))
        .map(|g| g.map_into(ring, &perm))
        .collect();
    Ok(Ideal::new(ring, kept))
}

/// Adjoins one fresh variable in front under a block order.
fn with_front_variable(ring: &Arc<Ring>, base: &str) -> (Arc<Ring>, Vec<usize>) {
    let mut names = vec![ring.fresh_name(base)];
    names.extend(ring.vars().iter().cloned());
    let big = Ring::new(names, MonomialOrder::Block(1));
    let shift: Vec<usize> = (1..=ring.nvars()).collect();
    (big, shift)
}

fn drop_front_variable<F: Field>(ring: &Arc<Ring>, i: &Ideal<F>) -> Result<Ideal<F>> {
    let big = i.ring();
    let keep: Vec<usize> = (1..big.nvars()).collect();
    let e = eliminate(i, &keep)?;
    let gens = e.generators().iter().map(|g| {
        debug_assert!(g.terms().iter().all(|(m, _)| m.exponents()[0] == 0));
        let terms = g.terms().iter().map(|(m, c)| (Monomial::from_exponents(m.exponents()[1..].to_vec()), c.clone()));
        Polynomial::from_terms(ring, terms)
    });
    Ok(Ideal::new(ring, gens))
}

pub fn intersect<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    check_same_ring(i.ring(), j.ring())?;
    let ring = i.ring();
    let (big, shift) = with_front_variable(ring, "t");
    let t = Polynomial::var(&big, 0);
    let one_minus_t = &Polynomial::one(&big) - &t;
    let gens = i
        .generators()
        .iter()
        .map(|g| &t * &g.map_into(&big, &shift))
        .chain(j.generators().iter().map(|g| &one_minus_t * &g.map_into(&big, &shift)));
    drop_front_variable(ring, &Ideal::new(&big, gens))
}

/// `(i : f)`.
pub fn quotient_by<F: Field>(i: &Ideal<F>, f: &Polynomial<F>) -> Result<Ideal<F>> {
    check_same_ring(i.ring(), f.ring())?;
    if f.is_zero() {
        return Ok(Ideal::unit(i.ring()));
    }
    let cap = intersect(i, &Ideal::new(i.ring(), [f.clone()]))?;
    let gens = cap
        .generators()
        .iter()
        .map(|g| g.exact_div(f).ok_or_else(|| Error::Internal("intersection with (f) not divisible by f".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::new(i.ring(), gens))
}

/// `(i : j) = {f : f·j ⊆ i}`.
pub fn quotient<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    check_same_ring(i.ring(), j.ring())?;
    let mut acc = Ideal::unit(i.ring());
    for g in j.generators() {
        let q = quotient_by(i, g)?;
        acc = if acc.is_unit()? { q } else { intersect(&acc, &q)? };
    }
    Ok(Ideal::new(i.ring(), acc.groebner_basis()?.to_vec()))
}

/// `(i : f^∞)` via a Rabinowitsch variable.
pub fn saturate<F: Field>(i: &Ideal<F>, f: &Polynomial<F>) -> Result<Ideal<F>> {
    check_same_ring(i.ring(), f.ring())?;
    if f.is_zero() {
        return Err(Error::precondition("cannot saturate with respect to 0"));
    }
    let ring = i.ring();
    let (big, shift) = with_front_variable(ring, "u");
    let u = Polynomial::var(&big, 0);
    let rab = &Polynomial::one(&big) - &(&u * &f.map_into(&big, &shift));
    let gens = i.generators().iter().map(|g| g.map_into(&big, &shift)).chain(std::iter::once(rab));
    drop_front_variable(ring, &Ideal::new(&big, gens))
}

/// Krull dimension of `S/i`; `None` for the unit ideal.
pub fn dimension<F: Field>(i: &Ideal<F>) -> Result<Option<usize>> {
    let gb = i.groebner_basis()?;
    if gb.first().is_some_and(Polynomial::is_constant) {
        return Ok(None);
    }
    let supports: Vec<Vec<usize>> =
        gb.iter().map(|g| g.lead_monomial().expect("nonzero").support().collect()).collect();
    Ok(Some(max_independent_set(i.ring().nvars(), &supports)))
}

/// Largest variable set containing no support of a leading monomial.
fn max_independent_set(n: usize, supports: &[Vec<usize>]) -> usize {
    fn go(v: usize, n: usize, chosen: &mut Vec<bool>, size: usize, best: &mut usize, supports: &[Vec<usize>]) {
        if size + (n - v) <= *best {
            return;
        }
        if v == n {
            *best = size;
            return;
        }
        chosen[v] = true;
        let ok = supports.iter().all(|s| !s.iter().all(|&x| chosen[x]));
        if ok {
            go(v + 1, n, chosen, size + 1, best, supports);
        }
        chosen[v] = false;
        go(v + 1, n, chosen, size, best, supports);
    }
    let mut best = 0;
    go(0, n, &mut vec![false; n], 0, &mut best, supports);
    best
}

/// Height and grade of a proper nonzero ideal; they agree in a polynomial ring.
pub fn height_and_grade<F: Field>(i: &Ideal<F>) -> Result<(usize, usize)> {
    if i.groebner_basis()?.is_empty() {
        return Err(Error::precondition("height of the zero ideal"));
    }
    match dimension(i)? {
        None => Err(Error::precondition("height of the unit ideal")),
        Some(d) => {
            let h = i.ring().nvars() - d;
            Ok((h, h))
        }
    }
}
