//! Sparse vectors of a free module in position-over-term form.
//!
//! A polynomial is the special case where every term sits at position 0.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::ring::{Field, Monomial, MonomialOrder, Polynomial, Ring};

pub(crate) type Term<F> = (usize, Monomial, F);

/// Lower positions rank higher; within a position the ring order decides.
pub(crate) fn term_cmp(order: MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Vector<F: Field> {
    pub terms: Vec<Term<F>>,
}

impl<F: Field> Vector<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_poly(p: &Polynomial<F>, pos: usize) -> Self {
        Vector { terms: p.terms().iter().map(|(m, c)| (pos, m.clone(), c.clone())).collect() }
    }

    /// Components in increasing position are already in descending term order.
    pub fn from_components(comps: &[Polynomial<F>]) -> Self {
        let mut terms = Vec::new();
        for (pos, p) in comps.iter().enumerate() {
            terms.extend(p.terms().iter().map(|(m, c)| (pos, m.clone(), c.clone())));
        }
        Vector { terms }
    }

    pub fn to_components(&self, ring: &Arc<Ring>, rank: usize) -> Vec<Polynomial<F>> {
        let mut comps: Vec<Vec<(Monomial, F)>> = vec![Vec::new(); rank];
        for (pos, m, c) in &self.terms {
            comps[*pos].push((m.clone(), c.clone()));
        }
        comps.into_iter().map(|t| Polynomial::from_sorted_terms(ring, t)).collect()
    }

    pub fn to_poly(&self, ring: &Arc<Ring>) -> Polynomial<F> {
        debug_assert!(self.terms.iter().all(|t| t.0 == 0));
        Polynomial::from_sorted_terms(ring, self.terms.iter().map(|(_, m, c)| (m.clone(), c.clone())).collect())
    }

    pub fn lead(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn monic(mut self) -> Self {
        if let Some((_, _, c)) = self.terms.first() {
            if !c.is_one() {
                let inv = c.clone().inv();
                for t in &mut self.terms {
                    t.2 = t.2.clone() * inv.clone();
                }
            }
        }
        self
    }

    pub fn mul_term(&self, m: &Monomial, c: &F) -> Self {
        Vector { terms: self.terms.iter().map(|(p, n, a)| (*p, n.mul(m), a.clone() * c.clone())).collect() }
    }
}

/// `a - c·m·b`, where `a` is a descending slice.
pub(crate) fn sub_scaled<F: Field>(
    order: MonomialOrder,
    a: &[Term<F>],
    c: &F,
    m: &Monomial,
    b: &[Term<F>],
) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut scaled = |t: &Term<F>| (t.0, t.1.mul(m), -(t.2.clone() * c.clone()));
    let mut pending = b.first().map(&mut scaled);
    while let Some(bt) = pending.take() {
        if i >= a.len() {
            out.push(bt);
            j += 1;
            pending = b.get(j).map(&mut scaled);
            continue;
        }
        match term_cmp(order, (a[i].0, &a[i].1), (bt.0, &bt.1)) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
                pending = Some(bt);
            }
            Ordering::Less => {
                out.push(bt);
                j += 1;
                pending = b.get(j).map(&mut scaled);
            }
            Ordering::Equal => {
                let s = a[i].2.clone() + bt.2;
                if !s.is_zero() {
                    out.push((bt.0, bt.1, s));
                }
                i += 1;
                j += 1;
                pending = b.get(j).map(&mut scaled);
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out
}
