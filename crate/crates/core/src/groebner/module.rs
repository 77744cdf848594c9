use std::fmt;
use std::sync::Arc;

use once_cell::sync::OnceCell;

use super::engine::{groebner, reduce, Budget};
use super::vector::Vector;
use crate::error::{Error, Result};
use crate::ring::{check_same_ring, Field, PolyMatrix, Polynomial, Ring};

/// Element of a free module `S^g`, one polynomial per coordinate.
pub type FreeModuleElement<F> = Vec<Polynomial<F>>;

/// Submodule of `S^g` with a lazily computed reduced Gröbner basis under
/// position-over-term order (position 0 highest).
#[derive(Clone)]
pub struct Submodule<F: Field> {
    ring: Arc<Ring>,
    rank: usize,
    gens: Vec<FreeModuleElement<F>>,
    gb: OnceCell<Vec<Vector<F>>>,
}

impl<F: Field> fmt::Debug for Submodule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<Vec<String>> = self.gens.iter().map(|g| g.iter().map(ToString::to_string).collect()).collect();
        write!(f, "Submodule(rank {}, {gens:?})", self.rank)
    }
}

fn check_element<F: Field>(ring: &Arc<Ring>, rank: usize, v: &FreeModuleElement<F>) -> Result<()> {
    if v.len() != rank {
        return Err(Error::RankMismatch { expected: rank, got: v.len() });
    }
    for p in v {
        check_same_ring(p.ring(), ring)?;
    }
    Ok(())
}

impl<F: Field> Submodule<F> {
    pub fn new(ring: &Arc<Ring>, rank: usize, gens: Vec<FreeModuleElement<F>>) -> Result<Self> {
        for g in &gens {
            check_element(ring, rank, g)?;
        }
        let gens = gens.into_iter().filter(|g| g.iter().any(|p| !p.is_zero())).collect();
        Ok(Submodule { ring: ring.clone(), rank, gens, gb: OnceCell::new() })
    }

    /// The submodule spanned by the columns of `m`.
    pub fn from_columns(m: &PolyMatrix<F>) -> Self {
        Self::new(m.ring(), m.rows(), m.columns()).expect("columns have the row count")
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[FreeModuleElement<F>] {
        &self.gens
    }

    fn basis(&self) -> Result<&[Vector<F>]> {
        self.gb
            .get_or_try_init(|| {
                groebner(self.gens.iter().map(|g| Vector::from_components(g)).collect(), self.ring.order())
            })
            .map(Vec::as_slice)
    }

    pub fn groebner_basis(&self) -> Result<Vec<FreeModuleElement<F>>> {
        Ok(self.basis()?.iter().map(|v| v.to_components(&self.ring, self.rank)).collect())
    }

    pub fn normal_form(&self, v: &FreeModuleElement<F>) -> Result<FreeModuleElement<F>> {
        check_element(&self.ring, self.rank, v)?;
        let r = reduce(Vector::from_components(v), self.basis()?, None, self.ring.order(), &mut Budget::new())?;
        Ok(r.to_components(&self.ring, self.rank))
    }

    pub fn contains(&self, v: &FreeModuleElement<F>) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(Polynomial::is_zero))
    }

    pub fn contains_submodule(&self, other: &Submodule<F>) -> Result<bool> {
        if other.rank != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: other.rank });
        }
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Submodule<F>) -> Result<bool> {
        if other.rank != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: other.rank });
        }
        check_same_ring(&self.ring, &other.ring)?;
        Ok(self.basis()? == other.basis()?)
    }
}

pub fn submodule_membership<F: Field>(v: &FreeModuleElement<F>, m: &Submodule<F>) -> Result<bool> {
    m.contains(v)
}

/// Generators of the relations among `gens` (all of length `rank`), as the
/// columns of an `n × s` matrix with `n = gens.len()`.
///
/// Computed from a position-over-term basis of the vectors `(gᵢ | eᵢ)`; the
/// basis elements vanishing on the first `rank` coordinates span the
/// relations. Redundant columns are then removed, last first.
pub fn syzygies<F: Field>(ring: &Arc<Ring>, rank: usize, gens: &[FreeModuleElement<F>]) -> Result<PolyMatrix<F>> {
    for g in gens {
        check_element(ring, rank, g)?;
    }
    let n = gens.len();
    let augmented: Vec<Vector<F>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut v = Vector::from_components(g);
            v.terms.push((rank + i, crate::ring::Monomial::one(ring.nvars()), F::one()));
            v
        })
        .collect();
    let gb = groebner(augmented, ring.order())?;
    let mut cols: Vec<FreeModuleElement<F>> = gb
        .iter()
        .filter(|v| v.lead().is_some_and(|t| t.0 >= rank))
        .map(|v| v.to_components(ring, rank + n).split_off(rank))
        .collect();
    let mut k = cols.len();
    while k > 0 {
        k -= 1;
        let mut others = cols.clone();
        let cand = others.remove(k);
        if Submodule::new(ring, n, others)?.contains(&cand)? {
            cols.remove(k);
        }
    }
    Ok(PolyMatrix::from_columns(ring, n, cols))
}
