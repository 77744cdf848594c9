//! Determinantal ideals attached to a module: the order determinant, norm
//! representatives, fractional inverses, the non-free locus and Zak's
//! inequalities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{height_and_grade, quotient, Ideal};
use crate::presmod::{fitting_ideal, presentation_of_embedded, EmbeddedModule, PresentedModule};
use crate::rees::analytic_spread_of_ideal;
use crate::ring::{subsets, Field, MonomialOrder, PolyMatrix, Polynomial};

/// `det₀(E)`, the ideal of `e × e` minors of the generator matrix.
pub fn det0<F: Field>(e: &EmbeddedModule<F>) -> Result<Ideal<F>> {
    e.require_full_rank()?;
    Ok(Ideal::new(e.ring(), e.matrix().minors(e.ambient_rank())?))
}

/// A full-rank column selection `ρ` of a presentation and the module
/// `E₁ = coker ρ` it defines.
#[derive(Clone, Debug)]
pub struct NormCertificate<F: Field> {
    pub rho: PolyMatrix<F>,
    pub columns: Vec<usize>,
    pub e1: PresentedModule<F>,
    /// `I_{n−e}(ρ) = F_e(E₁)`.
    pub ideal: Ideal<F>,
}

/// Picks the lexicographically first `n − e` columns of `φ` of full rank.
/// A free module (`n = e`) yields the empty selection and the unit ideal.
pub fn norm_representative<F: Field>(m: &PresentedModule<F>, seed: u64) -> Result<NormCertificate<F>> {
    let e = m.rank()?;
    let n = m.num_generators();
    if e == 0 {
        return Err(Error::precondition("norm of a torsion module"));
    }
    let phi = m.presentation();
    let k = n - e;
    for cols in subsets(phi.cols(), k) {
        let rho = phi.select_columns(&cols);
        if rho.generic_rank(seed)? == k {
            let e1 = match m.witness() {
                Some(w) => PresentedModule::with_witness(rho.clone(), w.clone())?,
                None => PresentedModule::new(rho.clone()),
            };
            let ideal = Ideal::new(m.ring(), rho.minors(k)?);
            return Ok(NormCertificate { rho, columns: cols, e1, ideal });
        }
    }
    Err(Error::Internal(format!("no {k} columns of full rank although the module has rank {e}")))
}

/// The submatrix `ψ` of `φ`: rows `first_rows_excluded..n` and the
/// lexicographically first `n − first_rows_excluded − 1` columns whose maximal
/// minors do not all vanish.
pub fn find_psi<F: Field>(m: &PresentedModule<F>, first_rows_excluded: usize) -> Result<(PolyMatrix<F>, Vec<usize>)> {
    let n = m.num_generators();
    if first_rows_excluded >= n {
        return Err(Error::OutOfRange { what: "excluded rows", detail: format!("{first_rows_excluded} of {n}") });
    }
    let rows: Vec<usize> = (first_rows_excluded..n).collect();
    let k = rows.len() - 1;
    let phi = m.presentation();
    for cols in subsets(phi.cols(), k) {
        let psi = phi.submatrix(&rows, &cols);
        if psi.generic_rank(0)? == k {
            return Ok((psi, cols));
        }
    }
    Err(Error::precondition(format!("no {k} columns give a nonzero ideal of maximal minors")))
}

/// `numerator / denominator`.
#[derive(Clone, Debug)]
pub struct FractionalIdeal<F: Field> {
    pub numerator: Ideal<F>,
    pub denominator: Polynomial<F>,
}

/// `i⁻¹ = (1/a)·(aS : i)` with `a` the first element of the reduced
/// grevlex basis of `i`.
pub fn fractional_inverse<F: Field>(i: &Ideal<F>) -> Result<FractionalIdeal<F>> {
    let ring = i.ring();
    let gb = i.groebner_basis_in(MonomialOrder::Grevlex)?;
    let a = gb.first().ok_or_else(|| Error::precondition("the zero ideal has no inverse"))?.reorder(ring);
    let numerator = quotient(&Ideal::new(ring, [a.clone()]), i)?;
    Ok(FractionalIdeal { numerator, denominator: a })
}

/// `det₀(E)·det₀(E)⁻¹`, whose zero set is the non-free locus.
pub fn nonfree_locus_ideal<F: Field>(e: &EmbeddedModule<F>) -> Result<Ideal<F>> {
    let i = det0(e)?;
    let inv = fractional_inverse(&i)?;
    let mut gens = Vec::new();
    for g in i.groebner_basis()? {
        for h in inv.numerator.groebner_basis()? {
            let q = (g * h)
                .exact_div(&inv.denominator)
                .ok_or_else(|| Error::Internal("product not divisible by the denominator".into()))?;
            gens.push(q);
        }
    }
    let locus = Ideal::new(e.ring(), gens);
    Ok(Ideal::new(e.ring(), locus.groebner_basis()?.to_vec()))
}

/// Whether `E` is free after localizing at the origin.
pub fn is_free_local<F: Field>(e: &EmbeddedModule<F>) -> Result<bool> {
    let locus = nonfree_locus_ideal(e)?;
    Ok(locus.generators().iter().any(|g| !g.constant_term().is_zero()))
}

/// Whether `grade det₀(E) ≥ 2`. The whole ambient module (`det₀ = (1)`) is
/// not counted.
pub fn is_ideal_module<F: Field>(e: &EmbeddedModule<F>) -> Result<bool> {
    let d = det0(e)?;
    if d.is_unit()? {
        return Ok(false);
    }
    Ok(height_and_grade(&d)?.1 >= 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZakReport {
    /// `ℓ(Λ^e E) = ℓ(det₀(E))`.
    pub ell_det0: usize,
    pub height_f0: usize,
    pub height_fe_e1: usize,
    pub height_fe: usize,
    /// The presentation has exactly `n − e` relations.
    pub pd_one: bool,
    pub bound_f0: bool,
    pub bound_fe_e1: bool,
    /// Only asserted for presentations with `n − e` relations.
    pub bound_fe: Option<bool>,
}

impl ZakReport {
    pub fn passed(&self) -> bool {
        self.bound_f0 && self.bound_fe_e1 && self.bound_fe != Some(false)
    }
}

pub fn zak_report<F: Field>(e: &EmbeddedModule<F>, seed: u64) -> Result<ZakReport> {
    if is_free_local(e)? {
        return Err(Error::precondition("Zak bounds need a non-free module"));
    }
    let rank = e.ambient_rank();
    let d0 = det0(e)?;
    let ell_det0 = analytic_spread_of_ideal(&d0)?;
    let quotient_module = PresentedModule::new(e.matrix().clone());
    let (height_f0, _) = height_and_grade(&fitting_ideal(&quotient_module, 0)?)?;
    let pres = presentation_of_embedded(e)?;
    let cert = norm_representative(&pres, seed)?;
    let (height_fe_e1, _) = height_and_grade(&fitting_ideal(&cert.e1, rank)?)?;
    let (height_fe, _) = height_and_grade(&fitting_ideal(&pres, rank)?)?;
    let pd_one = pres.presentation().cols() == pres.num_generators() - rank;
    Ok(ZakReport {
        ell_det0,
        height_f0,
        height_fe_e1,
        height_fe,
        pd_one,
        bound_f0: ell_det0 >= height_f0,
        bound_fe_e1: ell_det0 >= height_fe_e1,
        bound_fe: pd_one.then_some(ell_det0 >= height_fe),
    })
}
