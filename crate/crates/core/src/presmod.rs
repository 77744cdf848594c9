//! Embedded and finitely presented modules.
//!
//! Generators and columns are indexed from 0 throughout.

use std::collections::BTreeMap;
use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::groebner::{syzygies, FreeModuleElement, Ideal};
use crate::ring::{subsets, Field, PolyMatrix, Polynomial, Ring};

/// Seed for rank computations; the result is certified, so it never
/// depends on the seed.
const RANK_SEED: u64 = 0x5eed;

/// A submodule `E ⊆ S^e` given by the columns of an `e × n` matrix.
#[derive(Clone, Debug)]
pub struct EmbeddedModule<F: Field> {
    matrix: PolyMatrix<F>,
    label: Option<String>,
    rank: OnceCell<usize>,
}

impl<F: Field> EmbeddedModule<F> {
    pub fn new(matrix: PolyMatrix<F>) -> Self {
        EmbeddedModule { matrix, label: None, rank: OnceCell::new() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.matrix.ring()
    }

    pub fn matrix(&self) -> &PolyMatrix<F> {
        &self.matrix
    }

    pub fn ambient_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_generators(&self) -> usize {
        self.matrix.cols()
    }

    pub fn generators(&self) -> Vec<FreeModuleElement<F>> {
        self.matrix.columns()
    }

    pub fn rank(&self) -> Result<usize> {
        self.rank.get_or_try_init(|| self.matrix.generic_rank(RANK_SEED)).copied()
    }

    /// Fails unless the module has full rank in its ambient free module.
    pub fn require_full_rank(&self) -> Result<()> {
        let r = self.rank()?;
        if r != self.ambient_rank() {
            return Err(Error::RankDeficient { rank: r, required: self.ambient_rank() });
        }
        Ok(())
    }

    /// Submodule generated by the given columns.
    pub fn select(&self, columns: &[usize]) -> Result<Self> {
        check_indices(columns, self.num_generators(), "column index")?;
        Ok(EmbeddedModule::new(self.matrix.select_columns(columns)))
    }

    /// Same module with one more generator appended.
    pub fn with_generator(&self, g: FreeModuleElement<F>) -> Result<Self> {
        if g.len() != self.ambient_rank() {
            return Err(Error::RankMismatch { expected: self.ambient_rank(), got: g.len() });
        }
        let mut cols = self.matrix.columns();
        cols.push(g);
        Ok(EmbeddedModule::new(PolyMatrix::from_columns(self.ring(), self.ambient_rank(), cols)))
    }

    pub fn map_into(&self, target: &Arc<Ring>, var_map: &[usize]) -> Self {
        EmbeddedModule::new(self.matrix.map_into(target, var_map))
    }
}

fn check_indices(idx: &[usize], n: usize, what: &'static str) -> Result<()> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::OutOfRange { what, detail: format!("{bad} not below {n}") });
    }
    Ok(())
}

/// `coker(φ)` for an `n × m` matrix `φ`, optionally with an embedding
/// witness: an `e × n` matrix `W` with `W·φ = 0` sending generator `i` to
/// column `i` of `W`.
#[derive(Clone, Debug)]
pub struct PresentedModule<F: Field> {
    phi: PolyMatrix<F>,
    witness: Option<PolyMatrix<F>>,
}

impl<F: Field> PresentedModule<F> {
    pub fn new(phi: PolyMatrix<F>) -> Self {
        PresentedModule { phi, witness: None }
    }

    pub fn with_witness(phi: PolyMatrix<F>, witness: PolyMatrix<F>) -> Result<Self> {
        if witness.cols() != phi.rows() {
            return Err(Error::RankMismatch { expected: phi.rows(), got: witness.cols() });
        }
        if !witness.mul(&phi)?.is_zero() {
            return Err(Error::precondition("witness does not annihilate the presentation"));
        }
        Ok(PresentedModule { phi, witness: Some(witness) })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.phi.ring()
    }

    pub fn num_generators(&self) -> usize {
        self.phi.rows()
    }

    pub fn presentation(&self) -> &PolyMatrix<F> {
        &self.phi
    }

    pub fn witness(&self) -> Option<&PolyMatrix<F>> {
        self.witness.as_ref()
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.num_generators() - self.phi.generic_rank(RANK_SEED)?)
    }
}

/// `φ` = relations among the generators of `E`; the witness is `E`'s own matrix.
pub fn presentation_of_embedded<F: Field>(e: &EmbeddedModule<F>) -> Result<PresentedModule<F>> {
    let phi = syzygies(e.ring(), e.ambient_rank(), &e.generators())?;
    Ok(PresentedModule { phi, witness: Some(e.matrix().clone()) })
}

/// `F_i(M)`, the ideal of `(n−i)`-minors of the presentation.
pub fn fitting_ideal<F: Field>(m: &PresentedModule<F>, i: usize) -> Result<Ideal<F>> {
    let n = m.num_generators();
    let ring = m.ring();
    if i >= n {
        return Ok(Ideal::unit(ring));
    }
    let t = n - i;
    if t > m.phi.cols() {
        return Ok(Ideal::zero(ring));
    }
    Ok(Ideal::new(ring, m.phi.minors(t)?))
}

/// Minimal number of generators after localizing at the origin.
pub fn mu_local<F: Field>(m: &PresentedModule<F>) -> usize {
    m.num_generators() - m.phi.evaluate_at_origin().rank()
}

/// `M / ⟨generators in kill⟩`. Each killed generator contributes a unit
/// relation, which is pruned together with its row; relations that become
/// zero are dropped. Surviving generators keep their relative order.
pub fn quotient_by_generators<F: Field>(m: &PresentedModule<F>, kill: &[usize]) -> Result<PresentedModule<F>> {
    let n = m.num_generators();
    check_indices(kill, n, "generator index")?;
    let mut phi = m.phi.clone();
    let mut killed: Vec<usize> = kill.to_vec();
    killed.sort_unstable();
    killed.dedup();
    let mut survivors: Vec<usize> = (0..n).collect();
    for &k in killed.iter().rev() {
        // the unit column e_k clears row k of every relation; drop both
        let pos = survivors.iter().position(|&s| s == k).expect("not yet killed");
        survivors.remove(pos);
        let rows: Vec<usize> = (0..phi.rows()).filter(|&r| r != pos).collect();
        let cols: Vec<usize> = (0..phi.cols()).collect();
        phi = phi.submatrix(&rows, &cols);
    }
    let nonzero: Vec<usize> = (0..phi.cols()).filter(|&j| phi.column(j).iter().any(|p| !p.is_zero())).collect();
    let phi = phi.select_columns(&nonzero);
    Ok(PresentedModule::new(phi))
}

/// Sign of moving `x_i` into sorted position after the elements of `set`.
fn insertion_sign(set: &[usize], i: usize) -> bool {
    set.iter().filter(|&&j| j > i).count() % 2 == 1
}

/// `e_V ∧ u` for a column `u`, as coordinates on sorted `(|V|+1)`-subsets.
fn wedge_column<F: Field>(
    v: &[usize],
    coeff: &Polynomial<F>,
    u: &[Polynomial<F>],
    out: &mut BTreeMap<Vec<usize>, Polynomial<F>>,
) {
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() || v.contains(&i) {
            continue;
        }
        let mut h = v.to_vec();
        h.push(i);
        h.sort_unstable();
        let mut term = coeff * ui;
        if insertion_sign(v, i) {
            term = -term;
        }
        let slot = out.entry(h).or_insert_with(|| Polynomial::zero(ui.ring()));
        *slot = &*slot + &term;
    }
}

/// `Λ^k M` on the basis `x_H`, `H` running over `k`-subsets in lexicographic
/// order, with relations `x_V ∧ u` for `(k−1)`-subsets `V` and columns `u`.
/// A witness of `M` induces one for `Λ^k M` through `k`-minors.
pub fn exterior_power<F: Field>(m: &PresentedModule<F>, k: usize) -> Result<PresentedModule<F>> {
    let n = m.num_generators();
    if k == 0 || k > n {
        return Err(Error::OutOfRange { what: "exterior power", detail: format!("k = {k} with {n} generators") });
    }
    let ring = m.ring();
    let basis = subsets(n, k);
    let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, h)| (h, i)).collect();
    let one = Polynomial::one(ring);
    let mut relations = Vec::new();
    for v in subsets(n, k - 1) {
        for u in m.phi.columns() {
            let mut acc = BTreeMap::new();
            wedge_column(&v, &one, &u, &mut acc);
            let mut col = vec![Polynomial::zero(ring); basis.len()];
            for (h, p) in acc {
                col[index[&h]] = p;
            }
            if col.iter().any(|p| !p.is_zero()) {
                relations.push(col);
            }
        }
    }
    let phi = PolyMatrix::from_columns(ring, basis.len(), relations);
    let witness = match &m.witness {
        None => None,
        Some(w) if k <= w.rows() => {
            let rows = subsets(w.rows(), k);
            let mut wk = PolyMatrix::zeros(ring, rows.len(), basis.len());
            for (a, r) in rows.iter().enumerate() {
                for (b, h) in basis.iter().enumerate() {
                    wk.set(a, b, w.submatrix(r, h).determinant());
                }
            }
            Some(wk)
        }
        Some(_) => None,
    };
    Ok(PresentedModule { phi, witness })
}

/// `#{(i, j) ∈ H × K : i > j}`.
pub fn epsilon(h: &[usize], k: &[usize]) -> usize {
    h.iter().map(|&i| k.iter().filter(|&&j| i > j).count()).sum()
}

/// `θ(x_H) = e_H ∧ u₁ ∧ ⋯ ∧ u_m` for `(n−m)`-subsets `H` in lexicographic
/// order, where the `u_j` are the columns of `psi`. The wedge is expanded
/// directly and each value compared with `(−1)^ε(H,K) det Ψ_{K,·}`.
pub fn theta_generators<F: Field>(psi: &PolyMatrix<F>) -> Result<Vec<Polynomial<F>>> {
    let (n, m) = (psi.rows(), psi.cols());
    if n < m {
        return Err(Error::precondition(format!("theta map needs rows ≥ columns, got {n} × {m}")));
    }
    let ring = psi.ring();
    let mut wedge: BTreeMap<Vec<usize>, Polynomial<F>> = BTreeMap::new();
    wedge.insert(Vec::new(), Polynomial::one(ring));
    for u in psi.columns() {
        let mut next = BTreeMap::new();
        for (v, c) in &wedge {
            wedge_column(v, c, &u, &mut next);
        }
        wedge = next;
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for h in subsets(n, n - m) {
        let k: Vec<usize> = all.iter().copied().filter(|i| !h.contains(i)).collect();
        let wk = wedge.get(&k).cloned().unwrap_or_else(|| Polynomial::zero(ring));
        let det = psi.submatrix(&k, &all[..m]).determinant();
        if wk != det {
            return Err(Error::Internal(format!("wedge coefficient at {k:?} disagrees with the minor")));
        }
        out.push(if epsilon(&h, &k) % 2 == 1 { -wk } else { wk });
    }
    Ok(out)
}

/// `im θ = I_m(Ψ)`, computed along the wedge path and checked against the
/// ideal of maximal minors.
pub fn theta_image<F: Field>(psi: &PolyMatrix<F>) -> Result<Ideal<F>> {
    let theta = Ideal::new(psi.ring(), theta_generators(psi)?);
    let minors = Ideal::new(psi.ring(), psi.minors(psi.cols())?);
    if !theta.equals(&minors)? {
        return Err(Error::Internal("theta image differs from the ideal of maximal minors".into()));
    }
    Ok(theta)
}

/// The image of `M` in the free module named by its witness.
pub fn image_in_free<F: Field>(m: &PresentedModule<F>) -> Result<EmbeddedModule<F>> {
    match &m.witness {
        Some(w) => Ok(EmbeddedModule::new(w.clone())),
        None => Err(Error::precondition("module carries no map to a free module")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::Submodule;
    use crate::ring::{parse_poly, MonomialOrder, Rational};

    fn ring() -> Arc<Ring> {
        Ring::new(["x", "y"], MonomialOrder::Grevlex)
    }

    fn mat(rows: &[&[&str]]) -> PolyMatrix<Rational> {
        let r = ring();
        PolyMatrix::from_rows(
            &r,
            rows.iter().map(|row| row.iter().map(|s| parse_poly(s, &r).unwrap()).collect()).collect(),
        )
    }

    fn ideal(gens: &[&str]) -> Ideal<Rational> {
        Ideal::parse(&ring(), gens).unwrap()
    }

    fn e1() -> EmbeddedModule<Rational> {
        EmbeddedModule::new(mat(&[&["x", "y", "0"], &["0", "0", "1"]]))
    }

    fn msq() -> EmbeddedModule<Rational> {
        EmbeddedModule::new(mat(&[&["x^2", "x*y", "y^2"]]))
    }

    #[test]
    fn presentations() {
        let p = presentation_of_embedded(&e1()).unwrap();
        assert_eq!(p.presentation().to_strings(), [["y"], ["-x"], ["0"]]);
        assert_eq!(p.rank().unwrap(), 2);
        let free =
            presentation_of_embedded(&EmbeddedModule::new(PolyMatrix::<Rational>::identity(&ring(), 2))).unwrap();
        assert_eq!(free.presentation().cols(), 0);
        assert_eq!(free.rank().unwrap(), 2);
        let q = presentation_of_embedded(&msq()).unwrap();
        assert_eq!((q.presentation().rows(), q.presentation().cols()), (3, 2));
        assert_eq!(q.rank().unwrap(), 1);
    }

    #[test]
    fn fitting_ideals() {
        let p = presentation_of_embedded(&e1()).unwrap();
        assert!(fitting_ideal(&p, 2).unwrap().equals(&ideal(&["x", "y"])).unwrap());
        assert!(fitting_ideal(&p, 1).unwrap().is_zero());
        assert!(fitting_ideal(&p, 3).unwrap().is_unit().unwrap());
        let q = presentation_of_embedded(&msq()).unwrap();
        assert!(fitting_ideal(&q, 1).unwrap().equals(&ideal(&["x^2", "x*y", "y^2"])).unwrap());
        assert!(fitting_ideal(&q, 99).unwrap().is_unit().unwrap());
    }

    #[test]
    fn local_generator_counts() {
        assert_eq!(mu_local(&presentation_of_embedded(&e1()).unwrap()), 3);
        assert_eq!(mu_local(&PresentedModule::new(PolyMatrix::<Rational>::zeros(&ring(), 2, 0))), 2);
        assert_eq!(mu_local(&PresentedModule::new(mat(&[&["1"], &["x"]]))), 1);
    }

    #[test]
    fn killing_generators() {
        let m = PresentedModule::new(mat(&[&["0"], &["y"], &["-x"]]));
        let q = quotient_by_generators(&m, &[0]).unwrap();
        assert_eq!(q.presentation().to_strings(), [["y"], ["-x"]]);
        let same = quotient_by_generators(&m, &[]).unwrap();
        assert_eq!(same.presentation(), m.presentation());
        let zero = quotient_by_generators(&m, &[0, 1, 2]).unwrap();
        assert_eq!(zero.num_generators(), 0);
        assert!(fitting_ideal(&zero, 0).unwrap().is_unit().unwrap());
        assert!(quotient_by_generators(&m, &[3]).is_err());
    }

    #[test]
    fn exterior_powers() {
        let p = presentation_of_embedded(&e1()).unwrap();
        let l1 = exterior_power(&p, 1).unwrap();
        assert_eq!(l1.presentation(), p.presentation());
        let l2 = exterior_power(&p, 2).unwrap();
        assert_eq!(l2.num_generators(), 3);
        assert_eq!(l2.rank().unwrap(), 1);
        // x_0 ∧ (y,-x,0) = -x·x_01, x_1 ∧ (y,-x,0) = -y·x_01, x_2 ∧ (y,-x,0) = y·x_02 - x·x_12
        let expected = mat(&[&["-x", "-y", "0"], &["0", "0", "y"], &["0", "0", "-x"]]);
        assert!(Submodule::from_columns(l2.presentation()).equals(&Submodule::from_columns(&expected)).unwrap());
        let image = image_in_free(&l2).unwrap();
        assert_eq!(image.matrix().to_strings(), [["0", "x", "y"]]);
        let free = PresentedModule::new(PolyMatrix::<Rational>::zeros(&ring(), 2, 0));
        let f2 = exterior_power(&free, 2).unwrap();
        assert_eq!((f2.num_generators(), f2.presentation().cols()), (1, 0));
        assert!(exterior_power(&free, 3).is_err());
    }

    #[test]
    fn theta_examples() {
        assert!(theta_image(&mat(&[&["y"], &["-x"], &["0"]])).unwrap().equals(&ideal(&["x", "y"])).unwrap());
        let q = presentation_of_embedded(&msq()).unwrap();
        assert!(theta_image(q.presentation()).unwrap().equals(&ideal(&["x^2", "x*y", "y^2"])).unwrap());
        assert!(theta_image(&PolyMatrix::<Rational>::identity(&ring(), 2)).unwrap().is_unit().unwrap());
        let t = theta_generators(&mat(&[&["y", "0"], &["-x", "y"], &["0", "-x"]])).unwrap();
        let s: Vec<String> = t.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["x^2", "x*y", "y^2"]);
    }

    #[test]
    fn epsilon_counts_inversions() {
        assert_eq!(epsilon(&[2], &[0, 1]), 2);
        assert_eq!(epsilon(&[0], &[1, 2]), 0);
        assert_eq!(epsilon(&[1, 3], &[0, 2]), 3);
    }

    #[test]
    fn witness_required() {
        assert!(image_in_free(&PresentedModule::new(mat(&[&["x"]]))).is_err());
        let p = presentation_of_embedded(&e1()).unwrap();
        assert_eq!(image_in_free(&p).unwrap().matrix(), e1().matrix());
        assert!(PresentedModule::with_witness(mat(&[&["y"], &["x"], &["0"]]), e1().matrix().clone()).is_err());
    }
}
