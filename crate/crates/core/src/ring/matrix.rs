use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::base::{same_ring, Ring};
use super::field::Field;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Range of the random integers substituted over ℚ.
pub const SAMPLE_BOUND: u64 = 10_000;

/// How many evaluation points [`PolyMatrix::generic_rank`] tries.
pub const RANK_ATTEMPTS: usize = 8;

/// Dense row-major matrix of polynomials over one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix<F: Field> {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<F>>,
}

impl<F: Field> fmt::Debug for PolyMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix{:?}", self.to_strings())
    }
}

impl<F: Field> PolyMatrix<F> {
    pub fn new(ring: &Arc<Ring>, rows: usize, cols: usize, entries: Vec<Polynomial<F>>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        assert!(entries.iter().all(|p| same_ring(p.ring(), ring)), "entries from a foreign ring");
        PolyMatrix { ring: ring.clone(), rows, cols, entries }
    }

    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring: ring.clone(), rows, cols, entries: vec![Polynomial::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(ring));
        }
        m
    }

    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<Polynomial<F>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(ring, r, c, rows.into_iter().flatten().collect())
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_columns(ring: &Arc<Ring>, rows: usize, columns: Vec<Vec<Polynomial<F>>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(ring, rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length does not match row count");
            for (i, p) in col.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<F>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial<F>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Polynomial<F>>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Polynomial<F>> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        PolyMatrix { ring: self.ring.clone(), rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::RankMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(&self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(&self.ring, self.rows, cols)
    }

    /// Moves every entry into `target` via a variable map (see [`Polynomial::map_into`]).
    pub fn map_into(&self, target: &Arc<Ring>, var_map: &[usize]) -> Self {
        let entries = self.entries.iter().map(|p| p.map_into(target, var_map)).collect();
        PolyMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect()
    }

    /// Constant terms of every entry.
    pub fn evaluate_at_origin(&self) -> ScalarMatrix<F> {
        self.evaluate_with(|p| p.constant_term())
    }

    pub fn evaluate_at(&self, point: &[F]) -> ScalarMatrix<F> {
        self.evaluate_with(|p| p.eval(point))
    }

    fn evaluate_with(&self, f: impl Fn(&Polynomial<F>) -> F) -> ScalarMatrix<F> {
        ScalarMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Determinant of a square matrix by cofactor expansion memoized on
    /// column subsets.
    pub fn determinant(&self) -> Polynomial<F> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        let mut memo = HashMap::new();
        self.minor_rec(&rows, &cols, &mut memo)
    }

    fn minor_rec(
        &self,
        rows: &[usize],
        cols: &[usize],
        memo: &mut HashMap<Vec<usize>, Polynomial<F>>,
    ) -> Polynomial<F> {
        let k = cols.len();
        if k == 0 {
            return Polynomial::one(&self.ring);
        }
        if let Some(v) = memo.get(cols) {
            return v.clone();
        }
        // expand along row rows[k-1]
        let r = rows[k - 1];
        let mut acc = Polynomial::zero(&self.ring);
        for (idx, &c) in cols.iter().enumerate() {
            let a = self.get(r, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sub = self.minor_rec(rows, &rest, memo);
            if sub.is_zero() {
                continue;
            }
            let term = a * &sub;
            acc = if (k - 1 + idx).is_multiple_of(2) { &acc + &term } else { &acc - &term };
        }
        memo.insert(cols.to_vec(), acc.clone());
        acc
    }

    /// All `t × t` minors, ordered lexicographically by (row set, column set).
    /// `t = 0` gives the single polynomial 1.
    pub fn minors(&self, t: usize) -> Result<Vec<Polynomial<F>>> {
        if t > self.rows.min(self.cols) {
            return Err(Error::OutOfRange {
                what: "minor size",
                detail: format!("{t} exceeds min({}, {})", self.rows, self.cols),
            });
        }
        let row_sets = subsets(self.rows, t);
        let col_sets = subsets(self.cols, t);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            let mut memo = HashMap::new();
            for cs in &col_sets {
                out.push(self.minor_rec(rs, cs, &mut memo));
            }
        }
        Ok(out)
    }

    /// Largest size of a nonzero minor.
    ///
    /// Random scalars from `seed` are substituted for the variables and the
    /// evaluated matrix is row reduced. The rank at a point never exceeds the
    /// generic rank, and equals it off a proper closed set. The pivot minor is
    /// expanded symbolically to confirm the rank found is attained.
    pub fn generic_rank(&self, seed: u64) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
        for _ in 0..2 {
            let point: Vec<F> = (0..self.ring.nvars()).map(|_| F::random_nonzero(&mut rng, SAMPLE_BOUND)).collect();
            let (r, pr, pc) = self.evaluate_at(&point).rank_profile();
            if best.as_ref().is_none_or(|b| r > b.0) {
                best = Some((r, pr, pc));
            }
        }
        let (mut rank, mut prow, mut pcol) = best.expect("at least one attempt");
        for _ in 0..RANK_ATTEMPTS {
            if rank == 0 || !self.submatrix(&prow, &pcol).determinant().is_zero() {
                return Ok(rank);
            }
            let point: Vec<F> = (0..self.ring.nvars()).map(|_| F::random_nonzero(&mut rng, SAMPLE_BOUND)).collect();
            (rank, prow, pcol) = self.evaluate_at(&point).rank_profile();
        }
        Err(Error::Certification(RANK_ATTEMPTS))
    }
}

/// Matrix over the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<F>,
}

impl<F: Field> ScalarMatrix<F> {
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let cols = columns.len();
        let mut entries = vec![F::zero(); rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                entries[i * cols + j] = v.clone();
            }
        }
        ScalarMatrix { rows, cols, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.entries[i * self.cols + j]
    }

    pub fn rank(&self) -> usize {
        self.rank_profile().0
    }

    /// Rank plus the rows and columns of a nonsingular maximal minor.
    pub fn rank_profile(&self) -> (usize, Vec<usize>, Vec<usize>) {
        let mut a = self.entries.clone();
        let (m, n) = (self.rows, self.cols);
        let mut row_perm: Vec<usize> = (0..m).collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i * n + c].is_zero()) else { continue };
            if p != r {
                for j in 0..n {
                    a.swap(p * n + j, r * n + j);
                }
                row_perm.swap(p, r);
            }
            let inv = a[r * n + c].clone().inv();
            for i in r + 1..m {
                let f = a[i * n + c].clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a[r * n + j].clone() * f.clone();
                    a[i * n + j] = a[i * n + j].clone() - v;
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let mut pivot_rows: Vec<usize> = row_perm[..r].to_vec();
        pivot_rows.sort_unstable();
        (r, pivot_rows, pivot_cols)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
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

    fn strs(ps: &[Polynomial<Rational>]) -> Vec<String> {
        ps.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn subsets_lex() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(1, 2).is_empty());
    }

    #[test]
    fn minors_examples() {
        let a = mat(&[&["x", "y", "0"], &["0", "0", "1"]]);
        assert_eq!(strs(&a.minors(2).unwrap()), ["0", "x", "y"]);
        let phi = mat(&[&["y", "0"], &["-x", "y"], &["0", "-x"]]);
        assert_eq!(strs(&phi.minors(2).unwrap()), ["y^2", "-x*y", "x^2"]);
        assert_eq!(strs(&phi.minors(0).unwrap()), ["1"]);
        assert!(phi.minors(3).is_err());
    }

    #[test]
    fn determinant_3x3() {
        let m = mat(&[&["x", "1", "0"], &["0", "y", "1"], &["1", "0", "x"]]);
        // x*(x*y) - 1*(0 - 1) = x^2*y + 1
        assert_eq!(m.determinant().to_string(), "x^2*y + 1");
    }

    #[test]
    fn origin_evaluation() {
        let m = mat(&[&["1 + x"]]);
        assert_eq!(m.evaluate_at_origin().entries, vec![Rational::from_i64(1)]);
        let z = mat(&[&["y"], &["-x"], &["0"]]).evaluate_at_origin();
        assert!(z.entries.iter().all(Zero::is_zero));
        let id = PolyMatrix::<Rational>::identity(&ring(), 2).evaluate_at_origin();
        assert_eq!(id.rank(), 2);
    }

    #[test]
    fn generic_rank_examples() {
        assert_eq!(mat(&[&["y"], &["-x"], &["0"]]).generic_rank(1).unwrap(), 1);
        assert_eq!(PolyMatrix::<Rational>::identity(&ring(), 2).generic_rank(1).unwrap(), 2);
        assert_eq!(PolyMatrix::<Rational>::zeros(&ring(), 2, 3).generic_rank(1).unwrap(), 0);
        // rank drops only on the line x = y
        assert_eq!(mat(&[&["x", "y"], &["y", "x"]]).generic_rank(7).unwrap(), 2);
        assert_eq!(mat(&[&["x", "y"], &["x^2", "x*y"]]).generic_rank(7).unwrap(), 1);
    }
}
