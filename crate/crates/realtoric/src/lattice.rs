//! Integer-lattice computations behind the mod-2 cone data.
//!
//! The key step when reducing a cone modulo 2 is saturation: the sublattice
//! spanned by the cone's ray generators must be replaced by the largest
//! sublattice of the same rational span before reducing coordinates mod 2,
//! otherwise index-2 phenomena are silently lost. Saturation is computed
//! through a Smith normal form with tracked unimodular transforms.
//!
//! All integer arithmetic is overflow-checked; an overflow surfaces as
//! [`Error::Overflow`] rather than wrapping.

use crate::f2::{F2Matrix, F2Subspace, F2Vector};
use crate::Error;

/// Dense matrix of signed 64-bit integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let term = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .ok_or(Error::Overflow)?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// Rows reduced modulo 2 as GF(2) vectors.
    pub fn rows_mod2(&self) -> Vec<F2Vector> {
        (0..self.rows)
            .map(|i| {
                let mut v = F2Vector::zeros(self.cols);
                for j in 0..self.cols {
                    if self.get(i, j).rem_euclid(2) == 1 {
                        v.set(j, true);
                    }
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Error> {
        for j in 0..self.cols {
            let v = self.get(i, j).checked_neg().ok_or(Error::Overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }

    fn negate_col(&mut self, j: usize) -> Result<(), Error> {
        for i in 0..self.rows {
            let v = self.get(i, j).checked_neg().ok_or(Error::Overflow)?;
            self.set(i, j, v);
        }
        Ok(())
    }

    /// row `i` += `q` * row `j`
    fn add_row(&mut self, i: usize, j: usize, q: i64) -> Result<(), Error> {
        for c in 0..self.cols {
            let term = q.checked_mul(self.get(j, c)).ok_or(Error::Overflow)?;
            let v = self.get(i, c).checked_add(term).ok_or(Error::Overflow)?;
            self.set(i, c, v);
        }
        Ok(())
    }

    /// col `j` += `q` * col `i`
    fn add_col(&mut self, j: usize, i: usize, q: i64) -> Result<(), Error> {
        for r in 0..self.rows {
            let term = q.checked_mul(self.get(r, i)).ok_or(Error::Overflow)?;
            let v = self.get(r, j).checked_add(term).ok_or(Error::Overflow)?;
            self.set(r, j, v);
        }
        Ok(())
    }
}

/// Smith normal form data for a matrix `a`: unimodular `u`, `v` with
/// `u * a * v = d`, `d` diagonal with each nonzero entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

struct SnfState {
    b: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl SnfState {
    fn new(a: &IntegerMatrix) -> Self {
        Self {
            b: a.clone(),
            u: IntegerMatrix::identity(a.rows()),
            u_inv: IntegerMatrix::identity(a.rows()),
            v: IntegerMatrix::identity(a.cols()),
            v_inv: IntegerMatrix::identity(a.cols()),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.b.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.b.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Error> {
        self.b.negate_row(i)?;
        self.u.negate_row(i)?;
        self.u_inv.negate_col(i)
    }

    /// row `i` += `q` * row `j`, with the inverse transform applied to `u_inv`
    fn add_row(&mut self, i: usize, j: usize, q: i64) -> Result<(), Error> {
        self.b.add_row(i, j, q)?;
        self.u.add_row(i, j, q)?;
        let nq = q.checked_neg().ok_or(Error::Overflow)?;
        self.u_inv.add_col(j, i, nq)
    }

    /// col `j` += `q` * col `i`, with the inverse transform applied to `v_inv`
    fn add_col(&mut self, j: usize, i: usize, q: i64) -> Result<(), Error> {
        self.b.add_col(j, i, q)?;
        self.v.add_col(j, i, q)?;
        let nq = q.checked_neg().ok_or(Error::Overflow)?;
        self.v_inv.add_row(i, j, nq)
    }
}

fn snf_state(a: &IntegerMatrix) -> Result<SnfState, Error> {
    let mut s = SnfState::new(a);
    let (rows, cols) = (a.rows(), a.cols());
    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing submatrix becomes the pivot
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..rows {
                for j in k..cols {
                    let v = s.b.get(i, j);
                    if v != 0 && best.map_or(true, |(_, _, bv)| v.abs() < bv) {
                        best = Some((i, j, v.abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Ok(s); // trailing submatrix is zero
            };
            s.swap_rows(k, pi);
            s.swap_cols(k, pj);
            if s.b.get(k, k) < 0 {
                s.negate_row(k)?;
            }
            let p = s.b.get(k, k);
            let mut dirty = false;
            for i in (k + 1)..rows {
                let v = s.b.get(i, k);
                if v != 0 {
                    s.add_row(i, k, -v.div_euclid(p))?;
                    dirty |= s.b.get(i, k) != 0;
                }
            }
            for j in (k + 1)..cols {
                let v = s.b.get(k, j);
                if v != 0 {
                    s.add_col(j, k, -v.div_euclid(p))?;
                    dirty |= s.b.get(k, j) != 0;
                }
            }
            if dirty {
                continue; // remainders are strictly smaller pivot candidates
            }
            // row and column k are clear; fold in any entry the pivot fails
            // to divide so the diagonal ends up with a divisibility chain
            let mut fold = None;
            'scan: for i in (k + 1)..rows {
                for j in (k + 1)..cols {
                    if s.b.get(i, j).rem_euclid(p) != 0 {
                        fold = Some(i);
                        break 'scan;
                    }
                }
            }
            match fold {
                Some(i) => s.add_row(k, i, 1)?,
                None => break,
            }
        }
    }
    Ok(s)
}

/// Computes `u * a * v = d` with `u`, `v` unimodular and `d` diagonal,
/// nonnegative, each nonzero entry dividing the next.
pub fn smith_normal_form(a: &IntegerMatrix) -> Result<SmithDecomposition, Error> {
    let s = snf_state(a)?;
    Ok(SmithDecomposition {
        u: s.u,
        d: s.b,
        v: s.v,
    })
}

/// Basis (as rows) of the saturation of the sublattice spanned by `gens`
/// inside the standard lattice of rank `n`: the largest sublattice with the
/// same rational span. The row count equals the rational rank of `gens`.
pub fn saturate_span(gens: &[Vec<i64>], n: usize) -> Result<IntegerMatrix, Error> {
    for g in gens {
        assert_eq!(g.len(), n, "generator length does not match lattice rank");
    }
    // generators as columns; the saturation is spanned by the first
    // rank-many columns of the inverse of the row-transform factor
    let mut a = IntegerMatrix::zeros(n, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, &x) in g.iter().enumerate() {
            a.set(i, j, x);
        }
    }
    let s = snf_state(&a)?;
    let rank = s.b.diagonal().iter().filter(|&&d| d != 0).count();
    let mut basis = IntegerMatrix::zeros(rank, n);
    for r in 0..rank {
        for i in 0..n {
            basis.set(r, i, s.u_inv.get(i, r));
        }
    }
    Ok(basis)
}

/// The mod-2 reduction of the saturated span of `gens`, as a canonical
/// subspace of GF(2)^n. Its dimension equals the rational rank of `gens`;
/// reducing the generators directly would lose index-2 saturation defects.
pub fn mod2_cone_subspace(gens: &[Vec<i64>], n: usize) -> Result<F2Subspace, Error> {
    let sat = saturate_span(gens, n)?;
    Ok(F2Subspace::from_generators(n, sat.rows_mod2()))
}

/// A subspace of GF(2)^n together with a chosen splitting of the quotient
/// map: `proj` is surjective with kernel exactly `sub`, mapping onto the
/// coordinates at the non-pivot columns of the canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    sub: F2Subspace,
    proj: F2Matrix,
}

impl QuotientData {
    pub fn new(sub: F2Subspace) -> Self {
        let n = sub.ambient();
        let free = sub.non_pivots();
        let m = free.len();
        let mut proj = F2Matrix::zeros(m, n);
        for (k, &f) in free.iter().enumerate() {
            proj.set(k, f, true);
            for (i, &p) in sub.pivots().iter().enumerate() {
                if sub.basis().get(i, f) {
                    proj.set(k, p, true);
                }
            }
        }
        Self { sub, proj }
    }

    pub fn ambient_dim(&self) -> usize {
        self.sub.ambient()
    }

    pub fn sub(&self) -> &F2Subspace {
        &self.sub
    }

    pub fn quot_dim(&self) -> usize {
        self.proj.rows()
    }

    pub fn proj(&self) -> &F2Matrix {
        &self.proj
    }

    /// The unique map `f` between the quotients with `f * self.proj =
    /// dst.proj`, defined when `self.sub` is contained in `dst.sub` (source
    /// cone a face of the target cone).
    ///
    /// # Panics
    ///
    /// Panics when the inclusion fails or the ambients differ.
    pub fn induced_map_to(&self, dst: &QuotientData) -> F2Matrix {
        assert_eq!(
            self.ambient_dim(),
            dst.ambient_dim(),
            "quotients of different ambient spaces"
        );
        assert!(
            dst.sub.contains_subspace(&self.sub),
            "face inclusion violated: source subspace not contained in target"
        );
        dst.proj.select_columns(&self.sub.non_pivots())
    }
}
