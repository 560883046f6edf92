//! Exact linear algebra over the two-element field.
//!
//! Everything downstream (chain complexes, filtrations, spectral sequence
//! pages) reduces to ranks, kernels and subspace arithmetic over GF(2), so
//! this module is the performance core. Vectors and matrix rows are packed
//! into `u64` words and elimination works word-at-a-time.
//!
//! A [`F2Subspace`] always stores its basis in reduced row echelon form with
//! zero rows dropped, which makes it a canonical representative: two
//! subspaces are equal iff their stored bases are equal bit for bit.

use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2). The length is immutable after creation;
/// unused high bits of the last word are kept zero so that `Eq` and `Hash`
/// are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn basis_vector(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in vector sum");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Standard bilinear pairing: parity of the AND of the two bit patterns.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        let mut acc = 0u64;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= w & o;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// The bit pattern as an integer; only valid for short vectors.
    pub fn as_u64(&self) -> u64 {
        assert!(self.len <= 64, "vector too long for a single word");
        self.words.first().copied().unwrap_or(0)
    }

    /// Writes `width` bits of `mask` into positions `offset..offset+width`.
    pub fn set_range_from_mask(&mut self, offset: usize, width: usize, mask: u64) {
        assert!(width <= 64 && offset + width <= self.len);
        for b in 0..width {
            if (mask >> b) & 1 == 1 {
                self.set(offset + b, true);
            }
        }
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2), stored row-major with bit-packed rows.
/// Acts on column vectors: a `rows x cols` matrix maps `F2Vector`s of
/// length `cols` to `F2Vector`s of length `rows`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<F2Vector>, cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_words_mut(i).copy_from_slice(&r.words);
        }
        m
    }

    /// Builds from 0/1 entries, row by row.
    pub fn from_bits(rows: &[&[u8]], cols: usize) -> Self {
        Self::from_rows(rows.iter().map(|r| F2Vector::from_bits(r)).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let mask = 1u64 << (j % WORD_BITS);
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut v = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (top, bottom) = self.data.split_at_mut(b * self.stride);
        top[a * self.stride..(a + 1) * self.stride].swap_with_slice(&mut bottom[..self.stride]);
    }

    /// row `i` ^= row `j`, touching only words from `word_start` on.
    fn xor_row_from(&mut self, i: usize, j: usize, word_start: usize) {
        assert_ne!(i, j);
        let (src, dst) = if j < i {
            let (a, b) = self.data.split_at_mut(i * self.stride);
            (&a[j * self.stride..(j + 1) * self.stride], &mut b[..self.stride])
        } else {
            let (a, b) = self.data.split_at_mut(j * self.stride);
            (&b[..self.stride], &mut a[i * self.stride..(i + 1) * self.stride])
        };
        for k in word_start..src.len() {
            dst[k] ^= src[k];
        }
    }

    /// Matrix product; `self.cols` must equal `other.rows`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    let src_start = j * other.stride;
                    let dst_start = i * out.stride;
                    for k in 0..other.stride {
                        out.data[dst_start + k] ^= other.data[src_start + k];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (w, x) in self.row_words(i).iter().zip(&v.words) {
                acc ^= w & x;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }

    /// Entrywise sum (= difference) of two matrices of equal shape.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut out = self.clone();
        for (w, o) in out.data.iter_mut().zip(&other.data) {
            *w ^= o;
        }
        out
    }

    /// Stacks matrices vertically; all must have the same column count.
    pub fn vstack(parts: &[&Self]) -> Self {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut at = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "column mismatch in vertical stack");
            out.data[at * out.stride..(at + m.rows) * out.stride].copy_from_slice(&m.data);
            at += m.rows;
        }
        out
    }

    /// Concatenates matrices side by side; all must have the same row count.
    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |m| m.rows);
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut at = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "row mismatch in horizontal stack");
            for i in 0..rows {
                for j in 0..m.cols {
                    if m.get(i, j) {
                        out.set(i, at + j, true);
                    }
                }
            }
            at += m.cols;
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for (k, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                if self.get(i, j) {
                    out.set(i, k, true);
                }
            }
        }
        out
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, pr);
            let ws = c / WORD_BITS;
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    // words left of the pivot column are already zero in row r
                    self.xor_row_from(i, r, ws);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form. Preserves shape and row space; zero rows
    /// end up at the bottom. Idempotent.
    pub fn rref(&self) -> Self {
        let mut m = self.clone();
        m.rref_in_place();
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of `{x : self * x = 0}` as a canonical subspace of the domain.
    pub fn kernel(&self) -> F2Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut gens = Vec::with_capacity(self.cols - pivots.len());
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = F2Vector::zeros(self.cols);
            v.set(f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if m.get(i, f) {
                    v.set(p, true);
                }
            }
            gens.push(v);
        }
        F2Subspace::from_generators(self.cols, gens)
    }

    /// One solution of `self * x = rhs`, if consistent (free variables zero).
    pub fn solve(&self, rhs: &F2Vector) -> Option<F2Vector> {
        assert_eq!(self.rows, rhs.len(), "right-hand side length mismatch");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.row_words_mut(i)[..self.stride].copy_from_slice(self.row_words(i));
            if rhs.get(i) {
                aug.set(i, self.cols, true);
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = F2Vector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            if aug.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    /// Image `{self * x : x in s}` as a canonical subspace of the codomain.
    pub fn image_of(&self, s: &F2Subspace) -> F2Subspace {
        assert_eq!(s.ambient(), self.cols, "domain dimension mismatch");
        let gens = (0..s.dim()).map(|i| self.mul_vec(&s.basis().row(i))).collect();
        F2Subspace::from_generators(self.rows, gens)
    }

    /// Preimage `{x : self * x in s}` as a canonical subspace of the domain.
    /// Always contains the kernel.
    pub fn preimage_of(&self, s: &F2Subspace) -> F2Subspace {
        assert_eq!(s.ambient(), self.rows, "codomain dimension mismatch");
        let ann = s.annihilator();
        ann.basis().mul(self).kernel()
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix({}x{})", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// A linear subspace of GF(2)^n in canonical form: the stored basis is the
/// reduced row echelon form of any generating set, with zero rows dropped.
/// Pivot columns are strictly increasing, so equality of subspaces is plain
/// structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Subspace {
    ambient: usize,
    basis: F2Matrix,
    pivots: Vec<usize>,
}

impl F2Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: F2Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: F2Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_generators(ambient: usize, gens: Vec<F2Vector>) -> Self {
        let mut m = F2Matrix::from_rows(gens, ambient);
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        let mut basis = F2Matrix::zeros(rank, ambient);
        for i in 0..rank {
            basis.row_words_mut(i).copy_from_slice(m.row_words(i));
        }
        Self {
            ambient,
            basis,
            pivots,
        }
    }

    /// Treats the rows of `m` as generators.
    pub fn from_matrix_rows(m: &F2Matrix) -> Self {
        Self::from_generators(m.cols(), (0..m.rows()).map(|i| m.row(i)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &F2Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot, in increasing order; these coordinates span
    /// a complement of the subspace.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    /// Canonical representative of `v` modulo this subspace: pivot
    /// coordinates are eliminated.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut r = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.basis.row(i));
            }
        }
        r
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        (0..other.dim()).all(|i| self.contains(&other.basis.row(i)))
    }

    /// Smallest subspace containing both summands.
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        Self::from_matrix_rows(&F2Matrix::vstack(&[&self.basis, &other.basis]))
    }

    /// Largest common subspace, computed from the kernel of the stacked
    /// coefficient map: a zero combination across both bases picks out an
    /// element of the intersection.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let ka = self.dim();
        let stacked = F2Matrix::vstack(&[&self.basis, &other.basis]).transpose();
        let coeffs = stacked.kernel();
        let mut gens = Vec::with_capacity(coeffs.dim());
        for i in 0..coeffs.dim() {
            let c = coeffs.basis.row(i);
            let mut v = F2Vector::zeros(self.ambient);
            for j in 0..ka {
                if c.get(j) {
                    v.xor_assign(&self.basis.row(j));
                }
            }
            gens.push(v);
        }
        Self::from_generators(self.ambient, gens)
    }

    /// The subspace of vectors orthogonal to every element of `self` under
    /// the standard pairing. Taking it twice returns the original subspace.
    pub fn annihilator(&self) -> Self {
        self.basis.kernel()
    }

    /// All `dim`-dimensional subspaces of GF(2)^`ambient`, enumerated
    /// through their canonical bases (pivot set plus free entries), so each
    /// subspace appears exactly once.
    pub fn enumerate(ambient: usize, dim: usize) -> Vec<Self> {
        if dim > ambient {
            return Vec::new();
        }
        let mut out = Vec::new();
        // pivot sets as bitmasks in increasing numeric order
        for mask in 0u64..(1u64 << ambient) {
            if mask.count_ones() as usize != dim {
                continue;
            }
            let pivots: Vec<usize> = (0..ambient).filter(|&c| (mask >> c) & 1 == 1).collect();
            let mut free_cells = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for c in (p + 1)..ambient {
                    if (mask >> c) & 1 == 0 {
                        free_cells.push((i, c));
                    }
                }
            }
            assert!(free_cells.len() < 64);
            for fill in 0u64..(1u64 << free_cells.len()) {
                let mut basis = F2Matrix::zeros(dim, ambient);
                for (i, &p) in pivots.iter().enumerate() {
                    basis.set(i, p, true);
                }
                for (b, &(i, c)) in free_cells.iter().enumerate() {
                    if (fill >> b) & 1 == 1 {
                        basis.set(i, c, true);
                    }
                }
                out.push(Self {
                    ambient,
                    basis,
                    pivots: pivots.clone(),
                });
            }
        }
        out
    }

    /// Bitmask of all elements, each encoded as its little-endian coordinate
    /// integer. Only for ambient dimension at most 6.
    pub fn element_mask(&self) -> u64 {
        assert!(self.ambient <= 6, "element enumeration needs ambient <= 6");
        let rows: Vec<u64> = (0..self.dim()).map(|i| self.basis.row(i).as_u64()).collect();
        let mut mask = 0u64;
        for combo in 0u64..(1 << rows.len()) {
            let mut e = 0u64;
            for (i, r) in rows.iter().enumerate() {
                if (combo >> i) & 1 == 1 {
                    e ^= r;
                }
            }
            mask |= 1 << e;
        }
        mask
    }
}

impl fmt::Debug for F2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Subspace(dim {} of {}; basis ", self.dim(), self.ambient)?;
        for i in 0..self.dim() {
            write!(f, "{:?} ", self.basis.row(i))?;
        }
        write!(f, ")")
    }
}
