//! The chain complex of the orbit cell decomposition of the real points.
//!
//! Each cone of dimension `n - p` contributes the group algebra of its mod-2
//! quotient to the degree-p chain group: the orbit it indexes is a disjoint
//! union of `2^p` contractible cells, one per quotient element. The
//! differential pushes group-algebra basis elements forward along the cover
//! projections. Homology of this complex is the mod-2 Borel–Moore homology
//! of the real toric variety.
//!
//! Every block algebra carries the augmentation ideal I (chains with an even
//! number of support points); its powers are spanned by the fundamental
//! classes `[H]` of linear subspaces H of the quotient, with `dim H = q`
//! generating the q-th power. The resulting decreasing filtration `W^q` is
//! what the spectral sequence machinery consumes. The graded pieces are
//! identified with exterior powers through the map sending a monomial in
//! basis vectors to the class of the subspace they span.

use std::collections::HashMap;

use crate::combo::{binomial, subsets_colex};
use crate::f2::{F2Matrix, F2Subspace, F2Vector};
use crate::fan::Fan;

/// An element of the group algebra of GF(2)^m over GF(2): a formal sum of
/// group elements, stored as the indicator vector of its support. Group
/// elements are encoded as little-endian coordinate integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraChain {
    m: usize,
    coeffs: F2Vector,
}

impl GroupAlgebraChain {
    pub fn zero(m: usize) -> Self {
        Self {
            m,
            coeffs: F2Vector::zeros(1 << m),
        }
    }

    /// The algebra unit `[0]`.
    pub fn unit(m: usize) -> Self {
        let mut c = Self::zero(m);
        c.coeffs.set(0, true);
        c
    }

    pub fn from_support(m: usize, elems: &[u64]) -> Self {
        let mut c = Self::zero(m);
        for &e in elems {
            c.coeffs.set(e as usize, !c.coeffs.get(e as usize));
        }
        c
    }

    pub fn quot_dim(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &F2Vector {
        &self.coeffs
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.m, other.m, "mixed group algebras");
        self.coeffs.xor_assign(&other.coeffs);
    }

    /// Convolution product: `[v][w] = [v + w]` extended bilinearly.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "mixed group algebras");
        let mut out = Self::zero(self.m);
        for u in self.coeffs.iter_ones() {
            for v in other.coeffs.iter_ones() {
                let w = u ^ v;
                out.coeffs.set(w, !out.coeffs.get(w));
            }
        }
        out
    }

    /// Sum of coefficients. A chain lies in the augmentation ideal iff this
    /// is zero, i.e. iff its support has even size.
    pub fn augmentation(&self) -> bool {
        self.coeffs.count_ones() % 2 == 1
    }

    /// Pushforward along a linear map on exponents: `[v]` goes to `[f(v)]`.
    pub fn map_through(&self, f: &F2Matrix) -> Self {
        assert_eq!(f.cols(), self.m, "exponent map domain mismatch");
        let table = elem_map_table(f);
        let mut out = Self::zero(f.rows());
        for v in self.coeffs.iter_ones() {
            let w = table[v] as usize;
            out.coeffs.set(w, !out.coeffs.get(w));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// Value table of a linear map on coordinate integers: entry `v` is the
/// encoding of `f` applied to the vector encoded by `v`.
pub(crate) fn elem_map_table(f: &F2Matrix) -> Vec<u64> {
    assert!(f.cols() <= 16 && f.rows() <= 63);
    let col_masks: Vec<u64> = (0..f.cols()).map(|j| f.column(j).as_u64()).collect();
    (0u64..(1 << f.cols()))
        .map(|v| {
            let mut w = 0u64;
            for (j, &cm) in col_masks.iter().enumerate() {
                if (v >> j) & 1 == 1 {
                    w ^= cm;
                }
            }
            w
        })
        .collect()
}

/// Fundamental class of a subspace: the sum of all its elements. Equals the
/// product of `[0] + [e_i]` over any basis of the subspace.
pub fn class_of_subspace(h: &F2Subspace) -> GroupAlgebraChain {
    let m = h.ambient();
    let mut c = GroupAlgebraChain::zero(m);
    let mask = h.element_mask();
    for e in 0..(1u64 << m) {
        if (mask >> e) & 1 == 1 {
            c.coeffs.set(e as usize, true);
        }
    }
    c
}

/// Matrix of the section determined by an ordered basis `e` of GF(2)^m in
/// homogeneous degree q: column I (a q-subset in colex order) is the class
/// of the subspace spanned by `{e_i : i in I}`. The section splits the
/// projection onto the q-th graded piece of the augmentation filtration.
pub fn section_matrix(basis: &F2Matrix, q: usize) -> F2Matrix {
    let m = basis.rows();
    assert_eq!(basis.cols(), m, "basis must be square");
    assert_eq!(basis.rank(), m, "basis must be invertible");
    let subsets = subsets_colex(m, q);
    let mut out = F2Matrix::zeros(1 << m, subsets.len());
    for (col, &subset) in subsets.iter().enumerate() {
        let rows: Vec<usize> = (0..m).filter(|i| (subset >> i) & 1 == 1).collect();
        let gens: Vec<F2Vector> = rows.iter().map(|&i| basis.row(i)).collect();
        let h = F2Subspace::from_generators(m, gens);
        // a basis subset is independent, so the class has full support 2^q
        debug_assert_eq!(h.dim(), q);
        for e in class_of_subspace(&h).coeffs.iter_ones() {
            out.set(e, col, true);
        }
    }
    out
}

/// Applies the section of `basis` in degree q to a coefficient vector over
/// the colex-ordered q-subset monomials.
pub fn section_chain(basis: &F2Matrix, q: usize, w: &F2Vector) -> GroupAlgebraChain {
    let m = basis.rows();
    let mat = section_matrix(basis, q);
    assert_eq!(w.len(), mat.cols(), "monomial coordinate length mismatch");
    GroupAlgebraChain {
        m,
        coeffs: mat.mul_vec(w),
    }
}

/// Section for the standard basis; its columns represent the graded
/// identification of the q-th exterior power with `I^q / I^{q+1}`.
pub fn psi_matrix(m: usize, q: usize) -> F2Matrix {
    section_matrix(&F2Matrix::identity(m), q)
}

/// The standard-basis section applied to exterior coordinates.
pub fn psi_chain(m: usize, q: usize, w: &F2Vector) -> GroupAlgebraChain {
    section_chain(&F2Matrix::identity(m), q, w)
}

/// The q-th power of the augmentation ideal of the group algebra of
/// GF(2)^m, spanned by the classes of all q-dimensional subspaces. The
/// zeroth power is the whole algebra.
pub fn group_algebra_ideal_power(m: usize, q: usize) -> F2Subspace {
    if q == 0 {
        return F2Subspace::full(1 << m);
    }
    let gens: Vec<F2Vector> = F2Subspace::enumerate(m, q)
        .iter()
        .map(|h| class_of_subspace(h).coeffs.clone())
        .collect();
    F2Subspace::from_generators(1 << m, gens)
}

/// Coordinates of `chain` modulo `I^{q+1}` over the degree-q monomials of
/// `basis`, or `None` when the chain does not lie in the span of the section
/// image and `I^{q+1}`. Composing with [`section_chain`] and reducing again
/// is the identity on coordinates.
pub fn monomial_coordinates(
    basis: &F2Matrix,
    q: usize,
    chain: &GroupAlgebraChain,
) -> Option<F2Vector> {
    let m = basis.rows();
    assert_eq!(chain.m, m, "mixed group algebras");
    let sec = section_matrix(basis, q);
    let higher = group_algebra_ideal_power(m, q + 1);
    let higher_cols = higher.basis().transpose();
    let aug = F2Matrix::hstack(&[&sec, &higher_cols]);
    let x = aug.solve(&chain.coeffs)?;
    let mut w = F2Vector::zeros(sec.cols());
    for i in 0..sec.cols() {
        if x.get(i) {
            w.set(i, true);
        }
    }
    Some(w)
}

struct Degree {
    cone_ids: Vec<usize>,
    dim: usize,
}

/// The filtered chain complex computing mod-2 Borel–Moore homology of the
/// real points of the toric variety of a fan.
///
/// Degree p is spanned by pairs (cone of dimension n-p, element of its mod-2
/// quotient), ordered by cone id and then by the element's coordinate
/// integer. `W^q` caches the q-th augmentation-ideal power of each degree.
pub struct OrbitComplex {
    n: usize,
    degrees: Vec<Degree>,
    /// boundary(p) for p in 0..=n+1, with empty maps at both ends
    boundaries: Vec<F2Matrix>,
    /// filtration[p][q] for q in 0..=p+1, decreasing from full to zero
    filtration: Vec<Vec<F2Subspace>>,
}

impl OrbitComplex {
    /// Builds the complex of a valid fan.
    ///
    /// # Panics
    ///
    /// Panics when the lattice dimension exceeds 6, or when the fan's cover
    /// data is inconsistent enough that the boundary fails to square to
    /// zero (possible only for invalid non-simplicial input).
    pub fn build(fan: &Fan) -> Self {
        let n = fan.dim();
        assert!(n <= 6, "orbit complexes support lattice dimension at most 6");
        let mut degrees = Vec::with_capacity(n + 1);
        let mut block_of: HashMap<usize, (usize, usize)> = HashMap::new();
        for p in 0..=n {
            let cone_ids: Vec<usize> = fan.cones_of_dim(n - p).map(|c| c.id()).collect();
            for (k, &id) in cone_ids.iter().enumerate() {
                debug_assert_eq!(fan.cone(id).mod2().quot_dim(), p);
                block_of.insert(id, (p, k));
            }
            let dim = cone_ids.len() << p;
            degrees.push(Degree { cone_ids, dim });
        }

        let mut uppers: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(lo, up) in fan.covers() {
            uppers.entry(lo).or_default().push(up);
        }

        let mut boundaries = Vec::with_capacity(n + 2);
        boundaries.push(F2Matrix::zeros(0, degrees[0].dim));
        for p in 1..=n {
            let mut d = F2Matrix::zeros(degrees[p - 1].dim, degrees[p].dim);
            for (t, &tau_id) in degrees[p].cone_ids.iter().enumerate() {
                let tau = fan.cone(tau_id);
                let Some(ups) = uppers.get(&tau_id) else {
                    continue;
                };
                for &up in ups {
                    let sigma = fan.cone(up);
                    let (dp, s) = block_of[&up];
                    assert_eq!(dp, p - 1, "cover with dimension jump");
                    let f = tau.mod2().induced_map_to(sigma.mod2());
                    let table = elem_map_table(&f);
                    for v in 0..(1usize << p) {
                        d.set((s << (p - 1)) + table[v] as usize, (t << p) + v, true);
                    }
                }
            }
            boundaries.push(d);
        }
        boundaries.push(F2Matrix::zeros(degrees[n].dim, 0));
        for p in 2..=n {
            assert!(
                boundaries[p - 1].mul(&boundaries[p]).is_zero(),
                "boundary does not square to zero in degree {p}; \
                 the fan's face data is not a valid fan"
            );
        }

        let mut filtration = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let dim = degrees[p].dim;
            let mut levels = vec![F2Subspace::full(dim)];
            for q in 1..=p {
                let masks: Vec<u64> = F2Subspace::enumerate(p, q)
                    .iter()
                    .map(F2Subspace::element_mask)
                    .collect();
                let mut gens = Vec::with_capacity(masks.len() * degrees[p].cone_ids.len());
                for block in 0..degrees[p].cone_ids.len() {
                    for &mask in &masks {
                        let mut v = F2Vector::zeros(dim);
                        v.set_range_from_mask(block << p, 1 << p, mask);
                        gens.push(v);
                    }
                }
                levels.push(F2Subspace::from_generators(dim, gens));
            }
            levels.push(F2Subspace::zero(dim));
            filtration.push(levels);
        }

        Self {
            n,
            degrees,
            boundaries,
            filtration,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_a(&self, p: usize) -> usize {
        self.degrees[p].dim
    }

    /// The boundary map out of degree p, for p in 0..=n+1; both ends are
    /// empty matrices so the complex can be traversed uniformly.
    pub fn boundary(&self, p: usize) -> &F2Matrix {
        &self.boundaries[p]
    }

    /// Basis labels of degree p in storage order: (cone id, quotient element).
    pub fn labels(&self, p: usize) -> Vec<(usize, u64)> {
        let mut out = Vec::with_capacity(self.degrees[p].dim);
        for &id in &self.degrees[p].cone_ids {
            for v in 0..(1u64 << p) {
                out.push((id, v));
            }
        }
        out
    }

    pub fn cone_ids(&self, p: usize) -> &[usize] {
        &self.degrees[p].cone_ids
    }

    /// `W^q` in degree p: the span of the fundamental classes of all
    /// q-dimensional subspaces across the blocks. Levels past the top are
    /// zero; level 0 is everything.
    pub fn ideal_power(&self, p: usize, q: usize) -> &F2Subspace {
        let levels = &self.filtration[p];
        &levels[q.min(levels.len() - 1)]
    }

    /// Betti numbers b_0..b_n of the complex: rank homology over GF(2).
    pub fn betti_real(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.n + 1).map(|p| self.boundaries[p].rank()).collect();
        (0..=self.n)
            .map(|p| self.dim_a(p) - ranks[p] - ranks[p + 1])
            .collect()
    }

    /// The graded identification matrices assembled across all blocks of
    /// degree p: columns are indexed by (cone, colex q-subset) in the same
    /// order the exterior complex uses, values are embedded subspace
    /// classes.
    pub fn assembled_psi(&self, p: usize, q: usize) -> F2Matrix {
        let local = psi_matrix(p, q);
        let blocks = self.degrees[p].cone_ids.len();
        let per = binomial(p, q);
        let mut out = F2Matrix::zeros(self.degrees[p].dim, blocks * per);
        for b in 0..blocks {
            for col in 0..per {
                for e in 0..(1usize << p) {
                    if local.get(e, col) {
                        out.set((b << p) + e, b * per + col, true);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Builtin;
    use crate::lattice::QuotientData;

    fn projective(k: usize) -> Fan {
        Fan::builtin(&Builtin::Projective { k }).unwrap()
    }

    fn p1xp1() -> Fan {
        let p1 = projective(1);
        Fan::product(&p1, &p1).unwrap()
    }

    #[test]
    fn p1_complex() {
        let cx = OrbitComplex::build(&projective(1));
        assert_eq!(cx.dim_a(1), 2);
        assert_eq!(cx.dim_a(0), 2);
        assert_eq!(cx.boundary(1), &F2Matrix::from_bits(&[&[1, 1], &[1, 1]], 2));
        assert_eq!(cx.betti_real(), vec![1, 1]);
    }

    #[test]
    fn top_degree_is_a_single_quadrant_block() {
        for fan in [projective(2), projective(3), p1xp1()] {
            let cx = OrbitComplex::build(&fan);
            assert_eq!(cx.dim_a(fan.dim()), 1 << fan.dim());
        }
    }

    #[test]
    fn p2_complex_dims_and_betti() {
        let cx = OrbitComplex::build(&projective(2));
        assert_eq!(
            (cx.dim_a(2), cx.dim_a(1), cx.dim_a(0)),
            (4, 6, 3)
        );
        assert_eq!(cx.betti_real(), vec![1, 1, 1]);
    }

    #[test]
    fn torus_betti_via_kunneth() {
        let cx = OrbitComplex::build(&p1xp1());
        assert_eq!(cx.betti_real(), vec![1, 2, 1]);
    }

    #[test]
    fn open_torus_fan_has_top_homology_only() {
        let fan = Fan::parse(r#"{"lattice_dim":2,"rays":[],"cones":[]}"#).unwrap();
        let cx = OrbitComplex::build(&fan);
        assert_eq!(cx.betti_real(), vec![0, 0, 4]);
    }

    #[test]
    fn class_examples() {
        let zero = F2Subspace::zero(2);
        assert_eq!(class_of_subspace(&zero), GroupAlgebraChain::unit(2));

        let e1 = F2Subspace::from_generators(2, vec![F2Vector::from_bits(&[1, 0])]);
        assert_eq!(
            class_of_subspace(&e1),
            GroupAlgebraChain::from_support(2, &[0b00, 0b01])
        );

        assert_eq!(
            class_of_subspace(&F2Subspace::full(2)),
            GroupAlgebraChain::from_support(2, &[0, 1, 2, 3])
        );
    }

    #[test]
    fn class_equals_product_expansion() {
        for h in F2Subspace::enumerate(4, 2) {
            let mut product = GroupAlgebraChain::unit(4);
            for i in 0..h.dim() {
                let mut factor = GroupAlgebraChain::unit(4);
                factor.xor_assign(&GroupAlgebraChain::from_support(
                    4,
                    &[h.basis().row(i).as_u64()],
                ));
                product = product.mul(&factor);
            }
            assert_eq!(product, class_of_subspace(&h));
        }
    }

    #[test]
    fn augmentation_detects_positive_dimension() {
        for m in 0..=4 {
            for q in 0..=m {
                for h in F2Subspace::enumerate(m, q) {
                    assert_eq!(class_of_subspace(&h).augmentation(), q == 0);
                }
            }
        }
    }

    #[test]
    fn ideal_power_examples() {
        let cx = OrbitComplex::build(&projective(2));
        assert_eq!(cx.ideal_power(2, 0).dim(), 4);
        assert_eq!(cx.ideal_power(2, 3).dim(), 0);
        assert_eq!(cx.ideal_power(1, 5).dim(), 0);
        // one block of quotient dimension 2: augmentation-zero chains
        assert_eq!(cx.ideal_power(2, 1).dim(), 3);
        assert_eq!(group_algebra_ideal_power(2, 1).dim(), 3);
    }

    #[test]
    fn filtration_is_decreasing_and_preserved_by_boundary() {
        for fan in [projective(2), projective(3), Fan::builtin(&Builtin::WeightedP112).unwrap()] {
            let cx = OrbitComplex::build(&fan);
            for p in 0..=cx.n() {
                for q in 0..=p {
                    assert!(cx
                        .ideal_power(p, q)
                        .contains_subspace(cx.ideal_power(p, q + 1)));
                    let image = cx.boundary(p).image_of(cx.ideal_power(p, q));
                    if p > 0 {
                        assert!(
                            cx.ideal_power(p - 1, q).contains_subspace(&image),
                            "boundary drops filtration at p={p}, q={q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn graded_pieces_have_binomial_dimensions() {
        for fan in [projective(3), Fan::builtin(&Builtin::Hirzebruch { a: 1 }).unwrap()] {
            let cx = OrbitComplex::build(&fan);
            for p in 0..=cx.n() {
                let blocks = cx.cone_ids(p).len();
                for q in 0..=p {
                    assert_eq!(
                        cx.ideal_power(p, q).dim() - cx.ideal_power(p, q + 1).dim(),
                        blocks * binomial(p, q)
                    );
                }
            }
        }
    }

    #[test]
    fn psi_unit_and_generator() {
        assert_eq!(
            psi_chain(3, 0, &F2Vector::from_bits(&[1])),
            GroupAlgebraChain::unit(3)
        );
        // e_0 ^ e_2 corresponds to colex subset {0,2}, the second of three
        let w = F2Vector::from_bits(&[0, 1, 0]);
        let h = F2Subspace::from_generators(
            3,
            vec![F2Vector::from_bits(&[1, 0, 0]), F2Vector::from_bits(&[0, 0, 1])],
        );
        assert_eq!(psi_chain(3, 2, &w), class_of_subspace(&h));
    }

    #[test]
    fn psi_is_linear_modulo_next_power() {
        let i2 = group_algebra_ideal_power(3, 2);
        for v1 in 0u64..8 {
            for v2 in 0u64..8 {
                let coord = |v: u64| {
                    F2Vector::from_bits(&[(v & 1) as u8, ((v >> 1) & 1) as u8, ((v >> 2) & 1) as u8])
                };
                let mut sum = psi_chain(3, 1, &coord(v1));
                sum.xor_assign(&psi_chain(3, 1, &coord(v2)));
                sum.xor_assign(&psi_chain(3, 1, &coord(v1 ^ v2)));
                assert!(i2.contains(sum.coeffs()), "failed at {v1}, {v2}");
            }
        }
    }

    #[test]
    fn section_splits_but_does_not_retract() {
        // c = ([0] + [e0 + e1]) * ([0] + [e2]) in the m = 3 algebra
        let mut left = GroupAlgebraChain::unit(3);
        left.xor_assign(&GroupAlgebraChain::from_support(3, &[0b011]));
        let mut right = GroupAlgebraChain::unit(3);
        right.xor_assign(&GroupAlgebraChain::from_support(3, &[0b100]));
        let c = left.mul(&right);

        let id = F2Matrix::identity(3);
        let w = monomial_coordinates(&id, 2, &c).unwrap();
        // (e0 + e1) ^ e2 = e0 ^ e2 + e1 ^ e2: colex subsets {0,2} and {1,2}
        assert_eq!(w, F2Vector::from_bits(&[0, 1, 1]));

        let back = section_chain(&id, 2, &w);
        assert_ne!(back, c);
        let h02 = F2Subspace::from_generators(
            3,
            vec![F2Vector::from_bits(&[1, 0, 0]), F2Vector::from_bits(&[0, 0, 1])],
        );
        let h12 = F2Subspace::from_generators(
            3,
            vec![F2Vector::from_bits(&[0, 1, 0]), F2Vector::from_bits(&[0, 0, 1])],
        );
        let mut expected = class_of_subspace(&h02);
        expected.xor_assign(&class_of_subspace(&h12));
        assert_eq!(back, expected);

        // the reduction of the chain and of its section agree
        assert_eq!(monomial_coordinates(&id, 2, &back).unwrap(), w);
    }

    #[test]
    fn section_degree_bounds() {
        let id = F2Matrix::identity(3);
        assert_eq!(
            section_chain(&id, 0, &F2Vector::from_bits(&[1])),
            GroupAlgebraChain::unit(3)
        );
        // the top subset spans everything regardless of the basis
        let full = class_of_subspace(&F2Subspace::full(3));
        assert_eq!(section_chain(&id, 3, &F2Vector::from_bits(&[1])), full);
        let skew = F2Matrix::from_bits(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]], 3);
        assert_eq!(section_chain(&skew, 3, &F2Vector::from_bits(&[1])), full);
    }

    #[test]
    fn section_is_split_by_reduction_for_any_basis() {
        let skew = F2Matrix::from_bits(&[&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]], 3);
        for q in 0..=3 {
            let dim = binomial(3, q);
            for bits in 0u64..(1 << dim) {
                let mut w = F2Vector::zeros(dim);
                for i in 0..dim {
                    if (bits >> i) & 1 == 1 {
                        w.set(i, true);
                    }
                }
                let c = section_chain(&skew, q, &w);
                assert_eq!(monomial_coordinates(&skew, q, &c).unwrap(), w);
            }
        }
    }

    #[test]
    fn projection_kills_classes_meeting_the_kernel() {
        // every pair (H, V') with nontrivial intersection, quotient dims <= 3
        for m in 1..=3usize {
            let all: Vec<F2Subspace> = (0..=m)
                .flat_map(|q| F2Subspace::enumerate(m, q))
                .collect();
            for h in &all {
                let class = class_of_subspace(h);
                for vprime in &all {
                    let q = QuotientData::new(vprime.clone());
                    let pushed = class.map_through(q.proj());
                    if h.intersect(vprime).dim() > 0 {
                        assert!(pushed.is_zero(), "H={h:?} V'={vprime:?}");
                    } else {
                        assert!(!pushed.is_zero(), "H={h:?} V'={vprime:?}");
                    }
                }
            }
        }
    }
}
