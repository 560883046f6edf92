//! The exterior-power complex attached to the complex points of the toric
//! variety: in bidegree (p, q) one copy of the q-th exterior power of each
//! mod-2 cone quotient in degree p, with differentials given by exterior
//! powers of the cover projections. Its homology in the q direction is the
//! second page of the spectral sequence converging to the mod-2 Borel–Moore
//! homology of the complex points.

use std::collections::BTreeMap;

use crate::combo::{binomial, subsets_colex};
use crate::f2::F2Matrix;
use crate::fan::Fan;

/// Determinant over GF(2) of a small square matrix given as row bitmasks.
fn det_f2(mut rows: Vec<u64>) -> bool {
    let q = rows.len();
    for c in 0..q {
        let Some(pivot) = (c..q).find(|&r| (rows[r] >> c) & 1 == 1) else {
            return false;
        };
        rows.swap(c, pivot);
        for r in (c + 1)..q {
            if (rows[r] >> c) & 1 == 1 {
                rows[r] ^= rows[c];
            }
        }
    }
    true
}

/// The q-th exterior power of a linear map: entry (J, I) is the minor of the
/// rows J and columns I, with q-subsets in colex order on both sides.
pub fn wedge_power(f: &F2Matrix, q: usize) -> F2Matrix {
    let row_sets = subsets_colex(f.rows(), q);
    let col_sets = subsets_colex(f.cols(), q);
    let mut out = F2Matrix::zeros(row_sets.len(), col_sets.len());
    for (jj, &jmask) in row_sets.iter().enumerate() {
        let jrows: Vec<usize> = (0..f.rows()).filter(|r| (jmask >> r) & 1 == 1).collect();
        for (ii, &imask) in col_sets.iter().enumerate() {
            let icols: Vec<usize> = (0..f.cols()).filter(|c| (imask >> c) & 1 == 1).collect();
            let minor: Vec<u64> = jrows
                .iter()
                .map(|&r| {
                    let mut bits = 0u64;
                    for (k, &c) in icols.iter().enumerate() {
                        if f.get(r, c) {
                            bits |= 1 << k;
                        }
                    }
                    bits
                })
                .collect();
            if det_f2(minor) {
                out.set(jj, ii, true);
            }
        }
    }
    out
}

/// A table of dimensions indexed by bidegree; zero entries are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PageDims {
    dims: BTreeMap<(usize, usize), usize>,
}

impl PageDims {
    pub fn insert(&mut self, p: usize, q: usize, dim: usize) {
        if dim > 0 {
            self.dims.insert((p, q), dim);
        }
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }
}

pub struct ExteriorComplex {
    n: usize,
    cone_ids: Vec<Vec<usize>>,
    /// dims[p][q] for p, q in 0..=n
    dims: Vec<Vec<usize>>,
    /// d1[p][q] maps bidegree (p, q) to (p-1, q); empty maps at both ends
    d1: Vec<Vec<F2Matrix>>,
}

impl ExteriorComplex {
    /// Builds the complex of a valid fan.
    ///
    /// # Panics
    ///
    /// Panics if a differential fails to square to zero, which only invalid
    /// non-simplicial face data can cause.
    pub fn build(fan: &Fan) -> Self {
        let n = fan.dim();
        let cone_ids: Vec<Vec<usize>> = (0..=n)
            .map(|p| fan.cones_of_dim(n - p).map(|c| c.id()).collect())
            .collect();
        let block_index: Vec<BTreeMap<usize, usize>> = cone_ids
            .iter()
            .map(|ids| ids.iter().enumerate().map(|(k, &id)| (id, k)).collect())
            .collect();
        let dims: Vec<Vec<usize>> = (0..=n)
            .map(|p| (0..=n).map(|q| cone_ids[p].len() * binomial(p, q)).collect())
            .collect();

        let mut d1: Vec<Vec<F2Matrix>> = Vec::with_capacity(n + 2);
        d1.push((0..=n).map(|q| F2Matrix::zeros(0, dims[0][q])).collect());
        for p in 1..=n {
            let mut per_q: Vec<F2Matrix> = (0..=n)
                .map(|q| F2Matrix::zeros(dims[p - 1][q], dims[p][q]))
                .collect();
            for &(lo, up) in fan.covers() {
                let Some(&t) = block_index[p].get(&lo) else {
                    continue;
                };
                let s = block_index[p - 1][&up];
                let f = fan.cone(lo).mod2().induced_map_to(fan.cone(up).mod2());
                for (q, mat) in per_q.iter_mut().enumerate() {
                    let block = wedge_power(&f, q);
                    let (rb, cb) = (binomial(p - 1, q), binomial(p, q));
                    for r in 0..block.rows() {
                        for c in 0..block.cols() {
                            if block.get(r, c) {
                                mat.set(s * rb + r, t * cb + c, true);
                            }
                        }
                    }
                }
            }
            d1.push(per_q);
        }
        d1.push((0..=n).map(|q| F2Matrix::zeros(dims[n][q], 0)).collect());
        for p in 2..=n {
            for q in 0..=n {
                assert!(
                    d1[p - 1][q].mul(&d1[p][q]).is_zero(),
                    "exterior differential does not square to zero at p={p}, q={q}"
                );
            }
        }

        Self {
            n,
            cone_ids,
            dims,
            d1,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_e1(&self, p: usize, q: usize) -> usize {
        if p > self.n || q > self.n {
            return 0;
        }
        self.dims[p][q]
    }

    pub fn cone_ids(&self, p: usize) -> &[usize] {
        &self.cone_ids[p]
    }

    /// The differential out of bidegree (p, q), for p in 0..=n+1.
    pub fn d1(&self, p: usize, q: usize) -> &F2Matrix {
        &self.d1[p][q]
    }

    /// Dimensions of the homology of each q-row: the second page.
    pub fn e2_dims(&self) -> PageDims {
        let mut out = PageDims::default();
        for p in 0..=self.n {
            for q in 0..=self.n {
                let d_out = self.d1[p][q].rank();
                let d_in = self.d1[p + 1][q].rank();
                out.insert(p, q, self.dims[p][q] - d_out - d_in);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Builtin;
    use crate::orbit::OrbitComplex;

    fn projective(k: usize) -> Fan {
        Fan::builtin(&Builtin::Projective { k }).unwrap()
    }

    #[test]
    fn wedge_power_small_cases() {
        let f = F2Matrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]], 3);
        let w0 = wedge_power(&f, 0);
        assert_eq!((w0.rows(), w0.cols()), (1, 1));
        assert!(w0.get(0, 0));
        let w1 = wedge_power(&f, 1);
        assert_eq!(w1, f);
        let w2 = wedge_power(&f, 2);
        // minors on column pairs {0,1}, {0,2}, {1,2}
        assert_eq!(w2, F2Matrix::from_bits(&[&[1, 1, 1]], 3));
    }

    #[test]
    fn wedge_power_is_functorial() {
        let f = F2Matrix::from_bits(&[&[1, 0, 1, 1], &[0, 1, 1, 0], &[1, 1, 0, 0]], 4);
        let g = F2Matrix::from_bits(&[&[1, 1, 0], &[0, 1, 1]], 3);
        for q in 0..=2 {
            assert_eq!(
                wedge_power(&g.mul(&f), q),
                wedge_power(&g, q).mul(&wedge_power(&f, q))
            );
        }
    }

    #[test]
    fn p1_term_and_differential() {
        let x = ExteriorComplex::build(&projective(1));
        assert_eq!(x.dim_e1(1, 0), 1);
        assert_eq!(x.dim_e1(1, 1), 1);
        assert_eq!(x.dim_e1(0, 0), 2);
        assert_eq!(x.dim_e1(0, 1), 0);
        assert_eq!(x.d1(1, 0), &F2Matrix::from_bits(&[&[1], &[1]], 1));
        assert_eq!(x.d1(1, 0).rank(), 1);
    }

    #[test]
    fn zero_row_is_the_cone_incidence_complex() {
        let fan = projective(2);
        let x = ExteriorComplex::build(&fan);
        for p in 1..=2 {
            let d = x.d1(p, 0);
            let lows = x.cone_ids(p);
            let ups = x.cone_ids(p - 1);
            for (t, &lo) in lows.iter().enumerate() {
                for (s, &up) in ups.iter().enumerate() {
                    assert_eq!(d.get(s, t), fan.covers().contains(&(lo, up)));
                }
            }
        }
    }

    #[test]
    fn vanishing_above_the_diagonal() {
        let x = ExteriorComplex::build(&projective(3));
        for p in 0..=3 {
            for q in (p + 1)..=3 {
                assert_eq!(x.dim_e1(p, q), 0);
            }
        }
    }

    #[test]
    fn column_sums_match_the_orbit_complex() {
        for fan in [projective(3), Fan::builtin(&Builtin::WeightedP112).unwrap()] {
            let x = ExteriorComplex::build(&fan);
            let cx = OrbitComplex::build(&fan);
            for p in 0..=fan.dim() {
                let total: usize = (0..=fan.dim()).map(|q| x.dim_e1(p, q)).sum();
                assert_eq!(total, cx.dim_a(p));
            }
        }
    }

    #[test]
    fn induced_maps_are_functorial_on_cover_triples() {
        let fan = projective(3);
        for &(tau, sigma) in fan.covers() {
            for &(lo, gamma) in fan.covers() {
                if lo != sigma {
                    continue;
                }
                let f = fan.cone(tau).mod2().induced_map_to(fan.cone(sigma).mod2());
                let g = fan.cone(sigma).mod2().induced_map_to(fan.cone(gamma).mod2());
                let direct = fan.cone(tau).mod2().induced_map_to(fan.cone(gamma).mod2());
                assert_eq!(g.mul(&f), direct);
                for q in 0..=2 {
                    assert_eq!(
                        wedge_power(&direct, q),
                        wedge_power(&g, q).mul(&wedge_power(&f, q))
                    );
                }
            }
        }
    }

    #[test]
    fn e2_of_p1() {
        let x = ExteriorComplex::build(&projective(1));
        let e2 = x.e2_dims();
        assert_eq!(e2.dim(0, 0), 1);
        assert_eq!(e2.dim(1, 1), 1);
        assert_eq!(e2.total(), 2);
    }

    #[test]
    fn e2_of_a_point_equals_e1() {
        let point = Fan::parse(r#"{"lattice_dim":0,"rays":[],"cones":[]}"#).unwrap();
        let x = ExteriorComplex::build(&point);
        let e2 = x.e2_dims();
        assert_eq!(e2.dim(0, 0), 1);
        assert_eq!(e2.total(), 1);
    }

    #[test]
    fn zero_row_of_complete_fans_survives_only_at_zero() {
        for n in 2..=3 {
            let x = ExteriorComplex::build(&projective(n));
            let e2 = x.e2_dims();
            assert_eq!(e2.dim(0, 0), 1);
            for p in 1..=n {
                assert_eq!(e2.dim(p, 0), 0, "n={n}, p={p}");
            }
        }
    }
}
