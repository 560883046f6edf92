//! Rational fans: file ingestion, validation, standard constructors, and the
//! cone/face combinatorics the chain complexes are built from.
//!
//! A fan is stored as a set of cones over a shared list of primitive ray
//! generators. Each cone carries its mod-2 lattice data (the saturated span
//! of its rays reduced mod 2, plus a chosen quotient projection). The face
//! relation between listed cones is ray-set inclusion; `covers` lists the
//! pairs with dimension difference exactly one, which is all the complexes
//! need.
//!
//! Cones are ordered by (dimension, ray set) and ids are positions in that
//! order, so every construction here is deterministic.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::lattice::{mod2_cone_subspace, QuotientData};
use crate::Error;

/// A cone of a fan, identified by the set of rays it is spanned by.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    id: usize,
    ray_ids: Vec<usize>,
    dim: usize,
    mod2: QuotientData,
}

impl Cone {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn ray_ids(&self) -> &[usize] {
        &self.ray_ids
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Mod-2 reduction of the saturated span of the cone's rays, with the
    /// projection onto its quotient.
    pub fn mod2(&self) -> &QuotientData {
        &self.mod2
    }

    pub fn is_zero_cone(&self) -> bool {
        self.ray_ids.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fan {
    n: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Cone>,
    covers: Vec<(usize, usize)>,
}

/// One problem found by [`Fan::validate`]. Violations are data, not errors:
/// a constructed fan can be inspected even when broken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroConeCount { count: usize },
    RayLength { ray: usize },
    RayNotPrimitive { ray: usize },
    DuplicateRay { first: usize, second: usize },
    RayIndexOutOfRange { cone: usize },
    ConeRaysNotSorted { cone: usize },
    DuplicateCone { first: usize, second: usize },
    ConeDimension { cone: usize, dim: usize, rank: usize },
    ConeQuotientData { cone: usize },
    MissingFace { cone: usize, face: Vec<usize> },
    MissingCover { lower: usize, upper: usize },
    SpuriousCover { lower: usize, upper: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::ZeroConeCount { count } => {
                write!(f, "zero cone listed {count} times (expected exactly once)")
            }
            Violation::RayLength { ray } => write!(f, "ray {ray} has the wrong length"),
            Violation::RayNotPrimitive { ray } => write!(f, "ray {ray} is not primitive"),
            Violation::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} are equal")
            }
            Violation::RayIndexOutOfRange { cone } => {
                write!(f, "cone {cone} references a ray that does not exist")
            }
            Violation::ConeRaysNotSorted { cone } => {
                write!(f, "cone {cone} ray ids are not strictly increasing")
            }
            Violation::DuplicateCone { first, second } => {
                write!(f, "cones {first} and {second} have the same ray set")
            }
            Violation::ConeDimension { cone, dim, rank } => {
                write!(f, "cone {cone} has dimension {dim} but its rays have rank {rank}")
            }
            Violation::ConeQuotientData { cone } => {
                write!(f, "cone {cone} mod-2 data does not match its rays")
            }
            Violation::MissingFace { cone, face } => {
                write!(f, "simplicial cone {cone} is missing face {face:?}")
            }
            Violation::MissingCover { lower, upper } => {
                write!(f, "cover ({lower}, {upper}) missing from the cover list")
            }
            Violation::SpuriousCover { lower, upper } => {
                write!(f, "cover list contains ({lower}, {upper}) which is not a cover")
            }
        }
    }
}

/// Named standard fans used as corpus seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Complete fan of projective k-space: rays e_1..e_k and -(e_1+..+e_k).
    Projective { k: usize },
    /// Hirzebruch surface of parameter a >= 0.
    Hirzebruch { a: i64 },
    /// Weighted projective plane P(1,1,2); one cone has a saturation defect
    /// of index 2, which exercises the lattice arithmetic.
    WeightedP112,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_primitive(v: &[i64]) -> bool {
    v.iter().copied().fold(0, gcd) == 1
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && is_subset(a, b)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted ascending
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    cones: Vec<Vec<usize>>,
    lattice_dim: usize,
    rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    maximal_only: bool,
}

impl Fan {
    /// Builds a fan from a ray list and a set of cones given as sorted ray-id
    /// sets. The zero cone is added when absent; per-cone dimensions and
    /// mod-2 data are computed from the rays; covers are derived from ray-set
    /// inclusion plus dimension.
    fn assemble(n: usize, rays: Vec<Vec<i64>>, mut sets: BTreeSet<Vec<usize>>) -> Result<Fan, Error> {
        sets.insert(Vec::new());
        let mut built: Vec<(Vec<usize>, QuotientData)> = Vec::with_capacity(sets.len());
        for set in sets {
            let gens: Vec<Vec<i64>> = set.iter().map(|&r| rays[r].clone()).collect();
            let sub = mod2_cone_subspace(&gens, n)?;
            built.push((set, QuotientData::new(sub)));
        }
        built.sort_by(|a, b| {
            (a.1.sub().dim(), &a.0).cmp(&(b.1.sub().dim(), &b.0))
        });
        let cones: Vec<Cone> = built
            .into_iter()
            .enumerate()
            .map(|(id, (ray_ids, mod2))| Cone {
                id,
                dim: mod2.sub().dim(),
                ray_ids,
                mod2,
            })
            .collect();
        let mut covers = Vec::new();
        for tau in &cones {
            for sigma in &cones {
                if sigma.dim == tau.dim + 1 && is_strict_subset(&tau.ray_ids, &sigma.ray_ids) {
                    covers.push((tau.id, sigma.id));
                }
            }
        }
        covers.sort_unstable();
        Ok(Fan {
            n,
            rays,
            cones,
            covers,
        })
    }

    /// Parses the JSON fan format:
    ///
    /// ```json
    /// { "lattice_dim": 2,
    ///   "rays": [[1,0],[0,1],[-1,-1]],
    ///   "cones": [[0,1],[0,2],[1,2]],
    ///   "maximal_only": true }
    /// ```
    ///
    /// Ray ids in each cone are 0-based and strictly increasing. The zero
    /// cone `[]` may be listed or omitted. With `maximal_only`, every listed
    /// cone must be simplicial and all sub-ray-sets are generated as faces.
    pub fn parse(text: &str) -> Result<Fan, Error> {
        let file: FanFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = file.lattice_dim;
        for (i, ray) in file.rays.iter().enumerate() {
            if ray.len() != n {
                return Err(Error::Parse(format!(
                    "rays[{i}] has length {} but lattice_dim is {n}",
                    ray.len()
                )));
            }
            if !is_primitive(ray) {
                return Err(Error::Parse(format!("rays[{i}] = {ray:?} is not primitive")));
            }
            for (j, other) in file.rays[..i].iter().enumerate() {
                if ray == other {
                    return Err(Error::Parse(format!("rays[{i}] duplicates rays[{j}]")));
                }
            }
        }
        let mut sets = BTreeSet::new();
        for (i, cone) in file.cones.iter().enumerate() {
            for w in cone.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Parse(format!(
                        "cones[{i}] = {cone:?} is not strictly increasing"
                    )));
                }
            }
            if let Some(&r) = cone.iter().find(|&&r| r >= file.rays.len()) {
                return Err(Error::Parse(format!(
                    "cones[{i}] references ray {r} but there are only {} rays",
                    file.rays.len()
                )));
            }
            if !sets.insert(cone.clone()) {
                return Err(Error::Parse(format!("cones[{i}] = {cone:?} is listed twice")));
            }
        }
        if file.maximal_only {
            let mut faces = BTreeSet::new();
            for cone in &sets {
                let gens: Vec<Vec<i64>> = cone.iter().map(|&r| file.rays[r].clone()).collect();
                let rank = mod2_cone_subspace(&gens, n)?.dim();
                if rank != cone.len() {
                    return Err(Error::Parse(format!(
                        "maximal_only requires simplicial cones, but {cone:?} has rank {rank}"
                    )));
                }
                for mask in 0u64..(1 << cone.len()) {
                    let face: Vec<usize> = cone
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| (mask >> b) & 1 == 1)
                        .map(|(_, &r)| r)
                        .collect();
                    faces.insert(face);
                }
            }
            sets = faces;
        }
        Self::assemble(n, file.rays, sets)
    }

    /// Canonical JSON for this fan: full cone list, zero cone omitted,
    /// deterministic ordering. Parsing the output reproduces the fan.
    pub fn to_json_string(&self) -> String {
        let file = FanFile {
            cones: self
                .cones
                .iter()
                .filter(|c| !c.is_zero_cone())
                .map(|c| c.ray_ids.clone())
                .collect(),
            lattice_dim: self.n,
            rays: self.rays.clone(),
            maximal_only: false,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("fan serialization");
        s.push('\n');
        s
    }

    pub fn builtin(which: &Builtin) -> Result<Fan, Error> {
        match which {
            Builtin::Projective { k } => {
                if *k == 0 {
                    return Err(Error::BadBuiltin("projective index must be at least 1".into()));
                }
                let k = *k;
                let mut rays: Vec<Vec<i64>> = (0..k)
                    .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
                    .collect();
                rays.push(vec![-1; k]);
                // every proper subset of the k+1 rays spans a cone
                let sets: BTreeSet<Vec<usize>> = (0u64..(1 << (k + 1)))
                    .filter(|m| (m.count_ones() as usize) <= k)
                    .map(|m| (0..=k).filter(|&r| (m >> r) & 1 == 1).collect())
                    .collect();
                Self::assemble(k, rays, sets)
            }
            Builtin::Hirzebruch { a } => {
                if *a < 0 {
                    return Err(Error::BadBuiltin("hirzebruch parameter must be >= 0".into()));
                }
                let rays = vec![vec![1, 0], vec![0, 1], vec![-1, *a], vec![0, -1]];
                Self::from_maximal(2, rays, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
            }
            Builtin::WeightedP112 => {
                let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -2]];
                Self::from_maximal(2, rays, &[vec![0, 1], vec![0, 2], vec![1, 2]])
            }
        }
    }

    /// Builds from simplicial maximal cones by generating all sub-ray-sets.
    fn from_maximal(n: usize, rays: Vec<Vec<i64>>, maximal: &[Vec<usize>]) -> Result<Fan, Error> {
        let mut sets = BTreeSet::new();
        for cone in maximal {
            for mask in 0u64..(1 << cone.len()) {
                let face: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| (mask >> b) & 1 == 1)
                    .map(|(_, &r)| r)
                    .collect();
                sets.insert(face);
            }
        }
        Self::assemble(n, rays, sets)
    }

    /// Product fan: lives in the sum of the two lattices, with one cone
    /// `a x b` for every pair of cones.
    pub fn product(a: &Fan, b: &Fan) -> Result<Fan, Error> {
        let n = a.n + b.n;
        let mut rays: Vec<Vec<i64>> = Vec::with_capacity(a.rays.len() + b.rays.len());
        for r in &a.rays {
            let mut v = r.clone();
            v.resize(n, 0);
            rays.push(v);
        }
        for r in &b.rays {
            let mut v = vec![0; a.n];
            v.extend_from_slice(r);
            rays.push(v);
        }
        let offset = a.rays.len();
        let mut sets = BTreeSet::new();
        for ca in &a.cones {
            for cb in &b.cones {
                let mut set = ca.ray_ids.clone();
                set.extend(cb.ray_ids.iter().map(|&r| r + offset));
                sets.insert(set);
            }
        }
        Self::assemble(n, rays, sets)
    }

    /// Star subdivision at a simplicial cone: a new ray on the primitive sum
    /// of the target's generators replaces the target's star. Every cone
    /// containing the target must itself be simplicial.
    pub fn star_subdivision(&self, cone_id: usize) -> Result<Fan, Error> {
        let Some(target) = self.cones.get(cone_id) else {
            return Err(Error::Subdivision(format!("no cone with id {cone_id}")));
        };
        if target.dim == 0 {
            return Err(Error::Subdivision("cannot subdivide the zero cone".into()));
        }
        if target.dim != target.ray_ids.len() {
            return Err(Error::Subdivision(format!(
                "cone {cone_id} is not simplicial"
            )));
        }
        let star: Vec<&Cone> = self
            .cones
            .iter()
            .filter(|c| is_subset(&target.ray_ids, &c.ray_ids))
            .collect();
        if let Some(bad) = star.iter().find(|c| c.dim != c.ray_ids.len()) {
            return Err(Error::Subdivision(format!(
                "cone {} in the star of cone {cone_id} is not simplicial",
                bad.id
            )));
        }
        let mut sum = vec![0i64; self.n];
        for &r in &target.ray_ids {
            for (s, &x) in sum.iter_mut().zip(&self.rays[r]) {
                *s = s.checked_add(x).ok_or(Error::Overflow)?;
            }
        }
        let g = sum.iter().copied().fold(0, gcd);
        assert!(g > 0, "simplicial cone generators cannot sum to zero");
        let new_ray: Vec<i64> = sum.into_iter().map(|x| x / g).collect();
        let mut rays = self.rays.clone();
        let rho = match rays.iter().position(|r| *r == new_ray) {
            Some(i) => i,
            None => {
                rays.push(new_ray);
                rays.len() - 1
            }
        };
        let mut sets = BTreeSet::new();
        for c in &self.cones {
            if !is_subset(&target.ray_ids, &c.ray_ids) {
                sets.insert(c.ray_ids.clone());
            }
        }
        for gamma in &star {
            for mask in 0u64..(1 << gamma.ray_ids.len()) {
                let mut face: Vec<usize> = gamma
                    .ray_ids
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| (mask >> b) & 1 == 1)
                    .map(|(_, &r)| r)
                    .collect();
                if is_subset(&target.ray_ids, &face) {
                    continue;
                }
                if !face.contains(&rho) {
                    face.push(rho);
                    face.sort_unstable();
                }
                sets.insert(face);
            }
        }
        Self::assemble(self.n, rays, sets)
    }

    /// Checks the structural invariants. An empty list means the fan is
    /// valid: rays primitive and distinct, exactly one zero cone, cone
    /// dimensions equal to ray ranks, mod-2 data consistent, simplicial
    /// cones closed under faces, and the cover list exact. Geometric
    /// intersection axioms for non-simplicial cones are not checked.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.len() != self.n {
                out.push(Violation::RayLength { ray: i });
            } else if !is_primitive(ray) {
                out.push(Violation::RayNotPrimitive { ray: i });
            }
            for (j, other) in self.rays[..i].iter().enumerate() {
                if ray == other {
                    out.push(Violation::DuplicateRay { first: j, second: i });
                }
            }
        }
        let zero_count = self.cones.iter().filter(|c| c.is_zero_cone()).count();
        if zero_count != 1 {
            out.push(Violation::ZeroConeCount { count: zero_count });
        }
        for cone in &self.cones {
            if cone.ray_ids.iter().any(|&r| r >= self.rays.len()) {
                out.push(Violation::RayIndexOutOfRange { cone: cone.id });
                continue;
            }
            if cone.ray_ids.windows(2).any(|w| w[0] >= w[1]) {
                out.push(Violation::ConeRaysNotSorted { cone: cone.id });
                continue;
            }
            let gens: Vec<Vec<i64>> = cone.ray_ids.iter().map(|&r| self.rays[r].clone()).collect();
            match mod2_cone_subspace(&gens, self.n) {
                Ok(sub) => {
                    if sub.dim() != cone.dim {
                        out.push(Violation::ConeDimension {
                            cone: cone.id,
                            dim: cone.dim,
                            rank: sub.dim(),
                        });
                    }
                    if &sub != cone.mod2.sub() || cone.mod2.proj().kernel() != sub {
                        out.push(Violation::ConeQuotientData { cone: cone.id });
                    }
                }
                Err(_) => out.push(Violation::ConeQuotientData { cone: cone.id }),
            }
        }
        for (i, a) in self.cones.iter().enumerate() {
            for (j, b) in self.cones.iter().enumerate().skip(i + 1) {
                if a.ray_ids == b.ray_ids {
                    out.push(Violation::DuplicateCone { first: i, second: j });
                }
            }
        }
        // simplicial closure: immediate sub-ray-sets must be listed
        for cone in &self.cones {
            if cone.dim != cone.ray_ids.len() || cone.ray_ids.is_empty() {
                continue;
            }
            for skip in 0..cone.ray_ids.len() {
                let face: Vec<usize> = cone
                    .ray_ids
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &r)| r)
                    .collect();
                if !self.cones.iter().any(|c| c.ray_ids == face) {
                    out.push(Violation::MissingFace {
                        cone: cone.id,
                        face,
                    });
                }
            }
        }
        let mut expected = Vec::new();
        for tau in &self.cones {
            for sigma in &self.cones {
                if sigma.dim == tau.dim + 1 && is_strict_subset(&tau.ray_ids, &sigma.ray_ids) {
                    expected.push((tau.id, sigma.id));
                }
            }
        }
        expected.sort_unstable();
        for pair in &expected {
            if !self.covers.contains(pair) {
                out.push(Violation::MissingCover {
                    lower: pair.0,
                    upper: pair.1,
                });
            }
        }
        for pair in &self.covers {
            if !expected.contains(pair) {
                out.push(Violation::SpuriousCover {
                    lower: pair.0,
                    upper: pair.1,
                });
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: usize) -> &Cone {
        &self.cones[id]
    }

    /// Pairs (lower id, upper id) with dimension difference one, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cones_of_dim(&self, d: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim == d)
    }

    pub fn cone_counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n + 1];
        for c in &self.cones {
            counts[c.dim] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projective(k: usize) -> Fan {
        Fan::builtin(&Builtin::Projective { k }).unwrap()
    }

    #[test]
    fn parse_p1() {
        let f = Fan::parse(r#"{"lattice_dim":1,"rays":[[1],[-1]],"cones":[[0],[1]]}"#).unwrap();
        assert_eq!(f.cones().len(), 3);
        assert_eq!(f.covers().len(), 2);
        assert!(f.validate().is_empty());
    }

    #[test]
    fn parse_rejects_non_primitive_ray() {
        let err = Fan::parse(r#"{"lattice_dim":1,"rays":[[2]],"cones":[[0]]}"#).unwrap_err();
        assert!(err.to_string().contains("not primitive"), "{err}");
    }

    #[test]
    fn parse_maximal_only_p2() {
        let f = Fan::parse(
            r#"{"lattice_dim":2,"rays":[[1,0],[0,1],[-1,-1]],
                "cones":[[0,1],[0,2],[1,2]],"maximal_only":true}"#,
        )
        .unwrap();
        assert_eq!(f.cones().len(), 7);
        assert_eq!(f.covers().len(), 9);
        assert!(f.validate().is_empty());
    }

    #[test]
    fn parse_rejects_duplicates_and_bad_indices() {
        assert!(Fan::parse(r#"{"lattice_dim":1,"rays":[[1],[1]],"cones":[[0]]}"#).is_err());
        assert!(Fan::parse(r#"{"lattice_dim":1,"rays":[[1]],"cones":[[0],[0]]}"#).is_err());
        assert!(Fan::parse(r#"{"lattice_dim":1,"rays":[[1]],"cones":[[3]]}"#).is_err());
        assert!(Fan::parse(r#"{"lattice_dim":2,"rays":[[1,0],[0,1]],"cones":[[1,0]]}"#).is_err());
    }

    #[test]
    fn parse_rejects_maximal_only_non_simplicial() {
        // four rays of a square cone: rank 2, 4 generators
        let err = Fan::parse(
            r#"{"lattice_dim":2,"rays":[[1,0],[0,1],[-1,0],[0,-1]],
                "cones":[[0,1,2,3]],"maximal_only":true}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("simplicial"), "{err}");
    }

    #[test]
    fn validate_flags_missing_zero_cone() {
        let mut f = projective(1);
        f.cones.retain(|c| !c.is_zero_cone());
        let violations = f.validate();
        assert!(violations.contains(&Violation::ZeroConeCount { count: 0 }));
    }

    #[test]
    fn validate_flags_missing_face() {
        let mut f = projective(2);
        let victim = f
            .cones
            .iter()
            .position(|c| c.ray_ids == vec![0])
            .unwrap();
        f.cones.remove(victim);
        let violations = f.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::MissingFace { .. })));
    }

    #[test]
    fn builtin_projective_counts() {
        let p1 = projective(1);
        assert_eq!(p1.rays(), &[vec![1], vec![-1]]);
        assert_eq!(p1.cones().len(), 3);

        let p4 = projective(4);
        assert_eq!(p4.rays().len(), 5);
        assert_eq!(p4.cones().len(), 31);
        assert!(p4.validate().is_empty());
    }

    #[test]
    fn builtin_hirzebruch() {
        let f = Fan::builtin(&Builtin::Hirzebruch { a: 1 }).unwrap();
        assert_eq!(f.rays(), &[vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]]);
        assert_eq!(f.cones_of_dim(2).count(), 4);
        assert!(f.validate().is_empty());
        assert!(Fan::builtin(&Builtin::Hirzebruch { a: -1 }).is_err());
        assert!(Fan::builtin(&Builtin::Projective { k: 0 }).is_err());
    }

    #[test]
    fn builtin_weighted_p112_has_saturation_defect() {
        let f = Fan::builtin(&Builtin::WeightedP112).unwrap();
        assert!(f.validate().is_empty());
        // the cone on rays 1 and 2 has index 2; saturation makes it full
        let cone = f
            .cones()
            .iter()
            .find(|c| c.ray_ids() == [1, 2])
            .unwrap();
        assert_eq!(cone.mod2().sub().dim(), 2);
        assert_eq!(cone.mod2().quot_dim(), 0);
    }

    #[test]
    fn product_counts() {
        let p1 = projective(1);
        let f = Fan::product(&p1, &p1).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.cones().len(), 9);
        assert!(f.validate().is_empty());

        let p1_4 = Fan::product(&Fan::product(&f, &p1).unwrap(), &p1).unwrap();
        assert_eq!(p1_4.dim(), 4);
        assert_eq!(p1_4.cones().len(), 81);
        assert!(p1_4.validate().is_empty());
    }

    #[test]
    fn product_with_point_is_identity() {
        let point = Fan::parse(r#"{"lattice_dim":0,"rays":[],"cones":[]}"#).unwrap();
        assert_eq!(point.cones().len(), 1);
        let p2 = projective(2);
        let prod = Fan::product(&p2, &point).unwrap();
        assert_eq!(prod, p2);
    }

    #[test]
    fn product_cone_counts_convolve() {
        let a = projective(2);
        let b = Fan::builtin(&Builtin::Hirzebruch { a: 2 }).unwrap();
        let prod = Fan::product(&a, &b).unwrap();
        let ca = a.cone_counts_by_dim();
        let cb = b.cone_counts_by_dim();
        let cp = prod.cone_counts_by_dim();
        for k in 0..=prod.dim() {
            let expected: usize = (0..=k)
                .filter(|&i| i <= a.dim() && k - i <= b.dim())
                .map(|i| ca[i] * cb[k - i])
                .sum();
            assert_eq!(cp[k], expected, "dimension {k}");
        }
    }

    #[test]
    fn star_subdivision_of_p2_max_cone() {
        let p2 = projective(2);
        let target = p2
            .cones()
            .iter()
            .find(|c| c.dim() == 2 && c.ray_ids() == [0, 1])
            .unwrap()
            .id();
        let f = p2.star_subdivision(target).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.cones_of_dim(2).count(), 4);
        assert!(f.validate().is_empty());
        assert!(f.rays().contains(&vec![1, 1]));
    }

    #[test]
    fn star_subdivision_of_a_ray_is_identity() {
        let p2 = projective(2);
        let ray_cone = p2.cones().iter().find(|c| c.dim() == 1).unwrap().id();
        let f = p2.star_subdivision(ray_cone).unwrap();
        assert_eq!(f, p2);
    }

    #[test]
    fn two_subdivisions_grow_p2() {
        let p2 = projective(2);
        let first_max = p2.cones().iter().find(|c| c.dim() == 2).unwrap().id();
        let once = p2.star_subdivision(first_max).unwrap();
        let next_max = once.cones().iter().find(|c| c.dim() == 2).unwrap().id();
        let twice = once.star_subdivision(next_max).unwrap();
        assert_eq!(twice.rays().len(), 5);
        assert_eq!(twice.cones_of_dim(2).count(), 5);
        assert!(twice.validate().is_empty());
    }

    #[test]
    fn star_subdivision_rejects_bad_targets() {
        let p2 = projective(2);
        let zero = p2.cones().iter().find(|c| c.is_zero_cone()).unwrap().id();
        assert!(p2.star_subdivision(zero).is_err());
        assert!(p2.star_subdivision(999).is_err());
    }

    #[test]
    fn subdivision_preserves_completeness() {
        // in a complete fan every ridge is covered by exactly two maximal cones
        fn ridge_counts_ok(f: &Fan) -> bool {
            f.cones_of_dim(f.dim().saturating_sub(1)).all(|ridge| {
                let count = f
                    .covers()
                    .iter()
                    .filter(|(lo, up)| *lo == ridge.id() && f.cone(*up).dim() == f.dim())
                    .count();
                count == 2
            })
        }
        let p3 = projective(3);
        assert!(ridge_counts_ok(&p3));
        let max = p3.cones().iter().find(|c| c.dim() == 3).unwrap().id();
        let sub = p3.star_subdivision(max).unwrap();
        assert!(ridge_counts_ok(&sub));
    }

    #[test]
    fn json_round_trip() {
        let f = Fan::builtin(&Builtin::Hirzebruch { a: 1 }).unwrap();
        let text = f.to_json_string();
        let g = Fan::parse(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_json_string(), text);
    }
}
