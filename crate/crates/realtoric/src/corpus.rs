//! Deterministic corpora of valid complete fans: builtins of the requested
//! dimension, products of lower-dimensional builtins, then seeded chains of
//! random star subdivisions. The same seed always yields the same fans,
//! byte for byte.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fan::{Builtin, Fan};
use crate::Error;

#[derive(Clone, Debug)]
pub struct CorpusFan {
    pub name: String,
    pub fan: Fan,
}

fn builtins(dim: usize) -> Result<Vec<(String, Fan)>, Error> {
    let mut out = vec![(
        format!("projective{dim}"),
        Fan::builtin(&Builtin::Projective { k: dim })?,
    )];
    if dim == 2 {
        for a in 0..=2 {
            out.push((
                format!("hirzebruch{a}"),
                Fan::builtin(&Builtin::Hirzebruch { a })?,
            ));
        }
        out.push(("weighted_p112".into(), Fan::builtin(&Builtin::WeightedP112)?));
    }
    Ok(out)
}

fn base_fans(dim: usize) -> Result<Vec<(String, Fan)>, Error> {
    let mut out = builtins(dim)?;
    for lo in 1..=dim / 2 {
        let hi = dim - lo;
        let left = builtins(lo)?;
        let right = builtins(hi)?;
        for (i, (na, fa)) in left.iter().enumerate() {
            for (j, (nb, fb)) in right.iter().enumerate() {
                if lo == hi && i > j {
                    continue;
                }
                out.push((format!("{na}_x_{nb}"), Fan::product(fa, fb)?));
            }
        }
    }
    Ok(out)
}

/// Cones eligible for star subdivision: positive dimension, simplicial,
/// with a simplicial star.
fn eligible_targets(fan: &Fan) -> Vec<usize> {
    fan.cones()
        .iter()
        .filter(|c| {
            c.dim() >= 1
                && c.dim() == c.ray_ids().len()
                && fan
                    .cones()
                    .iter()
                    .filter(|s| {
                        c.ray_ids().iter().all(|r| s.ray_ids().contains(r))
                    })
                    .all(|s| s.dim() == s.ray_ids().len())
        })
        .map(|c| c.id())
        .collect()
}

/// Generates `count` valid fans of lattice dimension `dim` (1..=6). The
/// list starts with the deterministic base fans and is extended by random
/// subdivision chains of at most 10 steps, deduplicated by canonical bytes;
/// when a dimension admits too few distinct fans the remainder repeats.
pub fn generate_corpus(seed: u64, count: usize, dim: usize) -> Result<Vec<CorpusFan>, Error> {
    assert!((1..=6).contains(&dim), "corpus dimension must be in 1..=6");
    assert!(count >= 1);
    let base = base_fans(dim)?;
    let mut out: Vec<CorpusFan> = Vec::with_capacity(count);
    let mut seen = BTreeSet::new();
    for (name, fan) in &base {
        if out.len() == count {
            break;
        }
        if seen.insert(fan.to_json_string()) {
            out.push(CorpusFan {
                name: format!("{:03}_{name}", out.len()),
                fan: fan.clone(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stale_draws = 0usize;
    while out.len() < count {
        let pick = rng.gen_range(0..base.len());
        let steps = rng.gen_range(1..=10usize);
        let (base_name, mut fan) = (base[pick].0.clone(), base[pick].1.clone());
        let mut applied = 0;
        for _ in 0..steps {
            let targets = eligible_targets(&fan);
            if targets.is_empty() {
                break;
            }
            let target = targets[rng.gen_range(0..targets.len())];
            fan = fan.star_subdivision(target)?;
            applied += 1;
        }
        debug_assert!(fan.validate().is_empty());
        let bytes = fan.to_json_string();
        let fresh = seen.insert(bytes);
        if fresh || stale_draws > 64 {
            out.push(CorpusFan {
                name: format!("{:03}_{base_name}_div{applied}", out.len()),
                fan,
            });
            stale_draws = 0;
        } else {
            stale_draws += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_one_corpus_is_the_projective_line() {
        let corpus = generate_corpus(1, 1, 1).unwrap();
        assert_eq!(corpus.len(), 1);
        assert_eq!(
            corpus[0].fan,
            Fan::builtin(&Builtin::Projective { k: 1 }).unwrap()
        );
    }

    #[test]
    fn corpora_are_deterministic() {
        let a = generate_corpus(7, 12, 2).unwrap();
        let b = generate_corpus(7, 12, 2).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.fan.to_json_string(), y.fan.to_json_string());
        }
        let other_seed = generate_corpus(8, 12, 2).unwrap();
        let bytes = |c: &[CorpusFan]| {
            c.iter().map(|f| f.fan.to_json_string()).collect::<Vec<_>>()
        };
        assert_ne!(bytes(&a), bytes(&other_seed));
    }

    #[test]
    fn corpus_fans_are_valid_and_distinct() {
        let corpus = generate_corpus(3, 10, 3).unwrap();
        assert_eq!(corpus.len(), 10);
        let mut seen = BTreeSet::new();
        for cf in &corpus {
            assert!(cf.fan.validate().is_empty(), "{} is invalid", cf.name);
            assert_eq!(cf.fan.dim(), 3);
            assert!(seen.insert(cf.fan.to_json_string()), "{} repeats", cf.name);
        }
    }
}
