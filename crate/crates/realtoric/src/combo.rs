//! Small subset-enumeration helpers shared by the complexes.

/// Binomial coefficient, exact in usize for the tiny arguments used here.
pub(crate) fn binomial(m: usize, q: usize) -> usize {
    if q > m {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..q {
        acc = acc * (m - i) / (i + 1);
    }
    acc
}

/// All q-element subsets of {0, .., m-1} as bitmasks, in colexicographic
/// order (= increasing numeric order of the masks).
pub(crate) fn subsets_colex(m: usize, q: usize) -> Vec<u64> {
    assert!(m < 64);
    (0u64..(1 << m))
        .filter(|mask| mask.count_ones() as usize == q)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order() {
        assert_eq!(subsets_colex(3, 2), vec![0b011, 0b101, 0b110]);
        assert_eq!(subsets_colex(3, 0), vec![0]);
        assert_eq!(subsets_colex(2, 3), Vec::<u64>::new());
        assert_eq!(subsets_colex(4, 2).len(), binomial(4, 2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
