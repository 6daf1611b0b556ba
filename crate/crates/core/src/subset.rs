//! Colex ranking of `r`-subsets of `[n]`.
//!
//! Subsets are ordered by their largest differing element. With that order
//! every `r`-subset of `{0,..,v-1}` ranks below every `r`-subset that uses
//! vertex `v`, so growing the vertex set only appends indices.

use std::sync::OnceLock;

use serde::Serialize;

use crate::{Error, Result};

const TABLE_SIZE: usize = 130;

fn pascal() -> &'static Vec<[u64; TABLE_SIZE]> {
    static TABLE: OnceLock<Vec<[u64; TABLE_SIZE]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows = vec![[0u64; TABLE_SIZE]; TABLE_SIZE];
        for n in 0..TABLE_SIZE {
            rows[n][0] = 1;
            for k in 1..=n {
                rows[n][k] = rows[n - 1][k - 1].saturating_add(rows[n - 1][k]);
            }
        }
        rows
    })
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    if n < TABLE_SIZE {
        return pascal()[n][k];
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank of an `r`-subset together with its `(n, r)` context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubsetRank {
    pub rank: u64,
    pub n: usize,
    pub r: usize,
}

/// Rank of a strictly increasing, 0-based subset. No validation.
#[inline]
pub fn colex_rank(subset: &[usize]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1))
        .sum()
}

pub fn rank_subset(subset: &[usize], n: usize, r: usize) -> Result<SubsetRank> {
    let invalid = |reason| Error::InvalidSubset {
        subset: subset.to_vec(),
        n,
        r,
        reason,
    };
    if subset.len() != r {
        return Err(invalid("wrong size"));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("not strictly increasing"));
    }
    if subset.last().is_some_and(|&v| v >= n) {
        return Err(invalid("vertex out of range"));
    }
    Ok(SubsetRank {
        rank: colex_rank(subset),
        n,
        r,
    })
}

/// Inverse of [`rank_subset`]: the strictly increasing 0-based subset with
/// the given colex rank.
pub fn unrank_subset(rank: u64, n: usize, r: usize) -> Result<Vec<usize>> {
    let limit = binomial(n, r);
    if rank >= limit {
        return Err(Error::RankOutOfRange { rank, n, r, limit });
    }
    let mut out = vec![0; r];
    let mut rest = rank;
    let mut hi = n;
    for i in (1..=r).rev() {
        // largest c < hi with C(c, i) <= rest
        let mut c = hi - 1;
        while binomial(c, i) > rest {
            c -= 1;
        }
        out[i - 1] = c;
        rest -= binomial(c, i);
        hi = c;
    }
    Ok(out)
}

/// Advance `subset` (strictly increasing, values below `n`) to its colex
/// successor in place. Returns `false` when `subset` was the last one.
#[inline]
pub fn next_colex(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in 0..k {
        let bound = if i + 1 < k { subset[i + 1] } else { n };
        if subset[i] + 1 < bound {
            subset[i] += 1;
            for (j, slot) in subset.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// All `k`-subsets of `{0,..,n-1}` in colex order.
#[derive(Debug, Clone)]
pub struct ColexSubsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        ColexSubsets { n, current }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        if !next_colex(cur, self.n) {
            self.current = None;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_extremes() {
        assert_eq!(rank_subset(&[0, 1, 2], 5, 3).unwrap().rank, 0);
        assert_eq!(rank_subset(&[0, 1, 3], 5, 3).unwrap().rank, 1);
        assert_eq!(rank_subset(&[2, 3, 4], 5, 3).unwrap().rank, 9);
        assert_eq!(unrank_subset(0, 5, 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(unrank_subset(9, 5, 3).unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn malformed_subsets_rejected() {
        assert!(rank_subset(&[0, 1], 5, 3).is_err());
        assert!(rank_subset(&[0, 1, 1], 5, 3).is_err());
        assert!(rank_subset(&[2, 1, 3], 5, 3).is_err());
        assert!(rank_subset(&[0, 1, 5], 5, 3).is_err());
        assert!(matches!(
            unrank_subset(10, 5, 3),
            Err(Error::RankOutOfRange { limit: 10, .. })
        ));
    }

    #[test]
    fn round_trip_exhaustive() {
        for n in 1..=8 {
            for r in 1..=n {
                let mut seen = 0u64;
                for (idx, s) in ColexSubsets::new(n, r).enumerate() {
                    let rank = rank_subset(&s, n, r).unwrap().rank;
                    assert_eq!(rank, idx as u64);
                    assert_eq!(unrank_subset(rank, n, r).unwrap(), s);
                    seen += 1;
                }
                assert_eq!(seen, binomial(n, r));
            }
        }
    }

    #[test]
    fn binomial_large_arguments() {
        assert_eq!(binomial(200, 3), 1_313_400);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(300, 150), u64::MAX);
        assert_eq!(binomial(3, 5), 0);
    }
}
