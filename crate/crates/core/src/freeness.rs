//! Forbidden edge-count lists and the `(L,k)`-freeness predicate.

use std::fmt;

use serde::Serialize;

use crate::hypergraph::Hypergraph;
use crate::subset::{binomial, next_colex};
use crate::{Error, Result};

/// Lists are kept as a dense membership table, so `C(k, r)` is capped.
pub const MAX_LIST_RANGE: u64 = 1 << 20;

/// A list `L ⊆ {0,..,C(k,r)}` of edge counts that no `k`-set may induce.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ForbiddenList {
    k: usize,
    r: usize,
    members: Vec<bool>,
}

impl ForbiddenList {
    pub fn new(k: usize, r: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if r == 0 || k <= r {
            return Err(Error::params(format!(
                "list needs k > r >= 1 (got k={k}, r={r})"
            )));
        }
        let top = binomial(k, r);
        if top >= MAX_LIST_RANGE {
            return Err(Error::params(format!(
                "C({k},{r}) = {top} is too large for a list"
            )));
        }
        let mut table = vec![false; top as usize + 1];
        for i in members {
            if i as u64 > top {
                return Err(Error::params(format!(
                    "list member {i} exceeds C({k},{r}) = {top}"
                )));
            }
            table[i] = true;
        }
        Ok(ForbiddenList {
            k,
            r,
            members: table,
        })
    }

    pub fn empty(k: usize, r: usize) -> Result<Self> {
        Self::new(k, r, [])
    }

    /// Parses a comma-separated literal such as `"1,4"`. The empty string
    /// (and `"{}"`) is the empty list; surrounding braces are allowed.
    pub fn parse(k: usize, r: usize, literal: &str) -> Result<Self> {
        let body = literal
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .trim();
        let mut members = Vec::new();
        if !body.is_empty() {
            for tok in body.split(',') {
                let tok = tok.trim();
                let value = tok
                    .parse::<usize>()
                    .map_err(|_| Error::params(format!("bad list member {tok:?}")))?;
                members.push(value);
            }
        }
        Self::new(k, r, members)
    }

    /// Every list over `{0,..,C(k,r)}`, ordered by membership bitmask.
    pub fn all(k: usize, r: usize) -> Result<Vec<ForbiddenList>> {
        let top = binomial(k, r) as usize;
        if top >= 20 {
            return Err(Error::params("too many lists to enumerate"));
        }
        (0u32..1 << (top + 1))
            .map(|mask| Self::new(k, r, (0..=top).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `C(k, r)`, the largest count a `k`-set can induce.
    pub fn max_count(&self) -> usize {
        self.members.len() - 1
    }

    #[inline]
    pub fn contains(&self, count: usize) -> bool {
        self.members.get(count).copied().unwrap_or(false)
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&i| self.members[i])
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    /// Membership as a bitmask when `C(k, r) < 128`.
    pub fn mask(&self) -> Option<u128> {
        (self.members.len() <= 128).then(|| {
            self.members
                .iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .fold(0u128, |acc, (i, _)| acc | 1 << i)
        })
    }

    /// `{C(k,r) - i : i ∈ L}`: the list a complemented hypergraph avoids.
    pub fn complement(&self) -> ForbiddenList {
        let mut members = self.members.clone();
        members.reverse();
        ForbiddenList {
            k: self.k,
            r: self.r,
            members,
        }
    }

    /// Every window `{i, i+1, i+2}` inside `{0,..,C(k,r)}` meets the list.
    pub fn is_3_good(&self) -> bool {
        self.members.windows(3).all(|w| w.iter().any(|&m| m))
    }

    pub fn is_subset_of(&self, other: &ForbiddenList) -> bool {
        self.k == other.k
            && self.r == other.r
            && self
                .members
                .iter()
                .zip(&other.members)
                .all(|(&a, &b)| !a || b)
    }
}

impl fmt::Display for ForbiddenList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for ForbiddenList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ForbiddenList(k={}, r={}, {})", self.k, self.r, self)
    }
}

impl Serialize for ForbiddenList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.members())
    }
}

/// A `k`-set and the forbidden number of edges it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub set: Vec<usize>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub free: bool,
    pub witness: Option<Witness>,
}

impl FreenessReport {
    fn from_witness(witness: Option<Witness>) -> Self {
        FreenessReport {
            free: witness.is_none(),
            witness,
        }
    }
}

fn check_compatible(g: &Hypergraph, list: &ForbiddenList) -> Result<()> {
    if list.r() != g.r() {
        return Err(Error::params(format!(
            "list is for r={} but hypergraph has r={}",
            list.r(),
            g.r()
        )));
    }
    if list.k() > g.n() {
        return Err(Error::params(format!(
            "k={} exceeds the vertex count n={}",
            list.k(),
            g.n()
        )));
    }
    Ok(())
}

/// Scans `k`-sets in colex order and stops at the first one inducing a
/// forbidden count.
pub fn is_lk_free(g: &Hypergraph, list: &ForbiddenList) -> Result<FreenessReport> {
    first_violation_containing(g, list, &[]).map(FreenessReport::from_witness)
}

/// Colex-first violating `k`-set among those containing every vertex of
/// `required`. With `required = [v]` this rechecks only what adding `v` can
/// break.
pub fn first_violation_containing(
    g: &Hypergraph,
    list: &ForbiddenList,
    required: &[usize],
) -> Result<Option<Witness>> {
    check_compatible(g, list)?;
    let mut required = required.to_vec();
    required.sort_unstable();
    required.dedup();
    if required.last().is_some_and(|&v| v >= g.n()) {
        return Err(Error::params("required vertex out of range"));
    }
    let k = list.k();
    if required.len() > k {
        return Ok(None);
    }
    let others: Vec<usize> = (0..g.n())
        .filter(|v| required.binary_search(v).is_err())
        .collect();
    let pick = k - required.len();
    if pick > others.len() {
        return Ok(None);
    }
    let mut idx: Vec<usize> = (0..pick).collect();
    let mut set = Vec::with_capacity(k);
    let mut scratch = Vec::new();
    loop {
        set.clear();
        set.extend(idx.iter().map(|&i| others[i]));
        set.extend_from_slice(&required);
        set.sort_unstable();
        let count = g.count_within(&set, &mut scratch);
        if list.contains(count) {
            return Ok(Some(Witness {
                set: set.clone(),
                count,
            }));
        }
        if !next_colex(&mut idx, others.len()) {
            return Ok(None);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::turan_cn;

    fn list(members: &[usize]) -> ForbiddenList {
        ForbiddenList::new(4, 3, members.iter().copied()).unwrap()
    }

    #[test]
    fn freeness_examples() {
        let e = Hypergraph::empty(5, 3).unwrap();
        assert!(is_lk_free(&e, &list(&[1, 4])).unwrap().free);

        let k4 = Hypergraph::complete(4, 3).unwrap();
        let report = is_lk_free(&k4, &list(&[4])).unwrap();
        assert!(!report.free);
        assert_eq!(
            report.witness,
            Some(Witness {
                set: vec![0, 1, 2, 3],
                count: 4
            })
        );

        assert!(
            is_lk_free(&turan_cn(9).unwrap(), &list(&[1, 4]))
                .unwrap()
                .free
        );
    }

    #[test]
    fn witness_is_colex_first() {
        // edges {0,1,2} and {2,3,4}: 4-sets {0,1,2,3} (colex rank 0) and
        // {0,1,2,4} induce one edge each; the first in colex order wins.
        let g = Hypergraph::from_edges(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let report = is_lk_free(&g, &list(&[1])).unwrap();
        assert_eq!(report.witness.unwrap().set, vec![0, 1, 2, 3]);
    }

    #[test]
    fn parameter_errors() {
        let g = Hypergraph::empty(3, 3).unwrap();
        assert!(is_lk_free(&g, &list(&[1])).is_err());
        let g2 = Hypergraph::empty(5, 2).unwrap();
        assert!(is_lk_free(&g2, &list(&[1])).is_err());
        assert!(ForbiddenList::new(4, 3, [5]).is_err());
        assert!(ForbiddenList::new(3, 3, [0]).is_err());
        assert!(ForbiddenList::parse(4, 3, "1,x").is_err());
    }

    #[test]
    fn complement_list_examples() {
        assert_eq!(list(&[1, 4]).complement(), list(&[0, 3]));
        assert_eq!(list(&[2]).complement(), list(&[2]));
        for l in ForbiddenList::all(4, 3).unwrap() {
            assert_eq!(l.complement().complement(), l);
        }
        let big = ForbiddenList::new(5, 2, [0, 7]).unwrap();
        assert_eq!(big.complement().members(), vec![3, 10]);
    }

    #[test]
    fn three_good_examples() {
        assert!(list(&[2]).is_3_good());
        assert!(!list(&[3, 4]).is_3_good());
        for r in 2..=6 {
            let l = ForbiddenList::new(r + 1, r, 2..=r + 1).unwrap();
            assert!(l.is_3_good(), "r={r}");
        }
        assert!(!list(&[]).is_3_good());
    }

    #[test]
    fn parse_literals() {
        assert_eq!(ForbiddenList::parse(4, 3, "1,4").unwrap(), list(&[1, 4]));
        assert_eq!(ForbiddenList::parse(4, 3, "").unwrap(), list(&[]));
        assert_eq!(
            ForbiddenList::parse(4, 3, "{0, 2,3}").unwrap(),
            list(&[0, 2, 3])
        );
        assert_eq!(list(&[0, 2, 3]).to_string(), "{0,2,3}");
        assert_eq!(ForbiddenList::all(4, 3).unwrap().len(), 32);
    }
}
