//! Binary constraint problems whose pair constraints come from the family
//! `{ {(1,0),(0,1)}, {(0,0)}, {(1,1)} }`, their exact model counts, and the
//! reduction from link-extension counting to such a problem.
//!
//! Every pair of variables carries exactly one constraint. Under that
//! restriction a problem on `m` variables has at most `m + 1` satisfying
//! assignments; [`Csp::count_satisfying`] computes the exact number by
//! branching on the highest-index variable and propagating the values that
//! branch forces.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::freeness::{is_lk_free, ForbiddenList};
use crate::hypergraph::Hypergraph;
use crate::subset::{colex_rank, next_colex};
use crate::{Error, Result};

/// Guard for [`Csp::enumerate_satisfying`].
pub const ENUMERATE_MAX_M: usize = 25;
/// Guard for [`Csp::count_exhaustive`].
pub const EXHAUSTIVE_MAX_M: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Constraint {
    /// Forbids `(1,0)` and `(0,1)`: the two values must agree.
    ForbidMixed,
    /// Forbids `(0,0)`.
    ForbidBothZero,
    /// Forbids `(1,1)`.
    ForbidBothOne,
}

impl Constraint {
    pub const ALL: [Constraint; 3] = [
        Constraint::ForbidMixed,
        Constraint::ForbidBothZero,
        Constraint::ForbidBothOne,
    ];

    #[inline]
    pub fn forbids(self, a: bool, b: bool) -> bool {
        match self {
            Constraint::ForbidMixed => a != b,
            Constraint::ForbidBothZero => !a && !b,
            Constraint::ForbidBothOne => a && b,
        }
    }

    /// Values the partner may take when this side holds `value`, as a
    /// 2-bit domain (bit 0 = false allowed, bit 1 = true allowed).
    #[inline]
    fn partner_domain(self, value: bool) -> u8 {
        match (self, value) {
            (Constraint::ForbidMixed, false) => 0b01,
            (Constraint::ForbidMixed, true) => 0b10,
            (Constraint::ForbidBothZero, false) => 0b10,
            (Constraint::ForbidBothOne, true) => 0b01,
            _ => 0b11,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Constraint::ForbidMixed => "MIXED",
            Constraint::ForbidBothZero => "ZERO",
            Constraint::ForbidBothOne => "ONE",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Constraint> {
        Constraint::ALL.into_iter().find(|c| c.keyword() == word)
    }
}

/// A 0/1 value per variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl From<&str> for Assignment {
    /// `"010"` style literals; any character other than `1` reads as 0.
    fn from(s: &str) -> Self {
        Assignment(s.chars().map(|c| c == '1').collect())
    }
}

#[inline]
fn pair_index(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    hi * (hi - 1) / 2 + lo
}

/// A total constraint function on the pairs of `{0,..,m-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Csp {
    m: usize,
    constraints: Vec<Constraint>,
}

impl Csp {
    /// Builds the problem from `f(a, b)` called once per pair `a < b`.
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> Constraint) -> Result<Self> {
        if m == 0 {
            return Err(Error::params("a CSP needs at least one variable"));
        }
        let mut constraints = Vec::with_capacity(m * (m - 1) / 2);
        for b in 1..m {
            for a in 0..b {
                constraints.push(f(a, b));
            }
        }
        Ok(Csp { m, constraints })
    }

    /// All pairs `ForbidBothOne`: satisfied exactly by the assignments with
    /// at most one 1, so the count is `m + 1`.
    pub fn extremal(m: usize) -> Result<Self> {
        Self::from_fn(m, |_, _| Constraint::ForbidBothOne)
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Self> {
        Self::from_fn(m, |_, _| Constraint::ALL[rng.gen_range(0..3)])
    }

    /// The `index`-th of the `3^C(m,2)` constraint functions (base-3 digits
    /// over the pairs in colex order).
    pub fn nth(m: usize, index: u64) -> Result<Self> {
        let mut rest = index;
        Self::from_fn(m, |_, _| {
            let c = Constraint::ALL[(rest % 3) as usize];
            rest /= 3;
            c
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Constraint on the pair `{a, b}`.
    ///
    /// # Panics
    /// Panics if `a == b` or either is out of range.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Constraint {
        assert!(a != b && a < self.m && b < self.m, "bad pair ({a},{b})");
        self.constraints[pair_index(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: Constraint) {
        assert!(a != b && a < self.m && b < self.m, "bad pair ({a},{b})");
        self.constraints[pair_index(a, b)] = c;
    }

    /// The problem induced on `vars`, relabeled to `0..vars.len()` in the
    /// given order.
    pub fn induced(&self, vars: &[usize]) -> Result<Csp> {
        Csp::from_fn(vars.len(), |a, b| self.get(vars[a], vars[b]))
    }

    /// `(F_0, F_1)` for branching on the last variable: the variables left
    /// undetermined when it is 0 (pairs forbidding `(1,1)`) and when it is 1
    /// (pairs forbidding `(0,0)`).
    pub fn free_sets(&self) -> (Vec<usize>, Vec<usize>) {
        let last = self.m - 1;
        let pick = |kind| (0..last).filter(|&j| self.get(j, last) == kind).collect();
        (
            pick(Constraint::ForbidBothOne),
            pick(Constraint::ForbidBothZero),
        )
    }

    pub fn is_satisfying(&self, g: &Assignment) -> Result<bool> {
        if g.len() != self.m {
            return Err(Error::params(format!(
                "assignment has length {}, CSP has {} variables",
                g.len(),
                self.m
            )));
        }
        for b in 1..self.m {
            for a in 0..b {
                if self.get(a, b).forbids(g.0[a], g.0[b]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Exact number of satisfying assignments by branch and propagate.
    pub fn count_satisfying(&self) -> u64 {
        let mut domains = vec![0b11u8; self.m];
        self.count_branch(&mut domains)
    }

    fn count_branch(&self, domains: &mut [u8]) -> u64 {
        let Some(v) = (0..self.m).rev().find(|&j| domains[j] == 0b11) else {
            return 1;
        };
        let mut total = 0;
        for value in [false, true] {
            let mut local = domains.to_vec();
            local[v] = if value { 0b10 } else { 0b01 };
            if self.propagate(&mut local, v) {
                total += self.count_branch(&mut local);
            }
        }
        total
    }

    /// Fixes everything `start` forces. Returns `false` on a conflict.
    fn propagate(&self, domains: &mut [u8], start: usize) -> bool {
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            let value = domains[u] == 0b10;
            for (j, d) in domains.iter_mut().enumerate() {
                if j == u {
                    continue;
                }
                let after = *d & self.get(u, j).partner_domain(value);
                if after == 0 {
                    return false;
                }
                if after != *d {
                    *d = after;
                    queue.push(j);
                }
            }
        }
        true
    }

    /// Exact count by checking all `2^m` assignments.
    pub fn count_exhaustive(&self) -> Result<u64> {
        if self.m > EXHAUSTIVE_MAX_M {
            return Err(Error::params(format!(
                "exhaustive count limited to m <= {EXHAUSTIVE_MAX_M}"
            )));
        }
        // per variable a: masks of partners b > a by constraint kind
        let mut mixed = vec![0u64; self.m];
        let mut zero = vec![0u64; self.m];
        let mut one = vec![0u64; self.m];
        for b in 1..self.m {
            for a in 0..b {
                let slot = match self.get(a, b) {
                    Constraint::ForbidMixed => &mut mixed,
                    Constraint::ForbidBothZero => &mut zero,
                    Constraint::ForbidBothOne => &mut one,
                };
                slot[a] |= 1 << b;
            }
        }
        let full = (1u64 << self.m) - 1;
        let mut count = 0;
        'outer: for x in 0..=full {
            let not_x = !x & full;
            for a in 0..self.m {
                let bad = if x >> a & 1 == 1 {
                    x & one[a] != 0 || not_x & mixed[a] != 0
                } else {
                    not_x & zero[a] != 0 || x & mixed[a] != 0
                };
                if bad {
                    continue 'outer;
                }
            }
            count += 1;
        }
        Ok(count)
    }

    /// All satisfying assignments in lexicographic order (variable 0 most
    /// significant).
    pub fn enumerate_satisfying(&self) -> Result<Vec<Assignment>> {
        if self.m > ENUMERATE_MAX_M {
            return Err(Error::params(format!(
                "enumeration limited to m <= {ENUMERATE_MAX_M}"
            )));
        }
        let mut out = Vec::new();
        let mut values = Vec::with_capacity(self.m);
        self.extend_lex(&mut values, &mut out);
        Ok(out)
    }

    fn extend_lex(&self, values: &mut Vec<bool>, out: &mut Vec<Assignment>) {
        let v = values.len();
        if v == self.m {
            out.push(Assignment(values.clone()));
            return;
        }
        for value in [false, true] {
            if (0..v).all(|a| !self.get(a, v).forbids(values[a], value)) {
                values.push(value);
                self.extend_lex(values, out);
                values.pop();
            }
        }
    }

    /// Text format: `m`, then `a b KIND` for every pair (1-based).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.m);
        for b in 1..self.m {
            for a in 0..b {
                out.push_str(&format!(
                    "{} {} {}\n",
                    a + 1,
                    b + 1,
                    self.get(a, b).keyword()
                ));
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Csp> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let m: usize = header
            .parse()
            .map_err(|_| Error::parse(line_no, "header must be the variable count"))?;
        if m == 0 {
            return Err(Error::parse(line_no, "a CSP needs at least one variable"));
        }
        let mut slots: Vec<Option<Constraint>> = vec![None; m * (m - 1) / 2];
        for (line_no, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [a, b, kind] = toks[..] else {
                return Err(Error::parse(line_no, "expected `a b KIND`"));
            };
            let var = |tok: &str| -> Result<usize> {
                match tok.parse::<usize>() {
                    Ok(v) if (1..=m).contains(&v) => Ok(v - 1),
                    _ => Err(Error::parse(line_no, format!("bad variable {tok:?}"))),
                }
            };
            let (a, b) = (var(a)?, var(b)?);
            if a == b {
                return Err(Error::parse(line_no, "pair needs two distinct variables"));
            }
            let c = Constraint::from_keyword(kind)
                .ok_or_else(|| Error::parse(line_no, format!("unknown constraint {kind:?}")))?;
            let slot = &mut slots[pair_index(a, b)];
            if slot.is_some() {
                return Err(Error::parse(line_no, "pair given twice"));
            }
            *slot = Some(c);
        }
        if slots.iter().any(Option::is_none) {
            let have = slots.iter().filter(|s| s.is_some()).count();
            return Err(Error::parse(
                text.lines().count(),
                format!("all {} pairs are required, found {have}", slots.len()),
            ));
        }
        let constraints = slots.into_iter().map(Option::unwrap).collect();
        Ok(Csp { m, constraints })
    }
}

impl fmt::Debug for Csp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Csp")
            .field("m", &self.m)
            .field("constraints", &self.constraints)
            .finish()
    }
}

/// The problem derived for one partial colouring `c` of
/// `S = {r-1,..,k-3}`: variables are the vertices `k-2..n-1`, value 1
/// meaning `{0,..,r-2} ∪ {v}` is an edge.
#[derive(Debug, Clone)]
pub struct ExtensionCsp {
    pub csp: Csp,
    /// Vertex behind each variable.
    pub vertices: Vec<usize>,
    /// Per pair (in [`Csp`] pair order), every `t ∈ {0,1,2}` whose sum
    /// `‖R‖ + t` is forbidden. The CSP keeps only the smallest.
    pub forbidden_sums: Vec<Vec<u8>>,
}

impl ExtensionCsp {
    /// Counts assignments avoiding every forbidden sum on every pair. Never
    /// larger than `csp.count_satisfying()`.
    pub fn count_strict(&self) -> Result<u64> {
        let m = self.csp.m();
        if m > EXHAUSTIVE_MAX_M {
            return Err(Error::params("strict count limited to small m"));
        }
        let mut count = 0;
        for x in 0u64..1 << m {
            let ok = (1..m).all(|b| {
                (0..b).all(|a| {
                    let sum = (x >> a & 1) + (x >> b & 1);
                    !self.forbidden_sums[pair_index(a, b)].contains(&(sum as u8))
                })
            });
            if ok {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// Reduces counting the extensions of `h` along the base edge set
/// `A = {0,..,r-2}` (with the link positions in `S = {r-1,..,k-3}` fixed to
/// `coloring`) to a CSP on the vertices `k-2..n-1`.
///
/// For a pair `{i, j}` the `k`-set `{0,..,k-3} ∪ {i, j}` holds `‖R‖` fixed
/// edges plus `C(i) + C(j)` variable ones; a `t` with `‖R‖ + t ∈ L` gives
/// the constraint `C(i) + C(j) ≠ t`.
pub fn derive_extension_csp(
    h: &Hypergraph,
    list: &ForbiddenList,
    coloring: &[bool],
) -> Result<ExtensionCsp> {
    let (n, r, k) = (h.n(), h.r(), list.k());
    if list.r() != r {
        return Err(Error::params("list and hypergraph disagree on r"));
    }
    if n <= k {
        return Err(Error::params(format!("need n > k (got n={n}, k={k})")));
    }
    let s_len = k - 2 - (r - 1);
    if coloring.len() != s_len {
        return Err(Error::params(format!(
            "colouring covers {} vertices, S has {s_len}",
            coloring.len()
        )));
    }
    if let Some(w) = is_lk_free(h, list)?.witness {
        return Err(Error::Precondition(format!(
            "anchor is not free: {:?} induces {}",
            w.set, w.count
        )));
    }

    // positions of the link edges A ∪ {s}
    let base: Vec<usize> = (0..r - 1).collect();
    let link_rank = |v: usize| {
        let mut e = base.clone();
        e.push(v);
        colex_rank(&e)
    };
    // h with the positions in S overwritten by the colouring
    let mut fixed = h.clone();
    for (offset, &bit) in coloring.iter().enumerate() {
        fixed.set_rank(link_rank(r - 1 + offset), bit);
    }

    let vertices: Vec<usize> = (k - 2..n).collect();
    let m = vertices.len();
    let mut forbidden_sums = Vec::with_capacity(m * (m - 1) / 2);
    let mut scratch_idx: Vec<usize> = Vec::new();
    let mut picked = vec![0usize; r];
    let mut violation = None;
    let csp = Csp::from_fn(m, |a, b| {
        let (i, j) = (vertices[a], vertices[b]);
        let mut set: Vec<usize> = (0..k - 2).collect();
        set.push(i);
        set.push(j);
        let skip = [link_rank(i), link_rank(j)];
        scratch_idx.clear();
        scratch_idx.extend(0..r);
        let mut fixed_edges = 0usize;
        loop {
            for (slot, &p) in picked.iter_mut().zip(scratch_idx.iter()) {
                *slot = set[p];
            }
            let rank = colex_rank(&picked);
            if !skip.contains(&rank) && fixed.contains_rank(rank) {
                fixed_edges += 1;
            }
            if !next_colex(&mut scratch_idx, k) {
                break;
            }
        }
        let sums: Vec<u8> = (0u8..=2)
            .filter(|&t| list.contains(fixed_edges + t as usize))
            .collect();
        let constraint = match sums.first() {
            Some(0) => Constraint::ForbidBothZero,
            Some(1) => Constraint::ForbidMixed,
            Some(_) => Constraint::ForbidBothOne,
            None => {
                violation.get_or_insert((i, j, fixed_edges));
                Constraint::ForbidMixed
            }
        };
        forbidden_sums.push(sums);
        constraint
    })?;
    if let Some((i, j, fixed_edges)) = violation {
        return Err(Error::Precondition(format!(
            "no t in {{0,1,2}} with {fixed_edges}+t in the list for pair ({i},{j}); the list is not 3-good"
        )));
    }
    Ok(ExtensionCsp {
        csp,
        vertices,
        forbidden_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn satisfaction_examples() {
        let one = Csp::extremal(2).unwrap();
        assert!(!one.is_satisfying(&"11".into()).unwrap());
        assert!(one.is_satisfying(&"01".into()).unwrap());
        let mixed = Csp::from_fn(3, |_, _| Constraint::ForbidMixed).unwrap();
        assert!(mixed.is_satisfying(&"000".into()).unwrap());
        assert!(mixed.is_satisfying(&"00".into()).is_err());
    }

    #[test]
    fn count_examples() {
        let single = Csp::from_fn(1, |_, _| unreachable!()).unwrap();
        assert_eq!(single.count_satisfying(), 2);
        assert_eq!(Csp::extremal(3).unwrap().count_satisfying(), 4);
        assert!(Csp::from_fn(0, |_, _| Constraint::ForbidMixed).is_err());
    }

    #[test]
    fn random_m10_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let csp = Csp::random(10, &mut rng).unwrap();
            let count = csp.count_satisfying();
            assert!(count <= 11);
            assert_eq!(count, csp.count_exhaustive().unwrap());
        }
    }

    #[test]
    fn enumerate_examples() {
        let single = Csp::from_fn(1, |_, _| unreachable!()).unwrap();
        assert_eq!(
            single.enumerate_satisfying().unwrap(),
            vec!["0".into(), "1".into()]
        );
        let mixed = Csp::from_fn(2, |_, _| Constraint::ForbidMixed).unwrap();
        assert_eq!(
            mixed.enumerate_satisfying().unwrap(),
            vec!["00".into(), "11".into()]
        );
        let ext = Csp::extremal(3).unwrap();
        let expected: Vec<Assignment> = ["000", "001", "010", "100"].map(Assignment::from).into();
        assert_eq!(ext.enumerate_satisfying().unwrap(), expected);
        assert!(Csp::extremal(26).unwrap().enumerate_satisfying().is_err());
    }

    #[test]
    fn extremal_counts() {
        assert_eq!(Csp::extremal(4).unwrap().count_satisfying(), 5);
        assert_eq!(Csp::extremal(1).unwrap().count_satisfying(), 2);
        assert_eq!(Csp::extremal(20).unwrap().count_satisfying(), 21);
    }

    #[test]
    fn text_format() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let csp = Csp::random(5, &mut rng).unwrap();
        assert_eq!(Csp::parse_text(&csp.to_text()).unwrap(), csp);
        assert!(Csp::parse_text("2\n").is_err());
        assert!(Csp::parse_text("2\n1 2 ONE\n1 2 ONE\n").is_err());
        assert!(Csp::parse_text("2\n1 3 ONE\n").is_err());
        assert!(Csp::parse_text("2\n1 2 BOTH\n").is_err());
        assert!(Csp::parse_text("0\n").is_err());
        assert_eq!(
            Csp::parse_text("2\n2 1 MIXED\n").unwrap().get(0, 1),
            Constraint::ForbidMixed
        );
    }

    #[test]
    fn extension_csp_on_empty_anchor() {
        let h = Hypergraph::empty(5, 3).unwrap();
        let list = ForbiddenList::new(4, 3, [1, 4]).unwrap();
        let ext = derive_extension_csp(&h, &list, &[]).unwrap();
        assert_eq!(ext.vertices, vec![2, 3, 4]);
        for b in 1..3 {
            for a in 0..b {
                assert_eq!(ext.csp.get(a, b), Constraint::ForbidMixed);
            }
        }
        // the all-equal assignments survive
        assert_eq!(ext.csp.count_satisfying(), 2);
    }

    #[test]
    fn extension_csp_rejects_bad_input() {
        let list = ForbiddenList::new(4, 3, [1, 4]).unwrap();
        let small = Hypergraph::empty(4, 3).unwrap();
        assert!(derive_extension_csp(&small, &list, &[]).is_err());
        let not_free = Hypergraph::from_edges(5, 3, [[0, 1, 2]]).unwrap();
        assert!(matches!(
            derive_extension_csp(&not_free, &list, &[]),
            Err(Error::Precondition(_))
        ));
        // {3,4} misses the window {0,1,2}
        let bad = ForbiddenList::new(4, 3, [3, 4]).unwrap();
        let h = Hypergraph::empty(5, 3).unwrap();
        assert!(matches!(
            derive_extension_csp(&h, &bad, &[]),
            Err(Error::Precondition(_))
        ));
    }
}
