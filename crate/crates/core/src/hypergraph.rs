//! `r`-uniform hypergraphs on `{0,..,n-1}` stored as a bitset over the colex
//! ranks of the `r`-subsets.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::subset::{binomial, colex_rank, next_colex, rank_subset, unrank_subset};
use crate::{Error, Result};

/// Largest number of edge slots `C(n, r)` a hypergraph may have.
pub const MAX_SLOTS: u64 = 1 << 32;

/// Largest vertex count accepted by [`Hypergraph::canonical_form`].
pub const CANONICAL_MAX_N: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    slots: u64,
    words: Vec<u64>,
}

/// The link of a vertex: the `(r-1)`-graph on the remaining `n-1` vertices,
/// relabeled order-preservingly, with an edge `e \ {v}` for each edge `e`
/// through `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkGraph {
    pub vertex: usize,
    pub graph: Hypergraph,
}

impl Hypergraph {
    pub fn empty(n: usize, r: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::params("hypergraph needs at least one vertex"));
        }
        if r == 0 || r > n {
            return Err(Error::params(format!(
                "uniformity must satisfy 1 <= r <= n (got n={n}, r={r})"
            )));
        }
        let slots = binomial(n, r);
        if slots > MAX_SLOTS {
            return Err(Error::params(format!(
                "C({n},{r}) = {slots} edge slots exceeds the 2^32 limit"
            )));
        }
        Ok(Hypergraph {
            n,
            r,
            slots,
            words: vec![0; slots.div_ceil(64) as usize],
        })
    }

    pub fn complete(n: usize, r: usize) -> Result<Self> {
        Ok(Self::empty(n, r)?.complement())
    }

    /// Builds a hypergraph from 0-based edges. Each edge must be strictly
    /// increasing; repeated edges are rejected.
    pub fn from_edges<I, E>(n: usize, r: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut g = Self::empty(n, r)?;
        for e in edges {
            let rank = rank_subset(e.as_ref(), n, r)?.rank;
            if g.contains_rank(rank) {
                return Err(Error::InvalidParameters(format!(
                    "duplicate edge {:?}",
                    e.as_ref()
                )));
            }
            g.set_rank(rank, true);
        }
        Ok(g)
    }

    /// Hypergraph whose edge set is the bitmask `bits` (bit `i` = colex rank
    /// `i`). Requires `C(n, r) <= 64`.
    pub fn from_bits(n: usize, r: usize, bits: u64) -> Result<Self> {
        let mut g = Self::empty(n, r)?;
        if g.slots > 64 {
            return Err(Error::params(format!(
                "C({n},{r}) = {} does not fit a 64-bit mask",
                g.slots
            )));
        }
        if g.slots < 64 && bits >> g.slots != 0 {
            return Err(Error::params("mask has bits beyond C(n,r)"));
        }
        if let Some(w) = g.words.first_mut() {
            *w = bits;
        }
        Ok(g)
    }

    /// The edge mask when `C(n, r) <= 64`.
    pub fn to_bits(&self) -> Option<u64> {
        (self.slots <= 64).then(|| self.words.first().copied().unwrap_or(0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `C(n, r)`, the number of possible edges.
    pub fn slots(&self) -> u64 {
        self.slots
    }

    #[inline]
    pub fn contains_rank(&self, rank: u64) -> bool {
        rank < self.slots && self.words[(rank / 64) as usize] >> (rank % 64) & 1 == 1
    }

    /// Sets or clears the edge with colex rank `rank`.
    ///
    /// # Panics
    /// Panics if `rank >= C(n, r)`.
    #[inline]
    pub fn set_rank(&mut self, rank: u64, present: bool) {
        assert!(rank < self.slots, "rank {rank} out of range");
        let word = &mut self.words[(rank / 64) as usize];
        if present {
            *word |= 1 << (rank % 64);
        } else {
            *word &= !(1 << (rank % 64));
        }
    }

    /// Whether `edge` (0-based, any order) is an edge. Malformed input is
    /// simply not an edge.
    pub fn contains(&self, edge: &[usize]) -> bool {
        if edge.windows(2).all(|w| w[0] < w[1]) {
            return rank_subset(edge, self.n, self.r).is_ok_and(|s| self.contains_rank(s.rank));
        }
        let mut sorted = edge.to_vec();
        sorted.sort_unstable();
        rank_subset(&sorted, self.n, self.r).is_ok_and(|s| self.contains_rank(s.rank))
    }

    /// Adds an edge; returns whether it was new.
    pub fn insert(&mut self, edge: &[usize]) -> Result<bool> {
        let rank = rank_subset(edge, self.n, self.r)?.rank;
        let fresh = !self.contains_rank(rank);
        self.set_rank(rank, true);
        Ok(fresh)
    }

    /// Removes an edge; returns whether it was present.
    pub fn remove(&mut self, edge: &[usize]) -> Result<bool> {
        let rank = rank_subset(edge, self.n, self.r)?.rank;
        let present = self.contains_rank(rank);
        self.set_rank(rank, false);
        Ok(present)
    }

    pub fn edge_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Colex ranks of the edges, ascending.
    pub fn edge_ranks(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(i as u64 * 64 + bit)
            })
        })
    }

    /// Edges as 0-based vertex lists in colex order.
    pub fn edges(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.edge_ranks()
            .map(|rank| unrank_subset(rank, self.n, self.r).expect("rank below slot count"))
    }

    /// Edges of `self` inside `set` (strictly increasing, unchecked).
    pub(crate) fn count_within(&self, set: &[usize], idx: &mut Vec<usize>) -> usize {
        let r = self.r;
        if set.len() < r {
            return 0;
        }
        idx.clear();
        idx.extend(0..r);
        let mut picked = vec![0usize; r];
        let mut count = 0;
        loop {
            for (slot, &i) in picked.iter_mut().zip(idx.iter()) {
                *slot = set[i];
            }
            if self.contains_rank(colex_rank(&picked)) {
                count += 1;
            }
            if !next_colex(idx, set.len()) {
                return count;
            }
        }
    }

    fn checked_set(&self, set: &[usize]) -> Result<Vec<usize>> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        let invalid = |reason| Error::InvalidSubset {
            subset: set.to_vec(),
            n: self.n,
            r: self.r,
            reason,
        };
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("repeated vertex"));
        }
        if sorted.last().is_some_and(|&v| v >= self.n) {
            return Err(invalid("vertex out of range"));
        }
        if sorted.len() < self.r {
            return Err(invalid("fewer than r vertices"));
        }
        Ok(sorted)
    }

    /// Number of edges contained in `set`.
    pub fn induced_edge_count(&self, set: &[usize]) -> Result<usize> {
        let sorted = self.checked_set(set)?;
        Ok(self.count_within(&sorted, &mut Vec::new()))
    }

    pub fn complement(&self) -> Hypergraph {
        let mut g = self.clone();
        for w in &mut g.words {
            *w = !*w;
        }
        let tail = self.slots % 64;
        if tail != 0 {
            if let Some(last) = g.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        g
    }

    /// The hypergraph induced on `set`, relabeled order-preservingly to
    /// `{0,..,|set|-1}`.
    pub fn induced_subhypergraph(&self, set: &[usize]) -> Result<Hypergraph> {
        let sorted = self.checked_set(set)?;
        let mut sub = Hypergraph::empty(sorted.len(), self.r)?;
        let mut idx: Vec<usize> = (0..self.r).collect();
        let mut picked = vec![0usize; self.r];
        loop {
            for (slot, &i) in picked.iter_mut().zip(idx.iter()) {
                *slot = sorted[i];
            }
            if self.contains_rank(colex_rank(&picked)) {
                sub.set_rank(colex_rank(&idx), true);
            }
            if !next_colex(&mut idx, sorted.len()) {
                return Ok(sub);
            }
        }
    }

    /// Applies the vertex bijection `perm` (old label `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::params(
                "relabeling is not a permutation of the vertices",
            ));
        }
        let mut g = Hypergraph::empty(self.n, self.r)?;
        let mut mapped = Vec::with_capacity(self.r);
        for e in self.edges() {
            mapped.clear();
            mapped.extend(e.iter().map(|&v| perm[v]));
            mapped.sort_unstable();
            g.set_rank(colex_rank(&mapped), true);
        }
        Ok(g)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges().filter(|e| e.contains(&v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in self.edges() {
            for v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn link_graph(&self, v: usize) -> Result<LinkGraph> {
        if v >= self.n {
            return Err(Error::params(format!(
                "vertex {v} out of range for n={}",
                self.n
            )));
        }
        if self.r < 2 || self.n < 2 {
            return Err(Error::params("link graph needs r >= 2 and n >= 2"));
        }
        let mut link = Hypergraph::empty(self.n - 1, self.r - 1)?;
        let mut rest = Vec::with_capacity(self.r - 1);
        for e in self.edges().filter(|e| e.contains(&v)) {
            rest.clear();
            rest.extend(
                e.iter()
                    .filter(|&&u| u != v)
                    .map(|&u| if u > v { u - 1 } else { u }),
            );
            link.set_rank(colex_rank(&rest), true);
        }
        Ok(LinkGraph {
            vertex: v,
            graph: link,
        })
    }

    /// Compares edge bitsets as unsigned integers (bit `i` = rank `i`).
    pub fn cmp_bits(&self, other: &Hypergraph) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }

    /// Canonical representative of the isomorphism class: the relabeling
    /// with the smallest edge bitset among those that list vertices in the
    /// order of a refined degree colouring (higher degree first). The
    /// colouring is isomorphism-invariant, so two hypergraphs are isomorphic
    /// iff their canonical forms are equal.
    ///
    /// Brute force over the permutations inside each colour class; `n` is
    /// limited to [`CANONICAL_MAX_N`].
    pub fn canonical_form(&self) -> Result<Hypergraph> {
        if self.n > CANONICAL_MAX_N {
            return Err(Error::params(format!(
                "canonical form is limited to n <= {CANONICAL_MAX_N} (got {})",
                self.n
            )));
        }
        let edges: Vec<Vec<usize>> = self.edges().collect();
        let colors = refined_colors(self.n, &edges, &self.degrees());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &c) in colors.iter().enumerate() {
            if blocks.len() <= c {
                blocks.resize(c + 1, Vec::new());
            }
            blocks[c].push(v);
        }
        let mut search = CanonicalSearch {
            edges: &edges,
            blocks: &blocks,
            perm: vec![usize::MAX; self.n],
            used: vec![false; self.n],
            scratch: Hypergraph::empty(self.n, self.r)?,
            best: None,
            mapped: Vec::with_capacity(self.r),
        };
        search.assign(0, 0, 0);
        Ok(search.best.expect("at least one relabeling"))
    }

    pub fn is_isomorphic(&self, other: &Hypergraph) -> Result<bool> {
        if self.n != other.n || self.r != other.r || self.edge_count() != other.edge_count() {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    pub fn symmetric_difference(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::params(
                "symmetric difference of mismatched hypergraphs",
            ));
        }
        let mut g = self.clone();
        for (w, o) in g.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
        Ok(g)
    }

    /// Text edge-list format: `n r` then one 1-based edge per line, colex
    /// order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.r);
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text edge-list format. Blank lines and `#` comments are
    /// ignored.
    pub fn parse_text(text: &str) -> Result<Hypergraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let nums = parse_numbers(line_no, header)?;
        let [n, r] = nums[..] else {
            return Err(Error::parse(line_no, "header must be `n r`"));
        };
        let mut g = Hypergraph::empty(n, r).map_err(|e| Error::parse(line_no, e.to_string()))?;
        for (line_no, line) in lines {
            let verts = parse_numbers(line_no, line)?;
            if verts.len() != r {
                return Err(Error::parse(
                    line_no,
                    format!("edge has {} vertices, expected {r}", verts.len()),
                ));
            }
            if verts.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::parse(
                    line_no,
                    format!("vertex out of range 1..={n}"),
                ));
            }
            if verts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(
                    line_no,
                    "vertices must be strictly increasing",
                ));
            }
            let zero_based: Vec<usize> = verts.iter().map(|v| v - 1).collect();
            if !g.insert(&zero_based)? {
                return Err(Error::parse(line_no, "duplicate edge"));
            }
        }
        Ok(g)
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("not a non-negative integer: {tok:?}")))
        })
        .collect()
}

/// Colour refinement started from the degree sequence. Colour 0 is the
/// class listed first; classes only ever split.
fn refined_colors(n: usize, edges: &[Vec<usize>], degrees: &[usize]) -> Vec<usize> {
    let mut distinct: Vec<usize> = degrees.to_vec();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    let mut colors: Vec<usize> = degrees
        .iter()
        .map(|d| distinct.iter().position(|x| x == d).unwrap())
        .collect();
    let mut classes = distinct.len();
    loop {
        let mut sigs: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|v| {
                let mut around: Vec<Vec<usize>> = edges
                    .iter()
                    .filter(|e| e.contains(&v))
                    .map(|e| {
                        let mut c: Vec<usize> =
                            e.iter().filter(|&&u| u != v).map(|&u| colors[u]).collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let per_vertex = sigs.clone();
        sigs.sort_unstable_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        sigs.dedup();
        if sigs.len() == classes {
            return colors;
        }
        classes = sigs.len();
        colors = per_vertex
            .iter()
            .map(|s| sigs.iter().position(|x| x == s).unwrap())
            .collect();
    }
}

struct CanonicalSearch<'a> {
    edges: &'a [Vec<usize>],
    blocks: &'a [Vec<usize>],
    perm: Vec<usize>,
    used: Vec<bool>,
    scratch: Hypergraph,
    best: Option<Hypergraph>,
    mapped: Vec<usize>,
}

impl CanonicalSearch<'_> {
    fn assign(&mut self, block: usize, offset: usize, label: usize) {
        if block == self.blocks.len() {
            self.evaluate();
            return;
        }
        if offset == self.blocks[block].len() {
            self.assign(block + 1, 0, label);
            return;
        }
        for i in 0..self.blocks[block].len() {
            let v = self.blocks[block][i];
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.perm[v] = label;
            self.assign(block, offset + 1, label + 1);
            self.used[v] = false;
        }
    }

    fn evaluate(&mut self) {
        self.scratch.words.iter_mut().for_each(|w| *w = 0);
        for e in self.edges {
            self.mapped.clear();
            self.mapped.extend(e.iter().map(|&v| self.perm[v]));
            self.mapped.sort_unstable();
            self.scratch.set_rank(colex_rank(&self.mapped), true);
        }
        match &self.best {
            Some(b) if self.scratch.cmp_bits(b) != Ordering::Less => {}
            _ => self.best = Some(self.scratch.clone()),
        }
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<Vec<usize>> = self.edges().collect();
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("edges", &edges)
            .finish()
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypergraph::parse_text(s)
    }
}
