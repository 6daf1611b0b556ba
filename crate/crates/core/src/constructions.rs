//! Explicit families: the Turán construction `C_n` and its linear-deletion
//! subfamily, greedy partial Steiner systems, complete `r`-partite graphs,
//! the link-graph bijections for the lists `{1,3}` and `{0,1,3}`, and the
//! triangle/induced-matching-free graph family behind the latter.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::graph::SimpleGraph;
use crate::hypergraph::Hypergraph;
use crate::subset::{binomial, colex_rank, ColexSubsets};
use crate::{Error, Result};

/// Largest candidate pool a greedy construction will materialize.
pub const GREEDY_MAX_CANDIDATES: u64 = 1 << 24;

/// Three classes partitioning the vertices, sizes differing by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tripartition {
    n: usize,
    class_of: Vec<usize>,
}

impl Tripartition {
    /// Round-robin classes: vertex `v` goes to class `v mod 3`.
    pub fn canonical(n: usize) -> Self {
        Tripartition {
            n,
            class_of: (0..n).map(|v| v % 3).collect(),
        }
    }

    pub fn from_classes(n: usize, classes: [&[usize]; 3]) -> Result<Self> {
        let mut class_of = vec![usize::MAX; n];
        for (c, members) in classes.iter().enumerate() {
            for &v in *members {
                if v >= n || class_of[v] != usize::MAX {
                    return Err(Error::params(format!(
                        "vertex {v} out of range or in two classes"
                    )));
                }
                class_of[v] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::params("classes do not cover every vertex"));
        }
        let sizes = classes.map(|c| c.len());
        if sizes.iter().max().unwrap() - sizes.iter().min().unwrap() > 1 {
            return Err(Error::params(format!("unbalanced class sizes {sizes:?}")));
        }
        Ok(Tripartition { n, class_of })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.class_of[v] == c).collect()
    }

    /// One vertex in each class.
    pub fn is_transversal(&self, triple: &[usize]) -> bool {
        let mut seen = [false; 3];
        triple.len() == 3
            && triple
                .iter()
                .all(|&v| v < self.n && !std::mem::replace(&mut seen[self.class_of[v]], true))
    }

    /// `C_n` membership: transversal, or two vertices in class `i` and one
    /// in class `i+1 (mod 3)`.
    pub fn turan_edge(&self, triple: &[usize]) -> bool {
        let c = [triple[0], triple[1], triple[2]].map(|v| self.class_of[v]);
        if c[0] != c[1] && c[0] != c[2] && c[1] != c[2] {
            return true;
        }
        let (pair, single) = if c[0] == c[1] {
            (c[0], c[2])
        } else if c[0] == c[2] {
            (c[0], c[1])
        } else {
            (c[1], c[0])
        };
        pair != single && single == (pair + 1) % 3
    }
}

/// `C_n` membership under the canonical tripartition of the largest vertex
/// mentioned.
pub fn turan_rule(triple: &[usize]) -> bool {
    let n = triple.iter().max().map_or(0, |&v| v + 1);
    Tripartition::canonical(n).turan_edge(triple)
}

pub fn turan_cn(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::params("C_n needs n >= 3"));
    }
    turan_cn_with(&Tripartition::canonical(n))
}

pub fn turan_cn_with(part: &Tripartition) -> Result<Hypergraph> {
    let mut g = Hypergraph::empty(part.n(), 3)?;
    for t in ColexSubsets::new(part.n(), 3) {
        if part.turan_edge(&t) {
            g.set_rank(colex_rank(&t), true);
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Scan candidates in colex order.
    ColexFirst,
    /// Each step picks uniformly among the currently valid candidates.
    SeededRandom(u64),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::ColexFirst => "colex_first",
            Strategy::SeededRandom(_) => "seeded_random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Strategy::ColexFirst => None,
            Strategy::SeededRandom(s) => Some(*s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyKind {
    LinearTransversal,
    PartialSteiner,
}

/// Record of a greedy run. `rejections[i]` counts the candidates skipped
/// just before edge `i` was accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub kind: GreedyKind,
    pub n: usize,
    pub r: usize,
    pub strategy: Strategy,
    pub edges: Vec<Vec<usize>>,
    pub rejections: Vec<usize>,
    pub trailing_rejections: usize,
}

impl GreedyTrace {
    pub fn steps(&self) -> usize {
        self.edges.len()
    }

    /// Re-runs the construction and checks that it retraces this record.
    pub fn replay(&self) -> Result<bool> {
        let again = match self.kind {
            GreedyKind::LinearTransversal => greedy_linear_transversal(self.n, self.strategy)?.1,
            GreedyKind::PartialSteiner => greedy_partial_steiner(self.n, self.r, self.strategy)?.1,
        };
        Ok(&again == self)
    }

    /// JSON form with 1-based vertices.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| e.iter().map(|v| v + 1).collect())
            .collect();
        json!({
            "construction": match self.kind {
                GreedyKind::LinearTransversal => "linear_transversal",
                GreedyKind::PartialSteiner => "partial_steiner",
            },
            "n": self.n,
            "r": self.r,
            "strategy": self.strategy.name(),
            "seed": self.strategy.seed(),
            "steps": self.steps(),
            "edges": edges,
            "rejections": self.rejections,
            "trailing_rejections": self.trailing_rejections,
        })
    }
}

/// Greedy maximal selection. A random order followed by a single scan picks
/// each next edge uniformly among the candidates still valid, because a
/// candidate that fails once fails forever.
fn greedy_scan(
    mut candidates: Vec<Vec<usize>>,
    strategy: Strategy,
    mut accept: impl FnMut(&[usize]) -> bool,
) -> (Vec<Vec<usize>>, Vec<usize>, usize) {
    if let Strategy::SeededRandom(seed) = strategy {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut chosen = Vec::new();
    let mut rejections = Vec::new();
    let mut skipped = 0;
    for c in candidates {
        if accept(&c) {
            chosen.push(c);
            rejections.push(skipped);
            skipped = 0;
        } else {
            skipped += 1;
        }
    }
    (chosen, rejections, skipped)
}

fn pair_rank(a: usize, b: usize) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    hi * (hi - 1) / 2 + lo
}

/// Greedy maximal linear family of transversal triples (canonical
/// tripartition): no two chosen triples share a pair.
pub fn greedy_linear_transversal(
    n: usize,
    strategy: Strategy,
) -> Result<(Vec<[usize; 3]>, GreedyTrace)> {
    if n < 3 {
        return Err(Error::params("need n >= 3"));
    }
    if binomial(n, 3) > GREEDY_MAX_CANDIDATES {
        return Err(Error::params("too many candidate triples"));
    }
    let part = Tripartition::canonical(n);
    let candidates: Vec<Vec<usize>> = ColexSubsets::new(n, 3)
        .filter(|t| part.is_transversal(t))
        .collect();
    let mut covered = vec![false; n * (n - 1) / 2];
    let (chosen, rejections, trailing) = greedy_scan(candidates, strategy, |t| {
        let pairs = [
            pair_rank(t[0], t[1]),
            pair_rank(t[0], t[2]),
            pair_rank(t[1], t[2]),
        ];
        if pairs.iter().any(|&p| covered[p]) {
            return false;
        }
        pairs.iter().for_each(|&p| covered[p] = true);
        true
    });
    let family = chosen.iter().map(|t| [t[0], t[1], t[2]]).collect();
    let trace = GreedyTrace {
        kind: GreedyKind::LinearTransversal,
        n,
        r: 3,
        strategy,
        edges: chosen,
        rejections,
        trailing_rejections: trailing,
    };
    Ok((family, trace))
}

/// Any two triples share at most one vertex.
pub fn is_linear(family: &[[usize; 3]]) -> bool {
    let mut pairs = HashSet::new();
    family.iter().all(|t| {
        let mut s = *t;
        s.sort_unstable();
        [(s[0], s[1]), (s[0], s[2]), (s[1], s[2])]
            .into_iter()
            .all(|p| pairs.insert(p))
    })
}

/// `C_n` with the triples of a linear transversal family removed.
pub fn qn_member(n: usize, family: &[[usize; 3]]) -> Result<Hypergraph> {
    let part = Tripartition::canonical(n);
    if let Some(t) = family.iter().find(|t| !part.is_transversal(&t[..])) {
        return Err(Error::Precondition(format!(
            "triple {t:?} is not transversal"
        )));
    }
    if !is_linear(family) {
        return Err(Error::Precondition("family is not linear".into()));
    }
    let mut g = turan_cn(n)?;
    for t in family {
        let mut s = *t;
        s.sort_unstable();
        g.remove(&s)?;
    }
    Ok(g)
}

/// Greedy maximal `r`-graph in which every `(r-1)`-set lies in at most one
/// edge.
pub fn greedy_partial_steiner(
    n: usize,
    r: usize,
    strategy: Strategy,
) -> Result<(Hypergraph, GreedyTrace)> {
    if !(n >= r && r >= 2) {
        return Err(Error::params(format!(
            "need n >= r >= 2 (got n={n}, r={r})"
        )));
    }
    if binomial(n, r) > GREEDY_MAX_CANDIDATES {
        return Err(Error::params("too many candidate edges"));
    }
    let mut covered = vec![false; binomial(n, r - 1) as usize];
    let candidates: Vec<Vec<usize>> = ColexSubsets::new(n, r).collect();
    let mut shadow = Vec::with_capacity(r - 1);
    let mut shadow_ranks = Vec::with_capacity(r);
    let (chosen, rejections, trailing) = greedy_scan(candidates, strategy, |e| {
        shadow_ranks.clear();
        for skip in 0..r {
            shadow.clear();
            shadow.extend(
                e.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v),
            );
            shadow_ranks.push(colex_rank(&shadow) as usize);
        }
        if shadow_ranks.iter().any(|&s| covered[s]) {
            return false;
        }
        shadow_ranks.iter().for_each(|&s| covered[s] = true);
        true
    });
    let g = Hypergraph::from_edges(n, r, &chosen)?;
    let trace = GreedyTrace {
        kind: GreedyKind::PartialSteiner,
        n,
        r,
        strategy,
        edges: chosen,
        rejections,
        trailing_rejections: trailing,
    };
    Ok((g, trace))
}

/// Largest number of edges through a single `(r-1)`-set.
pub fn max_codegree(g: &Hypergraph) -> usize {
    let r = g.r();
    if r < 2 {
        return usize::from(g.edge_count() > 0);
    }
    let mut counts = vec![0usize; binomial(g.n(), r - 1) as usize];
    let mut shadow = Vec::with_capacity(r - 1);
    for e in g.edges() {
        for skip in 0..r {
            shadow.clear();
            shadow.extend(
                e.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v),
            );
            counts[colex_rank(&shadow) as usize] += 1;
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

/// Balanced `r`-partition (vertex `v` in class `v mod r`); edges are the
/// `r`-sets meeting every class.
pub fn complete_r_partite(n: usize, r: usize) -> Result<Hypergraph> {
    if !(n >= r && r >= 2) {
        return Err(Error::params(format!(
            "need n >= r >= 2 (got n={n}, r={r})"
        )));
    }
    let mut g = Hypergraph::empty(n, r)?;
    let mut classes = vec![false; r];
    for e in ColexSubsets::new(n, r) {
        classes.iter_mut().for_each(|c| *c = false);
        if e.iter()
            .all(|&v| !std::mem::replace(&mut classes[v % r], true))
        {
            g.set_rank(colex_rank(&e), true);
        }
    }
    Ok(g)
}

pub fn has_even_edge_count(g: &Hypergraph) -> bool {
    g.edge_count().is_multiple_of(2)
}

fn triple_link_edges(link: &SimpleGraph, t: &[usize]) -> usize {
    [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
        .iter()
        .filter(|&&(a, b)| link.adjacent(a, b))
        .count()
}

/// The unique `({1,3},4)`-free 3-graph on `n = h.n() + 1` vertices whose
/// link at the last vertex is `h`: a triple inside the first `n-1`
/// vertices is an edge iff `h` has an odd number of edges on it.
pub fn link_bijection_13(h: &SimpleGraph) -> Result<Hypergraph> {
    let m = h.n();
    let mut g = Hypergraph::empty(m + 1, 3)?;
    for t in ColexSubsets::new(m, 3) {
        if triple_link_edges(h, &t) % 2 == 1 {
            g.set_rank(colex_rank(&t), true);
        }
    }
    for e in h.edges() {
        g.insert(&[e[0], e[1], m])?;
    }
    Ok(g)
}

/// No triangle and no induced matching with two edges.
pub fn is_triangle_and_matching_free(h: &SimpleGraph) -> bool {
    h.find_triangle().is_none() && h.find_induced_matching().is_none()
}

/// `|F_{△,M}(m)|`, by scanning every labeled graph on `m <= 7` vertices.
pub fn count_triangle_and_matching_free(m: usize) -> Result<u64> {
    Ok(SimpleGraph::all(m)?
        .filter(is_triangle_and_matching_free)
        .count() as u64)
}

/// The unique `({0,1,3},4)`-free 3-graph whose link at the last vertex is
/// `a`. Defined when the complement of `a` has no triangle and no induced
/// 2-matching; otherwise the first violation is reported.
pub fn link_bijection_013(a: &SimpleGraph) -> Result<Hypergraph> {
    let comp = a.complement();
    if let Some(t) = comp.find_triangle() {
        return Err(Error::Precondition(format!(
            "complement of the link has triangle {t:?}"
        )));
    }
    if let Some(m) = comp.find_induced_matching() {
        return Err(Error::Precondition(format!(
            "complement of the link has induced matching {m:?}"
        )));
    }
    let m = a.n();
    let mut g = Hypergraph::empty(m + 1, 3)?;
    for t in ColexSubsets::new(m, 3) {
        // 0 link edges is excluded by the triangle check above
        if matches!(triple_link_edges(a, &t), 1 | 3) {
            g.set_rank(colex_rank(&t), true);
        }
    }
    for e in a.edges() {
        g.insert(&[e[0], e[1], m])?;
    }
    Ok(g)
}

/// Whether the neighbourhoods of the `p` side are totally ordered by
/// inclusion. `p` and `q` must partition the vertices with every edge
/// crossing between them.
pub fn chain_neighborhoods(b: &SimpleGraph, p: &[usize], q: &[usize]) -> Result<bool> {
    let n = b.n();
    let mut side = vec![None; n];
    for (s, part) in [p, q].iter().enumerate() {
        for &v in *part {
            if v >= n || side[v].is_some() {
                return Err(Error::params(format!(
                    "vertex {v} out of range or repeated"
                )));
            }
            side[v] = Some(s);
        }
    }
    if side.contains(&None) {
        return Err(Error::params("parts do not cover every vertex"));
    }
    if let Some(e) = b.edges().find(|e| side[e[0]] == side[e[1]]) {
        return Err(Error::Precondition(format!(
            "edge {e:?} lies inside one part"
        )));
    }
    let hoods: Vec<Vec<usize>> = p.iter().map(|&u| b.neighbors(u)).collect();
    let subset = |x: &[usize], y: &[usize]| x.iter().all(|v| y.contains(v));
    Ok(hoods
        .iter()
        .enumerate()
        .all(|(i, x)| hoods[..i].iter().all(|y| subset(x, y) || subset(y, x))))
}

/// Three independent classes `{u} ∪ N(v)`, `{v} ∪ N(u)` and the rest, for
/// the colex-first edge `uv`. An edgeless graph gets a single class.
pub fn three_coloring_witness(h: &SimpleGraph) -> Result<Vec<Vec<usize>>> {
    let Some(edge) = h.edges().next() else {
        return Ok(vec![(0..h.n()).collect()]);
    };
    if !is_triangle_and_matching_free(h) {
        return Err(Error::Precondition(
            "graph has a triangle or an induced 2-matching".into(),
        ));
    }
    let (u, v) = (edge[0], edge[1]);
    let nu = h.neighbors(u);
    let nv = h.neighbors(v);
    let first: Vec<usize> = (0..h.n()).filter(|&x| x == u || nv.contains(&x)).collect();
    let second: Vec<usize> = (0..h.n()).filter(|&x| x == v || nu.contains(&x)).collect();
    let rest: Vec<usize> = (0..h.n())
        .filter(|x| !first.contains(x) && !second.contains(x))
        .collect();
    let classes = vec![first, second, rest];
    for class in &classes {
        for (i, &x) in class.iter().enumerate() {
            if let Some(&y) = class[..i].iter().find(|&&y| h.adjacent(x, y)) {
                return Err(Error::Precondition(format!(
                    "class {class:?} is not independent ({y},{x})"
                )));
            }
        }
    }
    Ok(classes)
}

/// The complete 3-graph and, for each vertex, the complete 3-graph on the
/// others with that vertex isolated.
pub fn clique_plus_isolated_family(n: usize) -> Result<Vec<Hypergraph>> {
    if n < 5 {
        return Err(Error::params("need n >= 5"));
    }
    let mut out = vec![Hypergraph::complete(n, 3)?];
    for isolated in 0..n {
        let mut g = Hypergraph::empty(n, 3)?;
        for t in ColexSubsets::new(n, 3).filter(|t| !t.contains(&isolated)) {
            g.set_rank(colex_rank(&t), true);
        }
        out.push(g);
    }
    Ok(out)
}
