//! Simple graphs as 2-uniform hypergraphs.

use std::ops::Deref;

use crate::hypergraph::Hypergraph;
use crate::subset::ColexSubsets;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph(Hypergraph);

impl SimpleGraph {
    /// Edgeless graph on `n >= 2` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        Hypergraph::empty(n, 2).map(SimpleGraph)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Hypergraph::complete(n, 2).map(SimpleGraph)
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph with edge mask `bits` over the colex order of pairs.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        Hypergraph::from_bits(n, 2, bits).map(SimpleGraph)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::params("loops are not allowed"));
        }
        self.0.insert(&[u.min(v), u.max(v)])?;
        Ok(())
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.0.contains(&[u.min(v), u.max(v)])
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.adjacent(u, v)).collect()
    }

    pub fn complement(&self) -> SimpleGraph {
        SimpleGraph(self.0.complement())
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.0
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.0
    }

    /// Every graph on `n` vertices, in mask order. Requires `C(n,2) <= 24`.
    pub fn all(n: usize) -> Result<impl Iterator<Item = SimpleGraph>> {
        let pairs = n * n.saturating_sub(1) / 2;
        if pairs > 24 {
            return Err(Error::params("too many graphs to enumerate"));
        }
        Ok((0u64..1 << pairs).map(move |bits| SimpleGraph::from_bits(n, bits).unwrap()))
    }

    /// Colex-first triangle.
    pub fn find_triangle(&self) -> Option<[usize; 3]> {
        ColexSubsets::new(self.n(), 3)
            .find(|t| {
                self.adjacent(t[0], t[1]) && self.adjacent(t[0], t[2]) && self.adjacent(t[1], t[2])
            })
            .map(|t| [t[0], t[1], t[2]])
    }

    /// Two disjoint edges with no edge between them, as `[(a,b),(c,d)]`.
    pub fn find_induced_matching(&self) -> Option<[(usize, usize); 2]> {
        let edges: Vec<Vec<usize>> = self.edges().collect();
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[..i] {
                let (a, b, c, d) = (f[0], f[1], e[0], e[1]);
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                if !self.adjacent(a, c)
                    && !self.adjacent(a, d)
                    && !self.adjacent(b, c)
                    && !self.adjacent(b, d)
                {
                    return Some([(a, b), (c, d)]);
                }
            }
        }
        None
    }
}

impl Deref for SimpleGraph {
    type Target = Hypergraph;

    fn deref(&self) -> &Hypergraph {
        &self.0
    }
}

impl TryFrom<Hypergraph> for SimpleGraph {
    type Error = Error;

    fn try_from(g: Hypergraph) -> Result<Self> {
        if g.r() != 2 {
            return Err(Error::params(format!("expected a graph, got r={}", g.r())));
        }
        Ok(SimpleGraph(g))
    }
}
