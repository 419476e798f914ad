//! Hypergraphs with multi-edges and mixed arities.
//!
//! An edge is a sorted tuple of distinct vertices. Repeated edges are kept
//! with their multiplicity, since every copy carries its own clause.
//!
//! The text format is line-oriented: the first line holds `n m`, followed by
//! `m` lines each listing the 0-based vertices of one edge.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::rng::stream_rng;
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Sorted tuple of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Edge(Vec<usize>);

impl Edge {
    /// Sorts `vertices` and rejects repeats and arities below 2.
    pub fn new(vertices: impl Into<Vec<usize>>) -> Result<Self> {
        let mut v = vertices.into();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(w[0]));
        }
        if v.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "edges need at least 2 vertices, got {}",
                v.len()
            )));
        }
        Ok(Edge(v))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Bit mask of the edge's vertices.
    pub fn mask(&self) -> usize {
        self.0.iter().fold(0, |m, &v| m | (1 << v))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Hypergraph {
    /// Edgeless hypergraph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Vec<usize>>,
    {
        let mut g = Self::empty(n);
        for e in edges {
            g.push_edge(e)?;
        }
        Ok(g)
    }

    pub fn push_edge(&mut self, vertices: impl Into<Vec<usize>>) -> Result<()> {
        let edge = Edge::new(vertices)?;
        if let Some(&v) = edge.vertices().last() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        self.edges.push(edge);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The common arity, or `None` for an edgeless or mixed-arity hypergraph.
    pub fn uniform_arity(&self) -> Option<usize> {
        let k = self.edges.first()?.arity();
        self.edges.iter().all(|e| e.arity() == k).then_some(k)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e.vertices() {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Per-vertex lists of incident edge indices.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e.vertices() {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Hypergraph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| Edge(e.vertices().iter().map(|v| v + shift).collect())),
        );
        Hypergraph {
            n: self.n + other.n,
            edges,
        }
    }

    /// Parses the plain-text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let nums = parse_numbers(header, line)?;
        let [n, m] = nums[..] else {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "header must hold exactly two integers, found {}",
                    nums.len()
                ),
            });
        };
        let mut g = Hypergraph::empty(n);
        for (line, text) in lines {
            let vertices = parse_numbers(text, line)?;
            g.push_edge(vertices).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
        }
        if g.m() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {m} edges, found {}", g.m()),
            });
        }
        Ok(g)
    }
}

fn parse_numbers(text: &str, line: usize) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("`{tok}` is not a nonnegative integer"),
            })
        })
        .collect()
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.m())?;
        for e in &self.edges {
            let mut first = true;
            for v in e.vertices() {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
                first = false;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `m` independent uniform `k`-subsets of `[0, n)`, drawn with replacement.
///
/// Each edge is sampled by rejection: uniform vertices are drawn until `k`
/// distinct ones are collected.
pub fn random_hypergraph(n: usize, m: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "arity must be at least 2, got {k}"
        )));
    }
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "need n >= k, got n = {n}, k = {k}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut edges = Vec::with_capacity(m);
    let mut buf = Vec::with_capacity(k);
    for _ in 0..m {
        buf.clear();
        while buf.len() < k {
            let v = rng.random_range(0..n);
            if !buf.contains(&v) {
                buf.push(v);
            }
        }
        buf.sort_unstable();
        edges.push(Edge(buf.clone()));
    }
    Ok(Hypergraph { n, edges })
}

/// Connected component of a multigraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ComponentSummary {
    pub vertex_count: usize,
    /// Edges counted with multiplicity.
    pub edge_count: usize,
    /// Largest number of parallel copies of a single edge (0 without edges).
    pub max_edge_multiplicity: usize,
}

/// Components of a graph whose edges all have arity 2, ordered by their
/// smallest vertex.
pub fn components(g: &Hypergraph) -> Result<Vec<ComponentSummary>> {
    if let Some(e) = g.edges().iter().find(|e| e.arity() != 2) {
        return Err(Error::Arity {
            expected: 2,
            found: e.arity(),
        });
    }
    let mut uf = UnionFind::new(g.n());
    for e in g.edges() {
        uf.union(e.vertices()[0], e.vertices()[1]);
    }
    let mut index_of_root = HashMap::new();
    let mut out: Vec<ComponentSummary> = Vec::new();
    for v in 0..g.n() {
        let r = uf.find(v);
        let idx = *index_of_root.entry(r).or_insert_with(|| {
            out.push(ComponentSummary {
                vertex_count: 0,
                edge_count: 0,
                max_edge_multiplicity: 0,
            });
            out.len() - 1
        });
        out[idx].vertex_count += 1;
    }
    let mut multiplicity: HashMap<&Edge, usize> = HashMap::new();
    for e in g.edges() {
        *multiplicity.entry(e).or_default() += 1;
    }
    for (e, mult) in multiplicity {
        let idx = index_of_root[&uf.find(e.vertices()[0])];
        out[idx].edge_count += mult;
        out[idx].max_edge_multiplicity = out[idx].max_edge_multiplicity.max(mult);
    }
    Ok(out)
}

/// Adds a copy of `h` to `g`, mapping vertex `i` of `h` to `embedding[i]`.
///
/// The result keeps `g`'s edges first, then `h`'s relabeled edges in order.
pub fn attach(g: &Hypergraph, h: &Hypergraph, embedding: &[usize]) -> Result<Hypergraph> {
    if embedding.len() != h.n() {
        return Err(Error::Embedding(format!(
            "embedding has {} entries for {} vertices",
            embedding.len(),
            h.n()
        )));
    }
    if let Some(&v) = embedding.iter().find(|&&v| v >= g.n()) {
        return Err(Error::Embedding(format!(
            "image {v} is outside [0, {})",
            g.n()
        )));
    }
    let mut seen = embedding.to_vec();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Embedding(format!("vertex {} is hit twice", w[0])));
    }
    let mut out = g.clone();
    for e in h.edges() {
        out.push_edge(
            e.vertices()
                .iter()
                .map(|&v| embedding[v])
                .collect::<Vec<_>>(),
        )?;
    }
    Ok(out)
}
