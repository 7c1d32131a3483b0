//! Simplicial-graph core: adjacency, stars and links, connected components
//! of Γ-st(v), the Day-Wade component trichotomy, clique counting and the
//! dominating-vertex reduction.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};

/// A finite simplicial graph with 1-based vertex labels.
///
/// Labels are semantic: the fixed label order decides which element of
/// Γ-st(v) is "minimal", so reductions keep the original labels of the
/// surviving vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    verts: VertexSet,
    adj: Vec<VertexSet>, // indexed by label, slot 0 unused
    edges: Vec<(usize, usize)>,
}

/// A connected component of Γ-st(anchor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: VertexSet,
    pub anchor: usize,
}

/// Day-Wade trichotomy of a component of Γ-st(u) relative to a
/// non-adjacent vertex v.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    Shared,
    Dominant,
    Subordinate,
}

#[derive(Serialize, Deserialize)]
struct JsonGraphInput {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Serializable raw form, used by the poset cache.
#[derive(Serialize, Deserialize, PartialEq, Eq)]
pub(crate) struct GraphData {
    pub verts: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Parses either the edge-list text format (first non-comment line is
    /// the vertex count, then one `u v` pair per line with `u < v`, `#`
    /// starting a comment) or a JSON document `{"n": .., "edges": [[u,v],..]}`.
    pub fn parse(text: &str) -> Result<Graph> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_edge_list(text)
        }
    }

    fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut n: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line, msg };
            match n {
                None => {
                    let count: usize = content
                        .parse()
                        .map_err(|_| err(format!("expected vertex count, got {content:?}")))?;
                    if count > MAX_VERTICES {
                        return Err(err(format!("vertex count {count} exceeds the supported maximum of {MAX_VERTICES}")));
                    }
                    n = Some(count);
                }
                Some(count) => {
                    let toks: Vec<&str> = content.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(err(format!("expected an edge `u v`, got {content:?}")));
                    }
                    let u: usize = toks[0]
                        .parse()
                        .map_err(|_| err(format!("bad vertex {:?}", toks[0])))?;
                    let v: usize = toks[1]
                        .parse()
                        .map_err(|_| err(format!("bad vertex {:?}", toks[1])))?;
                    if u == v {
                        return Err(err(format!("self-loop at vertex {u}")));
                    }
                    if u > v {
                        return Err(err(format!("expected u < v, got {u} {v}")));
                    }
                    if u < 1 || v > count {
                        return Err(err(format!("edge {u} {v} out of range 1..={count}")));
                    }
                    if edges.contains(&(u, v)) {
                        return Err(err(format!("duplicate edge {u} {v}")));
                    }
                    edges.push((u, v));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing vertex count".into(),
        })?;
        Graph::from_edges(n, &edges)
    }

    fn parse_json(text: &str) -> Result<Graph> {
        let input: JsonGraphInput = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if input.n > MAX_VERTICES {
            return Err(Error::Parse {
                line: 0,
                msg: format!("vertex count {} exceeds the supported maximum of {MAX_VERTICES}", input.n),
            });
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (i, &(a, b)) in input.edges.iter().enumerate() {
            let err = |msg: String| Error::Parse {
                line: 0,
                msg: format!("edge #{}: {msg}", i + 1),
            };
            if a == b {
                return Err(err(format!("self-loop at vertex {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if u < 1 || v > input.n {
                return Err(err(format!("edge {u} {v} out of range 1..={}", input.n)));
            }
            if edges.contains(&(u, v)) {
                return Err(err(format!("duplicate edge {u} {v}")));
            }
            edges.push((u, v));
        }
        Graph::from_edges(input.n, &edges)
    }

    /// Builds the graph on vertices `1..=n` with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::Parse {
                line: 0,
                msg: format!("vertex count {n} exceeds the supported maximum of {MAX_VERTICES}"),
            });
        }
        let verts = VertexSet::full(n);
        Self::from_parts(verts, edges)
    }

    pub(crate) fn from_parts(verts: VertexSet, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![VertexSet::EMPTY; MAX_VERTICES + 1];
        let mut sorted: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidPartition(format!("self-loop at vertex {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !verts.contains(u) || !verts.contains(v) {
                return Err(Error::UnknownVertex(if verts.contains(u) { v } else { u }));
            }
            if sorted.contains(&(u, v)) {
                return Err(Error::InvalidPartition(format!("duplicate edge {u} {v}")));
            }
            sorted.push((u, v));
            adj[u].insert(v);
            adj[v].insert(u);
        }
        sorted.sort_unstable();
        Ok(Graph {
            verts,
            adj,
            edges: sorted,
        })
    }

    pub fn verts(&self) -> VertexSet {
        self.verts
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.contains(v)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u <= MAX_VERTICES && self.adj[u].contains(v)
    }

    /// True when `u ∈ st(v)`, i.e. `u == v` or the two are adjacent.
    pub fn in_star(&self, u: usize, v: usize) -> bool {
        u == v || self.adjacent(u, v)
    }

    /// lk(v): the neighbours of v.
    pub fn link(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.adj[v])
    }

    /// st(v) = lk(v) ∪ {v}.
    pub fn star(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.star_unchecked(v))
    }

    pub(crate) fn star_unchecked(&self, v: usize) -> VertexSet {
        self.adj[v] | VertexSet::singleton(v)
    }

    /// Γ-st(v) as a vertex set.
    pub fn minus_star(&self, v: usize) -> VertexSet {
        self.verts - self.star_unchecked(v)
    }

    /// Smallest label of Γ-st(v), if any.
    pub fn min_minus_star(&self, v: usize) -> Option<usize> {
        self.minus_star(v).min_label()
    }

    /// A vertex whose star is all of the graph, if one exists.
    pub fn dominating_vertex(&self) -> Option<usize> {
        self.verts.iter().find(|&v| self.star_unchecked(v) == self.verts)
    }

    pub fn is_reduced(&self) -> bool {
        self.dominating_vertex().is_none()
    }

    /// Iteratively removes dominating vertices until none remains. The
    /// surviving vertices keep their labels; the result may be empty.
    pub fn reduce_dominating(&self) -> Graph {
        let mut g = self.clone();
        while let Some(v) = g.dominating_vertex() {
            g = g.remove_vertex(v);
        }
        g
    }

    fn remove_vertex(&self, v: usize) -> Graph {
        let verts = self.verts - VertexSet::singleton(v);
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a != v && b != v)
            .collect();
        Graph::from_parts(verts, &edges).expect("removal preserves validity")
    }

    /// Connected components of the subgraph induced on `within`.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::EMPTY;
        let mut comps = Vec::new();
        for v in within.iter() {
            if seen.contains(v) {
                continue;
            }
            let mut comp = VertexSet::EMPTY;
            let mut frontier = VertexSet::singleton(v);
            while !frontier.is_empty() {
                comp = comp | frontier;
                let mut next = VertexSet::EMPTY;
                for w in frontier.iter() {
                    next = next | (self.adj[w] & within);
                }
                frontier = next - comp;
            }
            seen = seen | comp;
            comps.push(comp);
        }
        comps
    }

    /// The connected components of Γ-st(v), sorted by minimum label.
    ///
    /// Errors when Γ-st(v) is empty (v dominates; reduce first).
    pub fn components_minus_star(&self, v: usize) -> Result<Vec<Component>> {
        self.check_vertex(v)?;
        let rest = self.minus_star(v);
        if rest.is_empty() {
            return Err(Error::Dominating(v));
        }
        Ok(self
            .components_within(rest)
            .into_iter()
            .map(|vertices| Component {
                vertices,
                anchor: v,
            })
            .collect())
    }

    /// The component of Γ-st(u) containing the non-adjacent vertex v.
    pub fn dominant_component(&self, u: usize, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        if self.in_star(u, v) {
            return Err(Error::Adjacent(u, v));
        }
        let comps = self.components_minus_star(u)?;
        Ok(comps
            .into_iter()
            .find(|c| c.vertices.contains(v))
            .expect("non-adjacent vertex lies in some component")
            .vertices)
    }

    /// Classifies a component of Γ-st(u) relative to a non-adjacent
    /// vertex v: shared, dominant or subordinate (Day-Wade).
    pub fn classify_component(&self, comp: &Component, v: usize) -> Result<ComponentClass> {
        let u = comp.anchor;
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.in_star(u, v) {
            return Err(Error::Adjacent(u, v));
        }
        let comps_u = self.components_minus_star(u)?;
        if !comps_u.iter().any(|c| c.vertices == comp.vertices) {
            return Err(Error::NotAComponent(format!(
                "{} is not a component of Γ-st({u})",
                comp.vertices
            )));
        }
        if comp.vertices.contains(v) {
            return Ok(ComponentClass::Dominant);
        }
        let comps_v = self.components_minus_star(v)?;
        if comps_v.iter().any(|c| c.vertices == comp.vertices) {
            return Ok(ComponentClass::Shared);
        }
        let dom_v = comps_v
            .iter()
            .find(|c| c.vertices.contains(u))
            .expect("u lies in some component of Γ-st(v)");
        if comp.vertices.is_subset(dom_v.vertices) {
            return Ok(ComponentClass::Subordinate);
        }
        Err(Error::CaseGap(format!(
            "component {} of Γ-st({u}) is neither shared, dominant nor subordinate w.r.t. {v}",
            comp.vertices
        )))
    }

    /// N[j] = number of j-cliques, with N[0] = 1 for the empty clique.
    pub fn clique_counts(&self) -> Vec<usize> {
        let mut counts = vec![1usize];
        self.clique_rec(0, self.verts, &mut counts);
        counts
    }

    fn clique_rec(&self, size: usize, cand: VertexSet, counts: &mut Vec<usize>) {
        for v in cand.iter() {
            if counts.len() <= size + 1 {
                counts.push(0);
            }
            counts[size + 1] += 1;
            let above: VertexSet = cand.iter().filter(|&w| w > v).collect();
            self.clique_rec(size + 1, above & self.adj[v], counts);
        }
    }

    pub(crate) fn to_data(&self) -> GraphData {
        GraphData {
            verts: self.verts.iter().collect(),
            edges: self.edges.clone(),
        }
    }

    pub(crate) fn from_data(data: &GraphData) -> Result<Graph> {
        let mut verts = VertexSet::EMPTY;
        for &v in &data.verts {
            if v < 1 || v > MAX_VERTICES {
                return Err(Error::UnknownVertex(v));
            }
            verts.insert(v);
        }
        Graph::from_parts(verts, &data.edges)
    }

    /// Hex digest of the canonical serialized form; used as the cache key.
    pub fn content_hash(&self) -> String {
        let data = self.to_data();
        let json = serde_json::to_string(&data).expect("graph serialization");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(verts={}, edges={:?})", self.verts, self.edges)
    }
}
