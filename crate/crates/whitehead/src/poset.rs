//! The Γ-Whitehead poset: enumeration of vertex types, the refinement
//! order, rank, chains of the order complex, and the supp / Peripheral /
//! C(A) subcomplexes.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::essential::{cone_point, GeneratorSet};
use crate::graph::{Graph, GraphData};
use crate::partition::{compatible, BasedPartition};
use crate::vset::VertexSet;

/// One pairwise-compatible based partition per vertex of the (reduced)
/// graph; an element of the Whitehead poset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexType {
    parts: Vec<BasedPartition>, // ascending operative vertex
}

impl VertexType {
    /// Validating constructor: one partition per graph vertex, pairwise
    /// compatible.
    pub fn new(g: &Graph, mut parts: Vec<BasedPartition>) -> Result<VertexType> {
        parts.sort_by_key(|p| p.operative());
        let ops: Vec<usize> = parts.iter().map(|p| p.operative()).collect();
        let expected: Vec<usize> = g.verts().iter().collect();
        if ops != expected {
            return Err(Error::InvalidPartition(format!(
                "expected one based partition per vertex {expected:?}, got {ops:?}"
            )));
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if !compatible(g, &parts[i], &parts[j]) {
                    return Err(Error::Incompatible(format!(
                        "based partitions at {} and {} cross",
                        parts[i].operative(),
                        parts[j].operative()
                    )));
                }
            }
        }
        Ok(VertexType { parts })
    }

    /// The minimal element: every based partition trivial.
    pub fn nuclear(g: &Graph) -> Result<VertexType> {
        let parts = g
            .verts()
            .iter()
            .map(|v| BasedPartition::trivial(g, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexType { parts })
    }

    pub(crate) fn from_parts_unchecked(mut parts: Vec<BasedPartition>) -> VertexType {
        parts.sort_by_key(|p| p.operative());
        VertexType { parts }
    }

    pub fn parts(&self) -> &[BasedPartition] {
        &self.parts
    }

    /// The based partition with a given operative vertex.
    pub fn part(&self, v: usize) -> Option<&BasedPartition> {
        self.parts
            .binary_search_by_key(&v, |p| p.operative())
            .ok()
            .map(|i| &self.parts[i])
    }

    /// rk(τ) = Σ_v (l(τ_v) - 1); equals the free-abelian rank of Stab(τ).
    pub fn rank(&self) -> usize {
        self.parts.iter().map(|p| p.len() - 1).sum()
    }

    pub fn is_nuclear(&self) -> bool {
        self.rank() == 0
    }

    /// Componentwise refinement order.
    pub fn leq(&self, other: &VertexType) -> bool {
        debug_assert_eq!(self.parts.len(), other.parts.len());
        self.parts
            .iter()
            .zip(other.parts.iter())
            .all(|(p, q)| p.leq_unchecked(q))
    }

    /// Vertex types are compatible when their partitions are pairwise so.
    pub fn compatible_with(&self, g: &Graph, other: &VertexType) -> bool {
        self.parts.iter().all(|p| {
            other
                .parts
                .iter()
                .filter(|q| q.operative() != p.operative())
                .all(|q| compatible(g, p, q))
        })
    }

    /// Replaces the partition at `v` (used by splitting walks).
    pub(crate) fn with_part(&self, replacement: BasedPartition) -> VertexType {
        let mut parts = self.parts.clone();
        let i = parts
            .binary_search_by_key(&replacement.operative(), |p| p.operative())
            .expect("vertex present");
        parts[i] = replacement;
        VertexType { parts }
    }
}

impl fmt::Debug for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "τ[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p:?}")?;
        }
        write!(f, "]")
    }
}

/// A strictly increasing sequence of poset indices; a (len-1)-simplex of
/// the order complex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain(pub Vec<usize>);

impl Chain {
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The minimum element τ⁰; stabilizer data of the whole chain lives here.
    pub fn bottom(&self) -> usize {
        self.0[0]
    }

    /// Face obtained by removing the i-th element.
    pub fn face(&self, i: usize) -> Chain {
        let mut v = self.0.clone();
        v.remove(i);
        Chain(v)
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "<")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubcomplexKind {
    /// supp(A): chains whose bottom's canonical basis contains A.
    Support,
    /// C(A): chains whose bottom stabilizer contains A, i.e. τ(A) ≤ τ⁰.
    Cone,
    /// C(A) minus supp membership at the bottom.
    Peripheral,
}

/// Simple dense bit matrix for the order relation.
struct BitMatrix {
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> BitMatrix {
        let words = n.div_ceil(64);
        BitMatrix {
            words,
            data: vec![0; words * n],
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1u64 << (j % 64);
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] & (1u64 << (j % 64)) != 0
    }
}

/// The enumerated Whitehead poset of a reduced graph.
pub struct WhiteheadPoset {
    graph: Graph,
    elements: Vec<VertexType>, // sorted by (rank, petal data)
    ranks: Vec<usize>,
    rank_histogram: Vec<usize>,
    hasse: Vec<(usize, usize)>,
    leq: BitMatrix,
    index: HashMap<VertexType, usize>,
}

impl fmt::Debug for WhiteheadPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WhiteheadPoset({} elements, histogram {:?})",
            self.elements.len(),
            self.rank_histogram
        )
    }
}

impl WhiteheadPoset {
    /// Enumerates all vertex types of `g`: the cartesian product of the
    /// per-vertex partition lists, filtered by pairwise compatibility.
    /// Fails with a resource error when more than `cap` elements appear.
    pub fn enumerate(g: &Graph, cap: usize) -> Result<WhiteheadPoset> {
        if let Some(v) = g.dominating_vertex() {
            return Err(Error::NotReduced(v));
        }
        let verts: Vec<usize> = g.verts().iter().collect();
        let lists: Vec<Vec<BasedPartition>> = verts
            .iter()
            .map(|&v| BasedPartition::enumerate_all(g, v))
            .collect::<Result<_>>()?;

        // memoized pairwise verdicts for non-adjacent vertex pairs
        let k = verts.len();
        let mut tables: HashMap<(usize, usize), Vec<Vec<bool>>> = HashMap::new();
        for a in 0..k {
            for b in a + 1..k {
                if g.in_star(verts[a], verts[b]) {
                    continue;
                }
                let table: Vec<Vec<bool>> = lists[a]
                    .iter()
                    .map(|p| lists[b].iter().map(|q| compatible(g, p, q)).collect())
                    .collect();
                tables.insert((a, b), table);
            }
        }

        let mut choices: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        Self::assemble(&lists, &tables, &mut stack, &mut choices, cap)?;

        let mut elements: Vec<VertexType> = choices
            .into_iter()
            .map(|choice| {
                VertexType::from_parts_unchecked(
                    choice
                        .iter()
                        .enumerate()
                        .map(|(a, &i)| lists[a][i].clone())
                        .collect(),
                )
            })
            .collect();
        elements.sort_by(|x, y| (x.rank(), x).cmp(&(y.rank(), y)));

        let ranks: Vec<usize> = elements.iter().map(|t| t.rank()).collect();
        let max_rank = ranks.iter().copied().max().unwrap_or(0);
        let mut rank_histogram = vec![0usize; max_rank + 1];
        for &r in &ranks {
            rank_histogram[r] += 1;
        }

        let n = elements.len();
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                for j in 0..n {
                    if i == j || (ranks[i] < ranks[j] && elements[i].leq(&elements[j])) {
                        row.push(j);
                    }
                }
                row
            })
            .collect();
        let mut leq = BitMatrix::new(n);
        let mut hasse = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                leq.set(i, j);
                if i != j && ranks[j] == ranks[i] + 1 {
                    hasse.push((i, j));
                }
            }
        }

        let index: HashMap<VertexType, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();

        Ok(WhiteheadPoset {
            graph: g.clone(),
            elements,
            ranks,
            rank_histogram,
            hasse,
            leq,
            index,
        })
    }

    fn assemble(
        lists: &[Vec<BasedPartition>],
        tables: &HashMap<(usize, usize), Vec<Vec<bool>>>,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        let level = stack.len();
        if level == lists.len() {
            if out.len() >= cap {
                return Err(Error::Cap {
                    cap,
                    partial: out.len(),
                });
            }
            out.push(stack.clone());
            return Ok(());
        }
        for j in 0..lists[level].len() {
            let ok = (0..level).all(|a| match tables.get(&(a, level)) {
                Some(table) => table[stack[a]][j],
                None => true,
            });
            if ok {
                stack.push(j);
                Self::assemble(lists, tables, stack, out, cap)?;
                stack.pop();
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[VertexType] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &VertexType {
        &self.elements[i]
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn max_rank(&self) -> usize {
        self.rank_histogram.len() - 1
    }

    pub fn rank_histogram(&self) -> &[usize] {
        &self.rank_histogram
    }

    /// Covering relation edges (rank difference exactly one).
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn index_of(&self, t: &VertexType) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Order test by element index (reflexive).
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    /// All strictly increasing (dim+1)-sequences, in lexicographic order
    /// of element indices.
    pub fn chains(&self, dim: usize) -> Vec<Chain> {
        let n = self.elements.len();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(dim + 1);
        for start in 0..n {
            current.push(start);
            self.extend_chain(dim + 1, &mut current, &mut out);
            current.pop();
        }
        out
    }

    fn extend_chain(&self, target_len: usize, current: &mut Vec<usize>, out: &mut Vec<Chain>) {
        if current.len() == target_len {
            out.push(Chain(current.clone()));
            return;
        }
        let last = *current.last().unwrap();
        for next in last + 1..self.elements.len() {
            if self.leq_idx(last, next) {
                current.push(next);
                self.extend_chain(target_len, current, out);
                current.pop();
            }
        }
    }

    /// Chains grouped by dimension, up to the height of the poset.
    pub fn all_chains(&self) -> Vec<Vec<Chain>> {
        let mut by_dim = Vec::new();
        for dim in 0.. {
            let c = self.chains(dim);
            if c.is_empty() {
                break;
            }
            by_dim.push(c);
        }
        by_dim
    }

    /// Does the chain with bottom element `bottom` belong to the given
    /// subcomplex for the generator family `a`? `cone_idx` is the poset
    /// index of τ(A).
    pub fn bottom_in_subcomplex(
        &self,
        kind: SubcomplexKind,
        a: &GeneratorSet,
        cone_idx: usize,
        bottom: usize,
    ) -> bool {
        let in_supp = || {
            a.iter().all(|gen| {
                self.elements[bottom]
                    .part(gen.operative())
                    .map(|p| p.petals().contains(&gen.petal()))
                    .unwrap_or(false)
            })
        };
        match kind {
            SubcomplexKind::Support => in_supp(),
            SubcomplexKind::Cone => self.leq_idx(cone_idx, bottom),
            SubcomplexKind::Peripheral => self.leq_idx(cone_idx, bottom) && !in_supp(),
        }
    }

    /// Cells (chains of every dimension) of supp(A), C(A) or
    /// Peripheral(A). Errors when A is incompatible.
    pub fn subcomplex_cells(&self, a: &GeneratorSet, kind: SubcomplexKind) -> Result<Vec<Chain>> {
        let cone = cone_point(&self.graph, a)?;
        let cone_idx = self
            .index_of(&cone)
            .expect("cone point is a vertex type of the same graph");
        let mut cells = Vec::new();
        for chains in self.all_chains() {
            for c in chains {
                if self.bottom_in_subcomplex(kind, a, cone_idx, c.bottom()) {
                    cells.push(c);
                }
            }
        }
        Ok(cells)
    }

    /// DOT rendering of the Hasse diagram.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph whitehead_poset {\n  rankdir=BT;\n");
        for (i, t) in self.elements.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{i} (rank {})\"];\n", t.rank()));
        }
        for &(a, b) in &self.hasse {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Serialized poset document (schema 1).
#[derive(Serialize, Deserialize)]
pub struct PosetData {
    pub schema: u32,
    graph: GraphData,
    elements: Vec<Vec<ParsedPartition>>,
    pub ranks: Vec<usize>,
    pub rank_histogram: Vec<usize>,
    pub essential: Vec<bool>,
    pub essential_counts: Vec<usize>,
    pub hasse: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct ParsedPartition {
    operative: usize,
    petals: Vec<VertexSet>,
}

impl WhiteheadPoset {
    /// Serializable snapshot, including per-element essential flags.
    pub fn to_data(&self) -> PosetData {
        let essential: Vec<bool> = self
            .elements
            .par_iter()
            .map(|t| crate::essential::is_essential(&self.graph, t))
            .collect();
        let mut essential_counts = vec![0usize; self.rank_histogram.len()];
        for (i, &e) in essential.iter().enumerate() {
            if e {
                essential_counts[self.ranks[i]] += 1;
            }
        }
        PosetData {
            schema: 1,
            graph: self.graph.to_data(),
            elements: self
                .elements
                .iter()
                .map(|t| {
                    t.parts()
                        .iter()
                        .map(|p| ParsedPartition {
                            operative: p.operative(),
                            petals: p.petals().to_vec(),
                        })
                        .collect()
                })
                .collect(),
            ranks: self.ranks.clone(),
            rank_histogram: self.rank_histogram.clone(),
            essential,
            essential_counts,
            hasse: self.hasse.clone(),
        }
    }

    /// Rebuilds a poset from its serialized form, revalidating every
    /// partition and recomputing the order relation.
    pub fn from_data(data: &PosetData) -> Result<WhiteheadPoset> {
        let graph = Graph::from_data(&data.graph)?;
        let mut elements = Vec::with_capacity(data.elements.len());
        for raw in &data.elements {
            let parts = raw
                .iter()
                .map(|pp| BasedPartition::new(&graph, pp.operative, pp.petals.clone()))
                .collect::<Result<Vec<_>>>()?;
            elements.push(VertexType::new(&graph, parts)?);
        }
        let ranks: Vec<usize> = elements.iter().map(|t| t.rank()).collect();
        if ranks != data.ranks {
            return Err(Error::Cache("stored ranks disagree with elements".into()));
        }
        let n = elements.len();
        let mut leq = BitMatrix::new(n);
        let mut hasse = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || (ranks[i] < ranks[j] && elements[i].leq(&elements[j])) {
                    leq.set(i, j);
                    if i != j && ranks[j] == ranks[i] + 1 {
                        hasse.push((i, j));
                    }
                }
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(WhiteheadPoset {
            graph,
            elements,
            ranks,
            rank_histogram: data.rank_histogram.clone(),
            hasse,
            leq,
            index,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_data())?)
    }

    /// Stores the serialized poset under a content hash of the reduced
    /// graph inside `dir`.
    pub fn save_cache(&self, dir: &Path) -> Result<std::path::PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("wh-{}.json", self.graph.content_hash()));
        fs::write(&path, self.to_json()?)?;
        Ok(path)
    }

    /// Loads a cached poset for `g` if present. The stored graph must
    /// match exactly (labels are semantic and are never merged).
    pub fn load_cache(g: &Graph, dir: &Path) -> Result<Option<WhiteheadPoset>> {
        let path = dir.join(format!("wh-{}.json", g.content_hash()));
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let data: PosetData = serde_json::from_str(&text)?;
        let poset = WhiteheadPoset::from_data(&data)?;
        if poset.graph != *g {
            return Err(Error::Cache(format!(
                "cached poset at {} was built for a different graph",
                path.display()
            )));
        }
        Ok(Some(poset))
    }
}
