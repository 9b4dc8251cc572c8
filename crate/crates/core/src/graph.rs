//! Full-form action graphs.
//!
//! An [`ActionGraph`] is a rooted tree whose edges point away from the root
//! and strictly increase the vertex label. Because of that ordering, sorting
//! vertices by descending label always yields a children-before-parents
//! traversal, which every bottom-up pass here relies on instead of recursion.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type Label = u32;

/// Upper bound on the number of vertices a full-form graph may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexBudget(pub usize);

impl VertexBudget {
    pub const DEFAULT: VertexBudget = VertexBudget(1_000_000);

    pub fn check(self, requested: &BigUint) -> Result<()> {
        if *requested > BigUint::from(self.0) {
            Err(Error::BudgetExceeded {
                requested: requested.clone(),
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for VertexBudget {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionGraph {
    generation: Label,
    root: VertexId,
    labels: Vec<Label>,
    parents: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
}

impl ActionGraph {
    /// `G_0`: one vertex labeled 0.
    pub fn singleton() -> Self {
        Self::single_vertex(0)
    }

    pub fn single_vertex(label: Label) -> Self {
        Self {
            generation: label,
            root: 0,
            labels: vec![label],
            parents: vec![None],
            children: vec![Vec::new()],
        }
    }

    /// Builds a graph from raw parts, checking the tree invariants.
    pub fn from_parts(
        generation: Label,
        labels: Vec<Label>,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::MalformedGraph("graph has no vertices".into()));
        }
        if n > VertexId::MAX as usize {
            return Err(Error::MalformedGraph("too many vertices".into()));
        }
        if let Some((v, l)) = labels.iter().enumerate().find(|(_, &l)| l > generation) {
            return Err(Error::MalformedGraph(format!(
                "vertex {v} has label {l} above generation {generation}"
            )));
        }
        let mut parents = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in edges {
            let (pu, cu) = (p as usize, c as usize);
            if pu >= n || cu >= n {
                return Err(Error::MalformedGraph(format!("edge {p}->{c} out of range")));
            }
            if labels[pu] >= labels[cu] {
                return Err(Error::MalformedGraph(format!(
                    "edge {p}->{c} does not increase the label ({} -> {})",
                    labels[pu], labels[cu]
                )));
            }
            if parents[cu].replace(p).is_some() {
                return Err(Error::MalformedGraph(format!("vertex {c} has two parents")));
            }
            children[pu].push(c);
        }
        let mut roots = parents.iter().enumerate().filter(|(_, p)| p.is_none());
        let root = match (roots.next(), roots.next()) {
            (Some((r, _)), None) => r as VertexId,
            (None, _) => return Err(Error::MalformedGraph("no root".into())),
            (Some((a, _)), Some((b, _))) => {
                return Err(Error::MalformedGraph(format!(
                    "vertices {a} and {b} both lack a parent"
                )))
            }
        };
        // one parentless vertex plus label-increasing edges already force a tree
        Ok(Self {
            generation,
            root,
            labels,
            parents,
            children,
        })
    }

    pub fn generation(&self) -> Label {
        self.generation
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parents[v as usize]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.labels.len() as VertexId
    }

    /// Parent-child pairs, grouped by parent id.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |p| self.children(p).iter().map(move |&c| (p, c)))
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v as usize].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.is_leaf(v))
    }

    pub(crate) fn set_generation(&mut self, generation: Label) {
        debug_assert!(self.labels.iter().all(|&l| l <= generation));
        self.generation = generation;
    }

    pub(crate) fn add_child(&mut self, parent: VertexId, label: Label) -> VertexId {
        debug_assert!(self.label(parent) < label);
        let id = self.labels.len() as VertexId;
        self.labels.push(label);
        self.parents.push(Some(parent));
        self.children.push(Vec::new());
        self.children[parent as usize].push(id);
        id
    }

    /// Vertices ordered so that every child precedes its parent.
    pub fn bottom_up_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = self.vertices().collect();
        order.sort_by(|&a, &b| self.label(b).cmp(&self.label(a)).then(a.cmp(&b)));
        order
    }

    pub fn count_label(&self, j: Label) -> usize {
        self.labels.iter().filter(|&&l| l == j).count()
    }

    /// `histogram[j]` is the number of vertices labeled `j`, for `j <= generation`.
    pub fn label_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.generation as usize + 1];
        for &l in &self.labels {
            hist[l as usize] += 1;
        }
        hist
    }

    /// Number of children of the root labeled `j`.
    pub fn root_adjacent_count(&self, j: Label) -> usize {
        self.children(self.root)
            .iter()
            .filter(|&&c| self.label(c) == j)
            .count()
    }

    /// Copy of the subtree hanging from `v`, labels untouched.
    pub fn subtree(&self, v: VertexId) -> ActionGraph {
        let mut out = ActionGraph::single_vertex(self.label(v));
        out.generation = self.generation;
        let mut stack = vec![(v, 0)];
        while let Some((old, new)) = stack.pop() {
            for &c in self.children(old) {
                let id = out.add_child(new, self.label(c));
                stack.push((c, id));
            }
        }
        out
    }

    /// Counts of directed paths from each vertex to a vertex labeled
    /// `generation`, by length, in one bottom-up pass.
    pub fn path_profile(&self) -> PathProfile {
        let mut counts: Vec<Vec<u64>> = vec![Vec::new(); self.vertex_count()];
        for v in self.bottom_up_order() {
            let mut row = vec![u64::from(self.label(v) == self.generation)];
            for &c in self.children(v) {
                let child = &counts[c as usize];
                if row.len() < child.len() + 1 {
                    row.resize(child.len() + 1, 0);
                }
                for (len, &n) in child.iter().enumerate() {
                    row[len + 1] += n;
                }
            }
            while row.len() > 1 && row.last() == Some(&0) {
                row.pop();
            }
            counts[v as usize] = row;
        }
        PathProfile { counts }
    }

    /// Deterministic encoding of the isomorphism class.
    ///
    /// Each vertex encodes as `(` delta child* `)`, children sorted
    /// bytewise, where delta is the label step from the parent. The root
    /// writes its own label, or 0 when `normalize_labels` is set, so that
    /// label-shifted copies encode identically.
    pub fn canonical_form(&self, normalize_labels: bool) -> Vec<u8> {
        let mut memo: Vec<Vec<u8>> = vec![Vec::new(); self.vertex_count()];
        for v in self.bottom_up_order() {
            let head = match self.parent(v) {
                Some(p) => self.label(v) - self.label(p),
                None if normalize_labels => 0,
                None => self.label(v),
            };
            let mut parts: Vec<Vec<u8>> = self
                .children(v)
                .iter()
                .map(|&c| std::mem::take(&mut memo[c as usize]))
                .collect();
            parts.sort_unstable();
            let mut enc = format!("({head}").into_bytes();
            for part in parts {
                enc.extend_from_slice(&part);
            }
            enc.push(b')');
            memo[v as usize] = enc;
        }
        std::mem::take(&mut memo[self.root as usize])
    }

    pub fn is_isomorphic(&self, other: &ActionGraph, allow_shift: bool) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.canonical_form(allow_shift) == other.canonical_form(allow_shift)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            generation: self.generation,
            vertices: self
                .vertices()
                .map(|id| VertexDocument {
                    id,
                    label: self.label(id),
                })
                .collect(),
            edges: self.edges().map(|(p, c)| [p, c]).collect(),
        }
    }

    /// Vertex ids in the document are remapped to positions in `vertices`.
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let mut index = HashMap::with_capacity(doc.vertices.len());
        for (pos, v) in doc.vertices.iter().enumerate() {
            if index.insert(v.id, pos as VertexId).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate vertex id {}", v.id)));
            }
        }
        let lookup = |id: VertexId| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::MalformedGraph(format!("edge mentions unknown vertex {id}")))
        };
        let edges = doc
            .edges
            .iter()
            .map(|&[p, c]| Ok((lookup(p)?, lookup(c)?)))
            .collect::<Result<Vec<_>>>()?;
        let labels = doc.vertices.iter().map(|v| v.label).collect();
        Self::from_parts(doc.generation, labels, &edges)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(json)?)
    }

    /// Graphviz rendering with the vertex label as node text.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph action_graph {\n");
        for v in self.vertices() {
            let _ = writeln!(out, "  n{v} [label=\"{}\"];", self.label(v));
        }
        for (p, c) in self.edges() {
            let _ = writeln!(out, "  n{p} -> n{c};");
        }
        out.push_str("}\n");
        out
    }
}

/// Path counts by length, per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathProfile {
    counts: Vec<Vec<u64>>,
}

impl PathProfile {
    /// Number of paths of length `len` from `v`.
    pub fn get(&self, v: VertexId, len: usize) -> u64 {
        self.counts[v as usize].get(len).copied().unwrap_or(0)
    }

    /// Counts for `v` indexed by length, without trailing zeros.
    pub fn paths(&self, v: VertexId) -> &[u64] {
        &self.counts[v as usize]
    }

    pub fn total(&self, v: VertexId) -> u64 {
        self.counts[v as usize].iter().sum()
    }
}

/// Serialized graph: `{generation, vertices: [{id, label}], edges: [[parent, child]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub generation: Label,
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<[VertexId; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDocument {
    pub id: VertexId,
    pub label: Label,
}

/// Identifier of a shift-normalized subtree shape within one [`ShapeInterner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShapeId(pub u32);

/// Hash-consing table for shift-normalized subtree shapes.
///
/// A shape is the sorted multiset of `(label step, child shape)` pairs, so
/// two vertices share a [`ShapeId`] exactly when their subtrees have equal
/// normalized canonical forms. One interner can classify many graphs, which
/// makes shapes comparable across graphs.
#[derive(Debug, Default)]
pub struct ShapeInterner {
    table: HashMap<Vec<(Label, ShapeId)>, ShapeId>,
}

impl ShapeInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Shape of each vertex's subtree, indexed by vertex id.
    pub fn classify(&mut self, g: &ActionGraph) -> Vec<ShapeId> {
        let mut shapes = vec![ShapeId(0); g.vertex_count()];
        for v in g.bottom_up_order() {
            let key = child_key(g, v, &shapes);
            let next = ShapeId(self.table.len() as u32);
            shapes[v as usize] = *self.table.entry(key).or_insert(next);
        }
        shapes
    }
}

/// Sorted `(label step, shape)` pairs of the children of `v`.
pub(crate) fn child_key(g: &ActionGraph, v: VertexId, shapes: &[ShapeId]) -> Vec<(Label, ShapeId)> {
    let mut key: Vec<_> = g
        .children(v)
        .iter()
        .map(|&c| (g.label(c) - g.label(v), shapes[c as usize]))
        .collect();
    key.sort_unstable();
    key
}
