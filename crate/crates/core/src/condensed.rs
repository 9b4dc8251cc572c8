//! Condensed notation: sibling subtrees that are identical (same labels,
//! same shape) collapse into one edge carrying a multiplier `×m`.
//!
//! A condensed node stands for as many full-form vertices as the product of
//! the multipliers on its root path.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::admissibility::ZResult;
use crate::error::{Error, Result};
use crate::graph::{ActionGraph, Label, ShapeInterner, VertexBudget, VertexId};

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedEdge {
    pub multiplier: BigUint,
    pub target: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedNode {
    pub label: Label,
    pub children: Vec<CondensedEdge>,
}

/// Rooted tree with multiplier edges. Node 0 is the root and every child
/// has a larger id than its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedGraph {
    generation: Label,
    nodes: Vec<CondensedNode>,
}

impl CondensedGraph {
    pub fn generation(&self) -> Label {
        self.generation
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &CondensedNode {
        &self.nodes[id as usize]
    }

    fn push(&mut self, label: Label) -> NodeId {
        self.nodes.push(CondensedNode {
            label,
            children: Vec::new(),
        });
        (self.nodes.len() - 1) as NodeId
    }

    /// Calls `visit(node, represented)` for every node whose label is at
    /// most `max_label`, where `represented` is the product of multipliers
    /// on the root path. Labels grow along edges, so larger-labeled
    /// subtrees are skipped whole.
    fn walk(&self, max_label: Label, mut visit: impl FnMut(NodeId, &BigUint)) {
        let mut stack = vec![(0 as NodeId, BigUint::one())];
        while let Some((id, weight)) = stack.pop() {
            let node = self.node(id);
            if node.label > max_label {
                continue;
            }
            visit(id, &weight);
            for edge in &node.children {
                stack.push((edge.target, &weight * &edge.multiplier));
            }
        }
    }

    /// Number of full-form vertices labeled `j`, computed without expansion.
    pub fn count_label(&self, j: Label) -> BigUint {
        let mut total = BigUint::zero();
        self.walk(j, |id, w| {
            if self.node(id).label == j {
                total += w;
            }
        });
        total
    }

    /// Number of vertices of the full form.
    pub fn represented_vertices(&self) -> BigUint {
        let mut total = BigUint::zero();
        self.walk(Label::MAX, |_, w| total += w);
        total
    }

    /// Root edges as `(child label, multiplier)` pairs.
    pub fn root_edges(&self) -> Vec<(Label, BigUint)> {
        self.node(0)
            .children
            .iter()
            .map(|e| (self.node(e.target).label, e.multiplier.clone()))
            .collect()
    }

    /// Per-node encodings, built bottom-up. A node writes `(` delta, then
    /// its sorted `x<m><child>` entries, then `)`.
    fn encodings(&self, normalize_labels: bool) -> Vec<Vec<u8>> {
        let mut enc: Vec<Vec<u8>> = vec![Vec::new(); self.nodes.len()];
        let mut parent_label = vec![None; self.nodes.len()];
        for node in &self.nodes {
            for e in &node.children {
                parent_label[e.target as usize] = Some(node.label);
            }
        }
        for id in (0..self.nodes.len()).rev() {
            let node = &self.nodes[id];
            let head = match parent_label[id] {
                Some(p) => node.label - p,
                None if normalize_labels => 0,
                None => node.label,
            };
            let mut parts: Vec<Vec<u8>> = node
                .children
                .iter()
                .map(|e| {
                    let mut part = format!("x{}", e.multiplier).into_bytes();
                    part.extend_from_slice(&enc[e.target as usize]);
                    part
                })
                .collect();
            parts.sort_unstable();
            let mut out = format!("({head}").into_bytes();
            for part in parts {
                out.extend_from_slice(&part);
            }
            out.push(b')');
            enc[id] = out;
        }
        enc
    }

    /// Deterministic encoding, independent of edge order.
    pub fn canonical_form(&self, normalize_labels: bool) -> Vec<u8> {
        self.encodings(normalize_labels).swap_remove(0)
    }

    /// No node has two child edges leading to identical subtrees.
    pub fn is_maximally_grouped(&self) -> bool {
        let enc = self.encodings(false);
        self.nodes.iter().all(|node| {
            let mut seen: Vec<&[u8]> = node
                .children
                .iter()
                .map(|e| enc[e.target as usize].as_slice())
                .collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn to_document(&self) -> CondensedDocument {
        CondensedDocument {
            generation: Some(self.generation),
            root: self.node_document(0),
        }
    }

    fn node_document(&self, id: NodeId) -> NodeDocument {
        let node = self.node(id);
        NodeDocument {
            label: node.label,
            children: node
                .children
                .iter()
                .map(|e| EdgeDocument {
                    multiplier: e.multiplier.clone(),
                    node: self.node_document(e.target),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &CondensedDocument) -> Result<Self> {
        if let Some(g) = doc.generation {
            validate_labels(&doc.root, g)?;
        }
        let generation = doc.generation.unwrap_or_else(|| max_label(&doc.root));
        let mut out = CondensedGraph {
            generation,
            nodes: Vec::new(),
        };
        // pre-order numbering, matching the document's nesting
        let mut stack: Vec<(&NodeDocument, Option<(NodeId, &BigUint)>)> = vec![(&doc.root, None)];
        while let Some((src, parent)) = stack.pop() {
            let id = out.push(src.label);
            if let Some((p, multiplier)) = parent {
                out.nodes[p as usize].children.push(CondensedEdge {
                    multiplier: multiplier.clone(),
                    target: id,
                });
            }
            for edge in src.children.iter().rev() {
                if edge.multiplier.is_zero() {
                    return Err(Error::MalformedGraph("zero multiplier".into()));
                }
                if edge.node.label <= src.label {
                    return Err(Error::MalformedGraph(format!(
                        "edge {} -> {} does not increase the label",
                        src.label, edge.node.label
                    )));
                }
                stack.push((&edge.node, Some((id, &edge.multiplier))));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(json)?)
    }

    /// Graphviz rendering; multipliers become edge labels `×m`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph condensed_action_graph {\n");
        for (id, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", node.label);
        }
        for (id, node) in self.nodes.iter().enumerate() {
            for e in &node.children {
                let _ = writeln!(out, "  n{id} -> n{} [label=\"×{}\"];", e.target, e.multiplier);
            }
        }
        out.push_str("}\n");
        out
    }

    /// Full form. Fails if it would exceed `budget` vertices.
    pub fn expand(&self, budget: VertexBudget) -> Result<ActionGraph> {
        budget.check(&self.represented_vertices())?;
        let mut labels = vec![self.node(0).label];
        let mut edges = Vec::new();
        let mut queue = std::collections::VecDeque::from([(0 as NodeId, 0 as VertexId)]);
        while let Some((id, v)) = queue.pop_front() {
            for e in &self.node(id).children {
                let label = self.node(e.target).label;
                let mut copies = BigUint::zero();
                while copies < e.multiplier {
                    let child = labels.len() as VertexId;
                    labels.push(label);
                    edges.push((v, child));
                    queue.push_back((e.target, child));
                    copies += 1u32;
                }
            }
        }
        ActionGraph::from_parts(self.generation, labels, &edges)
    }
}

fn max_label(node: &NodeDocument) -> Label {
    node.children
        .iter()
        .map(|e| max_label(&e.node))
        .fold(node.label, Label::max)
}

fn validate_labels(node: &NodeDocument, generation: Label) -> Result<()> {
    if node.label > generation {
        return Err(Error::MalformedGraph(format!(
            "label {} above generation {generation}",
            node.label
        )));
    }
    node.children
        .iter()
        .try_for_each(|e| validate_labels(&e.node, generation))
}

/// Groups identical sibling subtrees of `g` under multiplier edges.
pub fn condense(g: &ActionGraph) -> CondensedGraph {
    let shapes = ShapeInterner::new().classify(g);
    let mut out = CondensedGraph {
        generation: g.generation(),
        nodes: Vec::new(),
    };
    // pre-order numbering, as in `from_document`
    let mut stack: Vec<(VertexId, Option<(NodeId, u64)>)> = vec![(g.root(), None)];
    while let Some((v, parent)) = stack.pop() {
        let id = out.push(g.label(v));
        if let Some((p, count)) = parent {
            out.nodes[p as usize].children.push(CondensedEdge {
                multiplier: BigUint::from(count),
                target: id,
            });
        }
        // siblings group by (label, shape), kept in order of first appearance
        let mut groups: Vec<(VertexId, u64)> = Vec::new();
        let mut slot: HashMap<(Label, u32), usize> = HashMap::new();
        for &c in g.children(v) {
            let key = (g.label(c), shapes[c as usize].0);
            match slot.get(&key) {
                Some(&i) => groups[i].1 += 1,
                None => {
                    slot.insert(key, groups.len());
                    groups.push((c, 1));
                }
            }
        }
        for (rep, count) in groups.into_iter().rev() {
            stack.push((rep, Some((id, count))));
        }
    }
    out
}

/// Condensed `G_upto` built directly: the root carries, for each
/// `1 <= i <= upto`, an edge `×z_i` to a copy of condensed `G_{upto-i}`
/// with every label raised by `i`.
pub fn build_generic_condensed(z: &ZResult, upto: usize) -> Result<CondensedGraph> {
    let z = z.positive_prefix(upto)?;
    let mut out = CondensedGraph {
        generation: upto as Label,
        nodes: Vec::new(),
    };
    graft(&mut out, &z, 0, upto);
    Ok(out)
}

fn graft(out: &mut CondensedGraph, z: &[BigUint], base: usize, depth: usize) -> NodeId {
    let id = out.push(base as Label);
    for i in 1..=depth {
        let child = graft(out, z, base + i, depth - i);
        out.nodes[id as usize].children.push(CondensedEdge {
            multiplier: z[i - 1].clone(),
            target: child,
        });
    }
    id
}

/// Serialized condensed graph: `{generation, label, children: [{multiplier, node}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondensedDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<Label>,
    #[serde(flatten)]
    pub root: NodeDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub label: Label,
    pub children: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument {
    #[serde(with = "crate::decimal::one")]
    pub multiplier: BigUint,
    pub node: NodeDocument,
}
