//! Constructions of `G_{n+1}` from `G_n`.
//!
//! Every step keeps the vertex ids of `G_n` and appends the new vertices,
//! all labeled `n + 1`, grouped by parent id in ascending order. Builds are
//! therefore reproducible byte for byte.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::admissibility::ZResult;
use crate::error::{Error, Result};
use crate::graph::{ActionGraph, Label, VertexBudget, VertexId};
use crate::sequences::{binomial, Family};

/// The historical rule-based constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Catalan,
    Fuss { k: u64 },
    /// Super Catalan numbers with `m = 0`.
    Super,
}

impl Rule {
    /// The sequence whose terms count the vertices added at each step.
    pub fn family(self) -> Family {
        match self {
            Rule::Catalan => Family::Catalan,
            Rule::Fuss { k } => Family::Fuss { k },
            Rule::Super => Family::Super { m: 0 },
        }
    }

    pub fn step(self, g: &ActionGraph, budget: VertexBudget) -> Result<ActionGraph> {
        match self {
            Rule::Catalan => step_catalan(g, budget),
            Rule::Fuss { k } => step_fuss(g, k, budget),
            Rule::Super => step_super(g, budget),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Catalan => f.write_str("catalan"),
            Rule::Fuss { k } => write!(f, "fuss:{k}"),
            Rule::Super => f.write_str("super"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().parse::<Family>() {
            Ok(Family::Catalan) => Ok(Rule::Catalan),
            Ok(Family::Fuss { k }) => Ok(Rule::Fuss { k }),
            Ok(Family::Super { m: 0 }) => Ok(Rule::Super),
            Ok(Family::Super { m }) => Err(Error::InvalidParameter(format!(
                "no construction rule for super Catalan numbers with m = {m}"
            ))),
            Ok(Family::Custom(_)) => Err(Error::UnknownFamily(format!(
                "`{s}` names a sequence, not a construction rule"
            ))),
            Err(e) => Err(e),
        }
    }
}

/// Attaches `counts[v]` new children labeled `generation + 1` to each `v`.
fn attach(g: &ActionGraph, counts: &[BigUint], budget: VertexBudget) -> Result<ActionGraph> {
    let added: BigUint = counts.iter().sum();
    budget.check(&(added + g.vertex_count()))?;
    let next: Label = g.generation() + 1;
    let mut out = g.clone();
    out.set_generation(next);
    for (v, count) in counts.iter().enumerate() {
        let count = count.to_u64().expect("bounded by the budget");
        for _ in 0..count {
            out.add_child(v as VertexId, next);
        }
    }
    Ok(out)
}

/// One step of the generic construction: every vertex labeled `m` gains
/// `z_{n+1-m}` children labeled `n + 1`.
///
/// Each vertex labeled `m` roots a copy of `G_{n-m}` shifted by `m`, so
/// this grows every such copy into `G_{n+1-m}` and adds `z_{n+1}` fresh
/// leaves at the root. `z[i - 1]` holds `z_i` and must reach `z_{n+1}`.
pub fn step_generic(g: &ActionGraph, z: &[BigUint], budget: VertexBudget) -> Result<ActionGraph> {
    let next = g.generation() as usize + 1;
    if z.len() < next {
        return Err(Error::InvalidParameter(format!(
            "z_{next} is needed to build G_{next}"
        )));
    }
    let counts: Vec<BigUint> = g
        .labels()
        .iter()
        .map(|&m| z[next - m as usize - 1].clone())
        .collect();
    attach(g, &counts, budget)
}

/// `G_0..=G_upto` by the generic construction driven by `z`.
pub fn build_generic(z: &ZResult, upto: usize, budget: VertexBudget) -> Result<Vec<ActionGraph>> {
    let z = z.positive_prefix(upto)?;
    let mut graphs = vec![ActionGraph::singleton()];
    for n in 0..upto {
        let next = step_generic(&graphs[n], &z, budget)?;
        debug_assert_eq!(
            BigUint::from(next.root_adjacent_count(n as Label + 1)),
            z[n]
        );
        graphs.push(next);
    }
    Ok(graphs)
}

/// Catalan step: one child under every leaf and one under the source of
/// every non-trivial path ending at a vertex labeled `n`.
pub fn step_catalan(g: &ActionGraph, budget: VertexBudget) -> Result<ActionGraph> {
    if let Some(leaf) = g.leaves().find(|&v| g.label(v) != g.generation()) {
        return Err(Error::MalformedGraph(format!(
            "leaf {leaf} is labeled {} in a generation-{} graph",
            g.label(leaf),
            g.generation()
        )));
    }
    let profile = g.path_profile();
    let counts: Vec<BigUint> = g
        .vertices()
        .map(|v| {
            let nontrivial: u64 = profile.paths(v).iter().skip(1).sum();
            BigUint::from(nontrivial + u64::from(g.is_leaf(v)))
        })
        .collect();
    attach(g, &counts, budget)
}

/// Fuss-Catalan step: every path of length `l` from `v` to a vertex labeled
/// `n` gives `v` `binom(l + k - 1, l)` new children.
pub fn step_fuss(g: &ActionGraph, k: u64, budget: VertexBudget) -> Result<ActionGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("fuss rule needs k >= 1".into()));
    }
    let profile = g.path_profile();
    let weights: Vec<BigUint> = (0..=g.generation() as u64)
        .map(|len| binomial(len + k - 1, len))
        .collect();
    let counts: Vec<BigUint> = g
        .vertices()
        .map(|v| {
            profile
                .paths(v)
                .iter()
                .zip(&weights)
                .map(|(&p, w)| w * p)
                .sum()
        })
        .collect();
    attach(g, &counts, budget)
}

/// Super Catalan (`m = 0`) step: every path of length `l` from `v` to a
/// vertex labeled `n` gives `v` `2 / 2^l` new children. The per-length
/// totals `p(v, l) * 2 / 2^l` must be integers.
pub fn step_super(g: &ActionGraph, budget: VertexBudget) -> Result<ActionGraph> {
    let profile = g.path_profile();
    let mut counts = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let mut total = BigUint::zero();
        for (len, &p) in profile.paths(v).iter().enumerate() {
            if p == 0 {
                continue;
            }
            let doubled = BigUint::from(p) << 1u32;
            if doubled.trailing_zeros().unwrap_or(0) < len as u64 {
                return Err(Error::IntegralityViolation {
                    vertex: v,
                    path_length: len,
                    paths: p,
                });
            }
            total += doubled >> len;
        }
        counts.push(total);
    }
    attach(g, &counts, budget)
}

/// Output of [`build_rule`].
#[derive(Debug, Clone)]
pub struct RuleBuild {
    pub rule: Rule,
    /// `G_0..=G_upto`.
    pub graphs: Vec<ActionGraph>,
    /// Vertices added at each step; `added[0]` counts `G_0` itself.
    pub added: Vec<u64>,
}

/// Iterates the rule's step from `G_0` up to `G_upto`.
pub fn build_rule(rule: Rule, upto: usize, budget: VertexBudget) -> Result<RuleBuild> {
    if let Rule::Fuss { k: 0 } = rule {
        return Err(Error::InvalidParameter("fuss rule needs k >= 1".into()));
    }
    let mut graphs = vec![ActionGraph::singleton()];
    let mut added = vec![1];
    for n in 0..upto {
        let next = rule.step(&graphs[n], budget)?;
        added.push((next.vertex_count() - graphs[n].vertex_count()) as u64);
        graphs.push(next);
    }
    Ok(RuleBuild {
        rule,
        graphs,
        added,
    })
}
