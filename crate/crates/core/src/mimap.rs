//! Minimal independence maps relative to a chain.
//!
//! For every node `X` in block `k`, the boundary is the smallest `B` inside
//! the first `k` blocks such that `X` is independent of the rest of those
//! blocks given `B`. Boundary members in `X`'s own block become undirected
//! neighbours; members of earlier blocks become parents.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{fmt_set, Chain, HybridGraph, NodeId, NodeSet};
use crate::separation::{GraphOracle, IndependenceModel, IndependenceOracle, ModelOracle, Triple};

pub fn oracle_from_graph(g: &HybridGraph) -> Result<GraphOracle> {
    GraphOracle::new(g)
}

pub fn oracle_from_model(model: IndependenceModel) -> ModelOracle {
    ModelOracle::new(model)
}

/// The minimal independence map of `oracle` relative to `alpha`.
pub fn mi_map(oracle: &dyn IndependenceOracle, alpha: &Chain) -> Result<HybridGraph> {
    let order: Vec<NodeId> = alpha.nodes().into_iter().collect();
    mi_map_ordered(oracle, alpha, &order)
}

/// [`mi_map`] with the boundary searches run in the given node order.
/// The result does not depend on the order for graphoid oracles.
pub fn mi_map_ordered(
    oracle: &dyn IndependenceOracle,
    alpha: &Chain,
    order: &[NodeId],
) -> Result<HybridGraph> {
    let nodes = alpha.nodes();
    if oracle.universe() != &nodes {
        return Err(Error::Input(format!(
            "oracle covers {} but the chain covers {}",
            fmt_set(oracle.universe()),
            fmt_set(&nodes)
        )));
    }
    let ordered: NodeSet = order.iter().cloned().collect();
    if ordered != nodes || order.len() != nodes.len() {
        return Err(Error::Input(
            "processing order must list every node once".into(),
        ));
    }

    let mut boundary: BTreeMap<NodeId, NodeSet> = BTreeMap::new();
    for x in order {
        let k = alpha.block_index(x).expect("order matches the chain");
        boundary.insert(x.clone(), smallest_boundary(oracle, alpha, k, x)?);
    }

    let mut g = HybridGraph::with_nodes(nodes.iter().cloned());
    for (x, bd) in &boundary {
        let k = alpha.block_index(x).expect("covered");
        for y in bd {
            if alpha.block_index(y) == Some(k) {
                if !boundary[y].contains(x) {
                    return Err(not_graphoid(format!(
                        "{y} is in the boundary of {x} but not the reverse"
                    )));
                }
                if x < y {
                    g.insert_undirected(x, y)?;
                }
            } else {
                g.insert_directed(y, x)?;
            }
        }
    }
    if !g.is_chain_graph() || !g.is_consistent(alpha)? {
        return Err(Error::Invariant(
            "minimal map is not a chain graph consistent with the chain".into(),
        ));
    }
    Ok(g)
}

fn not_graphoid(detail: String) -> Error {
    Error::Domain(format!("oracle is not a graphoid: {detail}"))
}

fn smallest_boundary(
    oracle: &dyn IndependenceOracle,
    alpha: &Chain,
    k: usize,
    x: &NodeId,
) -> Result<NodeSet> {
    let mut prefix = alpha.prefix(k);
    prefix.remove(x);
    let single: NodeSet = [x.clone()].into();
    for size in 0..=prefix.len() {
        let mut found: Vec<NodeSet> = Vec::new();
        for b in prefix.iter().cloned().combinations(size) {
            let b: NodeSet = b.into_iter().collect();
            let rest: NodeSet = prefix.difference(&b).cloned().collect();
            let holds = rest.is_empty()
                || oracle.independent(&Triple::new(single.clone(), rest, b.clone())?)?;
            if holds {
                found.push(b);
            }
        }
        match found.len() {
            0 => continue,
            1 => return Ok(found.pop().expect("one")),
            _ => {
                return Err(not_graphoid(format!(
                    "{x} has several smallest boundaries: {} and {}",
                    fmt_set(&found[0]),
                    fmt_set(&found[1])
                )))
            }
        }
    }
    unreachable!("the full prefix always qualifies")
}
