use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::Triple;
use crate::error::Result;
use crate::graph::{HybridGraph, NodeId, NodeSet};

/// Decides separation with the moralisation criterion: restrict to the
/// smallest anterior set containing `X ∪ Y ∪ Z`, marry the parents of each
/// component, drop orientations and test plain vertex separation by `Z`.
pub fn separated_moral(g: &HybridGraph, t: &Triple) -> Result<bool> {
    g.require_chain_graph()?;
    t.require_within(g.nodes())?;

    let mut anterior: NodeSet = t.x.iter().chain(&t.y).chain(&t.z).cloned().collect();
    let mut queue: VecDeque<NodeId> = anterior.iter().cloned().collect();
    while let Some(n) = queue.pop_front() {
        for m in g.boundary(&n)? {
            if anterior.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }

    let sub = g.induced(&anterior);
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = anterior
        .iter()
        .map(|n| (n.clone(), BTreeSet::new()))
        .collect();
    let mut link = |a: &NodeId, b: &NodeId| {
        adj.get_mut(a).unwrap().insert(b.clone());
        adj.get_mut(b).unwrap().insert(a.clone());
    };
    for (a, b) in sub.directed_edges().chain(sub.undirected_edges()) {
        link(a, b);
    }
    for comp in sub.components() {
        let parents: Vec<NodeId> = sub.parents(&comp)?.into_iter().collect();
        for (i, a) in parents.iter().enumerate() {
            for b in &parents[i + 1..] {
                link(a, b);
            }
        }
    }

    let mut seen: NodeSet = t.x.clone();
    let mut queue: VecDeque<NodeId> = t.x.iter().cloned().collect();
    while let Some(n) = queue.pop_front() {
        if t.y.contains(&n) {
            return Ok(false);
        }
        for m in &adj[&n] {
            if !t.z.contains(m) && seen.insert(m.clone()) {
                queue.push_back(m.clone());
            }
        }
    }
    Ok(true)
}
