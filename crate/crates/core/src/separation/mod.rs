//! Separation in chain graphs and the independence models it induces.
//!
//! [`separated`] is the production decision procedure: a reachability search
//! over `(node, section entered through an arrowhead?, conditioning node seen
//! in the current section?)`. [`separated_bruteforce`] and [`separated_moral`]
//! decide the same relation from the route definition and from the
//! moralisation criterion respectively, and exist to cross-check it.

mod brute;
mod graphoid;
mod model;
mod moral;
mod oracle;
mod route;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{fmt_set, HybridGraph, NodeId, NodeSet};

pub use brute::separated_bruteforce;
pub use graphoid::{
    check_graphoid, check_graphoid_bounded, Axiom, GraphoidViolation, DEFAULT_GRAPHOID_MAX_NODES,
};
pub use model::{
    enumerate_model, enumerate_model_bounded, is_imap, is_imap_bounded, is_independent,
    IndependenceModel, DEFAULT_MAX_NODES,
};
pub use moral::separated_moral;
pub use oracle::{check_pairwise_block_recursive, GraphOracle, IndependenceOracle, ModelOracle};
pub use route::{is_active_route, Route, Section};

/// A statement `X ⊥ Y | Z` with `X`, `Y` nonempty and all three disjoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
}

impl Triple {
    pub fn new(x: NodeSet, y: NodeSet, z: NodeSet) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::Input(
                "separation sets X and Y must be nonempty".into(),
            ));
        }
        if !x.is_disjoint(&y) || !x.is_disjoint(&z) || !y.is_disjoint(&z) {
            return Err(Error::Input(format!(
                "sets {} {} {} are not pairwise disjoint",
                fmt_set(&x),
                fmt_set(&y),
                fmt_set(&z)
            )));
        }
        Ok(Triple { x, y, z })
    }

    pub fn pair(x: &NodeId, y: &NodeId, z: NodeSet) -> Result<Self> {
        Self::new([x.clone()].into(), [y.clone()].into(), z)
    }

    pub fn swapped(&self) -> Self {
        Triple {
            x: self.y.clone(),
            y: self.x.clone(),
            z: self.z.clone(),
        }
    }

    fn require_within(&self, nodes: &NodeSet) -> Result<()> {
        for n in self.x.iter().chain(&self.y).chain(&self.z) {
            if !nodes.contains(n) {
                return Err(Error::Input(format!("unknown node {n}")));
            }
        }
        Ok(())
    }
}

/// Index-based adjacency of one graph, reused across many separation queries.
#[derive(Debug, Clone)]
pub struct SeparationEngine {
    labels: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    undirected: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl SeparationEngine {
    /// Fails if `g` is not a chain graph: sections are only defined there.
    pub fn new(g: &HybridGraph) -> Result<Self> {
        g.require_chain_graph()?;
        let labels: Vec<NodeId> = g.nodes().iter().cloned().collect();
        let index: BTreeMap<NodeId, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let n = labels.len();
        let mut undirected = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for (a, b) in g.undirected_edges() {
            undirected[index[a]].push(index[b]);
            undirected[index[b]].push(index[a]);
        }
        for (a, b) in g.directed_edges() {
            children[index[a]].push(index[b]);
            parents[index[b]].push(index[a]);
        }
        Ok(SeparationEngine {
            labels,
            index,
            undirected,
            children,
            parents,
        })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.labels
    }

    fn mask(&self, set: &NodeSet) -> Vec<bool> {
        let mut mask = vec![false; self.labels.len()];
        for n in set {
            mask[self.index[n]] = true;
        }
        mask
    }

    pub fn separated(&self, t: &Triple) -> Result<bool> {
        let nodes: NodeSet = self.labels.iter().cloned().collect();
        t.require_within(&nodes)?;
        let sources: Vec<usize> = t.x.iter().map(|n| self.index[n]).collect();
        Ok(!self.reaches(&sources, &self.mask(&t.y), &self.mask(&t.z)))
    }

    /// Singleton query on indices into [`Self::nodes`]; the caller guarantees disjointness.
    pub(crate) fn separated_pair(&self, x: usize, y: usize, z_mask: &[bool]) -> bool {
        let mut target = vec![false; self.labels.len()];
        target[y] = true;
        !self.reaches(&[x], &target, z_mask)
    }

    /// Is some `target` node the endpoint of a Z-active route from a source?
    fn reaches(&self, sources: &[usize], target: &[bool], z: &[bool]) -> bool {
        // state = node * 4 + entered_by_head * 2 + z_seen
        let n = self.labels.len();
        let mut seen = vec![false; 4 * n];
        let mut stack = Vec::new();
        let push = |node: usize, head: bool, zs: bool, seen: &mut Vec<bool>, stack: &mut Vec<_>| {
            let id = node * 4 + (head as usize) * 2 + zs as usize;
            if !seen[id] {
                seen[id] = true;
                stack.push((node, head, zs));
            }
        };
        for &s in sources {
            push(s, false, z[s], &mut seen, &mut stack);
        }
        while let Some((u, head, zs)) = stack.pop() {
            if target[u] && !zs {
                return true;
            }
            for &w in &self.undirected[u] {
                push(w, head, zs || z[w], &mut seen, &mut stack);
            }
            // leaving through a tail: the section is a non-collider
            if !zs {
                for &w in &self.children[u] {
                    push(w, true, z[w], &mut seen, &mut stack);
                }
            }
            // leaving through an arrowhead: collider iff entered through one
            let ok = if head { zs } else { !zs };
            if ok {
                for &w in &self.parents[u] {
                    push(w, false, z[w], &mut seen, &mut stack);
                }
            }
        }
        false
    }
}

/// `X ⊥ Y | Z` in the chain graph `g`.
pub fn separated(g: &HybridGraph, t: &Triple) -> Result<bool> {
    SeparationEngine::new(g)?.separated(t)
}

/// Enumerates every subset of `items` as a bitmask-selected vector, by
/// ascending mask value.
#[cfg(test)]
pub(crate) fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    assert!(items.len() < 64, "subset enumeration limited to 63 items");
    (0u64..(1u64 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| v.clone())
            .collect()
    })
}
