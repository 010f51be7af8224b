//! Hybrid graphs, chains and the structural notions built on them.
//!
//! A [`HybridGraph`] carries both directed and undirected edges. Being a chain
//! graph is a checked property ([`HybridGraph::is_chain_graph`]), not a
//! separate type, because the transformation operators pass through graphs
//! whose chain-graph status is exactly what a trace verifier has to decide.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node label. Ordered lexicographically, which is the tie-break used by every
/// deterministic choice in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeId(String);

impl NodeId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::Input("empty node label".into()));
        }
        if label.chars().any(|c| c.is_whitespace() || c == '#') {
            return Err(Error::Input(format!("invalid node label {label:?}")));
        }
        if label == "->" || label == "--" {
            return Err(Error::Input(format!(
                "reserved token {label:?} used as node label"
            )));
        }
        Ok(NodeId(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for NodeId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        NodeId::new(value)
    }
}

impl From<NodeId> for String {
    fn from(value: NodeId) -> Self {
        value.0
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NodeId::new(s)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type NodeSet = BTreeSet<NodeId>;

/// Builds a node set from labels.
pub fn node_set<I, S>(labels: I) -> Result<NodeSet>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    labels.into_iter().map(NodeId::new).collect()
}

/// Renders a node set as `{A,B,C}`.
pub fn fmt_set(set: &NodeSet) -> String {
    let labels: Vec<&str> = set.iter().map(NodeId::as_str).collect();
    format!("{{{}}}", labels.join(","))
}

/// How the edge between two nodes looks when read from the first node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// `a -> b`
    Forward,
    /// `a <- b`
    Backward,
    /// `a -- b`
    Undirected,
}

fn ordered(a: &NodeId, b: &NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// A graph with directed and undirected edges over a finite node set.
///
/// At most one edge joins any pair of nodes and there are no self-loops;
/// both are enforced on every construction path. Values are immutable from
/// the outside: every edit returns a new graph.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct HybridGraph {
    nodes: NodeSet,
    directed: BTreeSet<(NodeId, NodeId)>,
    // stored with the smaller label first
    undirected: BTreeSet<(NodeId, NodeId)>,
}

impl fmt::Debug for HybridGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (a, b) in &self.directed {
            parts.push(format!("{a}->{b}"));
        }
        for (a, b) in &self.undirected {
            parts.push(format!("{a}--{b}"));
        }
        let isolated: Vec<String> = self
            .nodes
            .iter()
            .filter(|n| self.boundary_and_children(n).is_empty())
            .map(|n| n.to_string())
            .collect();
        if !isolated.is_empty() {
            parts.push(format!("isolated {}", isolated.join(",")));
        }
        write!(f, "HybridGraph[{}]", parts.join(", "))
    }
}

impl HybridGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Edgeless graph over the given nodes.
    pub fn with_nodes<I: IntoIterator<Item = NodeId>>(nodes: I) -> Self {
        HybridGraph {
            nodes: nodes.into_iter().collect(),
            ..Self::default()
        }
    }

    /// Builds a graph from explicit edge lists. Endpoints are added to the
    /// node set implicitly.
    pub fn from_edges<N, D, U>(nodes: N, directed: D, undirected: U) -> Result<Self>
    where
        N: IntoIterator<Item = NodeId>,
        D: IntoIterator<Item = (NodeId, NodeId)>,
        U: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::with_nodes(nodes);
        for (a, b) in directed {
            g.nodes.insert(a.clone());
            g.nodes.insert(b.clone());
            g.insert_directed(&a, &b)?;
        }
        for (a, b) in undirected {
            g.nodes.insert(a.clone());
            g.nodes.insert(b.clone());
            g.insert_undirected(&a, &b)?;
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.directed.len() + self.undirected.len()
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.nodes.contains(node)
    }

    /// Directed edges as `(tail, head)` in label order.
    pub fn directed_edges(&self) -> impl Iterator<Item = &(NodeId, NodeId)> + '_ {
        self.directed.iter()
    }

    /// Undirected edges with the smaller label first.
    pub fn undirected_edges(&self) -> impl Iterator<Item = &(NodeId, NodeId)> + '_ {
        self.undirected.iter()
    }

    pub fn has_directed(&self, tail: &NodeId, head: &NodeId) -> bool {
        self.directed.contains(&(tail.clone(), head.clone()))
    }

    pub fn has_undirected(&self, a: &NodeId, b: &NodeId) -> bool {
        self.undirected.contains(&ordered(a, b))
    }

    pub fn edge(&self, a: &NodeId, b: &NodeId) -> Option<EdgeKind> {
        if self.has_directed(a, b) {
            Some(EdgeKind::Forward)
        } else if self.has_directed(b, a) {
            Some(EdgeKind::Backward)
        } else if self.has_undirected(a, b) {
            Some(EdgeKind::Undirected)
        } else {
            None
        }
    }

    pub fn adjacent(&self, a: &NodeId, b: &NodeId) -> bool {
        self.edge(a, b).is_some()
    }

    pub(crate) fn require_node(&self, node: &NodeId) -> Result<()> {
        if self.nodes.contains(node) {
            Ok(())
        } else {
            Err(Error::Input(format!("unknown node {node}")))
        }
    }

    pub(crate) fn require_subset(&self, set: &NodeSet) -> Result<()> {
        set.iter().try_for_each(|n| self.require_node(n))
    }

    fn check_new_edge(&self, a: &NodeId, b: &NodeId) -> Result<()> {
        self.require_node(a)?;
        self.require_node(b)?;
        if a == b {
            return Err(Error::Input(format!("self-loop at {a}")));
        }
        if let Some(kind) = self.edge(a, b) {
            let existing = match kind {
                EdgeKind::Forward => format!("{a} -> {b}"),
                EdgeKind::Backward => format!("{b} -> {a}"),
                EdgeKind::Undirected => format!("{a} -- {b}"),
            };
            return Err(Error::Input(format!(
                "nodes {a} and {b} are already joined by {existing}"
            )));
        }
        Ok(())
    }

    // Re-inserting an identical edge is a no-op; any other clash is rejected.
    pub(crate) fn insert_directed(&mut self, tail: &NodeId, head: &NodeId) -> Result<()> {
        if self.has_directed(tail, head) {
            return Ok(());
        }
        self.check_new_edge(tail, head)?;
        self.directed.insert((tail.clone(), head.clone()));
        Ok(())
    }

    pub(crate) fn insert_undirected(&mut self, a: &NodeId, b: &NodeId) -> Result<()> {
        if self.has_undirected(a, b) {
            return Ok(());
        }
        self.check_new_edge(a, b)?;
        self.undirected.insert(ordered(a, b));
        Ok(())
    }

    pub(crate) fn remove_directed(&mut self, tail: &NodeId, head: &NodeId) -> bool {
        self.directed.remove(&(tail.clone(), head.clone()))
    }

    pub(crate) fn remove_undirected(&mut self, a: &NodeId, b: &NodeId) -> bool {
        self.undirected.remove(&ordered(a, b))
    }

    pub fn with_node(&self, node: NodeId) -> Self {
        let mut g = self.clone();
        g.nodes.insert(node);
        g
    }

    /// Copy of the graph with `tail -> head` added. Fails if the pair is
    /// already joined by a different edge.
    pub fn with_directed(&self, tail: &NodeId, head: &NodeId) -> Result<Self> {
        let mut g = self.clone();
        g.insert_directed(tail, head)?;
        Ok(g)
    }

    pub fn with_undirected(&self, a: &NodeId, b: &NodeId) -> Result<Self> {
        let mut g = self.clone();
        g.insert_undirected(a, b)?;
        Ok(g)
    }

    /// Copy of the graph without whatever edge joins `a` and `b`.
    pub fn without_edge(&self, a: &NodeId, b: &NodeId) -> Self {
        let mut g = self.clone();
        g.remove_directed(a, b);
        g.remove_directed(b, a);
        g.remove_undirected(a, b);
        g
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &NodeSet) -> Self {
        HybridGraph {
            nodes: self.nodes.intersection(keep).cloned().collect(),
            directed: self
                .directed
                .iter()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .cloned()
                .collect(),
            undirected: self
                .undirected
                .iter()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .cloned()
                .collect(),
        }
    }

    /// True when every edge of `self` is also an edge of `other`, with the same type.
    pub fn is_subgraph_of(&self, other: &HybridGraph) -> bool {
        self.nodes.is_subset(&other.nodes)
            && self.directed.is_subset(&other.directed)
            && self.undirected.is_subset(&other.undirected)
    }

    fn boundary_and_children(&self, node: &NodeId) -> NodeSet {
        let mut out = NodeSet::new();
        for (a, b) in self.directed.iter().chain(self.undirected.iter()) {
            if a == node {
                out.insert(b.clone());
            } else if b == node {
                out.insert(a.clone());
            }
        }
        out
    }

    /// `Pa(Y)`: tails of directed edges whose head lies in `set`. May intersect `set`.
    pub fn parents(&self, set: &NodeSet) -> Result<NodeSet> {
        self.require_subset(set)?;
        Ok(self
            .directed
            .iter()
            .filter(|(_, head)| set.contains(head))
            .map(|(tail, _)| tail.clone())
            .collect())
    }

    /// Heads of directed edges whose tail lies in `set`.
    pub fn children(&self, set: &NodeSet) -> Result<NodeSet> {
        self.require_subset(set)?;
        Ok(self
            .directed
            .iter()
            .filter(|(tail, _)| set.contains(tail))
            .map(|(_, head)| head.clone())
            .collect())
    }

    /// `Ne(Y)`: undirected neighbours of any member of `set`.
    pub fn neighbors(&self, set: &NodeSet) -> Result<NodeSet> {
        self.require_subset(set)?;
        let mut out = NodeSet::new();
        for (a, b) in &self.undirected {
            if set.contains(a) {
                out.insert(b.clone());
            }
            if set.contains(b) {
                out.insert(a.clone());
            }
        }
        Ok(out)
    }

    /// `Bd(X) = Pa(X) ∪ Ne(X)`.
    pub fn boundary(&self, node: &NodeId) -> Result<NodeSet> {
        let single = NodeSet::from([node.clone()]);
        let mut out = self.parents(&single)?;
        out.extend(self.neighbors(&single)?);
        Ok(out)
    }

    fn undirected_adjacency(&self) -> BTreeMap<&NodeId, Vec<&NodeId>> {
        let mut adj: BTreeMap<&NodeId, Vec<&NodeId>> =
            self.nodes.iter().map(|n| (n, Vec::new())).collect();
        for (a, b) in &self.undirected {
            adj.get_mut(a).expect("endpoint in node set").push(b);
            adj.get_mut(b).expect("endpoint in node set").push(a);
        }
        adj
    }

    /// Maximal sets connected by undirected routes, sorted by smallest member.
    pub fn components(&self) -> Vec<NodeSet> {
        let adj = self.undirected_adjacency();
        let mut seen = NodeSet::new();
        let mut out = Vec::new();
        // BTreeSet iteration visits seeds in label order, so the output is
        // already sorted by smallest member.
        for seed in &self.nodes {
            if seen.contains(seed) {
                continue;
            }
            let mut comp = NodeSet::new();
            let mut queue = VecDeque::from([seed]);
            seen.insert(seed.clone());
            while let Some(n) = queue.pop_front() {
                comp.insert(n.clone());
                for &m in &adj[n] {
                    if seen.insert(m.clone()) {
                        queue.push_back(m);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// The component containing `node`.
    pub fn component_of(&self, node: &NodeId) -> Result<NodeSet> {
        self.require_node(node)?;
        Ok(self
            .components()
            .into_iter()
            .find(|c| c.contains(node))
            .expect("components partition the node set"))
    }

    /// Topological order of the component quotient digraph, `None` when it has
    /// a cycle or a directed edge inside a component.
    fn component_order(&self) -> Option<Vec<NodeSet>> {
        let comps = self.components();
        let index: BTreeMap<&NodeId, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |n| (n, i)))
            .collect();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comps.len()];
        for (a, b) in &self.directed {
            let (ca, cb) = (index[a], index[b]);
            if ca == cb {
                return None;
            }
            succ[ca].insert(cb);
        }
        let mut indeg = vec![0usize; comps.len()];
        for s in &succ {
            for &t in s {
                indeg[t] += 1;
            }
        }
        // components are indexed by smallest label, so the smallest ready index
        // is the label tie-break
        let mut ready: BTreeSet<usize> = (0..comps.len()).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(comps.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &t in &succ[i] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    ready.insert(t);
                }
            }
        }
        if order.len() != comps.len() {
            return None;
        }
        let mut comps: Vec<Option<NodeSet>> = comps.into_iter().map(Some).collect();
        Some(
            order
                .into_iter()
                .map(|i| comps[i].take().unwrap())
                .collect(),
        )
    }

    /// True iff some chain is consistent with the graph.
    pub fn is_chain_graph(&self) -> bool {
        self.component_order().is_some()
    }

    pub(crate) fn require_chain_graph(&self) -> Result<()> {
        if self.is_chain_graph() {
            Ok(())
        } else {
            Err(Error::Domain("graph is not a chain graph".into()))
        }
    }

    /// One block per component, in topological order of the component
    /// quotient with ties broken by smallest label.
    pub fn consistent_chain(&self) -> Result<Chain> {
        let order = self
            .component_order()
            .ok_or_else(|| Error::Domain("graph is not a chain graph".into()))?;
        Chain::new(order)
    }

    /// Checks consistency with `chain`, which must partition the node set.
    pub fn is_consistent(&self, chain: &Chain) -> Result<bool> {
        chain.require_partition_of(&self.nodes)?;
        let directed_ok = self
            .directed
            .iter()
            .all(|(a, b)| chain.block_index(a) < chain.block_index(b));
        let undirected_ok = self
            .undirected
            .iter()
            .all(|(a, b)| chain.block_index(a) == chain.block_index(b));
        Ok(directed_ok && undirected_ok)
    }

    /// Nodes reachable from `set` along `--` and forward `->` steps, `set` included.
    pub fn descendants(&self, set: &NodeSet) -> Result<NodeSet> {
        self.require_subset(set)?;
        let mut succ: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
        for (a, b) in &self.directed {
            succ.entry(a).or_default().push(b);
        }
        for (a, b) in &self.undirected {
            succ.entry(a).or_default().push(b);
            succ.entry(b).or_default().push(a);
        }
        let mut out = set.clone();
        let mut queue: VecDeque<&NodeId> = set.iter().collect();
        while let Some(n) = queue.pop_front() {
            for &m in succ.get(n).map(Vec::as_slice).unwrap_or_default() {
                if out.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        Ok(out)
    }

    /// Components whose descendants are exactly themselves.
    pub fn terminal_components(&self) -> Result<Vec<NodeSet>> {
        self.require_chain_graph()?;
        let mut out = Vec::new();
        for c in self.components() {
            if self.descendants(&c)? == c {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Members of `candidates` none of whose nodes descend from the other candidates.
    pub fn maximal_components(&self, candidates: &[NodeSet]) -> Result<Vec<NodeSet>> {
        let comps = self.components();
        for c in candidates {
            if !comps.contains(c) {
                return Err(Error::Input(format!("{} is not a component", fmt_set(c))));
            }
        }
        let mut out = Vec::new();
        for (i, c) in candidates.iter().enumerate() {
            let others: NodeSet = candidates
                .iter()
                .enumerate()
                .filter(|&(j, o)| j != i && o != c)
                .flat_map(|(_, o)| o.iter().cloned())
                .collect();
            let reach = self.descendants(&others)?;
            if c.is_disjoint(&reach) {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    /// True iff `set` is a union of components with no directed edge inside it.
    pub fn is_block(&self, set: &NodeSet) -> bool {
        if !set.is_subset(&self.nodes) {
            return false;
        }
        let closed = self
            .undirected
            .iter()
            .all(|(a, b)| set.contains(a) == set.contains(b));
        let no_internal_arrow = !self
            .directed
            .iter()
            .any(|(a, b)| set.contains(a) && set.contains(b));
        closed && no_internal_arrow
    }

    /// True iff `set` is nonempty and connected by undirected edges among its own members.
    pub fn is_connected_set(&self, set: &NodeSet) -> bool {
        let Some(seed) = set.first() else {
            return false;
        };
        let mut seen = NodeSet::from([seed.clone()]);
        let mut queue = VecDeque::from([seed.clone()]);
        while let Some(n) = queue.pop_front() {
            for (a, b) in &self.undirected {
                let other = if *a == n {
                    b
                } else if *b == n {
                    a
                } else {
                    continue;
                };
                if set.contains(other) && seen.insert(other.clone()) {
                    queue.push_back(other.clone());
                }
            }
        }
        seen.len() == set.len()
    }

    /// Maximal subsets of `set` connected through undirected edges with both
    /// endpoints in `set`, sorted by smallest member.
    pub fn connected_parts(&self, set: &NodeSet) -> Vec<NodeSet> {
        self.induced(set).components()
    }
}

/// Ordered partition of a node set into nonempty blocks.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Chain {
    blocks: Vec<NodeSet>,
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(fmt_set).collect();
        write!(f, "Chain({})", parts.join(", "))
    }
}

impl Chain {
    pub fn new(blocks: Vec<NodeSet>) -> Result<Self> {
        let mut seen = NodeSet::new();
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::Input("chain contains an empty block".into()));
            }
            for n in block {
                if !seen.insert(n.clone()) {
                    return Err(Error::Input(format!(
                        "node {n} appears in two chain blocks"
                    )));
                }
            }
        }
        Ok(Chain { blocks })
    }

    pub fn blocks(&self) -> &[NodeSet] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<NodeSet> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn nodes(&self) -> NodeSet {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn block_index(&self, node: &NodeId) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(node))
    }

    /// Strictly smaller block index.
    pub fn is_left_of(&self, a: &NodeId, b: &NodeId) -> bool {
        match (self.block_index(a), self.block_index(b)) {
            (Some(i), Some(j)) => i < j,
            _ => false,
        }
    }

    /// Union of the first `k + 1` blocks.
    pub fn prefix(&self, k: usize) -> NodeSet {
        self.blocks[..=k].iter().flatten().cloned().collect()
    }

    pub fn require_partition_of(&self, nodes: &NodeSet) -> Result<()> {
        let covered = self.nodes();
        if &covered != nodes {
            return Err(Error::Input(format!(
                "chain covers {} but the graph has nodes {}",
                fmt_set(&covered),
                fmt_set(nodes)
            )));
        }
        Ok(())
    }
}
