//! Component splits and merges, their feasibility conditions, and the
//! block-level operators built from them.
//!
//! A feasible split or merge leaves the independence model unchanged. The
//! block operators [`fbsplit`] and [`fbmerge`] first add the fewest edges that
//! make every split (resp. merge) they perform feasible, and report each
//! elementary modification so callers can build replayable traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{fmt_set, HybridGraph, NodeId, NodeSet};

/// One step of a transformation sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ElementaryOp {
    AddUndirected {
        edge: (NodeId, NodeId),
    },
    AddDirected {
        edge: (NodeId, NodeId),
    },
    /// Split `component` into `component \ part` and `part`.
    Split {
        component: NodeSet,
        part: NodeSet,
    },
    /// Merge the component `left` into its child component `right`.
    Merge {
        left: NodeSet,
        right: NodeSet,
    },
}

impl ElementaryOp {
    /// Applies the step. Additions must not touch an already adjacent pair.
    pub fn apply(&self, g: &HybridGraph) -> Result<HybridGraph> {
        match self {
            ElementaryOp::AddUndirected { edge: (a, b) } => {
                require_unjoined(g, a, b)?;
                g.with_undirected(a, b)
            }
            ElementaryOp::AddDirected { edge: (a, b) } => {
                require_unjoined(g, a, b)?;
                g.with_directed(a, b)
            }
            ElementaryOp::Split { component, part } => split(g, component, part),
            ElementaryOp::Merge { left, right } => merge(g, left, right),
        }
    }

    /// Feasibility of a split or merge step on `g`; additions are always allowed.
    pub fn is_feasible_on(&self, g: &HybridGraph) -> Result<bool> {
        match self {
            ElementaryOp::Split { component, part } => is_feasible_split(g, component, part),
            ElementaryOp::Merge { left, right } => is_feasible_merge(g, left, right),
            _ => Ok(true),
        }
    }
}

fn require_unjoined(g: &HybridGraph, a: &NodeId, b: &NodeId) -> Result<()> {
    if g.adjacent(a, b) {
        Err(Error::Input(format!("{a} and {b} are already adjacent")))
    } else {
        Ok(())
    }
}

/// Applies `ops` in order.
pub fn replay(g: &HybridGraph, ops: &[ElementaryOp]) -> Result<HybridGraph> {
    ops.iter().try_fold(g.clone(), |g, op| op.apply(&g))
}

fn require_component(g: &HybridGraph, c: &NodeSet) -> Result<()> {
    g.require_subset(c)?;
    if g.components().iter().any(|k| k == c) {
        Ok(())
    } else {
        Err(Error::Input(format!("{} is not a component", fmt_set(c))))
    }
}

fn check_split(g: &HybridGraph, c: &NodeSet, l: &NodeSet) -> Result<NodeSet> {
    require_component(g, c)?;
    if !l.is_subset(c) {
        return Err(Error::Input(format!(
            "{} is not inside {}",
            fmt_set(l),
            fmt_set(c)
        )));
    }
    let rest: NodeSet = c.difference(l).cloned().collect();
    for part in [l, &rest] {
        if !g.is_connected_set(part) {
            return Err(Error::Input(format!(
                "split part {} is empty or not connected",
                fmt_set(part)
            )));
        }
    }
    Ok(rest)
}

/// Replaces every `X -- Y` with `X ∈ C \ L`, `Y ∈ L` by `X -> Y`.
pub fn split(g: &HybridGraph, c: &NodeSet, l: &NodeSet) -> Result<HybridGraph> {
    let rest = check_split(g, c, l)?;
    let mut out = g.clone();
    for x in &rest {
        for y in l {
            if out.remove_undirected(x, y) {
                out.insert_directed(x, y)?;
            }
        }
    }
    Ok(out)
}

pub fn is_feasible_split(g: &HybridGraph, c: &NodeSet, l: &NodeSet) -> Result<bool> {
    let rest = check_split(g, c, l)?;
    let ne: Vec<NodeId> = g.neighbors(l)?.intersection(&rest).cloned().collect();
    let complete = ne
        .iter()
        .enumerate()
        .all(|(i, x)| ne[i + 1..].iter().all(|y| g.has_undirected(x, y)));
    let covered = g
        .parents(l)?
        .iter()
        .all(|x| ne.iter().all(|y| g.has_directed(x, y)));
    Ok(complete && covered)
}

fn check_merge(g: &HybridGraph, l: &NodeSet, r: &NodeSet) -> Result<NodeSet> {
    require_component(g, l)?;
    require_component(g, r)?;
    if l == r {
        return Err(Error::Input("cannot merge a component with itself".into()));
    }
    let pa = g.parents(r)?;
    if pa.is_disjoint(l) {
        return Err(Error::Input(format!(
            "{} has no parent in {}",
            fmt_set(r),
            fmt_set(l)
        )));
    }
    Ok(pa)
}

/// Replaces every `X -> Y` with `X ∈ L`, `Y ∈ R` by `X -- Y`.
pub fn merge(g: &HybridGraph, l: &NodeSet, r: &NodeSet) -> Result<HybridGraph> {
    check_merge(g, l, r)?;
    let mut out = g.clone();
    for x in l {
        for y in r {
            if out.remove_directed(x, y) {
                out.insert_undirected(x, y)?;
            }
        }
    }
    Ok(out)
}

pub fn is_feasible_merge(g: &HybridGraph, l: &NodeSet, r: &NodeSet) -> Result<bool> {
    let pa = check_merge(g, l, r)?;
    let inside: Vec<NodeId> = pa.intersection(l).cloned().collect();
    let complete = inside
        .iter()
        .enumerate()
        .all(|(i, x)| inside[i + 1..].iter().all(|y| g.has_undirected(x, y)));
    let covered = pa
        .difference(l)
        .all(|x| inside.iter().all(|y| g.has_directed(x, y)));
    Ok(complete && covered)
}

/// Working graph plus the modifications applied so far.
struct Recorder {
    g: HybridGraph,
    ops: Vec<ElementaryOp>,
}

impl Recorder {
    fn add_undirected(&mut self, a: &NodeId, b: &NodeId) -> Result<()> {
        if self.g.has_undirected(a, b) {
            return Ok(());
        }
        self.g.insert_undirected(a, b).map_err(internal)?;
        let edge = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        self.ops.push(ElementaryOp::AddUndirected { edge });
        Ok(())
    }

    fn add_directed(&mut self, a: &NodeId, b: &NodeId) -> Result<()> {
        if self.g.has_directed(a, b) {
            return Ok(());
        }
        self.g.insert_directed(a, b).map_err(internal)?;
        self.ops.push(ElementaryOp::AddDirected {
            edge: (a.clone(), b.clone()),
        });
        Ok(())
    }

    fn apply_feasible(&mut self, op: ElementaryOp) -> Result<()> {
        if !op.is_feasible_on(&self.g).map_err(internal)? {
            return Err(Error::Invariant(format!("{op:?} is not feasible")));
        }
        self.g = op.apply(&self.g).map_err(internal)?;
        self.ops.push(op);
        Ok(())
    }
}

fn internal(e: Error) -> Error {
    match e {
        Error::Invariant(_) => e,
        other => Error::Invariant(other.to_string()),
    }
}

fn complete_pairs(set: &NodeSet) -> Vec<(NodeId, NodeId)> {
    let v: Vec<&NodeId> = set.iter().collect();
    let mut out = Vec::new();
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            out.push(((*a).clone(), (*b).clone()));
        }
    }
    out
}

/// Splits components of the block `k` until `l ⊆ k` is itself a block,
/// after adding the edges that make each split feasible.
pub fn fbsplit(
    k: &NodeSet,
    l: &NodeSet,
    g: &HybridGraph,
) -> Result<(HybridGraph, Vec<ElementaryOp>)> {
    g.require_chain_graph()?;
    g.require_subset(k)?;
    if !g.is_block(k) {
        return Err(Error::Input(format!("{} is not a block", fmt_set(k))));
    }
    if !l.is_subset(k) {
        return Err(Error::Input(format!(
            "{} is not inside {}",
            fmt_set(l),
            fmt_set(k)
        )));
    }
    let outside: NodeSet = k.difference(l).cloned().collect();
    let parts = g.connected_parts(l);
    let mut rec = Recorder {
        g: g.clone(),
        ops: Vec::new(),
    };

    for part in &parts {
        let ne: NodeSet = rec
            .g
            .neighbors(part)?
            .intersection(&outside)
            .cloned()
            .collect();
        for (x, y) in complete_pairs(&ne) {
            rec.add_undirected(&x, &y)?;
        }
        let pa = rec.g.parents(part)?;
        for x in &pa {
            for y in &ne {
                rec.add_directed(x, y)?;
            }
        }
    }

    for part in &parts {
        let first = part.first().expect("connected parts are nonempty");
        let component = rec.g.component_of(first)?;
        if component.len() > part.len() {
            rec.apply_feasible(ElementaryOp::Split {
                component,
                part: part.clone(),
            })?;
        }
    }

    if !rec.g.is_chain_graph() || !rec.g.is_block(l) {
        return Err(Error::Invariant(format!(
            "fbsplit left {} short of a block",
            fmt_set(l)
        )));
    }
    Ok((rec.g, rec.ops))
}

/// Merges components until the union of the blocks `l` and `r` is a block,
/// after adding the edges that make each merge feasible.
pub fn fbmerge(
    l: &NodeSet,
    r: &NodeSet,
    g: &HybridGraph,
) -> Result<(HybridGraph, Vec<ElementaryOp>)> {
    g.require_chain_graph()?;
    g.require_subset(l)?;
    g.require_subset(r)?;
    for b in [l, r] {
        if !g.is_block(b) {
            return Err(Error::Input(format!("{} is not a block", fmt_set(b))));
        }
    }
    if !l.is_disjoint(r) {
        return Err(Error::Input("blocks to merge overlap".into()));
    }
    let union: NodeSet = l.union(r).cloned().collect();
    let right_parts: Vec<NodeSet> = g
        .components()
        .into_iter()
        .filter(|c| c.is_subset(r))
        .collect();
    let mut rec = Recorder {
        g: g.clone(),
        ops: Vec::new(),
    };

    for part in &right_parts {
        let pa = rec.g.parents(part)?;
        let inside: NodeSet = pa.intersection(l).cloned().collect();
        for (x, y) in complete_pairs(&inside) {
            rec.add_undirected(&x, &y)?;
        }
        for x in pa.difference(l) {
            for y in &inside {
                rec.add_directed(x, y)?;
            }
        }
    }

    for part in &right_parts {
        let pa = rec.g.parents(part)?;
        let mut candidates = rec
            .g
            .components()
            .into_iter()
            .filter(|c| c.is_subset(&union) && !c.is_disjoint(&pa));
        let Some(left) = candidates.next() else {
            continue;
        };
        if let Some(other) = candidates.next() {
            return Err(Error::Invariant(format!(
                "parents of {} lie in two components {} and {}",
                fmt_set(part),
                fmt_set(&left),
                fmt_set(&other)
            )));
        }
        rec.apply_feasible(ElementaryOp::Merge {
            left,
            right: part.clone(),
        })?;
    }

    if !rec.g.is_chain_graph() || !rec.g.is_block(&union) {
        return Err(Error::Invariant(format!(
            "fbmerge left {} short of a block",
            fmt_set(&union)
        )));
    }
    Ok((rec.g, rec.ops))
}
