use std::fmt;

use super::trace::{graph_hash, Trace};
use crate::error::{Error, Result};
use crate::graph::HybridGraph;
use crate::separation::{is_imap_bounded, DEFAULT_MAX_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A split or merge step whose feasibility condition fails.
    InfeasibleStep,
    NotChainGraph,
    /// `I(H)` is not contained in the snapshot's model.
    NotImap,
    /// The snapshot has an independence its predecessor lacked.
    ModelGrew,
    /// Replay ends somewhere other than `H`.
    FinalMismatch,
}

/// The first failed check of a trace, or none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceReport {
    Valid,
    /// `step` counts applied operations; 0 is the initial graph.
    Violation {
        step: usize,
        kind: ViolationKind,
    },
}

impl TraceReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, TraceReport::Valid)
    }
}

impl fmt::Display for TraceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let TraceReport::Violation { step, kind } = self else {
            return f.write_str("valid");
        };
        match kind {
            ViolationKind::InfeasibleStep => write!(f, "infeasible operation at step {step}"),
            ViolationKind::NotChainGraph => write!(f, "not a CG at step {step}"),
            ViolationKind::NotImap => write!(f, "target is not an independence map at step {step}"),
            ViolationKind::ModelGrew => write!(f, "independence model grew at step {step}"),
            ViolationKind::FinalMismatch => write!(f, "final graph differs from the target"),
        }
    }
}

pub fn verify_trace(t: &Trace, h: &HybridGraph) -> Result<TraceReport> {
    verify_trace_bounded(t, h, DEFAULT_MAX_NODES)
}

/// Replays `t` and checks every snapshot: a chain graph, an independence map
/// of nothing smaller than `I(h)`, and a model no larger than the previous one.
/// Splits and merges must be feasible where they are applied.
pub fn verify_trace_bounded(t: &Trace, h: &HybridGraph, max_nodes: usize) -> Result<TraceReport> {
    if t.initial().nodes() != h.nodes() {
        return Err(Error::Input(
            "trace and target have different node sets".into(),
        ));
    }
    if !h.is_chain_graph() {
        return Err(Error::Domain("target is not a chain graph".into()));
    }
    let violation = |step, kind| Ok(TraceReport::Violation { step, kind });

    let mut current = t.initial().clone();
    if !current.is_chain_graph() {
        return violation(0, ViolationKind::NotChainGraph);
    }
    if !is_imap_bounded(h, &current, max_nodes)? {
        return violation(0, ViolationKind::NotImap);
    }
    for (i, op) in t.ops().iter().enumerate() {
        let step = i + 1;
        let corrupt = |e: Error| Error::CorruptTrace(format!("step {step}: {e}"));
        if !op.is_feasible_on(&current).map_err(corrupt)? {
            return violation(step, ViolationKind::InfeasibleStep);
        }
        let next = op.apply(&current).map_err(corrupt)?;
        if !next.is_chain_graph() {
            return violation(step, ViolationKind::NotChainGraph);
        }
        if !is_imap_bounded(h, &next, max_nodes)? {
            return violation(step, ViolationKind::NotImap);
        }
        if !is_imap_bounded(&next, &current, max_nodes)? {
            return violation(step, ViolationKind::ModelGrew);
        }
        current = next;
    }
    if graph_hash(&current) != t.final_hash() {
        return Err(Error::CorruptTrace(
            "replayed graph does not match the recorded final hash".into(),
        ));
    }
    if &current != h {
        return violation(t.ops().len(), ViolationKind::FinalMismatch);
    }
    Ok(TraceReport::Valid)
}
