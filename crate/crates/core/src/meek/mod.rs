//! Transforming one chain graph into another through a sequence of edge
//! additions, feasible splits and feasible merges.
//!
//! [`method_b3`] turns `G` into the minimal independence map of `I(G)`
//! relative to a chain; [`method_g2h`] uses it to move from `G` to any `H`
//! with `I(H) ⊆ I(G)`. Both record a [`Trace`], which [`verify_trace`]
//! replays step by step.

mod b3;
mod beta;
mod g2h;
mod trace;
mod verify;

pub use b3::method_b3;
pub use beta::construct_beta;
pub use g2h::method_g2h;
pub use trace::{graph_hash, Trace};
pub use verify::{verify_trace, verify_trace_bounded, TraceReport, ViolationKind};
