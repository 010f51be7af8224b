//! Chain graphs under the LWF reading: separation, independence models,
//! minimal independence maps relative to a chain, and transformations
//! between chain graphs that keep an independence-map relation intact.
//!
//! ```
//! use chaingraph::{parse_graph, method_g2h, verify_trace};
//!
//! let g = parse_graph("A -> B\n").unwrap();
//! let h = parse_graph("A -- B\n").unwrap();
//! let trace = method_g2h(&g, &h).unwrap();
//! assert!(verify_trace(&trace, &h).unwrap().is_valid());
//! ```

pub mod error;
pub mod generate;
pub mod graph;
pub mod meek;
pub mod mimap;
pub mod separation;
pub mod text;
pub mod transform;

pub use error::{Error, Result};
pub use generate::Generator;
pub use graph::{fmt_set, node_set, Chain, EdgeKind, HybridGraph, NodeId, NodeSet};
pub use meek::{
    construct_beta, method_b3, method_g2h, verify_trace, verify_trace_bounded, Trace, TraceReport,
    ViolationKind,
};
pub use mimap::{mi_map, mi_map_ordered, oracle_from_graph, oracle_from_model};
pub use separation::{
    enumerate_model, is_imap, separated, separated_bruteforce, separated_moral, IndependenceModel,
    IndependenceOracle, Triple,
};
pub use text::{format_chain, format_graph, format_model, parse_chain, parse_graph, parse_model};
pub use transform::{fbmerge, fbsplit, merge, split, ElementaryOp};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::graph::{Chain, HybridGraph, NodeId, NodeSet};

    /// Graph from `;`-separated lines.
    pub fn g(text: &str) -> HybridGraph {
        crate::text::parse_graph(&text.replace(';', "\n")).unwrap()
    }

    pub fn set(labels: &str) -> NodeSet {
        labels.split_whitespace().map(node).collect()
    }

    pub fn node(label: &str) -> NodeId {
        NodeId::new(label).unwrap()
    }

    /// Chain from `;`-separated blocks.
    pub fn chain(text: &str) -> Chain {
        Chain::new(text.split(';').map(set).collect()).unwrap()
    }
}
