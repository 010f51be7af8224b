use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{Chain, HybridGraph, NodeId, NodeSet};
use crate::text::format_graph;
use crate::transform::ElementaryOp;

/// Hex SHA-256 of the canonical text rendering of `g`.
pub fn graph_hash(g: &HybridGraph) -> String {
    let digest = Sha256::digest(format_graph(g).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// A replayable transformation sequence: the starting graph, the chain that
/// drove it, every elementary step, and a fingerprint of the end result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    initial: HybridGraph,
    chain: Chain,
    ops: Vec<ElementaryOp>,
    final_hash: String,
}

impl Trace {
    pub fn new(
        initial: HybridGraph,
        chain: Chain,
        ops: Vec<ElementaryOp>,
        last: &HybridGraph,
    ) -> Self {
        Trace {
            initial,
            chain,
            ops,
            final_hash: graph_hash(last),
        }
    }

    pub fn initial(&self) -> &HybridGraph {
        &self.initial
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn ops(&self) -> &[ElementaryOp] {
        &self.ops
    }

    pub fn final_hash(&self) -> &str {
        &self.final_hash
    }

    /// Appends further steps ending in `last`.
    pub(crate) fn extend(&mut self, ops: Vec<ElementaryOp>, last: &HybridGraph) {
        self.ops.extend(ops);
        self.final_hash = graph_hash(last);
    }

    /// Every intermediate graph, starting with the initial one.
    /// A step that does not apply is reported as a corrupt trace.
    pub fn snapshots(&self) -> Result<Vec<HybridGraph>> {
        let mut out = Vec::with_capacity(self.ops.len() + 1);
        out.push(self.initial.clone());
        for (i, op) in self.ops.iter().enumerate() {
            let next = op
                .apply(out.last().expect("nonempty"))
                .map_err(|e| Error::CorruptTrace(format!("step {}: {e}", i + 1)))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Replays the steps and checks the result against the recorded hash.
    pub fn replay_final(&self) -> Result<HybridGraph> {
        let last = self.snapshots()?.pop().expect("nonempty");
        if graph_hash(&last) != self.final_hash {
            return Err(Error::CorruptTrace(
                "replayed graph does not match the recorded final hash".into(),
            ));
        }
        Ok(last)
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Input(format!("cannot write trace: {e}"));
        let header = Record::Header {
            initial: GraphRecord::from(&self.initial),
            chain: self.chain.blocks().to_vec(),
        };
        writeln!(w, "{}", to_line(&header)).map_err(io)?;
        for op in &self.ops {
            writeln!(w, "{}", to_line(&Record::Op(op.clone()))).map_err(io)?;
        }
        let trailer = Record::Trailer {
            final_hash: self.final_hash.clone(),
        };
        writeln!(w, "{}", to_line(&trailer)).map_err(io)?;
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Reads a trace written by [`Trace::write_jsonl`]. Anything unexpected,
    /// including step kinds outside the operation vocabulary, is a corrupt trace.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut header: Option<(HybridGraph, Chain)> = None;
        let mut ops = Vec::new();
        let mut final_hash: Option<String> = None;
        for (i, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::CorruptTrace(format!("cannot read trace: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: String| Error::CorruptTrace(format!("line {}: {msg}", i + 1));
            let record: Record = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
            if final_hash.is_some() {
                return Err(bad("record after the trailer".into()));
            }
            match record {
                Record::Header { initial, chain } => {
                    if header.is_some() || !ops.is_empty() {
                        return Err(bad("header must come first and only once".into()));
                    }
                    let g = initial.into_graph().map_err(|e| bad(e.to_string()))?;
                    let chain = Chain::new(chain).map_err(|e| bad(e.to_string()))?;
                    header = Some((g, chain));
                }
                Record::Op(op) => {
                    if header.is_none() {
                        return Err(bad("step before the header".into()));
                    }
                    ops.push(op);
                }
                Record::Trailer { final_hash: h } => {
                    if header.is_none() {
                        return Err(bad("trailer before the header".into()));
                    }
                    final_hash = Some(h);
                }
            }
        }
        let (initial, chain) =
            header.ok_or_else(|| Error::CorruptTrace("missing header".into()))?;
        let final_hash = final_hash.ok_or_else(|| Error::CorruptTrace("missing trailer".into()))?;
        Ok(Trace {
            initial,
            chain,
            ops,
            final_hash,
        })
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        Self::read_jsonl(text.as_bytes())
    }
}

fn to_line(record: &Record) -> String {
    serde_json::to_string(record).expect("trace records always serialize")
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case", deny_unknown_fields)]
enum Record {
    Header {
        initial: GraphRecord,
        chain: Vec<NodeSet>,
    },
    Op(ElementaryOp),
    Trailer {
        final_hash: String,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    nodes: NodeSet,
    directed: Vec<(NodeId, NodeId)>,
    undirected: Vec<(NodeId, NodeId)>,
}

impl From<&HybridGraph> for GraphRecord {
    fn from(g: &HybridGraph) -> Self {
        GraphRecord {
            nodes: g.nodes().clone(),
            directed: g.directed_edges().cloned().collect(),
            undirected: g.undirected_edges().cloned().collect(),
        }
    }
}

impl GraphRecord {
    fn into_graph(self) -> Result<HybridGraph> {
        let g = HybridGraph::from_edges(self.nodes.clone(), self.directed, self.undirected)?;
        if g.nodes() != &self.nodes {
            return Err(Error::Input(
                "edge endpoints missing from the node list".into(),
            ));
        }
        Ok(g)
    }
}
