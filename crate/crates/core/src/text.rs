//! Plain-text formats for graphs, chains and independence models.
//!
//! Graphs: one item per line, `node X`, `X -> Y` or `X -- Y`; `#` starts a
//! comment. Chains: one block per line, labels separated by whitespace, the
//! first line being the leftmost block. Models: one triple per line,
//! `x ; y | z1 z2 ...`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Chain, HybridGraph, NodeId, NodeSet};
use crate::separation::{IndependenceModel, Triple};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn label(line: usize, token: &str) -> Result<NodeId> {
    NodeId::new(token).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(message) | Error::Domain(message) => Error::Parse { line, message },
        other => other,
    })
}

pub fn parse_graph(text: &str) -> Result<HybridGraph> {
    let mut g = HybridGraph::new();
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", x] => g = g.with_node(label(line, x)?),
            [a, op @ ("->" | "--"), b] => {
                let (a, b) = (label(line, a)?, label(line, b)?);
                g = g.with_node(a.clone()).with_node(b.clone());
                g = if *op == "->" {
                    at_line(line, g.with_directed(&a, &b))?
                } else {
                    at_line(line, g.with_undirected(&a, &b))?
                };
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `node X`, `X -> Y` or `X -- Y`, got {content:?}"),
                })
            }
        }
    }
    Ok(g)
}

/// Canonical rendering: isolated nodes, then directed edges, then undirected
/// edges, each in label order. Byte-identical for equal graphs.
pub fn format_graph(g: &HybridGraph) -> String {
    let mut touched = NodeSet::new();
    for (a, b) in g.directed_edges().chain(g.undirected_edges()) {
        touched.insert(a.clone());
        touched.insert(b.clone());
    }
    let mut out = String::new();
    for n in g.nodes().iter().filter(|n| !touched.contains(*n)) {
        writeln!(out, "node {n}").unwrap();
    }
    for (a, b) in g.directed_edges() {
        writeln!(out, "{a} -> {b}").unwrap();
    }
    for (a, b) in g.undirected_edges() {
        writeln!(out, "{a} -- {b}").unwrap();
    }
    out
}

pub fn parse_chain(text: &str) -> Result<Chain> {
    let mut blocks = Vec::new();
    for (line, content) in content_lines(text) {
        let block = content
            .split_whitespace()
            .map(|t| label(line, t))
            .collect::<Result<NodeSet>>()?;
        blocks.push(block);
    }
    Chain::new(blocks)
}

pub fn format_chain(chain: &Chain) -> String {
    let mut out = String::new();
    for block in chain.blocks() {
        let labels: Vec<&str> = block.iter().map(NodeId::as_str).collect();
        writeln!(out, "{}", labels.join(" ")).unwrap();
    }
    out
}

/// Parses a model file. The universe is every label mentioned, plus `extra`.
pub fn parse_model(text: &str, extra: &NodeSet) -> Result<IndependenceModel> {
    let mut triples = Vec::new();
    let mut universe = extra.clone();
    for (line, content) in content_lines(text) {
        let err = |message: String| Error::Parse { line, message };
        let (pair, cond) = content
            .split_once('|')
            .ok_or_else(|| err("missing `|`".into()))?;
        let (x, y) = pair
            .split_once(';')
            .ok_or_else(|| err("missing `;`".into()))?;
        let (x, y) = (label(line, x.trim())?, label(line, y.trim())?);
        let z = cond
            .split_whitespace()
            .map(|t| label(line, t))
            .collect::<Result<NodeSet>>()?;
        universe.insert(x.clone());
        universe.insert(y.clone());
        universe.extend(z.iter().cloned());
        let triple = at_line(line, Triple::new([x].into(), [y].into(), z))?;
        triples.push(triple);
    }
    let mut model = IndependenceModel::new(universe);
    for t in triples {
        model.insert(t)?;
    }
    Ok(model)
}

pub fn format_model(model: &IndependenceModel) -> String {
    let mut out = String::new();
    for (x, y, z) in model.statements() {
        let z: Vec<&str> = z.iter().map(NodeId::as_str).collect();
        if z.is_empty() {
            writeln!(out, "{x} ; {y} |").unwrap();
        } else {
            writeln!(out, "{x} ; {y} | {}", z.join(" ")).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::set;

    #[test]
    fn graph_round_trip_and_comments() {
        let text = "# header\nnode Z\nA -> B   # trailing\n\nB -- C\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(format_graph(&g), "node Z\nA -> B\nB -- C\n");
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_parse_errors_carry_line_numbers() {
        let err = parse_graph("A -> B\nB -> A\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_graph("A -> B\nA => C\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_graph("A -> A").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert_eq!(parse_graph("").unwrap(), HybridGraph::new());
    }

    #[test]
    fn chain_round_trip() {
        let chain = parse_chain("A C\n# mid\nB\n").unwrap();
        assert_eq!(chain.blocks(), &[set("A C"), set("B")]);
        assert_eq!(parse_chain(&format_chain(&chain)).unwrap(), chain);
        assert!(parse_chain("A\nA B\n").is_err());
    }

    #[test]
    fn model_round_trip() {
        let m = parse_model("A ; B |\nB ; A | C\nC;A|B D\n", &set("E")).unwrap();
        assert_eq!(m.universe(), &set("A B C D E"));
        assert_eq!(m.len(), 3);
        let text = format_model(&m);
        assert_eq!(text, "A ; B |\nA ; B | C\nA ; C | B D\n");
        assert_eq!(parse_model(&text, &set("E")).unwrap(), m);
        assert!(parse_model("A ; A |", &NodeSet::new()).is_err());
        assert!(matches!(
            parse_model("A B | C", &NodeSet::new()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
