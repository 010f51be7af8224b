use super::b3::method_b3;
use super::trace::Trace;
use crate::error::{Error, Result};
use crate::graph::HybridGraph;
use crate::separation::is_imap;
use crate::transform::ElementaryOp;

/// Transforms `g` into `h` through chain graphs whose models shrink
/// monotonically and always contain `I(h)`. Requires `I(h) ⊆ I(g)`.
///
/// The minimal map of `I(g)` relative to a chain of `h` is a subgraph of `h`;
/// the remaining edges of `h` are then added, undirected ones first.
pub fn method_g2h(g: &HybridGraph, h: &HybridGraph) -> Result<Trace> {
    g.require_chain_graph()?;
    h.require_chain_graph()?;
    if g.nodes() != h.nodes() {
        return Err(Error::Input(
            "the two graphs have different node sets".into(),
        ));
    }
    if !is_imap(h, g)? {
        return Err(Error::Domain("not an independence map".into()));
    }
    let alpha = h.consistent_chain()?;
    let (mut current, mut trace) = method_b3(g, &alpha)?;
    if !current.is_subgraph_of(h) {
        return Err(Error::Invariant(
            "minimal map relative to the chain of H is not a subgraph of H".into(),
        ));
    }

    let mut ops = Vec::new();
    for (a, b) in h.undirected_edges() {
        if !current.adjacent(a, b) {
            ops.push(ElementaryOp::AddUndirected {
                edge: (a.clone(), b.clone()),
            });
        }
    }
    for (a, b) in h.directed_edges() {
        if !current.adjacent(a, b) {
            ops.push(ElementaryOp::AddDirected {
                edge: (a.clone(), b.clone()),
            });
        }
    }
    for op in &ops {
        current = op.apply(&current)?;
    }
    if &current != h {
        return Err(Error::Invariant("method G2H did not reach H".into()));
    }
    trace.extend(ops, &current);
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{g, set};

    #[test]
    fn g2h_examples() {
        let t = method_g2h(&g("A -> B"), &g("A -- B")).unwrap();
        assert_eq!(
            t.ops(),
            &[ElementaryOp::Merge {
                left: set("A"),
                right: set("B")
            }]
        );
        assert_eq!(t.replay_final().unwrap(), g("A -- B"));

        let same = g("A -> B; B -- C; D -> C");
        let t = method_g2h(&same, &same).unwrap();
        assert!(t.ops().is_empty());
        assert_eq!(t.replay_final().unwrap(), same);

        let t = method_g2h(&g("node A; node B; node C"), &g("A -> B; node C")).unwrap();
        assert_eq!(t.replay_final().unwrap(), g("A -> B; node C"));
        assert_eq!(t.chain().blocks(), &[set("A"), set("B"), set("C")]);
    }

    #[test]
    fn g2h_requires_an_imap() {
        let err = method_g2h(&g("A -- B"), &g("node A; node B")).unwrap_err();
        assert_eq!(err, Error::Domain("not an independence map".into()));
        assert!(matches!(
            method_g2h(&g("A -- B"), &g("A -- C")),
            Err(Error::Input(_))
        ));
    }
}
