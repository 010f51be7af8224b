use super::beta::construct_beta;
use super::trace::Trace;
use crate::error::{Error, Result};
use crate::graph::{fmt_set, Chain, HybridGraph, NodeSet};
use crate::transform::{fbmerge, fbsplit, ElementaryOp};

/// Transforms `g` into the minimal independence map of `I(g)` relative to
/// `alpha`, using only edge additions and feasible splits and merges.
///
/// Blocks of `alpha` are handled right to left. For each one, its nodes are
/// cut out of the leftmost block of `beta` that holds any of them and pushed
/// right, merging with the neighbour block until that neighbour lies
/// entirely to the right in `alpha`.
pub fn method_b3(g: &HybridGraph, alpha: &Chain) -> Result<(HybridGraph, Trace)> {
    g.require_chain_graph()?;
    alpha.require_partition_of(g.nodes())?;

    let mut beta: Vec<NodeSet> = construct_beta(g, alpha)?.into_blocks();
    let mut current = g.clone();
    let mut ops: Vec<ElementaryOp> = Vec::new();
    let budget = 4 * alpha.len() * g.node_count();
    let mut rounds = 0usize;

    for (c_index, c) in alpha.blocks().iter().enumerate().rev() {
        loop {
            rounds += 1;
            if rounds > budget {
                return Err(Error::Invariant(format!(
                    "method B3 exceeded its budget of {budget} rounds"
                )));
            }
            let mut k = beta.iter().position(|b| !b.is_disjoint(c)).ok_or_else(|| {
                Error::Invariant(format!("no block of beta meets {}", fmt_set(c)))
            })?;
            let l: NodeSet = beta[k].intersection(c).cloned().collect();
            if beta[k].len() > l.len() {
                let (next, step_ops) = fbsplit(&beta[k], &l, &current)?;
                current = next;
                ops.extend(step_ops);
                let rest: NodeSet = beta[k].difference(&l).cloned().collect();
                beta.splice(k..=k, [rest, l.clone()]);
                k += 1;
            }
            let Some(r) = beta.get(k + 1) else {
                break;
            };
            let r_not_right = r
                .iter()
                .any(|n| alpha.block_index(n).is_some_and(|i| i <= c_index));
            if !r_not_right {
                break;
            }
            let (next, step_ops) = fbmerge(&l, r, &current)?;
            current = next;
            ops.extend(step_ops);
            let fused: NodeSet = l.union(r).cloned().collect();
            beta.splice(k..=k + 1, [fused]);
        }
        if beta == alpha.blocks() {
            break;
        }
    }

    if beta != alpha.blocks() {
        return Err(Error::Invariant(
            "method B3 ended with beta != alpha".into(),
        ));
    }
    if !current.is_consistent(alpha)? {
        return Err(Error::Invariant(
            "method B3 result is not consistent with alpha".into(),
        ));
    }
    let trace = Trace::new(g.clone(), alpha.clone(), ops, &current);
    Ok((current, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{chain, g, set};

    #[test]
    fn b3_examples() {
        let (out, trace) = method_b3(&g("A -- B"), &chain("A; B")).unwrap();
        assert_eq!(out, g("A -> B"));
        assert_eq!(trace.ops().len(), 1);

        let (out, trace) = method_b3(&g("A -> B"), &chain("A B")).unwrap();
        assert_eq!(out, g("A -- B"));
        assert_eq!(
            trace.ops(),
            &[ElementaryOp::Merge {
                left: set("A"),
                right: set("B")
            }]
        );

        let (out, trace) = method_b3(&g("A -> B"), &chain("A; B")).unwrap();
        assert_eq!(out, g("A -> B"));
        assert!(trace.ops().is_empty());
    }

    #[test]
    fn b3_reverses_an_arc_through_a_merge_and_split() {
        // B -> A relative to A; B needs A -> B plus nothing else
        let (out, _) = method_b3(&g("B -> A"), &chain("A; B")).unwrap();
        assert_eq!(out, g("A -> B"));
    }

    #[test]
    fn b3_on_collider() {
        let graph = g("A -> B; B -- C; D -> C");
        let (out, _) = method_b3(&graph, &chain("A; D; B C")).unwrap();
        assert_eq!(out, graph);
        let (out, trace) = method_b3(&graph, &chain("B C; A; D")).unwrap();
        assert!(out.is_consistent(&chain("B C; A; D")).unwrap());
        assert_eq!(trace.replay_final().unwrap(), out);
    }

    #[test]
    fn b3_empty_graph() {
        let (out, trace) = method_b3(&HybridGraph::new(), &Chain::default()).unwrap();
        assert_eq!(out, HybridGraph::new());
        assert!(trace.ops().is_empty());
    }
}
