use crate::error::Result;
use crate::graph::{Chain, HybridGraph, NodeSet};

fn leftmost(alpha: &Chain, set: &NodeSet) -> usize {
    set.iter()
        .filter_map(|n| alpha.block_index(n))
        .min()
        .expect("alpha covers the graph")
}

fn rightmost(alpha: &Chain, set: &NodeSet) -> usize {
    set.iter()
        .filter_map(|n| alpha.block_index(n))
        .max()
        .expect("alpha covers the graph")
}

/// A chain consistent with `g`, one block per component, ordered to stay as
/// close to `alpha` as the graph allows.
///
/// Components are peeled off from the terminal end: each round takes the
/// terminal component whose leftmost node in `alpha` is rightmost (smallest
/// label on ties), puts it in front, then moves it right past every
/// neighbour it does not parent and that lies entirely to its left in `alpha`.
pub fn construct_beta(g: &HybridGraph, alpha: &Chain) -> Result<Chain> {
    g.require_chain_graph()?;
    alpha.require_partition_of(g.nodes())?;

    let mut remaining: NodeSet = g.nodes().clone();
    let mut beta: Vec<NodeSet> = Vec::new();
    while !remaining.is_empty() {
        let h = g.induced(&remaining);
        let terminals = h.terminal_components()?;
        // max_by_key keeps the last maximum; iterate reversed so ties resolve
        // to the smallest label
        let c = terminals
            .into_iter()
            .rev()
            .max_by_key(|c| leftmost(alpha, c))
            .expect("a nonempty chain graph has a terminal component");

        beta.insert(0, c.clone());
        let mut pos = 0;
        while let Some(r) = beta.get(pos + 1) {
            let parents_r = g.parents(r)?;
            if parents_r.is_disjoint(&c) && leftmost(alpha, &c) > rightmost(alpha, r) {
                beta.swap(pos, pos + 1);
                pos += 1;
            } else {
                break;
            }
        }
        for n in &c {
            remaining.remove(n);
        }
    }
    Chain::new(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{chain, g, set};

    #[test]
    fn beta_examples() {
        let b = construct_beta(&g("A -> B; B -- C"), &chain("A; B C")).unwrap();
        assert_eq!(b.blocks(), &[set("A"), set("B C")]);
        let b = construct_beta(&g("node A; node B"), &chain("B; A")).unwrap();
        assert_eq!(b.blocks(), &[set("B"), set("A")]);
        let b = construct_beta(&g("A -- B"), &chain("A B")).unwrap();
        assert_eq!(b.blocks(), &[set("A B")]);
    }

    #[test]
    fn beta_bubbles_unrelated_components_right() {
        // alpha wants C first, then A, then B; A -> B forces A before B
        let graph = g("A -> B; node C");
        let b = construct_beta(&graph, &chain("C; A; B")).unwrap();
        assert_eq!(b.blocks(), &[set("C"), set("A"), set("B")]);
        // alpha wants A, B, then C; C is isolated, so it moves to the end
        let b = construct_beta(&graph, &chain("A; B; C")).unwrap();
        assert_eq!(b.blocks(), &[set("A"), set("B"), set("C")]);
        assert!(graph.is_consistent(&b).unwrap());
    }

    #[test]
    fn beta_rejects_bad_input() {
        assert!(construct_beta(&g("A -> B"), &chain("A")).is_err());
        assert!(construct_beta(&g("A -> B; B -> C; C -> A"), &chain("A B C")).is_err());
    }
}
