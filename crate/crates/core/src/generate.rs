//! Seeded random chains, chain graphs and independence-map pairs.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Chain, HybridGraph, NodeId, NodeSet};
use crate::mimap::{mi_map, oracle_from_graph};
use crate::separation::{is_imap, DEFAULT_MAX_NODES};

pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.4;

/// `A`..`Z` for up to 26 nodes, `N01`, `N02`, ... beyond that.
pub fn labels(n: usize) -> Vec<NodeId> {
    if n <= 26 {
        (b'A'..)
            .take(n)
            .map(|c| NodeId::new((c as char).to_string()).expect("letter"))
            .collect()
    } else {
        let width = n.to_string().len();
        (1..=n)
            .map(|i| NodeId::new(format!("N{i:0width$}")).expect("label"))
            .collect()
    }
}

/// Number of ordered set partitions of `0..=n` items, as floats.
fn fubini(n: usize) -> Vec<f64> {
    let mut binom = vec![vec![1.0f64; 1]; n + 1];
    for i in 1..=n {
        let prev = &binom[i - 1];
        let mut row = vec![1.0; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        binom[i] = row;
    }
    let mut a = vec![1.0f64; n + 1];
    for m in 1..=n {
        a[m] = (1..=m).map(|k| binom[m][k] * a[m - k]).sum();
    }
    a
}

pub struct Generator {
    rng: ChaCha8Rng,
    edge_probability: f64,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            edge_probability: DEFAULT_EDGE_PROBABILITY,
        }
    }

    pub fn with_edge_probability(mut self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Input(format!(
                "edge probability {p} is outside [0, 1]"
            )));
        }
        self.edge_probability = p;
        Ok(self)
    }

    /// A uniformly random ordered partition of `nodes`.
    pub fn chain(&mut self, nodes: &NodeSet) -> Chain {
        let mut rest: Vec<NodeId> = nodes.iter().cloned().collect();
        let counts = fubini(rest.len());
        let mut blocks = Vec::new();
        while !rest.is_empty() {
            let m = rest.len();
            // first block of size k: C(m, k) * a(m - k) of the a(m) partitions
            let mut c = 1.0f64;
            let weights: Vec<f64> = (1..=m)
                .map(|k| {
                    c = c * (m - k + 1) as f64 / k as f64;
                    c * counts[m - k]
                })
                .collect();
            let k = WeightedIndex::new(&weights)
                .expect("positive weights")
                .sample(&mut self.rng)
                + 1;
            rest.shuffle(&mut self.rng);
            let block: NodeSet = rest.drain(..k).collect();
            rest.sort();
            blocks.push(block);
        }
        Chain::new(blocks).expect("disjoint nonempty blocks")
    }

    /// Adds each absent pair that `alpha` allows, independently with the edge
    /// probability: undirected within a block, directed left to right across.
    fn add_legal_edges(&mut self, g: &mut HybridGraph, alpha: &Chain) -> Result<()> {
        let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                if g.adjacent(a, b) || !self.rng.gen_bool(self.edge_probability) {
                    continue;
                }
                let (ia, ib) = (alpha.block_index(a), alpha.block_index(b));
                if ia == ib {
                    g.insert_undirected(a, b)?;
                } else if ia < ib {
                    g.insert_directed(a, b)?;
                } else {
                    g.insert_directed(b, a)?;
                }
            }
        }
        Ok(())
    }

    /// A random chain graph on `n` nodes together with the chain it was drawn against.
    pub fn chain_graph(&mut self, n: usize) -> Result<(HybridGraph, Chain)> {
        if n == 0 {
            return Err(Error::Input("node count must be at least 1".into()));
        }
        let nodes: NodeSet = labels(n).into_iter().collect();
        let alpha = self.chain(&nodes);
        let mut g = HybridGraph::with_nodes(nodes);
        self.add_legal_edges(&mut g, &alpha)?;
        Ok((g, alpha))
    }

    /// A pair `(G, H)` with `I(H) ⊆ I(G)`: `H` is the minimal map of `I(G)`
    /// relative to a fresh chain, plus random edges that chain allows.
    pub fn imap_pair(&mut self, n: usize) -> Result<(HybridGraph, HybridGraph)> {
        let (g, _) = self.chain_graph(n)?;
        let alpha = self.chain(g.nodes());
        let mut h = mi_map(&oracle_from_graph(&g)?, &alpha)?;
        self.add_legal_edges(&mut h, &alpha)?;
        if n <= DEFAULT_MAX_NODES && !is_imap(&h, &g)? {
            return Err(Error::Invariant(
                "generated pair is not an independence map".into(),
            ));
        }
        Ok((g, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::format_graph;
    use std::collections::BTreeMap;

    #[test]
    fn fubini_numbers() {
        assert_eq!(fubini(5), vec![1.0, 1.0, 3.0, 13.0, 75.0, 541.0]);
    }

    #[test]
    fn labels_switch_to_padded_form() {
        assert_eq!(
            labels(3).iter().map(|n| n.as_str()).collect::<Vec<_>>(),
            ["A", "B", "C"]
        );
        let long = labels(30);
        assert_eq!(long[0].as_str(), "N01");
        assert_eq!(long[29].as_str(), "N30");
    }

    #[test]
    fn single_node() {
        let (g, alpha) = Generator::new(1).chain_graph(1).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(alpha.len(), 1);
        assert!(Generator::new(1).chain_graph(0).is_err());
    }

    #[test]
    fn chains_are_roughly_uniform() {
        let nodes: NodeSet = labels(3).into_iter().collect();
        let mut gen = Generator::new(7);
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let draws = 13 * 400;
        for _ in 0..draws {
            *seen.entry(format!("{:?}", gen.chain(&nodes))).or_default() += 1;
        }
        assert_eq!(seen.len(), 13);
        for count in seen.values() {
            assert!((300..500).contains(count), "{seen:?}");
        }
    }

    #[test]
    fn same_seed_same_output() {
        let run = |seed| {
            let mut gen = Generator::new(seed);
            let (g, h) = gen.imap_pair(5).unwrap();
            format!("{}{}", format_graph(&g), format_graph(&h))
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn graphs_are_consistent_with_their_chain() {
        let mut gen = Generator::new(11);
        for _ in 0..50 {
            let (g, alpha) = gen.chain_graph(6).unwrap();
            assert!(g.is_chain_graph());
            assert!(g.is_consistent(&alpha).unwrap());
        }
    }

    #[test]
    fn bad_probability_is_rejected() {
        assert!(Generator::new(0).with_edge_probability(1.5).is_err());
        assert!(Generator::new(0).with_edge_probability(0.0).is_ok());
    }
}
