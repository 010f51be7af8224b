use super::model::{is_independent, IndependenceModel};
use super::{SeparationEngine, Triple};
use crate::error::{Error, Result};
use crate::graph::{Chain, HybridGraph, NodeSet};

/// Answers "is `X ⊥ Y | Z`?" over a fixed universe.
pub trait IndependenceOracle: Sync {
    fn universe(&self) -> &NodeSet;

    fn independent(&self, t: &Triple) -> Result<bool>;
}

/// `I(G)` answered by the separation engine.
#[derive(Debug, Clone)]
pub struct GraphOracle {
    universe: NodeSet,
    engine: SeparationEngine,
}

impl GraphOracle {
    pub fn new(g: &HybridGraph) -> Result<Self> {
        Ok(GraphOracle {
            universe: g.nodes().clone(),
            engine: SeparationEngine::new(g)?,
        })
    }
}

impl IndependenceOracle for GraphOracle {
    fn universe(&self) -> &NodeSet {
        &self.universe
    }

    fn independent(&self, t: &Triple) -> Result<bool> {
        self.engine.separated(t)
    }
}

/// An explicit model used as an oracle.
#[derive(Debug, Clone)]
pub struct ModelOracle {
    model: IndependenceModel,
}

impl ModelOracle {
    pub fn new(model: IndependenceModel) -> Self {
        ModelOracle { model }
    }

    pub fn model(&self) -> &IndependenceModel {
        &self.model
    }
}

impl IndependenceOracle for ModelOracle {
    fn universe(&self) -> &NodeSet {
        self.model.universe()
    }

    fn independent(&self, t: &Triple) -> Result<bool> {
        t.require_within(self.model.universe())?;
        Ok(is_independent(&self.model, t))
    }
}

/// For every non-adjacent pair `X, Y`, with `k*` the first block index at
/// which both are present, asks whether `X ⊥ Y | C_1 ∪ … ∪ C_k* \ {X, Y}`.
pub fn check_pairwise_block_recursive(
    g: &HybridGraph,
    chain: &Chain,
    oracle: &dyn IndependenceOracle,
) -> Result<bool> {
    if !g.is_consistent(chain)? {
        return Err(Error::Domain(
            "chain is not consistent with the graph".into(),
        ));
    }
    let nodes: Vec<_> = g.nodes().iter().collect();
    for (i, &x) in nodes.iter().enumerate() {
        for &y in &nodes[i + 1..] {
            if g.adjacent(x, y) {
                continue;
            }
            let k = chain
                .block_index(x)
                .max(chain.block_index(y))
                .expect("chain covers graph");
            let mut cond = chain.prefix(k);
            cond.remove(x);
            cond.remove(y);
            if !oracle.independent(&Triple::pair(x, y, cond)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::enumerate_model;
    use crate::testutil::{chain, g, set};

    #[test]
    fn graph_and_model_oracles_agree() {
        let graph = g("A -> B; B -- C; D -> C");
        let by_graph = GraphOracle::new(&graph).unwrap();
        let by_model = ModelOracle::new(enumerate_model(&graph).unwrap());
        let t = Triple::new(set("A"), set("D"), set("B")).unwrap();
        assert!(!by_graph.independent(&t).unwrap());
        assert!(!by_model.independent(&t).unwrap());
        let t = Triple::new(set("A"), set("D"), set("")).unwrap();
        assert!(by_graph.independent(&t).unwrap());
        assert!(by_model.independent(&t).unwrap());
    }

    #[test]
    fn pairwise_block_recursive_examples() {
        let oracle = GraphOracle::new(&g("A -- B")).unwrap();
        assert!(
            !check_pairwise_block_recursive(&g("node A; node B"), &chain("A B"), &oracle).unwrap()
        );
        let complete = g("A -- B; B -- C; A -- C");
        let any = ModelOracle::new(IndependenceModel::new(set("A B C")));
        assert!(check_pairwise_block_recursive(&complete, &chain("A B C"), &any).unwrap());
        assert!(matches!(
            check_pairwise_block_recursive(&g("A -> B"), &chain("B; A"), &any),
            Err(Error::Domain(_))
        ));
    }
}
