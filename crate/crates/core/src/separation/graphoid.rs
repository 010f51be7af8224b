use std::fmt;

use super::model::{is_independent, IndependenceModel};
use super::Triple;
use crate::error::{Error, Result};
use crate::graph::{fmt_set, NodeId, NodeSet};

/// Exhaustive axiom checking assigns each universe element to one of five
/// roles, so the cost is `5^n`; keep `n` small.
pub const DEFAULT_GRAPHOID_MAX_NODES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Symmetry,
    Decomposition,
    WeakUnion,
    Contraction,
    Intersection,
}

/// One instance `(X, Y, Z, W)` where an axiom's premises hold and its conclusion does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphoidViolation {
    pub axiom: Axiom,
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
    pub w: NodeSet,
}

impl fmt::Display for GraphoidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} fails for X={} Y={} Z={} W={}",
            self.axiom,
            fmt_set(&self.x),
            fmt_set(&self.y),
            fmt_set(&self.z),
            fmt_set(&self.w)
        )
    }
}

pub fn check_graphoid(model: &IndependenceModel) -> Result<Vec<GraphoidViolation>> {
    check_graphoid_bounded(model, DEFAULT_GRAPHOID_MAX_NODES)
}

/// Tests symmetry, decomposition, weak union, contraction and intersection on
/// every assignment of disjoint `X`, `Y` (nonempty), `Z` and `W`.
/// `W` is nonempty for the four axioms that mention it and empty for symmetry.
pub fn check_graphoid_bounded(
    model: &IndependenceModel,
    max_nodes: usize,
) -> Result<Vec<GraphoidViolation>> {
    let universe: Vec<NodeId> = model.universe().iter().cloned().collect();
    if universe.len() > max_nodes {
        return Err(Error::Resource(format!(
            "{} nodes exceed the graphoid check bound of {max_nodes}",
            universe.len()
        )));
    }
    let n = universe.len();
    let total = 5usize.pow(n as u32);
    let mut out = Vec::new();
    let ind = |x: &NodeSet, y: &NodeSet, z: &NodeSet| {
        is_independent(
            model,
            &Triple {
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
            },
        )
    };
    for code in 0..total {
        let mut roles = [
            NodeSet::new(),
            NodeSet::new(),
            NodeSet::new(),
            NodeSet::new(),
        ];
        let mut c = code;
        for node in &universe {
            let role = c % 5;
            c /= 5;
            if role > 0 {
                roles[role - 1].insert(node.clone());
            }
        }
        let [x, y, z, w] = roles;
        if x.is_empty() || y.is_empty() {
            continue;
        }
        let mut report = |axiom| {
            out.push(GraphoidViolation {
                axiom,
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
                w: w.clone(),
            })
        };
        if w.is_empty() {
            if ind(&x, &y, &z) && !ind(&y, &x, &z) {
                report(Axiom::Symmetry);
            }
            continue;
        }
        let y_w: NodeSet = y.union(&w).cloned().collect();
        let z_w: NodeSet = z.union(&w).cloned().collect();
        let z_y: NodeSet = z.union(&y).cloned().collect();
        let joint = ind(&x, &y_w, &z);
        if joint && !ind(&x, &y, &z) {
            report(Axiom::Decomposition);
        }
        if joint && !ind(&x, &y, &z_w) {
            report(Axiom::WeakUnion);
        }
        let y_given_zw = ind(&x, &y, &z_w);
        if y_given_zw && ind(&x, &w, &z) && !joint {
            report(Axiom::Contraction);
        }
        if y_given_zw && ind(&x, &w, &z_y) && !joint {
            report(Axiom::Intersection);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::enumerate_model;
    use crate::testutil::{g, set};

    #[test]
    fn separation_models_are_graphoids() {
        for text in [
            "A -> B; B -- C; D -> C",
            "A -- B; B -- C; C -> D; A -> E",
            "A -> B; A -> C; B -- C",
        ] {
            let m = enumerate_model(&g(text)).unwrap();
            assert_eq!(check_graphoid(&m).unwrap(), vec![], "{text}");
        }
    }

    #[test]
    fn weak_union_violation_detected() {
        let mut m = IndependenceModel::new(set("A B C"));
        m.insert(Triple::new(set("A"), set("B"), set("")).unwrap())
            .unwrap();
        m.insert(Triple::new(set("A"), set("C"), set("")).unwrap())
            .unwrap();
        let violations = check_graphoid(&m).unwrap();
        assert!(violations.iter().any(|v| v.axiom == Axiom::WeakUnion
            && v.x == set("A")
            && v.y == set("B")
            && v.w == set("C")
            && v.z.is_empty()));
    }

    #[test]
    fn empty_model_is_vacuous() {
        assert!(check_graphoid(&IndependenceModel::new(set("A B C")))
            .unwrap()
            .is_empty());
        assert!(check_graphoid(&IndependenceModel::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn intersection_needs_both_premises() {
        // A ⊥ B | C and A ⊥ C | B without A ⊥ BC
        let mut m = IndependenceModel::new(set("A B C"));
        m.insert(Triple::new(set("A"), set("B"), set("C")).unwrap())
            .unwrap();
        m.insert(Triple::new(set("A"), set("C"), set("B")).unwrap())
            .unwrap();
        let violations = check_graphoid(&m).unwrap();
        assert!(violations.iter().any(|v| v.axiom == Axiom::Intersection));
    }
}
