use crate::error::{Error, Result};
use crate::graph::{EdgeKind, HybridGraph, NodeId, NodeSet};

/// A sequence of nodes, consecutive ones adjacent. Nodes and edges may repeat;
/// a single node is a route of length zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    nodes: Vec<NodeId>,
    // steps[i] is the edge between nodes[i] and nodes[i + 1], read from nodes[i]
    steps: Vec<EdgeKind>,
}

/// A maximal undirected stretch of a route, as positions `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Section {
    pub start: usize,
    pub end: usize,
    pub collider: bool,
}

impl Route {
    /// Reads the edge types off `g`.
    pub fn through(g: &HybridGraph, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Input("a route has at least one node".into()));
        }
        for n in &nodes {
            g.require_node(n)?;
        }
        let steps = nodes
            .windows(2)
            .map(|w| {
                g.edge(&w[0], &w[1])
                    .ok_or_else(|| Error::Input(format!("{} and {} are not adjacent", w[0], w[1])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Route { nodes, steps })
    }

    /// A route with explicitly recorded steps; checked against a graph by
    /// [`is_active_route`].
    pub fn from_parts(nodes: Vec<NodeId>, steps: Vec<EdgeKind>) -> Result<Self> {
        if nodes.is_empty() || steps.len() + 1 != nodes.len() {
            return Err(Error::Input(
                "route needs exactly one step per consecutive node pair".into(),
            ));
        }
        Ok(Route { nodes, steps })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn steps(&self) -> &[EdgeKind] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn push(&mut self, node: NodeId, step: EdgeKind) {
        self.nodes.push(node);
        self.steps.push(step);
    }

    pub(crate) fn pop(&mut self) {
        if !self.steps.is_empty() {
            self.nodes.pop();
            self.steps.pop();
        }
    }

    /// Splits the route into its sections.
    pub fn sections(&self) -> Vec<Section> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 0..=self.steps.len() {
            let continues = i < self.steps.len() && self.steps[i] == EdgeKind::Undirected;
            if continues {
                continue;
            }
            let left_into = start > 0 && self.steps[start - 1] == EdgeKind::Forward;
            let right_into = i < self.steps.len() && self.steps[i] == EdgeKind::Backward;
            out.push(Section {
                start,
                end: i,
                collider: left_into && right_into,
            });
            start = i + 1;
        }
        out
    }

    pub fn section_nodes(&self, s: &Section) -> &[NodeId] {
        &self.nodes[s.start..=s.end]
    }
}

/// Every collider section meets `z` and every other section avoids it.
pub fn is_active_route(g: &HybridGraph, route: &Route, z: &NodeSet) -> Result<bool> {
    g.require_subset(z)?;
    for (i, step) in route.steps.iter().enumerate() {
        let (a, b) = (&route.nodes[i], &route.nodes[i + 1]);
        if g.edge(a, b) != Some(*step) {
            return Err(Error::Input(format!(
                "route step {i} ({a}, {b}) does not match the graph"
            )));
        }
    }
    if let Some(n) = route.nodes.first() {
        g.require_node(n)?;
    }
    Ok(route.sections().iter().all(|s| {
        let meets = route.section_nodes(s).iter().any(|n| z.contains(n));
        meets == s.collider
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{g, node, set};

    fn route(graph: &HybridGraph, labels: &str) -> Route {
        Route::through(graph, labels.split_whitespace().map(node).collect()).unwrap()
    }

    #[test]
    fn active_route_examples() {
        let graph = g("A -> B; B -- C; D -> C");
        let r = route(&graph, "A B C D");
        assert!(is_active_route(&graph, &r, &set("B")).unwrap());
        assert!(!is_active_route(&graph, &r, &set("")).unwrap());
        let ab = g("A -- B");
        assert!(is_active_route(&ab, &route(&ab, "A B"), &set("")).unwrap());
    }

    #[test]
    fn sections_of_a_mixed_route() {
        let graph = g("A -> B; B -- C; D -> C");
        let r = route(&graph, "A B C D");
        let secs = r.sections();
        assert_eq!(secs.len(), 3);
        assert_eq!((secs[1].start, secs[1].end, secs[1].collider), (1, 2, true));
        assert!(!secs[0].collider && !secs[2].collider);
    }

    #[test]
    fn length_zero_route() {
        let graph = g("node A");
        let r = route(&graph, "A");
        assert!(r.is_empty());
        assert!(is_active_route(&graph, &r, &set("")).unwrap());
        assert!(!is_active_route(&graph.with_node(node("B")), &r, &set("A")).unwrap());
    }

    #[test]
    fn repeated_nodes_allowed() {
        let graph = g("A -> B; C -> B; B -> D");
        let r = route(&graph, "A B D B C");
        assert!(is_active_route(&graph, &r, &set("D")).unwrap());
        assert!(!is_active_route(&graph, &r, &set("")).unwrap());
    }

    #[test]
    fn mismatched_steps_rejected() {
        let graph = g("A -> B");
        let r = Route::from_parts(vec![node("A"), node("B")], vec![EdgeKind::Undirected]).unwrap();
        assert!(is_active_route(&graph, &r, &set("")).is_err());
        assert!(Route::through(&graph, vec![node("A"), node("A")]).is_err());
    }
}
