use std::collections::HashMap;

use super::route::{is_active_route, Route};
use super::Triple;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, HybridGraph, NodeId, NodeSet};

/// Decides separation by enumerating routes of up to `max_len` steps and
/// testing each one that ends in `Y` with [`is_active_route`].
///
/// `max_len` must be at least `4 * |V|`. Prefixes are discarded once one of
/// their closed sections already violates the activity condition, and a
/// prefix is skipped when another prefix with the same last node, the same
/// open-section flank and the same "meets Z" flag was already exhausted with
/// at least as many steps left; such prefixes have identical sets of active
/// completions, so the answer equals that of plain enumeration.
pub fn separated_bruteforce(g: &HybridGraph, t: &Triple, max_len: usize) -> Result<bool> {
    g.require_chain_graph()?;
    t.require_within(g.nodes())?;
    if max_len < 4 * g.node_count() {
        return Err(Error::Input(format!(
            "route bound {max_len} is below 4 * |V| = {}",
            4 * g.node_count()
        )));
    }
    let mut search = Search {
        g,
        y: &t.y,
        z: &t.z,
        max_len,
        exhausted: HashMap::new(),
    };
    for x in &t.x {
        let mut route = Route::through(g, vec![x.clone()])?;
        if search.extend(&mut route)? {
            return Ok(false);
        }
    }
    Ok(true)
}

type Signature = (NodeId, bool, bool);

struct Search<'a> {
    g: &'a HybridGraph,
    y: &'a NodeSet,
    z: &'a NodeSet,
    max_len: usize,
    exhausted: HashMap<Signature, usize>,
}

impl Search<'_> {
    /// `None` when the prefix can no longer become active, otherwise its signature.
    fn viable(&self, route: &Route) -> Option<Signature> {
        let sections = route.sections();
        let (open, closed) = sections.split_last().expect("a route has a section");
        for s in closed {
            let meets = route.section_nodes(s).iter().any(|n| self.z.contains(n));
            if meets != s.collider {
                return None;
            }
        }
        let left_into = open.start > 0 && route.steps()[open.start - 1] == EdgeKind::Forward;
        let meets = route.section_nodes(open).iter().any(|n| self.z.contains(n));
        if meets && !left_into {
            return None;
        }
        let last = route.nodes().last().expect("nonempty").clone();
        Some((last, left_into, meets))
    }

    fn extend(&mut self, route: &mut Route) -> Result<bool> {
        let Some(signature) = self.viable(route) else {
            return Ok(false);
        };
        if self.y.contains(&signature.0) && is_active_route(self.g, route, self.z)? {
            return Ok(true);
        }
        let remaining = self.max_len - route.len();
        if remaining == 0
            || self
                .exhausted
                .get(&signature)
                .is_some_and(|&r| r >= remaining)
        {
            return Ok(false);
        }
        let last = signature.0.clone();
        let next: Vec<(NodeId, EdgeKind)> = self
            .g
            .nodes()
            .iter()
            .filter_map(|n| self.g.edge(&last, n).map(|k| (n.clone(), k)))
            .collect();
        for (n, kind) in next {
            route.push(n, kind);
            let found = self.extend(route)?;
            route.pop();
            if found {
                return Ok(true);
            }
        }
        let entry = self.exhausted.entry(signature).or_insert(0);
        *entry = (*entry).max(remaining);
        Ok(false)
    }
}
