//! m-separation, inducing paths and separating-set search.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Admg, NodeId};
use crate::nodeset::{NodeSet, MAX_NODES};

/// Three pairwise disjoint node sets: is `x` separated from `y` given `z`?
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationQuery {
    pub x: NodeSet,
    pub y: NodeSet,
    pub z: NodeSet,
}

impl SeparationQuery {
    pub fn new(x: NodeSet, y: NodeSet, z: NodeSet) -> Self {
        SeparationQuery { x, y, z }
    }

    pub fn validate(&self, g: &Admg) -> Result<()> {
        g.check_set(self.x | self.y | self.z)?;
        if !self.x.is_disjoint(self.y) || !self.x.is_disjoint(self.z) || !self.y.is_disjoint(self.z) {
            return Err(Error::QueryOverlap);
        }
        Ok(())
    }
}

/// Whether `x` and `y` are m-separated by `z` in `g`.
pub fn m_separated(g: &Admg, x: NodeSet, y: NodeSet, z: NodeSet) -> Result<bool> {
    SeparationQuery::new(x, y, z).validate(g)?;
    Ok(!m_connected(g, x, y, z))
}

/// Unchecked m-connection test; sets are assumed disjoint and in range.
pub(crate) fn m_connected(g: &Admg, x: NodeSet, y: NodeSet, z: NodeSet) -> bool {
    if x.is_empty() || y.is_empty() {
        return false;
    }
    let an_z = g.ancestors_of(z);
    // visited states: arrived with an arrowhead at the node / with a tail
    let mut seen_into = NodeSet::EMPTY;
    let mut seen_tail = NodeSet::EMPTY;
    let mut todo_into = NodeSet::EMPTY;
    let mut todo_tail = NodeSet::EMPTY;
    for v in x.iter() {
        todo_tail |= g.parents(v);
        todo_into |= g.children(v) | g.spouses(v);
    }
    loop {
        todo_into = todo_into.difference(seen_into);
        todo_tail = todo_tail.difference(seen_tail);
        if !(todo_into | todo_tail).is_disjoint(y) {
            return true;
        }
        if todo_into.is_empty() && todo_tail.is_empty() {
            return false;
        }
        seen_into |= todo_into;
        seen_tail |= todo_tail;
        let (cur_into, cur_tail) = (todo_into, todo_tail);
        todo_into = NodeSet::EMPTY;
        todo_tail = NodeSet::EMPTY;
        for v in cur_into.iter() {
            if an_z.contains(v) {
                // collider: continue along edges with an arrowhead at v
                todo_tail |= g.parents(v);
                todo_into |= g.spouses(v);
            }
            if !z.contains(v) {
                todo_into |= g.children(v);
            }
        }
        for v in cur_tail.iter() {
            if !z.contains(v) {
                todo_tail |= g.parents(v);
                todo_into |= g.children(v) | g.spouses(v);
            }
        }
    }
}

/// How bidirected edges are handled by [`has_inducing_path`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LatentPolicy {
    /// Traverse `a <-> b` directly, with arrowheads at both ends.
    #[default]
    Implicit,
    /// Replace each bidirected edge by an explicit latent fork
    /// `a <- L -> b` with `L` added to the reference set.
    Expanded,
}

/// Whether there is an inducing path between `a` and `b` relative to `z`:
/// every non-endpoint outside `z` is a collider, and every collider is an
/// ancestor of `a` or `b`.
pub fn has_inducing_path(g: &Admg, a: NodeId, b: NodeId, policy: LatentPolicy, z: NodeSet) -> Result<bool> {
    g.check_node(a)?;
    g.check_node(b)?;
    g.check_set(z)?;
    if a == b {
        return Err(Error::QueryOverlap);
    }
    match policy {
        LatentPolicy::Implicit => Ok(if z.is_empty() {
            inducing_collider_path(g, a, b)
        } else {
            inducing_path_search(g, a, b, z)
        }),
        LatentPolicy::Expanded => {
            let (h, latents) = expand_latents(g)?;
            Ok(inducing_path_search(&h, a, b, z | latents))
        }
    }
}

/// Replaces every bidirected edge with a fresh latent parent of both endpoints.
fn expand_latents(g: &Admg) -> Result<(Admg, NodeSet)> {
    let n = g.n();
    let m = g.num_bidirected();
    if n + m > MAX_NODES {
        return Err(Error::TooManyNodes(n + m));
    }
    let mut labels: Vec<String> = g.labels().to_vec();
    let mut pa: Vec<NodeSet> = (0..n).map(|v| g.parents(v)).collect();
    let mut latents = NodeSet::EMPTY;
    for (t, (u, v)) in g.bidirected_edges().enumerate() {
        let l = n + t;
        labels.push(alloc::format!("_L{t}"));
        pa.push(NodeSet::EMPTY);
        pa[u].insert(l);
        pa[v].insert(l);
        latents.insert(l);
    }
    let sp = alloc::vec![NodeSet::EMPTY; n + m];
    Ok((Admg::from_masks_unchecked(labels.into(), pa, sp), latents))
}

/// Inducing path relative to the empty set: direct adjacency, or a path
/// whose intermediate nodes are all colliders in `An({a, b})`.
pub(crate) fn inducing_collider_path(g: &Admg, a: NodeId, b: NodeId) -> bool {
    if g.adjacent(a, b) {
        return true;
    }
    let ab = NodeSet::singleton(a).with(b);
    let allowed = g.ancestors_of(ab).difference(ab);
    let targets = (g.children(b) | g.spouses(b)).intersection(allowed);
    if targets.is_empty() {
        return false;
    }
    let mut seen = (g.children(a) | g.spouses(a)).intersection(allowed);
    let mut frontier = seen;
    while !frontier.is_empty() {
        if !frontier.is_disjoint(targets) {
            return true;
        }
        let mut next = NodeSet::EMPTY;
        for v in frontier.iter() {
            next |= g.spouses(v);
        }
        frontier = next.intersection(allowed).difference(seen);
        seen |= frontier;
    }
    false
}

/// Exhaustive simple-path search for an inducing path relative to `z`.
fn inducing_path_search(g: &Admg, a: NodeId, b: NodeId, z: NodeSet) -> bool {
    let an = g.ancestors_of(NodeSet::singleton(a).with(b));
    // edges leaving v: (neighbour, arrowhead at v, arrowhead at neighbour)
    fn edges(g: &Admg, v: NodeId) -> impl Iterator<Item = (NodeId, bool, bool)> + '_ {
        g.children(v)
            .iter()
            .map(|u| (u, false, true))
            .chain(g.parents(v).iter().map(|u| (u, true, false)))
            .chain(g.spouses(v).iter().map(|u| (u, true, true)))
    }
    fn go(g: &Admg, v: NodeId, into_v: bool, b: NodeId, z: NodeSet, an: NodeSet, on_path: NodeSet) -> bool {
        for (u, at_v, at_u) in edges(g, v) {
            let collider = into_v && at_v;
            if !collider && !z.contains(v) {
                continue;
            }
            if collider && !an.contains(v) {
                continue;
            }
            if u == b {
                return true;
            }
            if on_path.contains(u) {
                continue;
            }
            if go(g, u, at_u, b, z, an, on_path.with(u)) {
                return true;
            }
        }
        false
    }
    for (u, _, at_u) in edges(g, a) {
        if u == b {
            return true;
        }
        if go(g, u, at_u, b, z, an, NodeSet::singleton(a).with(u)) {
            return true;
        }
    }
    false
}

/// First `W ⊆ pool`, in (size, lexicographic) order, such that
/// `W ∪ forced` m-separates `a` and `b`.
pub fn find_separating_set(g: &Admg, a: NodeId, b: NodeId, pool: NodeSet, forced: NodeSet) -> Option<NodeSet> {
    let (sa, sb) = (NodeSet::singleton(a), NodeSet::singleton(b));
    debug_assert!(!(pool | forced).contains(a) && !(pool | forced).contains(b));
    pool.subsets().find(|&w| !m_connected(g, sa, sb, w | forced))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d1() -> Admg {
        Admg::from_labeled(&["X", "Z", "Y"], &[("X", "Z"), ("Z", "Y")], &[("Z", "Y")]).unwrap()
    }

    fn chain() -> Admg {
        Admg::from_labeled(&["A", "B", "C"], &[("A", "B"), ("B", "C")], &[]).unwrap()
    }

    #[test]
    fn d1_collider_is_activated() {
        let g = d1();
        let s = |l: &[&str]| g.set_of(l).unwrap();
        assert!(!m_separated(&g, s(&["X"]), s(&["Y"]), s(&["Z"])).unwrap());
        let m = g.mutilated(s(&["Z"]), NodeSet::EMPTY);
        assert!(m_separated(&m, s(&["X"]), s(&["Y"]), NodeSet::EMPTY).unwrap());
    }

    #[test]
    fn isolated_nodes_are_separated() {
        let g = Admg::from_edges(crate::graph::default_labels(2), &[], &[]).unwrap();
        assert!(m_separated(&g, NodeSet::singleton(0), NodeSet::singleton(1), NodeSet::EMPTY).unwrap());
    }

    #[test]
    fn overlapping_query_is_rejected() {
        let g = d1();
        let x = NodeSet::singleton(0);
        assert_eq!(m_separated(&g, x, x, NodeSet::EMPTY), Err(Error::QueryOverlap));
    }

    #[test]
    fn inducing_path_examples() {
        let g = d1();
        for p in [LatentPolicy::Implicit, LatentPolicy::Expanded] {
            assert!(has_inducing_path(&g, 0, 2, p, NodeSet::EMPTY).unwrap());
            assert!(!has_inducing_path(&chain(), 0, 2, p, NodeSet::EMPTY).unwrap());
        }
        // relative to {B} the chain's middle node may be a non-collider
        assert!(has_inducing_path(&chain(), 0, 2, LatentPolicy::Implicit, NodeSet::singleton(1)).unwrap());
    }

    #[test]
    fn separating_set_examples() {
        let g = d1();
        assert_eq!(find_separating_set(&g, 0, 2, NodeSet::singleton(1), NodeSet::EMPTY), None);
        assert_eq!(
            find_separating_set(&chain(), 0, 2, NodeSet::singleton(1), NodeSet::EMPTY),
            Some(NodeSet::singleton(1))
        );
    }
}
