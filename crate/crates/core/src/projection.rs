//! Mixed graphs with endpoint marks, latent projection to MAGs, and MAG checks.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{AncestralWitness, Error, Result};
use crate::graph::{find_directed_cycle, validate_admg, Admg, NodeId};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::separation::inducing_collider_path;

/// Endpoint mark of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Tail,
    Arrow,
    Circle,
}

/// A graph with at most one edge per pair and a mark at each endpoint.
///
/// Serves both as a MAG (tails and arrows only) and as a PAG.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    labels: Arc<[String]>,
    // marks[a * n + b]: mark at b on the edge a–b
    marks: Vec<Option<Mark>>,
    adj: Vec<NodeSet>,
}

impl core::fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .map(|(a, b, ma, mb)| {
                alloc::format!("{} {} {}", self.labels[a], edge_symbol(ma, mb), self.labels[b])
            })
            .collect();
        write!(f, "MixedGraph[{:?}]{{{}}}", &*self.labels, parts.join(", "))
    }
}

/// Three-character symbol for an edge with the given endpoint marks,
/// e.g. `-->`, `<->`, `o->`.
pub fn edge_symbol(at_a: Mark, at_b: Mark) -> &'static str {
    use Mark::*;
    match (at_a, at_b) {
        (Tail, Tail) => "---",
        (Tail, Arrow) => "-->",
        (Tail, Circle) => "--o",
        (Arrow, Tail) => "<--",
        (Arrow, Arrow) => "<->",
        (Arrow, Circle) => "<-o",
        (Circle, Tail) => "o--",
        (Circle, Arrow) => "o->",
        (Circle, Circle) => "o-o",
    }
}

/// Inverse of [`edge_symbol`].
pub fn parse_edge_symbol(s: &str) -> Option<(Mark, Mark)> {
    let b = s.as_bytes();
    if b.len() != 3 || b[1] != b'-' {
        return None;
    }
    let left = match b[0] {
        b'-' => Mark::Tail,
        b'<' => Mark::Arrow,
        b'o' => Mark::Circle,
        _ => return None,
    };
    let right = match b[2] {
        b'-' => Mark::Tail,
        b'>' => Mark::Arrow,
        b'o' => Mark::Circle,
        _ => return None,
    };
    Some((left, right))
}

impl MixedGraph {
    pub fn empty(labels: Vec<String>) -> Result<Self> {
        if labels.len() > MAX_NODES {
            return Err(Error::TooManyNodes(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self::empty_shared(labels.into()))
    }

    pub(crate) fn empty_shared(labels: Arc<[String]>) -> Self {
        let n = labels.len();
        MixedGraph {
            labels,
            marks: alloc::vec![None; n * n],
            adj: alloc::vec![NodeSet::EMPTY; n],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Inserts or overwrites the edge `a`–`b`.
    pub fn set_edge(&mut self, a: NodeId, b: NodeId, at_a: Mark, at_b: Mark) -> Result<()> {
        let n = self.n();
        if a >= n {
            return Err(Error::UnknownNode(a));
        }
        if b >= n {
            return Err(Error::UnknownNode(b));
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.marks[b * n + a] = Some(at_a);
        self.marks[a * n + b] = Some(at_b);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) {
        let n = self.n();
        self.marks[b * n + a] = None;
        self.marks[a * n + b] = None;
        self.adj[a].remove(b);
        self.adj[b].remove(a);
    }

    /// Sets the mark at `at` on the existing edge `at`–`other`.
    pub(crate) fn set_mark(&mut self, at: NodeId, other: NodeId, m: Mark) {
        let n = self.n();
        debug_assert!(self.adj[at].contains(other));
        self.marks[other * n + at] = Some(m);
    }

    /// Mark at `at` on the edge between `at` and `other`.
    #[inline]
    pub fn mark_at(&self, at: NodeId, other: NodeId) -> Option<Mark> {
        self.marks[other * self.n() + at]
    }

    #[inline]
    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adj[a].contains(b)
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> NodeSet {
        self.adj[v]
    }

    /// `a --> b`
    #[inline]
    pub fn is_directed(&self, a: NodeId, b: NodeId) -> bool {
        self.mark_at(a, b) == Some(Mark::Tail) && self.mark_at(b, a) == Some(Mark::Arrow)
    }

    /// `a <-> b`
    #[inline]
    pub fn is_bidirected(&self, a: NodeId, b: NodeId) -> bool {
        self.mark_at(a, b) == Some(Mark::Arrow) && self.mark_at(b, a) == Some(Mark::Arrow)
    }

    /// Edges `(a, b, mark at a, mark at b)` with `a < b`, in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Mark, Mark)> + '_ {
        (0..self.n()).flat_map(move |a| {
            self.adj[a].iter().filter(move |&b| b > a).map(move |b| {
                (a, b, self.mark_at(a, b).unwrap_or(Mark::Circle), self.mark_at(b, a).unwrap_or(Mark::Circle))
            })
        })
    }

    /// Edges as text, e.g. `X o-> Y`, in canonical order.
    pub fn edge_list(&self) -> Vec<String> {
        self.edges()
            .map(|(a, b, ma, mb)| alloc::format!("{} {} {}", self.labels[a], edge_symbol(ma, mb), self.labels[b]))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// True if every mark is a tail or an arrow and no edge has two tails.
    pub fn is_tail_arrow_only(&self) -> bool {
        self.edges().all(|(_, _, ma, mb)| {
            ma != Mark::Circle && mb != Mark::Circle && !(ma == Mark::Tail && mb == Mark::Tail)
        })
    }

    /// Same skeleton, all marks replaced by circles.
    pub fn circled(&self) -> MixedGraph {
        let mut g = self.clone();
        for m in g.marks.iter_mut().flatten() {
            *m = Mark::Circle;
        }
        g
    }

    /// Reads the graph as an ADMG: `a --> b` is directed, `a <-> b` bidirected.
    ///
    /// The result is not checked for acyclicity.
    pub(crate) fn to_admg_unchecked(&self) -> Result<Admg> {
        if !self.is_tail_arrow_only() {
            return Err(Error::InvalidMarks);
        }
        let n = self.n();
        let mut pa = alloc::vec![NodeSet::EMPTY; n];
        let mut sp = alloc::vec![NodeSet::EMPTY; n];
        for (a, b, ma, mb) in self.edges() {
            match (ma, mb) {
                (Mark::Tail, Mark::Arrow) => pa[b].insert(a),
                (Mark::Arrow, Mark::Tail) => pa[a].insert(b),
                _ => {
                    sp[a].insert(b);
                    sp[b].insert(a);
                }
            }
        }
        Ok(Admg::from_masks_unchecked(self.labels.clone(), pa, sp))
    }

    /// Reads a MAG as an ADMG, checking acyclicity.
    pub fn to_admg(&self) -> Result<Admg> {
        let g = self.to_admg_unchecked()?;
        validate_admg(&g)?;
        Ok(g)
    }

    /// The subgraph induced by `keep`, nodes renumbered in increasing order.
    pub fn induced(&self, keep: NodeSet) -> MixedGraph {
        let idx: Vec<NodeId> = keep.iter().collect();
        let labels: Vec<String> = idx.iter().map(|&v| self.labels[v].clone()).collect();
        let mut g = MixedGraph::empty_shared(labels.into());
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    let _ = g.set_edge(i, j, self.mark_at(a, b).unwrap(), self.mark_at(b, a).unwrap());
                }
            }
        }
        g
    }

    /// Copy with new labels (same length).
    pub fn relabeled(&self, labels: Arc<[String]>) -> MixedGraph {
        assert_eq!(labels.len(), self.n(), "label count");
        MixedGraph {
            labels,
            marks: self.marks.clone(),
            adj: self.adj.clone(),
        }
    }

    /// Whether both graphs have identical adjacencies.
    pub fn same_skeleton(&self, other: &MixedGraph) -> bool {
        self.adj == other.adj
    }
}

/// MAG of an ADMG: `a`, `b` adjacent iff an inducing path relative to the
/// empty set joins them; oriented by ancestry.
pub fn latent_project(g: &Admg) -> Result<MixedGraph> {
    validate_admg(g)?;
    Ok(latent_project_unchecked(g))
}

pub(crate) fn latent_project_unchecked(g: &Admg) -> MixedGraph {
    let n = g.n();
    let an: Vec<NodeSet> = (0..n).map(|v| g.ancestors_of(NodeSet::singleton(v))).collect();
    let mut m = MixedGraph::empty_shared(g.labels_arc().clone());
    for a in 0..n {
        for b in a + 1..n {
            if !inducing_collider_path(g, a, b) {
                continue;
            }
            let (ma, mb) = if an[b].contains(a) {
                (Mark::Tail, Mark::Arrow)
            } else if an[a].contains(b) {
                (Mark::Arrow, Mark::Tail)
            } else {
                (Mark::Arrow, Mark::Arrow)
            };
            let _ = m.set_edge(a, b, ma, mb);
        }
    }
    m
}

/// Checks that `m` is a MAG: ancestral and maximal.
pub fn validate_mag(m: &MixedGraph) -> Result<()> {
    let g = m.to_admg_unchecked()?;
    let n = g.n();
    let pa: Vec<NodeSet> = (0..n).map(|v| g.parents(v)).collect();
    if let Some(c) = find_directed_cycle(n, &pa) {
        return Err(Error::NotAncestral(AncestralWitness::DirectedCycle(c)));
    }
    for (a, b) in g.bidirected_edges() {
        if g.ancestors_of(NodeSet::singleton(b)).contains(a) {
            return Err(Error::NotAncestral(AncestralWitness::AlmostDirectedCycle(a, b)));
        }
        if g.ancestors_of(NodeSet::singleton(a)).contains(b) {
            return Err(Error::NotAncestral(AncestralWitness::AlmostDirectedCycle(b, a)));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if !m.adjacent(a, b) && inducing_collider_path(&g, a, b) {
                return Err(Error::NotMaximal(a, b));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn dag_projects_to_itself() {
        let g = Admg::from_labeled(&["A", "B", "C"], &[("A", "B"), ("B", "C")], &[]).unwrap();
        let m = latent_project(&g).unwrap();
        let mut want = MixedGraph::empty(lab(&["A", "B", "C"])).unwrap();
        want.set_edge(0, 1, Mark::Tail, Mark::Arrow).unwrap();
        want.set_edge(1, 2, Mark::Tail, Mark::Arrow).unwrap();
        assert_eq!(m, want);
    }

    #[test]
    fn single_bidirected_edge_is_kept() {
        let g = Admg::from_labeled(&["X", "Y"], &[], &[("X", "Y")]).unwrap();
        let m = latent_project(&g).unwrap();
        assert!(m.is_bidirected(0, 1));
    }

    #[test]
    fn d1_gains_x_to_y() {
        let g = Admg::from_labeled(&["X", "Z", "Y"], &[("X", "Z"), ("Z", "Y")], &[("Z", "Y")]).unwrap();
        let m = latent_project(&g).unwrap();
        assert!(m.is_directed(0, 1));
        assert!(m.is_directed(1, 2));
        assert!(m.is_directed(0, 2));
        assert_eq!(m.num_edges(), 3);
    }

    #[test]
    fn almost_directed_cycle_is_not_ancestral() {
        let mut m = MixedGraph::empty(lab(&["A", "B", "C"])).unwrap();
        m.set_edge(0, 1, Mark::Tail, Mark::Arrow).unwrap();
        m.set_edge(1, 2, Mark::Arrow, Mark::Arrow).unwrap();
        m.set_edge(2, 0, Mark::Tail, Mark::Arrow).unwrap();
        assert!(matches!(validate_mag(&m), Err(Error::NotAncestral(AncestralWitness::AlmostDirectedCycle(..)))));
    }

    #[test]
    fn directed_cycle_is_not_ancestral() {
        let mut m = MixedGraph::empty(lab(&["A", "B", "C"])).unwrap();
        m.set_edge(0, 1, Mark::Tail, Mark::Arrow).unwrap();
        m.set_edge(1, 2, Mark::Tail, Mark::Arrow).unwrap();
        m.set_edge(2, 0, Mark::Tail, Mark::Arrow).unwrap();
        assert!(matches!(validate_mag(&m), Err(Error::NotAncestral(AncestralWitness::DirectedCycle(_)))));
    }

    #[test]
    fn missing_edge_is_not_maximal() {
        let mut m = MixedGraph::empty(lab(&["A", "B", "C"])).unwrap();
        m.set_edge(0, 1, Mark::Arrow, Mark::Arrow).unwrap();
        m.set_edge(1, 2, Mark::Tail, Mark::Arrow).unwrap();
        assert!(validate_mag(&m).is_ok());
        // A <-> B <-> C <-> D with B -> D and C -> A: both colliders are ancestors of an endpoint
        let mut m = MixedGraph::empty(lab(&["A", "B", "C", "D"])).unwrap();
        m.set_edge(0, 1, Mark::Arrow, Mark::Arrow).unwrap();
        m.set_edge(1, 2, Mark::Arrow, Mark::Arrow).unwrap();
        m.set_edge(2, 3, Mark::Arrow, Mark::Arrow).unwrap();
        m.set_edge(1, 3, Mark::Tail, Mark::Arrow).unwrap();
        m.set_edge(2, 0, Mark::Tail, Mark::Arrow).unwrap();
        assert_eq!(validate_mag(&m), Err(Error::NotMaximal(0, 3)));
    }

    #[test]
    fn edge_symbols_round_trip() {
        for a in [Mark::Tail, Mark::Arrow, Mark::Circle] {
            for b in [Mark::Tail, Mark::Arrow, Mark::Circle] {
                assert_eq!(parse_edge_symbol(edge_symbol(a, b)), Some((a, b)));
            }
        }
        assert_eq!(parse_edge_symbol("<>"), None);
    }
}
