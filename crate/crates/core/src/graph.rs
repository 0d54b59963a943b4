//! Acyclic directed mixed graphs, interventions and mutilation.
//!
//! Latent confounders are implicit: each bidirected edge stands for one
//! hidden common cause of its endpoints. Ancestor sets are reflexive.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

/// Index of a node inside its graph.
pub type NodeId = usize;

/// An acyclic directed mixed graph.
///
/// Directed and bidirected edges may coexist on the same pair.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Admg {
    labels: Arc<[String]>,
    pa: Vec<NodeSet>,
    ch: Vec<NodeSet>,
    sp: Vec<NodeSet>,
}

impl core::fmt::Debug for Admg {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (a, b) in self.directed_edges() {
            parts.push(format!("{} -> {}", self.labels[a], self.labels[b]));
        }
        for (a, b) in self.bidirected_edges() {
            parts.push(format!("{} <-> {}", self.labels[a], self.labels[b]));
        }
        write!(f, "Admg[{:?}]{{{}}}", &*self.labels, parts.join(", "))
    }
}

/// Labels `0`, `1`, ... for an unlabelled graph.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{i}")).collect()
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_NODES {
        return Err(Error::TooManyNodes(labels.len()));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

impl Admg {
    /// Graph with the given node labels and no edges.
    pub fn empty(labels: Vec<String>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        Ok(Admg {
            labels: labels.into(),
            pa: alloc::vec![NodeSet::EMPTY; n],
            ch: alloc::vec![NodeSet::EMPTY; n],
            sp: alloc::vec![NodeSet::EMPTY; n],
        })
    }

    /// Builds and validates a graph from edge lists over node indices.
    pub fn from_edges(
        labels: Vec<String>,
        directed: &[(NodeId, NodeId)],
        bidirected: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        let mut g = Admg::empty(labels)?;
        for &(a, b) in directed.iter().chain(bidirected) {
            g.check_node(a)?;
            g.check_node(b)?;
            if a == b {
                return Err(Error::SelfLoop(a));
            }
        }
        for &(a, b) in directed {
            g.pa[b].insert(a);
            g.ch[a].insert(b);
        }
        for &(a, b) in bidirected {
            g.sp[a].insert(b);
            g.sp[b].insert(a);
        }
        validate_admg(&g)?;
        Ok(g)
    }

    /// Builds a graph from labelled edges, declaring nodes in `labels` order.
    pub fn from_labeled(labels: &[&str], directed: &[(&str, &str)], bidirected: &[(&str, &str)]) -> Result<Self> {
        let owned: Vec<String> = labels.iter().map(|s| String::from(*s)).collect();
        let idx = |l: &str| -> Result<NodeId> {
            labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::UnknownLabel(String::from(l)))
        };
        let d: Vec<(NodeId, NodeId)> = directed
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<_>>()?;
        let bi: Vec<(NodeId, NodeId)> = bidirected
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<_>>()?;
        Admg::from_edges(owned, &d, &bi)
    }

    /// Builds a graph from adjacency masks without checking acyclicity.
    ///
    /// `pa[v]` holds the parents of `v` and `sp[v]` its bidirected
    /// neighbours; `sp` must be symmetric.
    pub(crate) fn from_masks_unchecked(labels: Arc<[String]>, pa: Vec<NodeSet>, sp: Vec<NodeSet>) -> Self {
        let n = labels.len();
        let mut ch = alloc::vec![NodeSet::EMPTY; n];
        for (v, p) in pa.iter().enumerate() {
            for u in p.iter() {
                ch[u].insert(v);
            }
        }
        Admg { labels, pa, ch, sp }
    }

    /// Builds a graph from adjacency masks and validates it.
    pub fn from_masks(labels: Vec<String>, pa: Vec<NodeSet>, sp: Vec<NodeSet>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        let all = NodeSet::full(n);
        if pa.len() != n || sp.len() != n {
            return Err(Error::UnknownNode(n));
        }
        for v in 0..n {
            if let Some(u) = (pa[v] | sp[v]).difference(all).first() {
                return Err(Error::UnknownNode(u));
            }
            for u in sp[v].iter() {
                if !sp[u].contains(v) {
                    return Err(Error::UnknownNode(u));
                }
            }
        }
        let g = Admg::from_masks_unchecked(labels.into(), pa, sp);
        validate_admg(&g)?;
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn labels_arc(&self) -> &Arc<[String]> {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Resolves labels to a node set.
    pub fn set_of(&self, labels: &[&str]) -> Result<NodeSet> {
        labels
            .iter()
            .map(|l| self.index_of(l).ok_or_else(|| Error::UnknownLabel(String::from(*l))))
            .collect()
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    pub fn check_set(&self, s: NodeSet) -> Result<()> {
        match s.difference(self.nodes()).first() {
            Some(v) => Err(Error::UnknownNode(v)),
            None => Ok(()),
        }
    }

    #[inline]
    pub fn parents(&self, v: NodeId) -> NodeSet {
        self.pa[v]
    }

    #[inline]
    pub fn children(&self, v: NodeId) -> NodeSet {
        self.ch[v]
    }

    /// Bidirected neighbours of `v`.
    #[inline]
    pub fn spouses(&self, v: NodeId) -> NodeSet {
        self.sp[v]
    }

    /// Nodes sharing any edge with `v`.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> NodeSet {
        self.pa[v] | self.ch[v] | self.sp[v]
    }

    #[inline]
    pub fn has_directed(&self, a: NodeId, b: NodeId) -> bool {
        self.ch[a].contains(b)
    }

    #[inline]
    pub fn has_bidirected(&self, a: NodeId, b: NodeId) -> bool {
        self.sp[a].contains(b)
    }

    #[inline]
    pub fn adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.neighbors(a).contains(b)
    }

    /// Directed edges `(parent, child)` sorted by parent, then child.
    pub fn directed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |a| self.ch[a].iter().map(move |b| (a, b)))
    }

    /// Bidirected edges `(a, b)` with `a < b`, sorted.
    pub fn bidirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |a| self.sp[a].iter().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    pub fn num_directed(&self) -> usize {
        self.ch.iter().map(|s| s.len()).sum()
    }

    pub fn num_bidirected(&self) -> usize {
        self.sp.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Reflexive ancestor closure of `s`. Members outside the graph are ignored.
    pub fn ancestors_of(&self, s: NodeSet) -> NodeSet {
        let mut seen = s.intersection(self.nodes());
        let mut frontier = seen;
        while let Some(v) = frontier.first() {
            frontier.remove(v);
            let new = self.pa[v].difference(seen);
            seen |= new;
            frontier |= new;
        }
        seen
    }

    /// Reflexive descendant closure of `s`.
    pub fn descendants_of(&self, s: NodeSet) -> NodeSet {
        let mut seen = s.intersection(self.nodes());
        let mut frontier = seen;
        while let Some(v) = frontier.first() {
            frontier.remove(v);
            let new = self.ch[v].difference(seen);
            seen |= new;
            frontier |= new;
        }
        seen
    }

    /// Mutilation without membership checks; see [`mutilate`].
    pub fn mutilated(&self, over: NodeSet, under: NodeSet) -> Admg {
        let n = self.n();
        let mut pa = self.pa.clone();
        let mut sp = self.sp.clone();
        for v in 0..n {
            if over.contains(v) {
                pa[v] = NodeSet::EMPTY;
                sp[v] = NodeSet::EMPTY;
            } else {
                pa[v] = pa[v].difference(under);
                sp[v] = sp[v].difference(over);
            }
        }
        Admg::from_masks_unchecked(self.labels.clone(), pa, sp)
    }

    /// Same graph with a different label set of equal length.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Admg> {
        check_labels(&labels)?;
        if labels.len() != self.n() {
            return Err(Error::UnknownNode(labels.len()));
        }
        Ok(Admg::from_masks_unchecked(labels.into(), self.pa.clone(), self.sp.clone()))
    }

    /// Renames node `v` to `perm[v]`, keeping each label attached to its node.
    ///
    /// `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[NodeId]) -> Admg {
        let n = self.n();
        assert_eq!(perm.len(), n, "permutation length");
        let mut labels: Vec<String> = alloc::vec![String::new(); n];
        let mut pa = alloc::vec![NodeSet::EMPTY; n];
        let mut sp = alloc::vec![NodeSet::EMPTY; n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v].clone();
            pa[perm[v]] = self.pa[v].iter().map(|u| perm[u]).collect();
            sp[perm[v]] = self.sp[v].iter().map(|u| perm[u]).collect();
        }
        Admg::from_masks_unchecked(labels.into(), pa, sp)
    }

    /// Adds `k` isolated nodes after the existing ones.
    pub fn with_isolated(&self, extra: &[&str]) -> Result<Admg> {
        let mut labels: Vec<String> = self.labels.to_vec();
        labels.extend(extra.iter().map(|s| String::from(*s)));
        check_labels(&labels)?;
        let mut pa = self.pa.clone();
        let mut sp = self.sp.clone();
        pa.resize(labels.len(), NodeSet::EMPTY);
        sp.resize(labels.len(), NodeSet::EMPTY);
        Ok(Admg::from_masks_unchecked(labels.into(), pa, sp))
    }
}

/// Finds a directed cycle, returned in traversal order.
pub(crate) fn find_directed_cycle(n: usize, pa: &[NodeSet]) -> Option<Vec<NodeId>> {
    // 0 = unvisited, 1 = on stack, 2 = finished
    let mut state = alloc::vec![0u8; n];
    let mut stack: Vec<(NodeId, crate::nodeset::Iter)> = Vec::new();
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        stack.push((root, pa[root].iter()));
        while let Some((v, it)) = stack.last_mut() {
            let v = *v;
            match it.next() {
                Some(u) if state[u] == 1 => {
                    let pos = stack.iter().position(|(w, _)| *w == u).unwrap_or(0);
                    let mut cyc: Vec<NodeId> = stack[pos..].iter().map(|(w, _)| *w).collect();
                    // stack holds child-to-parent links, so reverse for parent-to-child order
                    cyc.reverse();
                    return Some(cyc);
                }
                Some(u) if state[u] == 0 => {
                    state[u] = 1;
                    stack.push((u, pa[u].iter()));
                }
                Some(_) => {}
                None => {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
    }
    None
}

/// Checks the ADMG invariants: no self-loops and an acyclic directed part.
pub fn validate_admg(g: &Admg) -> Result<()> {
    for v in 0..g.n() {
        if g.pa[v].contains(v) || g.sp[v].contains(v) {
            return Err(Error::SelfLoop(v));
        }
    }
    match find_directed_cycle(g.n(), &g.pa) {
        Some(c) => Err(Error::CyclicDirectedPart(c)),
        None => Ok(()),
    }
}

/// Reflexive ancestors of `s` in `g`.
pub fn ancestors(g: &Admg, s: NodeSet) -> Result<NodeSet> {
    g.check_set(s)?;
    Ok(g.ancestors_of(s))
}

/// Removes edges into `over` (bidirected edges included) and directed edges out of `under`.
pub fn mutilate(g: &Admg, over: NodeSet, under: NodeSet) -> Result<Admg> {
    g.check_set(over)?;
    g.check_set(under)?;
    Ok(g.mutilated(over, under))
}

/// Members of `z` that are not ancestors of `w` once edges into `x` are cut.
pub fn relative_nonancestors(g: &Admg, z: NodeSet, w: NodeSet, x: NodeSet) -> Result<NodeSet> {
    g.check_set(z)?;
    g.check_set(w)?;
    g.check_set(x)?;
    Ok(relative_nonancestors_unchecked(g, z, w, x))
}

pub(crate) fn relative_nonancestors_unchecked(g: &Admg, z: NodeSet, w: NodeSet, x: NodeSet) -> NodeSet {
    if w.is_empty() {
        return z;
    }
    let an = g.mutilated(x, NodeSet::EMPTY).ancestors_of(w);
    z.difference(an)
}

/// A set of intervened nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct InterventionTarget(pub NodeSet);

impl InterventionTarget {
    pub const OBSERVATIONAL: InterventionTarget = InterventionTarget(NodeSet::EMPTY);

    pub fn members(self) -> NodeSet {
        self.0
    }
}

impl From<NodeSet> for InterventionTarget {
    fn from(s: NodeSet) -> Self {
        InterventionTarget(s)
    }
}

/// Ordered list of pairwise distinct targets. Position `i` is domain `i + 1`
/// in text output.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InterventionSet {
    targets: Vec<NodeSet>,
}

impl InterventionSet {
    pub fn new(targets: Vec<NodeSet>) -> Result<Self> {
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateTarget(i));
            }
        }
        Ok(InterventionSet { targets })
    }

    /// Builds a set from label lists, e.g. `[&[], &["Z"]]`.
    pub fn from_labels(g: &Admg, targets: &[&[&str]]) -> Result<Self> {
        let t = targets.iter().map(|l| g.set_of(l)).collect::<Result<Vec<_>>>()?;
        InterventionSet::new(t)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn get(&self, i: usize) -> Result<NodeSet> {
        self.targets.get(i).copied().ok_or(Error::IndexOutOfRange(i))
    }

    pub fn targets(&self) -> &[NodeSet] {
        &self.targets
    }

    /// Union of all targets.
    pub fn support(&self) -> NodeSet {
        self.targets.iter().fold(NodeSet::EMPTY, |a, &b| a | b)
    }

    /// Checks that every target lies inside `g`.
    pub fn check_against(&self, g: &Admg) -> Result<()> {
        g.check_set(self.support())
    }

    /// The pair of targets `i` and `j`, tagged with their domain indices.
    pub fn pair(&self, i: usize, j: usize) -> Result<InterventionPair> {
        let mut p = InterventionPair::new(self.get(i)?, self.get(j)?);
        p.domains = (i, j);
        Ok(p)
    }
}

/// Two targets and their symmetric-difference split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InterventionPair {
    pub i: NodeSet,
    pub j: NodeSet,
    /// `i Δ j`
    pub k: NodeSet,
    /// `k \ j`
    pub k_i: NodeSet,
    /// `k \ i`
    pub k_j: NodeSet,
    /// Domain indices (0-based) of `i` and `j`; `(0, 1)` for a free-standing pair.
    pub domains: (usize, usize),
}

impl InterventionPair {
    pub fn new(i: NodeSet, j: NodeSet) -> Self {
        let k = i.symmetric_difference(j);
        InterventionPair {
            i,
            j,
            k,
            k_i: k.difference(j),
            k_j: k.difference(i),
            domains: (0, 1),
        }
    }

    /// The same pair seen from `j`.
    pub fn swapped(&self) -> Self {
        let mut p = InterventionPair::new(self.j, self.i);
        p.domains = (self.domains.1, self.domains.0);
        p
    }
}

/// `W`-relative split of the symmetric difference of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelativePartition {
    pub w_i: NodeSet,
    pub w_j: NodeSet,
    pub r: NodeSet,
    pub r_i: NodeSet,
    pub r_j: NodeSet,
}

pub fn partition_relative(p: &InterventionPair, w: NodeSet) -> RelativePartition {
    let r = p.k.difference(w);
    RelativePartition {
        w_i: p.k_i.intersection(w),
        w_j: p.k_j.intersection(w),
        r,
        r_i: r.intersection(p.k_i),
        r_j: r.intersection(p.k_j),
    }
}
