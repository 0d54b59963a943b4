//! Augmented pair graphs, twin and I-augmented MAGs, the soft-intervention
//! augmented MAG, and the brute-force I-essential graph.
//!
//! Node layouts are fixed so that results can be compared index-wise:
//!
//! * pair graph and twin: `V^(I)` at `0..n`, `V^(J)` at `n..2n`, `F` at `2n`;
//! * I-augmented MAG of target `i`: `V^(i)` at `0..n`, then one F-node per
//!   other target `j`, in increasing `j`;
//! * soft augmented MAG: `V` at `0..n`, then one F-node per unordered target
//!   pair `(a, b)`, `a < b`, in lexicographic order.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::equivalence::mag_equivalent;
use crate::error::{Error, Result};
use crate::graph::{Admg, InterventionPair, InterventionSet, NodeId};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::projection::{latent_project_unchecked, Mark, MixedGraph};

/// A node of an augmented graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainNode {
    /// Copy of an observed node in the domain of target `domain` (0-based).
    Base { node: NodeId, domain: usize },
    /// The F-node contrasting targets `.0 < .1` (0-based).
    FNode(usize, usize),
    /// An observed node in a single shared copy.
    Plain(NodeId),
}

impl DomainNode {
    pub fn f(a: usize, b: usize) -> Self {
        if a <= b {
            DomainNode::FNode(a, b)
        } else {
            DomainNode::FNode(b, a)
        }
    }

    pub fn is_f(&self) -> bool {
        matches!(self, DomainNode::FNode(..))
    }

    /// The observed node behind a base or plain copy.
    pub fn base(&self) -> Option<NodeId> {
        match *self {
            DomainNode::Base { node, .. } | DomainNode::Plain(node) => Some(node),
            DomainNode::FNode(..) => None,
        }
    }

    /// Text label: `x@1` for a base copy, `F@1,2` for an F-node, `x` for a plain node.
    /// Domain numbers are 1-based.
    pub fn label(&self, base_labels: &[String]) -> String {
        match *self {
            DomainNode::Base { node, domain } => format!("{}@{}", base_labels[node], domain + 1),
            DomainNode::FNode(a, b) => format!("F@{},{}", a + 1, b + 1),
            DomainNode::Plain(node) => base_labels[node].clone(),
        }
    }
}

/// Which construction produced an [`AugmentedGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    PairGraph,
    Twin,
    IAugmented { target: usize },
    Soft,
    Essential { target: usize },
    Learned { target: usize },
}

/// A graph over domain-copied nodes and F-nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AugmentedGraph<G> {
    pub nodes: Vec<DomainNode>,
    pub graph: G,
    pub kind: Construction,
}

impl<G> AugmentedGraph<G> {
    pub fn index_of(&self, node: DomainNode) -> Option<NodeId> {
        self.nodes.iter().position(|&v| v == node)
    }

    /// Indices of all F-nodes.
    pub fn f_nodes(&self) -> NodeSet {
        self.nodes.iter().enumerate().filter(|(_, v)| v.is_f()).map(|(i, _)| i).collect()
    }
}

fn domain_labels(nodes: &[DomainNode], base: &[String]) -> Arc<[String]> {
    nodes.iter().map(|v| v.label(base)).collect::<Vec<_>>().into()
}

#[inline]
fn shift(s: NodeSet, by: usize) -> NodeSet {
    NodeSet::from_bits(s.bits() << by)
}

fn pair_nodes(n: usize, p: &InterventionPair) -> Vec<DomainNode> {
    let (di, dj) = p.domains;
    let mut nodes: Vec<DomainNode> = (0..n).map(|v| DomainNode::Base { node: v, domain: di }).collect();
    nodes.extend((0..n).map(|v| DomainNode::Base { node: v, domain: dj }));
    nodes.push(DomainNode::f(di, dj));
    nodes
}

fn check_pair(d: &Admg, p: &InterventionPair) -> Result<()> {
    d.check_set(p.i | p.j)?;
    if 2 * d.n() + 1 > MAX_NODES {
        return Err(Error::TooManyNodes(2 * d.n() + 1));
    }
    if p.domains.0 == p.domains.1 {
        return Err(Error::IndexOutOfRange(p.domains.1));
    }
    Ok(())
}

/// Two copies of `d`, mutilated over `I` and `J`, plus one F-node pointing
/// at both copies of every node of `I Δ J`.
pub fn augmented_pair_graph(d: &Admg, p: &InterventionPair) -> Result<AugmentedGraph<Admg>> {
    check_pair(d, p)?;
    Ok(pair_graph_unchecked(d, p))
}

fn pair_graph_unchecked(d: &Admg, p: &InterventionPair) -> AugmentedGraph<Admg> {
    let n = d.n();
    let gi = d.mutilated(p.i, NodeSet::EMPTY);
    let gj = d.mutilated(p.j, NodeSet::EMPTY);
    let f = NodeSet::singleton(2 * n);
    let mut pa = Vec::with_capacity(2 * n + 1);
    let mut sp = Vec::with_capacity(2 * n + 1);
    for v in 0..n {
        pa.push(if p.k.contains(v) { gi.parents(v) | f } else { gi.parents(v) });
        sp.push(gi.spouses(v));
    }
    for v in 0..n {
        let pv = shift(gj.parents(v), n);
        pa.push(if p.k.contains(v) { pv | f } else { pv });
        sp.push(shift(gj.spouses(v), n));
    }
    pa.push(NodeSet::EMPTY);
    sp.push(NodeSet::EMPTY);
    let nodes = pair_nodes(n, p);
    let labels = domain_labels(&nodes, d.labels());
    AugmentedGraph {
        nodes,
        graph: Admg::from_masks_unchecked(labels, pa, sp),
        kind: Construction::PairGraph,
    }
}

/// MAG of the augmented pair graph with F-adjacencies copied across domains.
pub fn twin_augmented_mag(d: &Admg, p: &InterventionPair) -> Result<AugmentedGraph<MixedGraph>> {
    check_pair(d, p)?;
    Ok(twin_unchecked(d, p))
}

fn twin_unchecked(d: &Admg, p: &InterventionPair) -> AugmentedGraph<MixedGraph> {
    let n = d.n();
    let aug = pair_graph_unchecked(d, p);
    let mut m = latent_project_unchecked(&aug.graph);
    let f = 2 * n;
    for v in 0..n {
        if m.adjacent(f, v) || m.adjacent(f, n + v) {
            let _ = m.set_edge(f, v, Mark::Tail, Mark::Arrow);
            let _ = m.set_edge(f, n + v, Mark::Tail, Mark::Arrow);
        }
    }
    AugmentedGraph {
        nodes: aug.nodes,
        graph: m,
        kind: Construction::Twin,
    }
}

/// Nodes of the I-augmented MAG of target `i`.
pub fn i_augmented_nodes(n: usize, iset: &InterventionSet, i: usize) -> Vec<DomainNode> {
    let mut nodes: Vec<DomainNode> = (0..n).map(|v| DomainNode::Base { node: v, domain: i }).collect();
    nodes.extend((0..iset.len()).filter(|&j| j != i).map(|j| DomainNode::f(i, j)));
    nodes
}

/// Union over `j ≠ i` of the twin MAGs' induced subgraphs on `V^(i) ∪ {F^(i,j)}`.
///
/// With a single target this is the MAG of `d` mutilated over it.
pub fn i_augmented_mag(d: &Admg, iset: &InterventionSet, i: usize) -> Result<AugmentedGraph<MixedGraph>> {
    let ti = iset.get(i)?;
    iset.check_against(d)?;
    let n = d.n();
    if 2 * n + 1 > MAX_NODES || n + iset.len() > MAX_NODES {
        return Err(Error::TooManyNodes(2 * n + iset.len()));
    }
    let nodes = i_augmented_nodes(n, iset, i);
    let labels = domain_labels(&nodes, d.labels());
    if iset.len() == 1 {
        let m = latent_project_unchecked(&d.mutilated(ti, NodeSet::EMPTY));
        return Ok(AugmentedGraph {
            nodes,
            graph: m.relabeled(labels),
            kind: Construction::IAugmented { target: i },
        });
    }
    let mut out = MixedGraph::empty_shared(labels);
    let mut slot = n;
    for j in 0..iset.len() {
        if j == i {
            continue;
        }
        let twin = twin_unchecked(d, &iset.pair(i, j)?);
        let m = &twin.graph;
        for a in 0..n {
            for b in m.neighbors(a).iter().filter(|&b| b > a && b < n) {
                let (ma, mb) = (m.mark_at(a, b).unwrap(), m.mark_at(b, a).unwrap());
                debug_assert!(!out.adjacent(a, b) || (out.mark_at(a, b), out.mark_at(b, a)) == (Some(ma), Some(mb)));
                out.set_edge(a, b, ma, mb)?;
            }
        }
        for v in m.neighbors(2 * n).iter().filter(|&v| v < n) {
            out.set_edge(slot, v, Mark::Tail, Mark::Arrow)?;
        }
        slot += 1;
    }
    Ok(AugmentedGraph {
        nodes,
        graph: out,
        kind: Construction::IAugmented { target: i },
    })
}

/// I-augmented MAGs for every target, in target order.
pub fn i_augmented_tuple(d: &Admg, iset: &InterventionSet) -> Result<Vec<AugmentedGraph<MixedGraph>>> {
    (0..iset.len()).map(|i| i_augmented_mag(d, iset, i)).collect()
}

/// Nodes of the soft augmented MAG.
pub fn soft_nodes(n: usize, iset: &InterventionSet) -> Vec<DomainNode> {
    let mut nodes: Vec<DomainNode> = (0..n).map(DomainNode::Plain).collect();
    for a in 0..iset.len() {
        for b in a + 1..iset.len() {
            nodes.push(DomainNode::FNode(a, b));
        }
    }
    nodes
}

/// One unmutilated copy of `d` plus an F-node per unordered target pair
/// pointing at that pair's symmetric difference, projected to a MAG.
pub fn soft_augmented_mag(d: &Admg, iset: &InterventionSet) -> Result<AugmentedGraph<MixedGraph>> {
    iset.check_against(d)?;
    let n = d.n();
    let k = iset.len();
    let total = n + k * k.saturating_sub(1) / 2;
    if total > MAX_NODES {
        return Err(Error::TooManyNodes(total));
    }
    let nodes = soft_nodes(n, iset);
    let mut pa: Vec<NodeSet> = (0..n).map(|v| d.parents(v)).collect();
    let mut sp: Vec<NodeSet> = (0..n).map(|v| d.spouses(v)).collect();
    let t = iset.targets();
    let mut f = n;
    for a in 0..k {
        for b in a + 1..k {
            for v in t[a].symmetric_difference(t[b]).iter() {
                pa[v].insert(f);
            }
            f += 1;
        }
    }
    pa.resize(total, NodeSet::EMPTY);
    sp.resize(total, NodeSet::EMPTY);
    let labels = domain_labels(&nodes, d.labels());
    let g = Admg::from_masks_unchecked(labels, pa, sp);
    Ok(AugmentedGraph {
        nodes,
        graph: latent_project_unchecked(&g),
        kind: Construction::Soft,
    })
}

/// Endpoint-wise union: marks that agree are kept, others become circles.
///
/// Both graphs must share a skeleton.
pub(crate) fn union_marks(acc: &mut MixedGraph, other: &MixedGraph) {
    let n = acc.n();
    for a in 0..n {
        for b in acc.neighbors(a).iter() {
            if acc.mark_at(b, a) != other.mark_at(b, a) {
                acc.set_mark(b, a, Mark::Circle);
            }
        }
    }
}

/// Per-target union of the I-augmented MAGs of every candidate that is
/// hard I-Markov equivalent to `d`.
///
/// `candidates` must cover every ADMG over the nodes of `d`; candidates are
/// relabelled to `d`'s labels. Fails once more than `max_candidates` are seen.
pub fn i_essential_graph<I>(
    d: &Admg,
    iset: &InterventionSet,
    candidates: I,
    max_candidates: usize,
) -> Result<Vec<AugmentedGraph<MixedGraph>>>
where
    I: IntoIterator<Item = Admg>,
{
    let truth = i_augmented_tuple(d, iset)?;
    let mut acc: Vec<MixedGraph> = truth.iter().map(|a| a.graph.clone()).collect();
    for (seen, c) in candidates.into_iter().enumerate() {
        if seen >= max_candidates {
            return Err(Error::SearchSpaceTooLarge(seen as u64 + 1));
        }
        if c.n() != d.n() {
            return Err(Error::UniverseMismatch);
        }
        let c = if c.labels() == d.labels() { c } else { c.relabeled(d.labels().to_vec())? };
        let tuple = i_augmented_tuple(&c, iset)?;
        let mut equivalent = true;
        for (t, x) in truth.iter().zip(&tuple) {
            if !mag_equivalent(&t.graph, &x.graph)?.equivalent {
                equivalent = false;
                break;
            }
        }
        if equivalent {
            for (a, x) in acc.iter_mut().zip(&tuple) {
                union_marks(a, &x.graph);
            }
        }
    }
    Ok(truth
        .into_iter()
        .zip(acc)
        .enumerate()
        .map(|(i, (t, g))| AugmentedGraph {
            nodes: t.nodes,
            graph: g,
            kind: Construction::Essential { target: i },
        })
        .collect())
}
