//! MAG Markov equivalence and hard/soft I-Markov equivalence of ADMGs.

use alloc::vec::Vec;

use crate::augmentation::{i_augmented_tuple, soft_augmented_mag, twin_augmented_mag};
use crate::error::{Error, Result};
use crate::graph::{Admg, InterventionSet, NodeId};
use crate::nodeset::NodeSet;
use crate::projection::{latent_project_unchecked, Mark, MixedGraph};

/// Which of the three MAG equivalence conditions failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailedCondition {
    Skeleton,
    UnshieldedCollider,
    DiscriminatingPath,
}

impl FailedCondition {
    pub fn name(self) -> &'static str {
        match self {
            FailedCondition::Skeleton => "skeleton",
            FailedCondition::UnshieldedCollider => "unshielded_collider",
            FailedCondition::DiscriminatingPath => "discriminating_path",
        }
    }
}

/// Evidence for a failed condition, over node indices of the compared graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    /// A pair adjacent in exactly one graph.
    Edge(NodeId, NodeId),
    /// An unshielded collider present in exactly one graph.
    Triple(NodeId, NodeId, NodeId),
    /// A path discriminating `node` in both graphs, with `node` a collider in only one.
    Path(Vec<NodeId>, NodeId),
}

/// Outcome of an equivalence check.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub failed_condition: Option<FailedCondition>,
    pub witness: Option<Witness>,
    /// Target index whose component failed (I-Markov checks only).
    pub target: Option<usize>,
}

impl EquivalenceReport {
    pub fn equivalent() -> Self {
        EquivalenceReport {
            equivalent: true,
            failed_condition: None,
            witness: None,
            target: None,
        }
    }

    fn failed(c: FailedCondition, w: Witness) -> Self {
        EquivalenceReport {
            equivalent: false,
            failed_condition: Some(c),
            witness: Some(w),
            target: None,
        }
    }
}

/// Hard or soft interventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Hard,
    Soft,
}

#[inline]
fn arrow_at(m: &MixedGraph, at: NodeId, other: NodeId) -> bool {
    m.mark_at(at, other) == Some(Mark::Arrow)
}

/// Triples `(a, b, c)`, `a < c`, with `a *-> b <-* c` and `a`, `c` non-adjacent.
pub fn unshielded_colliders(m: &MixedGraph) -> Vec<(NodeId, NodeId, NodeId)> {
    let mut out = Vec::new();
    for b in 0..m.n() {
        let into_b: Vec<NodeId> = m.neighbors(b).iter().filter(|&a| arrow_at(m, b, a)).collect();
        for (s, &a) in into_b.iter().enumerate() {
            for &c in &into_b[s + 1..] {
                if !m.adjacent(a, c) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Every discriminating path ending in `y`, as node sequences
/// `[x, w1, .., wk, z, y]`; the discriminated node is the second to last.
pub fn discriminating_paths(m: &MixedGraph, y: NodeId) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let parents_of_y: NodeSet = m.neighbors(y).iter().filter(|&w| m.is_directed(w, y)).collect();
    for z in m.neighbors(y).iter() {
        // first intermediate: a parent of y with an arrowhead at it on the edge to z
        for w in m.neighbors(z).intersection(parents_of_y).iter() {
            if w == z || !arrow_at(m, w, z) {
                continue;
            }
            let mut path = alloc::vec![y, z, w];
            extend_discriminating(m, y, parents_of_y, &mut path, &mut out);
        }
    }
    out.sort();
    out.dedup();
    out
}

// `path` is reversed: [y, z, wk, .., w_last]; w_last already has an arrowhead
// from its successor and needs one from the next node as well.
fn extend_discriminating(m: &MixedGraph, y: NodeId, pa_y: NodeSet, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
    let c = *path.last().unwrap();
    let on_path: NodeSet = path.iter().collect();
    for u in m.neighbors(c).difference(on_path).iter() {
        if !arrow_at(m, c, u) {
            continue;
        }
        if !m.adjacent(u, y) {
            let mut p = alloc::vec![u];
            p.extend(path.iter().rev());
            out.push(p);
        } else if pa_y.contains(u) && arrow_at(m, u, c) {
            path.push(u);
            extend_discriminating(m, y, pa_y, path, out);
            path.pop();
        }
    }
}

/// Whether `p = [x, w1, .., wk, z, y]` is a discriminating path for `z` in `m`.
pub fn is_discriminating(m: &MixedGraph, p: &[NodeId]) -> bool {
    let len = p.len();
    if len < 4 {
        return false;
    }
    let set: NodeSet = p.iter().collect();
    if set.len() != len || p.iter().any(|&v| v >= m.n()) {
        return false;
    }
    if p.windows(2).any(|e| !m.adjacent(e[0], e[1])) {
        return false;
    }
    let (x, y) = (p[0], p[len - 1]);
    if m.adjacent(x, y) {
        return false;
    }
    (1..len - 2).all(|t| {
        let w = p[t];
        arrow_at(m, w, p[t - 1]) && arrow_at(m, w, p[t + 1]) && m.is_directed(w, y)
    })
}

fn check_universe(m1: &MixedGraph, m2: &MixedGraph) -> Result<()> {
    if m1.n() != m2.n() || m1.labels() != m2.labels() {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

/// Markov equivalence of two MAGs: same skeleton, same unshielded colliders,
/// and the same collider status on every path discriminating in both.
pub fn mag_equivalent(m1: &MixedGraph, m2: &MixedGraph) -> Result<EquivalenceReport> {
    check_universe(m1, m2)?;
    let n = m1.n();
    if !m1.same_skeleton(m2) {
        for a in 0..n {
            if let Some(b) = m1.neighbors(a).symmetric_difference(m2.neighbors(a)).first() {
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                return Ok(EquivalenceReport::failed(FailedCondition::Skeleton, Witness::Edge(a, b)));
            }
        }
    }
    let c1 = unshielded_colliders(m1);
    let c2 = unshielded_colliders(m2);
    if c1 != c2 {
        let w = c1
            .iter()
            .find(|t| c2.binary_search(t).is_err())
            .or_else(|| c2.iter().find(|t| c1.binary_search(t).is_err()))
            .copied()
            .unwrap();
        return Ok(EquivalenceReport::failed(
            FailedCondition::UnshieldedCollider,
            Witness::Triple(w.0, w.1, w.2),
        ));
    }
    for y in 0..n {
        for p in discriminating_paths(m1, y) {
            if !is_discriminating(m2, &p) {
                continue;
            }
            let len = p.len();
            let (w, z) = (p[len - 3], p[len - 2]);
            let col1 = arrow_at(m1, z, w) && arrow_at(m1, z, y);
            let col2 = arrow_at(m2, z, w) && arrow_at(m2, z, y);
            if col1 != col2 {
                return Ok(EquivalenceReport::failed(FailedCondition::DiscriminatingPath, Witness::Path(p, z)));
            }
        }
    }
    Ok(EquivalenceReport::equivalent())
}

fn check_same_nodes(d1: &Admg, d2: &Admg, iset: &InterventionSet) -> Result<()> {
    if d1.n() != d2.n() || d1.labels() != d2.labels() {
        return Err(Error::UniverseMismatch);
    }
    iset.check_against(d1)
}

/// I-Markov equivalence under hard or soft interventions.
pub fn i_markov_equivalent(d1: &Admg, d2: &Admg, iset: &InterventionSet, regime: Regime) -> Result<EquivalenceReport> {
    check_same_nodes(d1, d2, iset)?;
    Signature::new(d1, iset, regime)?.compare(&Signature::new(d2, iset, regime)?)
}

/// Pairwise check: Markov equivalence of the twin augmented MAGs of
/// every pair of distinct targets (or of the projected mutilated graphs
/// when there is a single target).
pub fn twin_equivalent(d1: &Admg, d2: &Admg, iset: &InterventionSet) -> Result<EquivalenceReport> {
    check_same_nodes(d1, d2, iset)?;
    if iset.len() == 1 {
        let t = iset.get(0)?;
        let m1 = latent_project_unchecked(&d1.mutilated(t, NodeSet::EMPTY));
        let m2 = latent_project_unchecked(&d2.mutilated(t, NodeSet::EMPTY));
        let mut r = mag_equivalent(&m1, &m2)?;
        if !r.equivalent {
            r.target = Some(0);
        }
        return Ok(r);
    }
    for i in 0..iset.len() {
        for j in i + 1..iset.len() {
            let p = iset.pair(i, j)?;
            let t1 = twin_augmented_mag(d1, &p)?;
            let t2 = twin_augmented_mag(d2, &p)?;
            let mut r = mag_equivalent(&t1.graph, &t2.graph)?;
            if !r.equivalent {
                r.target = Some(i);
                return Ok(r);
            }
        }
    }
    Ok(EquivalenceReport::equivalent())
}

/// Precomputed augmented MAGs of one graph, for repeated comparisons.
#[derive(Clone, Debug)]
pub struct Signature {
    pub regime: Regime,
    pub graphs: Vec<MixedGraph>,
}

impl Signature {
    pub fn new(d: &Admg, iset: &InterventionSet, regime: Regime) -> Result<Self> {
        let graphs = match regime {
            Regime::Hard => i_augmented_tuple(d, iset)?.into_iter().map(|a| a.graph).collect(),
            Regime::Soft => alloc::vec![soft_augmented_mag(d, iset)?.graph],
        };
        Ok(Signature { regime, graphs })
    }

    pub fn compare(&self, other: &Signature) -> Result<EquivalenceReport> {
        if self.regime != other.regime || self.graphs.len() != other.graphs.len() {
            return Err(Error::UniverseMismatch);
        }
        for (i, (a, b)) in self.graphs.iter().zip(&other.graphs).enumerate() {
            let mut r = mag_equivalent(a, b)?;
            if !r.equivalent {
                if self.regime == Regime::Hard {
                    r.target = Some(i);
                }
                return Ok(r);
            }
        }
        Ok(EquivalenceReport::equivalent())
    }

    pub fn equivalent_to(&self, other: &Signature) -> Result<bool> {
        Ok(self.compare(other)?.equivalent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;

    fn mixed(labels: &[&str], edges: &[(usize, usize, Mark, Mark)]) -> MixedGraph {
        let mut m = MixedGraph::empty(labels.iter().map(|s| String::from(*s)).collect()).unwrap();
        for &(a, b, ma, mb) in edges {
            m.set_edge(a, b, ma, mb).unwrap();
        }
        m
    }

    use Mark::{Arrow as A, Tail as T};

    #[test]
    fn collider_examples() {
        let chain = mixed(&["A", "B", "C"], &[(0, 1, T, A), (1, 2, T, A)]);
        assert!(unshielded_colliders(&chain).is_empty());
        let v = mixed(&["A", "B", "C"], &[(0, 1, T, A), (2, 1, T, A)]);
        assert_eq!(unshielded_colliders(&v), alloc::vec![(0, 1, 2)]);
    }

    #[test]
    fn discriminating_path_example() {
        // X -> W <-> Z, W -> Y, Z -> Y, X and Y non-adjacent
        let m = mixed(
            &["X", "W", "Z", "Y"],
            &[(0, 1, T, A), (1, 2, A, A), (1, 3, T, A), (2, 3, T, A)],
        );
        assert_eq!(discriminating_paths(&m, 3), alloc::vec![alloc::vec![0, 1, 2, 3]]);
        assert!(is_discriminating(&m, &[0, 1, 2, 3]));
        for y in 0..3 {
            assert!(discriminating_paths(&m, y).is_empty());
        }
    }

    #[test]
    fn small_graphs_have_no_discriminating_paths() {
        let m = mixed(&["A", "B", "C"], &[(0, 1, A, A), (1, 2, A, A)]);
        for y in 0..3 {
            assert!(discriminating_paths(&m, y).is_empty());
        }
    }

    #[test]
    fn reflexive() {
        let m = mixed(&["A", "B", "C"], &[(0, 1, T, A), (2, 1, T, A)]);
        assert!(mag_equivalent(&m, &m).unwrap().equivalent);
    }

    #[test]
    fn chains_and_fork_are_equivalent() {
        let a = mixed(&["A", "B", "C"], &[(0, 1, T, A), (1, 2, T, A)]);
        let b = mixed(&["A", "B", "C"], &[(0, 1, A, T), (1, 2, T, A)]);
        assert!(mag_equivalent(&a, &b).unwrap().equivalent);
        let v = mixed(&["A", "B", "C"], &[(0, 1, T, A), (2, 1, T, A)]);
        let r = mag_equivalent(&a, &v).unwrap();
        assert_eq!(r.failed_condition, Some(FailedCondition::UnshieldedCollider));
        assert_eq!(r.witness, Some(Witness::Triple(0, 1, 2)));
    }

    #[test]
    fn discriminating_path_decides() {
        let collider = mixed(
            &["X", "W", "Z", "Y"],
            &[(0, 1, T, A), (1, 2, A, A), (1, 3, T, A), (2, 3, A, A)],
        );
        let noncollider = mixed(
            &["X", "W", "Z", "Y"],
            &[(0, 1, T, A), (1, 2, A, A), (1, 3, T, A), (2, 3, T, A)],
        );
        let r = mag_equivalent(&collider, &noncollider).unwrap();
        assert_eq!(r.failed_condition, Some(FailedCondition::DiscriminatingPath));
        assert_eq!(r.witness, Some(Witness::Path(alloc::vec![0, 1, 2, 3], 2)));
    }

    #[test]
    fn universe_mismatch() {
        let a = mixed(&["A", "B"], &[]);
        let b = mixed(&["A", "C"], &[]);
        assert_eq!(mag_equivalent(&a, &b), Err(Error::UniverseMismatch));
    }
}
