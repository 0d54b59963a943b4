//! Exact invariance oracle computed from a ground-truth ADMG.

use alloc::collections::BTreeMap;

use crate::augmentation::augmented_pair_graph;
use crate::error::{Error, Result};
use crate::graph::{partition_relative, relative_nonancestors_unchecked, Admg, InterventionPair, InterventionSet, NodeId};
use crate::nodeset::NodeSet;
use crate::separation::m_connected;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum QueryKey {
    Ci { i: usize, a: NodeSet, b: NodeSet, w: NodeSet },
    Do { i: usize, j: usize, y: NodeSet, w: NodeSet },
    Pair { i: usize, x: NodeId, y: NodeId, w: NodeSet },
}

/// Answers the invariance queries of a target set against a known graph.
///
/// Answers are memoised; the memo sits behind a lock, so one oracle can be
/// shared across threads.
pub struct SeparationOracle {
    truth: Admg,
    iset: InterventionSet,
    memo: spin::Mutex<BTreeMap<QueryKey, bool>>,
}

impl core::fmt::Debug for SeparationOracle {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SeparationOracle")
            .field("truth", &self.truth)
            .field("iset", &self.iset)
            .field("memoised", &self.memo.lock().len())
            .finish()
    }
}

impl SeparationOracle {
    pub fn new(truth: Admg, iset: InterventionSet) -> Result<Self> {
        iset.check_against(&truth)?;
        Ok(SeparationOracle {
            truth,
            iset,
            memo: spin::Mutex::new(BTreeMap::new()),
        })
    }

    pub fn truth(&self) -> &Admg {
        &self.truth
    }

    pub fn iset(&self) -> &InterventionSet {
        &self.iset
    }

    /// Number of distinct queries answered so far.
    pub fn memo_len(&self) -> usize {
        self.memo.lock().len()
    }

    fn cached(&self, key: QueryKey, compute: impl FnOnce() -> bool) -> bool {
        if let Some(&v) = self.memo.lock().get(&key) {
            return v;
        }
        let v = compute();
        self.memo.lock().insert(key, v);
        v
    }

    /// `y ⊥ z | w, I` in the graph mutilated over target `i`.
    pub fn ci_invariance(&self, i: usize, y: NodeSet, z: NodeSet, w: NodeSet) -> Result<bool> {
        let t = self.iset.get(i)?;
        self.truth.check_set(y | z | w)?;
        if !(y | z | w).is_disjoint(t) {
            return Err(Error::TargetOverlap);
        }
        if !y.is_disjoint(z) || !y.is_disjoint(w) || !z.is_disjoint(w) {
            return Err(Error::QueryOverlap);
        }
        let (a, b) = if y <= z { (y, z) } else { (z, y) };
        Ok(self.cached(QueryKey::Ci { i, a, b, w }, || {
            !m_connected(&self.truth.mutilated(t, NodeSet::EMPTY), y, z, w | t)
        }))
    }

    /// Separation of two nodes inside the domain of target `i`, conditioning
    /// on `w` and on the target nodes other than `x` and `y`.
    ///
    /// Unlike [`ci_invariance`](Self::ci_invariance), `x` and `y` may be
    /// intervened on.
    pub fn pair_separated(&self, i: usize, x: NodeId, y: NodeId, w: NodeSet) -> Result<bool> {
        let t = self.iset.get(i)?;
        self.truth.check_node(x)?;
        self.truth.check_node(y)?;
        self.truth.check_set(w)?;
        let xy = NodeSet::singleton(x).with(y);
        if x == y || !w.is_disjoint(xy) {
            return Err(Error::QueryOverlap);
        }
        let (x, y) = (x.min(y), x.max(y));
        Ok(self.cached(QueryKey::Pair { i, x, y, w }, || {
            let cond = (w | t).difference(xy);
            !m_connected(
                &self.truth.mutilated(t, NodeSet::EMPTY),
                NodeSet::singleton(x),
                NodeSet::singleton(y),
                cond,
            )
        }))
    }

    /// Whether `P_I(y | w) = P_J(y | w)` is implied by the graph.
    pub fn do_invariance(&self, i: usize, j: usize, y: NodeSet, w: NodeSet) -> Result<bool> {
        let p = self.iset.pair(i, j)?;
        self.truth.check_set(y | w)?;
        if !y.is_disjoint(w) {
            return Err(Error::QueryOverlap);
        }
        if !y.is_disjoint(p.k) {
            return Err(Error::YInSymmetricDifference);
        }
        let (a, b) = (i.min(j), i.max(j));
        Ok(self.cached(QueryKey::Do { i: a, j: b, y, w }, || do_invariance_conjuncts(&self.truth, &p, y, w)))
    }
}

/// The four-conjunct graphical condition for `P_I(y | w) = P_J(y | w)`.
///
/// Nodes of `y` that are intervened on in both domains are left out of the
/// conditioning sets. `y` must avoid `I Δ J` and `w`.
pub fn do_invariance_conjuncts(g: &Admg, p: &InterventionPair, y: NodeSet, w: NodeSet) -> bool {
    if y.is_empty() || p.k.is_empty() {
        return true;
    }
    let part = partition_relative(p, w);
    let side = |own: NodeSet, r_other: NodeSet, w_other: NodeSet| -> bool {
        if !r_other.is_empty() {
            let r_w = relative_nonancestors_unchecked(g, r_other, w, own);
            let h = g.mutilated(own | r_w, NodeSet::EMPTY);
            if m_connected(&h, y, r_other, (w | own).difference(y)) {
                return false;
            }
        }
        if !w_other.is_empty() {
            let h = g.mutilated(own, w_other);
            if m_connected(&h, y, w_other, (w.difference(w_other) | own).difference(y)) {
                return false;
            }
        }
        true
    };
    side(p.i, part.r_j, part.w_j) && side(p.j, part.r_i, part.w_i)
}

/// The same condition read off the augmented pair graph:
/// `F ⊥ y^(I) | I^(I), w^(I)` and `F ⊥ y^(J) | J^(J), w^(J)`.
pub fn do_invariance_fnode(g: &Admg, p: &InterventionPair, y: NodeSet, w: NodeSet) -> Result<bool> {
    let mut p = *p;
    p.domains = (0, 1);
    let aug = augmented_pair_graph(g, &p)?;
    let n = g.n();
    let f = NodeSet::singleton(2 * n);
    let lift = |s: NodeSet, copy: usize| NodeSet::from_bits(s.bits() << (copy * n));
    let first = !m_connected(&aug.graph, f, lift(y, 0), lift((p.i | w).difference(y), 0));
    let second = !m_connected(&aug.graph, f, lift(y, 1), lift((p.j | w).difference(y), 1));
    Ok(first && second)
}

/// `y ⊥ z | w, I, F` in the augmented pair graph, read in the `I` copy.
pub fn ci_invariance_fnode(g: &Admg, p: &InterventionPair, y: NodeSet, z: NodeSet, w: NodeSet) -> Result<bool> {
    let mut p = *p;
    p.domains = (0, 1);
    let aug = augmented_pair_graph(g, &p)?;
    let f = NodeSet::singleton(2 * g.n());
    Ok(!m_connected(&aug.graph, y, z, w | p.i | f))
}
