//! Exhaustive enumeration of small ADMGs and exact I-MEC sizes.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::equivalence::{Regime, Signature};
use crate::error::{Error, Result};
use crate::graph::{find_directed_cycle, Admg, InterventionSet};
use crate::nodeset::NodeSet;

/// Largest node count accepted by [`enumerate_admgs`].
pub const MAX_ENUMERATION_NODES: usize = 4;

/// Labels `X1`, ..., `Xn` used by the enumerator.
pub fn enumeration_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect()
}

/// Parent masks of every labelled DAG on `n` nodes, in adjacency-matrix order.
pub fn labelled_dags(n: usize) -> Vec<Vec<NodeSet>> {
    let slots = off_diagonal(n);
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << slots.len()) {
        let mut pa = alloc::vec![NodeSet::EMPTY; n];
        for (k, &(a, b)) in slots.iter().enumerate() {
            if bits >> k & 1 == 1 {
                pa[b].insert(a);
            }
        }
        if find_directed_cycle(n, &pa).is_none() {
            out.push(pa);
        }
    }
    out
}

/// Number of labelled DAGs on `n` nodes (Robinson's recurrence).
pub fn dag_count(n: usize) -> u64 {
    let mut a = alloc::vec![1u128; n + 1];
    for m in 1..=n {
        let mut s: i128 = 0;
        let mut binom: u128 = 1;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            let term = (binom * (1u128 << (k * (m - k))) * a[m - k]) as i128;
            s += if k % 2 == 1 { term } else { -term };
        }
        a[m] = s as u128;
    }
    a[n] as u64
}

/// Number of ADMGs on `n` nodes: DAGs times bidirected subsets.
pub fn admg_count(n: usize) -> u64 {
    dag_count(n).saturating_mul(1u64.checked_shl((n * n.saturating_sub(1) / 2) as u32).unwrap_or(u64::MAX))
}

/// Iterator over all ADMGs on a fixed label set.
#[derive(Clone, Debug)]
pub struct EnumerationSpace {
    labels: Arc<[String]>,
    dags: Vec<Vec<NodeSet>>,
    pairs: Vec<(usize, usize)>,
    dag: usize,
    bidirected: u64,
}

impl EnumerationSpace {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Total number of graphs in the space.
    pub fn total(&self) -> u64 {
        self.dags.len() as u64 * (1u64 << self.pairs.len())
    }
}

impl Iterator for EnumerationSpace {
    type Item = Admg;

    fn next(&mut self) -> Option<Admg> {
        if self.dag >= self.dags.len() {
            return None;
        }
        let n = self.labels.len();
        let mut sp = alloc::vec![NodeSet::EMPTY; n];
        for (k, &(a, b)) in self.pairs.iter().enumerate() {
            if self.bidirected >> k & 1 == 1 {
                sp[a].insert(b);
                sp[b].insert(a);
            }
        }
        let g = Admg::from_masks_unchecked(self.labels.clone(), self.dags[self.dag].clone(), sp);
        self.bidirected += 1;
        if self.bidirected >> self.pairs.len() != 0 {
            self.bidirected = 0;
            self.dag += 1;
        }
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let done = self.dag as u64 * (1u64 << self.pairs.len()) + self.bidirected;
        let left = (self.total() - done) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for EnumerationSpace {}

/// All ADMGs on nodes `X1..Xn`, each exactly once.
///
/// Graphs are ordered by DAG (adjacency-matrix bits, row-major) and then by
/// bidirected subset in binary order over the pairs `(a, b)`, `a < b`.
pub fn enumerate_admgs(n: usize) -> Result<EnumerationSpace> {
    enumerate_admgs_labeled(enumeration_labels(n))
}

/// [`enumerate_admgs`] with caller-supplied labels.
pub fn enumerate_admgs_labeled(labels: Vec<String>) -> Result<EnumerationSpace> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::IndexOutOfRange(0));
    }
    if n > MAX_ENUMERATION_NODES {
        return Err(Error::SearchSpaceTooLarge(admg_count(n)));
    }
    Admg::empty(labels.clone())?;
    Ok(EnumerationSpace {
        labels: labels.into(),
        dags: labelled_dags(n),
        pairs: pairs(n),
        dag: 0,
        bidirected: 0,
    })
}

/// Number of enumerated ADMGs equivalent to `truth`, including `truth`.
pub fn mec_size_exhaustive(truth: &Admg, iset: &InterventionSet, regime: Regime) -> Result<u64> {
    iset.check_against(truth)?;
    let space = enumerate_admgs_labeled(truth.labels().to_vec())?;
    let sig = Signature::new(truth, iset, regime)?;
    let mut count = 0;
    for g in space {
        if sig.equivalent_to(&Signature::new(&g, iset, regime)?)? {
            count += 1;
        }
    }
    Ok(count)
}
