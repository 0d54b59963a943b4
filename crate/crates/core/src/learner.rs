//! Oracle-driven structure learning of the I-augmented graph tuple.
//!
//! Phase I builds complete circle graphs per target, Phase II removes edges
//! using separating sets found by the oracle, and Phase III applies the
//! orientation rules until nothing changes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::augmentation::{i_augmented_nodes, AugmentedGraph, Construction, DomainNode};
use crate::equivalence::discriminating_paths;
use crate::error::{Error, Result};
use crate::graph::{InterventionSet, NodeId};
use crate::nodeset::NodeSet;
use crate::oracle::SeparationOracle;
use crate::projection::{Mark, MixedGraph};

/// A learned graph for one target; marks may be circles.
pub type Pag = AugmentedGraph<MixedGraph>;

/// Recorded separating sets, keyed by unordered node pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SepSetTable {
    map: BTreeMap<(DomainNode, DomainNode), Vec<DomainNode>>,
}

impl SepSetTable {
    fn key(a: DomainNode, b: DomainNode) -> (DomainNode, DomainNode) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn insert(&mut self, a: DomainNode, b: DomainNode, mut set: Vec<DomainNode>) {
        set.sort_unstable();
        set.dedup();
        self.map.insert(Self::key(a, b), set);
    }

    pub fn get(&self, a: DomainNode, b: DomainNode) -> Option<&[DomainNode]> {
        self.map.get(&Self::key(a, b)).map(|v| v.as_slice())
    }

    /// Whether `v` belongs to the recorded set of `(a, b)`; pairs with no
    /// record count as separated by the empty set.
    pub fn contains(&self, a: DomainNode, b: DomainNode, v: DomainNode) -> bool {
        self.get(a, b).is_some_and(|s| s.binary_search(&v).is_ok())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(DomainNode, DomainNode), &Vec<DomainNode>)> {
        self.map.iter()
    }

    pub fn extend(&mut self, other: SepSetTable) {
        self.map.extend(other.map);
    }
}

/// F-nodes of the graph for target `i`, ordered by the other target.
pub fn create_f_nodes(iset: &InterventionSet, i: usize) -> Vec<DomainNode> {
    (0..iset.len()).filter(|&j| j != i).map(|j| DomainNode::f(i, j)).collect()
}

/// Output of [`find_separating_sets`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SepSearch {
    /// Pairs that no tested set separates; these stay adjacent.
    pub retained: Vec<(DomainNode, DomainNode)>,
    pub sepsets: SepSetTable,
}

fn lift(s: NodeSet, domain: usize) -> impl Iterator<Item = DomainNode> {
    s.iter().map(move |node| DomainNode::Base { node, domain })
}

/// Separating-set search for one pair of targets.
///
/// With `i == j` every node pair of domain `i` is tested; otherwise each
/// node outside `I Δ J` is tested against `F^(i,j)`.
pub fn find_separating_sets(o: &SeparationOracle, i: usize, j: usize) -> Result<SepSearch> {
    let iset = o.iset();
    let n = o.truth().n();
    let all = NodeSet::full(n);
    let ti = iset.get(i)?;
    let tj = iset.get(j)?;
    let mut out = SepSearch::default();
    if i == j {
        let fs = create_f_nodes(iset, i);
        for x in 0..n {
            for y in x + 1..n {
                let xy = NodeSet::singleton(x).with(y);
                let pool = all.difference(xy | ti);
                let mut found = None;
                for w in pool.subsets() {
                    if o.pair_separated(i, x, y, w)? {
                        found = Some(w);
                        break;
                    }
                }
                let (bx, by) = (DomainNode::Base { node: x, domain: i }, DomainNode::Base { node: y, domain: i });
                match found {
                    Some(w) => {
                        let mut s: Vec<DomainNode> = lift(w | ti.difference(xy), i).collect();
                        s.extend(fs.iter().copied());
                        out.sepsets.insert(bx, by, s);
                    }
                    None => out.retained.push((bx, by)),
                }
            }
        }
        return Ok(out);
    }
    let k = ti.symmetric_difference(tj);
    let f = DomainNode::f(i, j);
    for y in 0..n {
        let by = DomainNode::Base { node: y, domain: i };
        if k.contains(y) {
            out.retained.push((f, by));
            continue;
        }
        let ys = NodeSet::singleton(y);
        let mut found = None;
        for w in all.without(y).subsets() {
            if o.do_invariance(i, j, ys, w)? {
                found = Some(w);
                break;
            }
        }
        match found {
            Some(w) => {
                out.sepsets.insert(f, by, lift((ti | w).without(y), i).collect());
                out.sepsets.insert(f, DomainNode::Base { node: y, domain: j }, lift((tj | w).without(y), j).collect());
            }
            None => out.retained.push((f, by)),
        }
    }
    Ok(out)
}

/// Learned graphs, one per target, and the separating sets used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnOutput {
    pub pags: Vec<Pag>,
    pub sepsets: SepSetTable,
}

/// Skeleton discovery followed by orientation.
pub fn learn(o: &SeparationOracle) -> Result<LearnOutput> {
    let (pags, sepsets) = learn_skeleton(o)?;
    let pags = orient_fixpoint(pags, &sepsets, o.iset())?;
    Ok(LearnOutput { pags, sepsets })
}

/// Phases I and II: circle-marked skeletons and separating sets.
pub fn learn_skeleton(o: &SeparationOracle) -> Result<(Vec<Pag>, SepSetTable)> {
    let iset = o.iset();
    if iset.is_empty() {
        return Err(Error::IndexOutOfRange(0));
    }
    let n = o.truth().n();
    let mut sepsets = SepSetTable::default();
    let mut pags = Vec::with_capacity(iset.len());
    for i in 0..iset.len() {
        let nodes = i_augmented_nodes(n, iset, i);
        let labels: Vec<_> = nodes.iter().map(|v| v.label(o.truth().labels())).collect();
        let mut g = MixedGraph::empty(labels)?;
        for j in 0..iset.len() {
            let found = find_separating_sets(o, i, j)?;
            for (a, b) in found.retained {
                let ia = nodes.iter().position(|&v| v == a).unwrap();
                let ib = nodes.iter().position(|&v| v == b).unwrap();
                g.set_edge(ia, ib, Mark::Circle, Mark::Circle)?;
            }
            sepsets.extend(found.sepsets);
        }
        pags.push(AugmentedGraph {
            nodes,
            graph: g,
            kind: Construction::Learned { target: i },
        });
    }
    Ok((pags, sepsets))
}

struct Orienter<'a> {
    pags: Vec<Pag>,
    sepsets: &'a SepSetTable,
    iset: &'a InterventionSet,
    n: usize,
}

impl Orienter<'_> {
    /// Sets the mark at `at` on `at`–`other`; errors if a different definite mark is there.
    fn orient(&mut self, g: usize, at: NodeId, other: NodeId, m: Mark) -> Result<bool> {
        let graph = &mut self.pags[g].graph;
        match graph.mark_at(at, other) {
            Some(cur) if cur == m => Ok(false),
            Some(Mark::Circle) => {
                graph.set_mark(at, other, m);
                Ok(true)
            }
            _ => {
                let labels = graph.labels();
                Err(Error::MarkConflict {
                    node: labels[at].clone(),
                    other: labels[other].clone(),
                })
            }
        }
    }

    fn sep_contains(&self, g: usize, a: NodeId, b: NodeId, v: NodeId) -> bool {
        let nodes = &self.pags[g].nodes;
        self.sepsets.contains(nodes[a], nodes[b], nodes[v])
    }

    fn rule0(&mut self) -> Result<()> {
        for g in 0..self.pags.len() {
            let size = self.pags[g].graph.n();
            for b in 0..size {
                let nb: Vec<NodeId> = self.pags[g].graph.neighbors(b).iter().collect();
                for (s, &a) in nb.iter().enumerate() {
                    for &c in &nb[s + 1..] {
                        if self.pags[g].graph.adjacent(a, c) || self.sep_contains(g, a, c, b) {
                            continue;
                        }
                        self.orient(g, b, a, Mark::Arrow)?;
                        self.orient(g, b, c, Mark::Arrow)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn mark(&self, g: usize, at: NodeId, other: NodeId) -> Option<Mark> {
        self.pags[g].graph.mark_at(at, other)
    }

    // a *-> b o-* c, a and c non-adjacent: b -> c
    fn r1(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        for b in 0..self.pags[g].graph.n() {
            let nb = self.pags[g].graph.neighbors(b);
            for a in nb.iter() {
                if self.mark(g, b, a) != Some(Mark::Arrow) {
                    continue;
                }
                for c in nb.without(a).iter() {
                    if self.pags[g].graph.adjacent(a, c) || self.mark(g, b, c) != Some(Mark::Circle) {
                        continue;
                    }
                    changed |= self.orient(g, b, c, Mark::Tail)?;
                    changed |= self.orient(g, c, b, Mark::Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    // a -> b *-> c or a *-> b -> c, with a *-o c: a *-> c
    fn r2(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        for a in 0..self.pags[g].graph.n() {
            for c in self.pags[g].graph.neighbors(a).iter() {
                if self.mark(g, c, a) != Some(Mark::Circle) {
                    continue;
                }
                let common = self.pags[g].graph.neighbors(a) & self.pags[g].graph.neighbors(c);
                let fire = common.iter().any(|b| {
                    let gr = &self.pags[g].graph;
                    (gr.is_directed(a, b) && gr.mark_at(c, b) == Some(Mark::Arrow))
                        || (gr.mark_at(b, a) == Some(Mark::Arrow) && gr.is_directed(b, c))
                });
                if fire {
                    changed |= self.orient(g, c, a, Mark::Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    // a *-> b <-* c, a *-o d o-* c, a and c non-adjacent, d *-o b: d *-> b
    fn r3(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        for b in 0..self.pags[g].graph.n() {
            let nb = self.pags[g].graph.neighbors(b);
            for d in nb.iter() {
                if self.mark(g, b, d) != Some(Mark::Circle) {
                    continue;
                }
                let cand: Vec<NodeId> = (nb & self.pags[g].graph.neighbors(d))
                    .iter()
                    .filter(|&a| self.mark(g, b, a) == Some(Mark::Arrow) && self.mark(g, d, a) == Some(Mark::Circle))
                    .collect();
                let fire = cand
                    .iter()
                    .enumerate()
                    .any(|(s, &a)| cand[s + 1..].iter().any(|&c| !self.pags[g].graph.adjacent(a, c)));
                if fire {
                    changed |= self.orient(g, b, d, Mark::Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    // discriminating path <x, .., w, z, y> with z o-* y
    fn r4(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        for y in 0..self.pags[g].graph.n() {
            for p in discriminating_paths(&self.pags[g].graph, y) {
                let len = p.len();
                let (x, w, z) = (p[0], p[len - 3], p[len - 2]);
                if self.mark(g, z, y) != Some(Mark::Circle) {
                    continue;
                }
                if self.sep_contains(g, x, y, z) {
                    changed |= self.orient(g, z, y, Mark::Tail)?;
                    changed |= self.orient(g, y, z, Mark::Arrow)?;
                } else {
                    changed |= self.orient(g, z, w, Mark::Arrow)?;
                    changed |= self.orient(g, z, y, Mark::Arrow)?;
                    changed |= self.orient(g, y, z, Mark::Arrow)?;
                }
            }
        }
        Ok(changed)
    }

    // every F-node edge points out of the F-node
    fn r8(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        for f in self.pags[g].f_nodes().iter() {
            for v in self.pags[g].graph.neighbors(f).iter() {
                changed |= self.orient(g, f, v, Mark::Tail)?;
                changed |= self.orient(g, v, f, Mark::Arrow)?;
            }
        }
        Ok(changed)
    }

    // intervened nodes have no incoming edges in their own domain
    fn r9(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        let (t, n) = (self.iset.targets()[g], self.n);
        for x in t.iter() {
            for y in self.pags[g].graph.neighbors(x).iter().filter(|&y| y < n) {
                changed |= self.orient(g, x, y, Mark::Tail)?;
                changed |= self.orient(g, y, x, Mark::Arrow)?;
            }
        }
        Ok(changed)
    }

    // ancestral relations carry over between domains
    fn r10(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        let n = self.n;
        for x in 0..n {
            for y in self.pags[g].graph.neighbors(x).iter().filter(|&y| y < n) {
                if !self.pags[g].graph.is_directed(x, y) {
                    continue;
                }
                for h in 0..self.pags.len() {
                    if h != g && self.pags[h].graph.adjacent(x, y) && self.mark(h, y, x) != Some(Mark::Arrow) {
                        changed |= self.orient(h, y, x, Mark::Arrow)?;
                    }
                }
            }
        }
        Ok(changed)
    }

    // J = I ∪ {x}, F^(I,J) adjacent to y^(I), y ∉ J: x^(I) -> y^(I)
    fn r11(&mut self, g: usize) -> Result<bool> {
        let mut changed = false;
        let n = self.n;
        let ti = self.iset.targets()[g];
        for (j, &tj) in self.iset.targets().iter().enumerate() {
            if j == g || !ti.is_subset(tj) || tj.difference(ti).len() != 1 {
                continue;
            }
            let x = tj.difference(ti).first().unwrap();
            let Some(f) = self.pags[g].index_of(DomainNode::f(g, j)) else {
                continue;
            };
            for y in self.pags[g].graph.neighbors(f).iter().filter(|&y| y < n && !tj.contains(y)) {
                if self.pags[g].graph.adjacent(x, y) {
                    changed |= self.orient(g, x, y, Mark::Tail)?;
                    changed |= self.orient(g, y, x, Mark::Arrow)?;
                }
            }
        }
        Ok(changed)
    }
}

/// Orientation rules applied after Rule 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R8,
    R9,
    R10,
    R11,
}

/// Sweep order used by [`orient_fixpoint`].
pub const DEFAULT_ORDER: [Rule; 8] = [Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R8, Rule::R9, Rule::R10, Rule::R11];

/// Applies Rule 0 once, then sweeps the remaining rules until a full pass
/// changes no mark.
pub fn orient_fixpoint(pags: Vec<Pag>, sepsets: &SepSetTable, iset: &InterventionSet) -> Result<Vec<Pag>> {
    orient_fixpoint_with_order(pags, sepsets, iset, &DEFAULT_ORDER)
}

/// [`orient_fixpoint`] with a caller-chosen sweep order.
pub fn orient_fixpoint_with_order(
    pags: Vec<Pag>,
    sepsets: &SepSetTable,
    iset: &InterventionSet,
    order: &[Rule],
) -> Result<Vec<Pag>> {
    let n = pags
        .first()
        .map(|p| p.nodes.iter().filter(|v| !v.is_f()).count())
        .unwrap_or(0);
    let mut o = Orienter { pags, sepsets, iset, n };
    o.rule0()?;
    loop {
        let mut changed = false;
        for &rule in order {
            for g in 0..o.pags.len() {
                changed |= match rule {
                    Rule::R1 => o.r1(g)?,
                    Rule::R2 => o.r2(g)?,
                    Rule::R3 => o.r3(g)?,
                    Rule::R4 => o.r4(g)?,
                    Rule::R8 => o.r8(g)?,
                    Rule::R9 => o.r9(g)?,
                    Rule::R10 => o.r10(g)?,
                    Rule::R11 => o.r11(g)?,
                };
            }
        }
        if !changed {
            return Ok(o.pags);
        }
    }
}
