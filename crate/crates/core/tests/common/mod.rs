#![allow(dead_code)]

use std::collections::BTreeSet;

use imec_core::projection::parse_edge_symbol;
use imec_core::{m_separated, Admg, InterventionPair, InterventionSet, Mark, MixedGraph, NodeSet, SeparationOracle};
use proptest::prelude::*;

pub fn admg(labels: &[&str], directed: &[(&str, &str)], bidirected: &[(&str, &str)]) -> Admg {
    Admg::from_labeled(labels, directed, bidirected).unwrap()
}

pub fn d1() -> Admg {
    admg(&["X", "Z", "Y"], &[("X", "Z"), ("Z", "Y")], &[("Z", "Y")])
}

pub fn d2() -> Admg {
    admg(&["X", "Z", "Y"], &[("X", "Z"), ("Z", "Y"), ("X", "Y")], &[("Z", "Y")])
}

pub fn set(v: &[usize]) -> NodeSet {
    v.iter().collect()
}

fn canonical(a: &str, sym: &str, b: &str) -> (String, String, Mark, Mark) {
    let (ma, mb) = parse_edge_symbol(sym).unwrap_or_else(|| panic!("bad symbol {sym}"));
    if a <= b {
        (a.to_string(), b.to_string(), ma, mb)
    } else {
        (b.to_string(), a.to_string(), mb, ma)
    }
}

/// Asserts the edge set of `m` equals `expected`, given as `"A o-> B"` strings.
pub fn assert_edges(m: &MixedGraph, expected: &[&str]) {
    let want: BTreeSet<_> = expected
        .iter()
        .map(|e| {
            let p: Vec<&str> = e.split_whitespace().collect();
            assert_eq!(p.len(), 3, "bad edge spec {e}");
            assert!(m.index_of(p[0]).is_some() && m.index_of(p[2]).is_some(), "unknown node in {e}");
            canonical(p[0], p[1], p[2])
        })
        .collect();
    let got: BTreeSet<_> = m
        .edges()
        .map(|(a, b, ma, mb)| {
            let sym = imec_core::projection::edge_symbol(ma, mb);
            canonical(m.label(a), sym, m.label(b))
        })
        .collect();
    assert_eq!(got, want, "\n got: {:?}\nwant: {:?}", m.edge_list(), expected);
}

/// Target sets of size 1 or 2 drawn from the empty set and singletons.
pub fn small_isets(n: usize) -> Vec<InterventionSet> {
    let mut pool = vec![NodeSet::EMPTY];
    pool.extend((0..n).map(NodeSet::singleton));
    let mut out = Vec::new();
    for (a, &s) in pool.iter().enumerate() {
        out.push(InterventionSet::new(vec![s]).unwrap());
        for &t in &pool[a + 1..] {
            out.push(InterventionSet::new(vec![s, t]).unwrap());
        }
    }
    out
}

/// Ordered pairs of distinct targets from the empty set and singletons.
pub fn small_pairs(n: usize) -> Vec<(NodeSet, NodeSet)> {
    let mut pool = vec![NodeSet::EMPTY];
    pool.extend((0..n).map(NodeSet::singleton));
    let mut out = Vec::new();
    for &a in &pool {
        for &b in &pool {
            if a != b {
                out.push((a, b));
            }
        }
    }
    out
}

/// Naive m-separation: enumerates every simple path between `x` and `y`.
pub fn naive_m_separated(g: &Admg, x: NodeSet, y: NodeSet, z: NodeSet) -> bool {
    let an_z = g.ancestors_of(z);
    for s in x.iter() {
        let mut visited = NodeSet::singleton(s);
        if open_path_from(g, s, None, &mut visited, y, z, an_z) {
            return false;
        }
    }
    true
}

// `arrived_into` is Some(true) when the edge used to reach `v` has an arrowhead at `v`.
fn open_path_from(
    g: &Admg,
    v: usize,
    arrived_into: Option<bool>,
    visited: &mut NodeSet,
    y: NodeSet,
    z: NodeSet,
    an_z: NodeSet,
) -> bool {
    let mut steps: Vec<(usize, bool, bool)> = Vec::new();
    for c in g.children(v).iter() {
        steps.push((c, false, true));
    }
    for p in g.parents(v).iter() {
        steps.push((p, true, false));
    }
    for s in g.spouses(v).iter() {
        steps.push((s, true, true));
    }
    for (w, arrow_at_v, arrow_at_w) in steps {
        if visited.contains(w) {
            continue;
        }
        if let Some(into_v) = arrived_into {
            let collider = into_v && arrow_at_v;
            let ok = if collider { an_z.contains(v) } else { !z.contains(v) };
            if !ok {
                continue;
            }
        }
        if y.contains(w) {
            return true;
        }
        visited.insert(w);
        let found = open_path_from(g, w, Some(arrow_at_w), visited, y, z, an_z);
        visited.remove(w);
        if found {
            return true;
        }
    }
    false
}

/// Random ADMG on `n` nodes: directed edges follow a random order.
pub fn arb_admg(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Admg> {
    n.prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        (
            Just(n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), pairs),
            proptest::collection::vec(prop::bool::weighted(0.3), pairs),
        )
    })
    .prop_map(|(n, order, dir, bi)| {
        let mut pa = vec![NodeSet::EMPTY; n];
        let mut sp = vec![NodeSet::EMPTY; n];
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if dir[k] {
                    pa[order[b]].insert(order[a]);
                }
                if bi[k] {
                    sp[a].insert(b);
                    sp[b].insert(a);
                }
                k += 1;
            }
        }
        let labels = (0..n).map(|i| format!("V{i}")).collect();
        Admg::from_masks(labels, pa, sp).unwrap()
    })
}

/// A random graph with a node subset and a target pair from the empty set
/// and singletons.
pub fn arb_admg_pair(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Admg, NodeSet, NodeSet)> {
    arb_admg(n).prop_flat_map(|g| {
        let n = g.n();
        let pick = prop_oneof![Just(None), (0..n).prop_map(Some)];
        (Just(g), pick.clone(), pick).prop_filter_map("distinct targets", |(g, a, b)| {
            let to = |v: Option<usize>| v.map(NodeSet::singleton).unwrap_or(NodeSet::EMPTY);
            (a != b).then(|| (g, to(a), to(b)))
        })
    })
}

/// Disjoint `(y, w)` with `y` non-empty and outside `I Δ J`.
pub fn queries(n: usize, p: &InterventionPair) -> Vec<(NodeSet, NodeSet)> {
    let full = NodeSet::full(n);
    let mut out = Vec::new();
    for y in full.difference(p.k).subsets().filter(|y| !y.is_empty()) {
        for w in full.difference(y).subsets() {
            out.push((y, w));
        }
    }
    out
}

/// Every within-domain separation and cross-domain invariance implied by `g`.
///
/// Within a domain, intervened nodes may be endpoints; the remaining
/// intervened nodes are conditioned on.
pub fn statements(g: &Admg, iset: &InterventionSet) -> Vec<bool> {
    let n = g.n();
    let full = NodeSet::full(n);
    let o = SeparationOracle::new(g.clone(), iset.clone()).unwrap();
    let mut out = Vec::new();
    for (i, &t) in iset.targets().iter().enumerate() {
        let h = g.mutilated(t, NodeSet::EMPTY);
        for y in full.subsets().filter(|s| !s.is_empty()) {
            for z in full.difference(y).subsets().filter(|s| !s.is_empty()) {
                for w in full.difference(y | z | t).subsets() {
                    out.push(m_separated(&h, y, z, (w | t).difference(y | z)).unwrap());
                }
            }
        }
        for j in i + 1..iset.len() {
            let p = iset.pair(i, j).unwrap();
            for (y, w) in queries(n, &p) {
                out.push(o.do_invariance(i, j, y, w).unwrap());
            }
        }
    }
    out
}

