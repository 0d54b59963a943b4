//! Random ADMGs and random target pairs.

use imec_core::enumeration::{enumerate_admgs, enumeration_labels};
use imec_core::{Admg, InterventionSet, NodeSet};
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::Error;

/// How random graphs are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleMode {
    /// Random order; each forward pair gets a directed edge and each pair a
    /// bidirected edge independently with probability `density`.
    Random,
    /// Random order with every forward pair directed; bidirected edges are
    /// drawn independently with probability `density`.
    Complete,
    /// Random complete DAG with exactly this many bidirected edges.
    CompleteFixed(usize),
    /// Uniform over every ADMG on `n` nodes (small `n` only).
    Uniform,
}

impl SampleMode {
    pub fn name(self) -> &'static str {
        match self {
            SampleMode::Random => "random",
            SampleMode::Complete => "complete",
            SampleMode::CompleteFixed(_) => "complete-fixed",
            SampleMode::Uniform => "uniform",
        }
    }
}

/// Draws graphs on nodes `X1..Xn`.
#[derive(Clone, Debug)]
pub struct Sampler {
    n: usize,
    mode: SampleMode,
    density: f64,
    labels: Vec<String>,
    space: Vec<Admg>,
}

impl Sampler {
    pub fn new(n: usize, mode: SampleMode, density: f64) -> Result<Self, Error> {
        if n == 0 || n > imec_core::nodeset::MAX_NODES {
            return Err(Error::Usage(format!("node count {n} out of range")));
        }
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::Usage(format!("density {density} outside [0, 1]")));
        }
        if let SampleMode::CompleteFixed(k) = mode {
            if k > n * (n - 1) / 2 {
                return Err(Error::Usage(format!("{k} bidirected edges do not fit on {n} nodes")));
            }
        }
        let space = if mode == SampleMode::Uniform { enumerate_admgs(n)?.collect() } else { Vec::new() };
        Ok(Sampler {
            n,
            mode,
            density,
            labels: enumeration_labels(n),
            space,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> SampleMode {
        self.mode
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Admg {
        let n = self.n;
        if self.mode == SampleMode::Uniform {
            return self.space[rng.gen_range(0..self.space.len())].clone();
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut pa = vec![NodeSet::EMPTY; n];
        let mut sp = vec![NodeSet::EMPTY; n];
        for &(a, b) in &pairs {
            let directed = match self.mode {
                SampleMode::Random => rng.gen_bool(self.density),
                _ => true,
            };
            if directed {
                pa[order[b]].insert(order[a]);
            }
        }
        let bidirected: Vec<(usize, usize)> = match self.mode {
            SampleMode::CompleteFixed(k) => index::sample(rng, pairs.len(), k).into_iter().map(|i| pairs[i]).collect(),
            _ => pairs.iter().copied().filter(|_| rng.gen_bool(self.density)).collect(),
        };
        for (a, b) in bidirected {
            sp[a].insert(b);
            sp[b].insert(a);
        }
        Admg::from_masks(self.labels.clone(), pa, sp).expect("forward edges of a linear order are acyclic")
    }
}

/// Two distinct targets, each empty or a single node, drawn uniformly.
pub fn sample_target_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> InterventionSet {
    let pick = |r: &mut R| -> NodeSet {
        match r.gen_range(0..=n) {
            0 => NodeSet::EMPTY,
            v => NodeSet::singleton(v - 1),
        }
    };
    let a = pick(rng);
    let mut b = pick(rng);
    while b == a {
        b = pick(rng);
    }
    InterventionSet::new(vec![a, b]).expect("targets are distinct")
}
