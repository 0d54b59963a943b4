//! Exact and sampled I-MEC sizes, and the table drivers built on them.

use std::io::Write;

use imec_core::enumeration::enumerate_admgs_labeled;
use imec_core::{Admg, InterventionSet, Regime, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::sampling::{sample_target_pair, SampleMode, Sampler};
use crate::Error;

/// Class sizes of one truth under both regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassSizes {
    pub hard: u64,
    pub soft: u64,
    pub total: u64,
}

fn both(g: &Admg, iset: &InterventionSet) -> Result<(Signature, Signature), Error> {
    Ok((Signature::new(g, iset, Regime::Hard)?, Signature::new(g, iset, Regime::Soft)?))
}

fn matches(truth: &(Signature, Signature), g: &Admg, iset: &InterventionSet) -> Result<(u64, u64), Error> {
    let c = both(g, iset)?;
    Ok((truth.0.equivalent_to(&c.0)? as u64, truth.1.equivalent_to(&c.1)? as u64))
}

/// Exact hard and soft class sizes over a candidate list, in parallel.
pub fn class_sizes_in(truth: &Admg, iset: &InterventionSet, space: &[Admg]) -> Result<ClassSizes, Error> {
    let sig = both(truth, iset)?;
    let (hard, soft) = space
        .par_iter()
        .map(|g| matches(&sig, g, iset))
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(ClassSizes {
        hard,
        soft,
        total: space.len() as u64,
    })
}

/// Exact hard and soft class sizes over every ADMG on the truth's nodes.
pub fn class_sizes(truth: &Admg, iset: &InterventionSet) -> Result<ClassSizes, Error> {
    let space: Vec<Admg> = enumerate_admgs_labeled(truth.labels().to_vec())?.collect();
    class_sizes_in(truth, iset, &space)
}

/// How the Hoeffding sample count is rounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rounding {
    /// Smallest count meeting the bound.
    #[default]
    Ceil,
    /// One fewer whenever the bound is fractional.
    Floor,
}

/// Samples needed so that `P(|S/M - E| >= eps) <= delta`.
pub fn hoeffding_samples(epsilon: f64, delta: f64, rounding: Rounding) -> Result<u64, Error> {
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::Usage(format!("epsilon {epsilon} and delta {delta} must lie in (0, 1)")));
    }
    let m = (1.0 / delta).ln() / (2.0 * epsilon * epsilon);
    let m = match rounding {
        Rounding::Ceil => m.ceil(),
        Rounding::Floor => m.floor(),
    };
    Ok((m as u64).max(1))
}

/// A sampled fraction of equivalent candidates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    pub samples: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

impl McResult {
    /// `exp(-2 M eps^2)`, the confidence actually reached.
    pub fn achieved_delta(&self) -> f64 {
        (-2.0 * self.samples as f64 * self.epsilon * self.epsilon).exp()
    }
}

/// Candidate streams are cut into this many chunks, each with its own RNG
/// stream, so results do not depend on the thread count.
const CHUNKS: u64 = 64;

/// Counts hard and soft matches among `m` candidates drawn from `sampler`.
pub fn sampled_matches(
    truth: &Admg,
    iset: &InterventionSet,
    sampler: &Sampler,
    m: u64,
    seed: u64,
) -> Result<(u64, u64), Error> {
    let sig = both(truth, iset)?;
    (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = m / CHUNKS + u64::from(c < m % CHUNKS);
            let mut acc = (0, 0);
            for _ in 0..len {
                let (h, s) = matches(&sig, &sampler.sample(&mut rng), iset)?;
                acc.0 += h;
                acc.1 += s;
            }
            Ok(acc)
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

/// Hoeffding-sized estimates of the hard and soft equivalence
/// probabilities, computed on one shared candidate stream.
pub fn mec_probability_sampled(
    truth: &Admg,
    iset: &InterventionSet,
    sampler: &Sampler,
    epsilon: f64,
    delta: f64,
    rounding: Rounding,
    seed: u64,
) -> Result<(McResult, McResult), Error> {
    let m = hoeffding_samples(epsilon, delta, rounding)?;
    let (h, s) = sampled_matches(truth, iset, sampler, m, seed)?;
    let mk = |k: u64| McResult {
        estimate: k as f64 / m as f64,
        samples: m,
        epsilon,
        delta,
        seed,
    };
    Ok((mk(h), mk(s)))
}

/// Mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// One experimental setting of a table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Setting {
    pub n: usize,
    pub mode: SampleMode,
    pub density: f64,
    /// Candidates per truth; `None` enumerates every ADMG.
    pub samples: Option<u64>,
}

/// Per-trial outcomes of one setting.
#[derive(Clone, Debug, PartialEq)]
pub struct SettingResult {
    pub setting: Setting,
    pub hard: Vec<f64>,
    pub soft: Vec<f64>,
    pub seed: u64,
}

impl SettingResult {
    /// `mean(hard) / mean(soft)`.
    pub fn ratio(&self) -> f64 {
        mean_stderr(&self.hard).0 / mean_stderr(&self.soft).0
    }

    /// Standard error of the per-trial ratios, skipping trials with no soft match.
    pub fn ratio_stderr(&self) -> f64 {
        let r: Vec<f64> = self.hard.iter().zip(&self.soft).filter(|(_, &s)| s > 0.0).map(|(h, s)| h / s).collect();
        mean_stderr(&r).1
    }
}

/// Runs `trials` random truths with random target pairs for one setting.
///
/// Exhaustive settings record class sizes; sampled ones record fractions.
pub fn run_setting(setting: Setting, trials: usize, seed: u64, stream: u64) -> Result<SettingResult, Error> {
    let sampler = Sampler::new(setting.n, setting.mode, setting.density)?;
    let space: Vec<Admg> = match setting.samples {
        None => enumerate_admgs_labeled(imec_core::enumeration::enumeration_labels(setting.n))?.collect(),
        Some(_) => Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut hard = Vec::with_capacity(trials);
    let mut soft = Vec::with_capacity(trials);
    for _ in 0..trials {
        let truth = sampler.sample(&mut rng);
        let iset = sample_target_pair(setting.n, &mut rng);
        let cand_seed: u64 = rng.gen();
        match setting.samples {
            None => {
                let c = class_sizes_in(&truth, &iset, &space)?;
                hard.push(c.hard as f64);
                soft.push(c.soft as f64);
            }
            Some(m) => {
                let (h, s) = sampled_matches(&truth, &iset, &sampler, m, cand_seed)?;
                hard.push(h as f64 / m as f64);
                soft.push(s as f64 / m as f64);
            }
        }
    }
    Ok(SettingResult {
        setting,
        hard,
        soft,
        seed,
    })
}

/// Settings of table `id` (1 to 4); `samples` sets the candidate count of
/// the sampled tables.
pub fn table_settings(id: u8, samples: u64) -> Result<Vec<Setting>, Error> {
    let complete = |n: usize, density: f64| Setting {
        n,
        mode: SampleMode::Complete,
        density,
        samples: Some(samples),
    };
    Ok(match id {
        1 => (2..=4)
            .flat_map(|n| {
                [SampleMode::Random, SampleMode::Complete].map(|mode| Setting {
                    n,
                    mode,
                    density: 0.5,
                    samples: None,
                })
            })
            .collect(),
        2 => (2..=6).map(|n| complete(n, 0.5)).collect(),
        3 => (3..=6)
            .map(|n| {
                let k = (0.45 * (n * (n - 1)) as f64).round() as usize;
                Setting {
                    mode: SampleMode::CompleteFixed(k),
                    density: k as f64 / (n * (n - 1) / 2) as f64,
                    ..complete(n, 0.0)
                }
            })
            .collect(),
        4 => [0.1, 0.3, 0.5, 0.7, 0.9].map(|rho| complete(5, rho)).to_vec(),
        _ => return Err(Error::Usage(format!("unknown table {id}; expected 1 to 4"))),
    })
}

/// Runs every setting of a table, optionally restricted to some node counts.
pub fn run_table(id: u8, trials: usize, seed: u64, samples: u64, only_n: Option<&[usize]>) -> Result<Vec<SettingResult>, Error> {
    table_settings(id, samples)?
        .into_iter()
        .enumerate()
        .filter(|(_, s)| only_n.map_or(true, |ns| ns.contains(&s.n)))
        .map(|(k, s)| run_setting(s, trials, seed, k as u64))
        .collect()
}

/// Writes results as CSV: one row per setting and regime.
pub fn write_csv<W: Write>(out: W, results: &[SettingResult]) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "mode", "regime", "mean", "stderr", "ratio", "trials", "seed", "density", "ratio_stderr"])?;
    for r in results {
        for (regime, xs) in [("hard", &r.hard), ("soft", &r.soft)] {
            let (mean, se) = mean_stderr(xs);
            w.write_record([
                r.setting.n.to_string(),
                r.setting.mode.name().to_string(),
                regime.to_string(),
                format!("{mean:.6}"),
                format!("{se:.6}"),
                format!("{:.6}", r.ratio()),
                xs.len().to_string(),
                r.seed.to_string(),
                format!("{:.3}", r.setting.density),
                format!("{:.6}", r.ratio_stderr()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
