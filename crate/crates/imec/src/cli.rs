//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when `equiv` finds the graphs not
//! equivalent, 2 on any error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use imec_core::augmentation::{i_augmented_nodes, soft_nodes, DomainNode};
use imec_core::equivalence::Witness;
use imec_core::{
    admg_count, enumerate_admgs, i_augmented_tuple, i_markov_equivalent, latent_project, learn, mec_size_exhaustive,
    twin_augmented_mag, Admg, EquivalenceReport, InterventionSet, Regime, SeparationOracle,
};

use crate::experiments::{mec_probability_sampled, run_table, write_csv, Rounding};
use crate::format::{parse_admg, parse_targets, write_admg, write_augmented, write_mixed, write_sepsets};
use crate::sampling::{SampleMode, Sampler};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "imec", version, about = "Hard-intervention equivalence of causal graphs with latents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Hard,
    Soft,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Hard => Regime::Hard,
            RegimeArg::Soft => Regime::Soft,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Random,
    Complete,
    Uniform,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of ADMGs on n nodes.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// Writes every ADMG on n nodes, separated by `---` lines.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// I-Markov equivalence of two graphs.
    Equiv {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        targets: String,
        #[arg(long, value_enum, default_value = "hard")]
        regime: RegimeArg,
    },
    /// MAG of a graph.
    Project {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Twin augmented MAG for a pair of targets such as `{};{Z}`.
    Twin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pair: String,
    },
    /// I-augmented MAG of every target.
    Iaug {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        targets: String,
    },
    /// Learns the I-augmented graphs from an exact oracle on the graph.
    Learn {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        targets: String,
    },
    /// Size of the equivalence class, exact or sampled.
    Mec {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        targets: String,
        #[arg(long, value_enum, default_value = "hard")]
        regime: RegimeArg,
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "complete")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Round the sample count down instead of up.
        #[arg(long)]
        floor_m: bool,
    },
    /// Runs one of the experiment tables and writes CSV.
    Table {
        #[arg(long)]
        id: u8,
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Candidates per truth for the sampled tables.
        #[arg(long, default_value_t = 23_026)]
        samples: u64,
        /// Restrict to these node counts.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
    },
}

fn read_graph(p: &Path) -> Result<Admg, Error> {
    parse_admg(&fs::read_to_string(p)?)
}

fn pair_targets(spec: &str, g: &Admg) -> Result<InterventionSet, Error> {
    let t = parse_targets(spec, g)?;
    if t.len() != 2 {
        return Err(Error::Usage(format!("--pair needs exactly two targets, got {}", t.len())));
    }
    Ok(t)
}

fn node_labels(g: &Admg, iset: &InterventionSet, r: &EquivalenceReport, regime: Regime) -> Vec<String> {
    let nodes: Vec<DomainNode> = match regime {
        Regime::Hard => i_augmented_nodes(g.n(), iset, r.target.unwrap_or(0)),
        Regime::Soft => soft_nodes(g.n(), iset),
    };
    nodes.iter().map(|v| v.label(g.labels())).collect()
}

fn describe(report: &EquivalenceReport, labels: &[String]) -> String {
    let l = |v: usize| labels.get(v).cloned().unwrap_or_else(|| v.to_string());
    let mut s = String::new();
    if let Some(c) = report.failed_condition {
        s.push_str(&format!("failed: {}\n", c.name()));
    }
    if let Some(t) = report.target {
        s.push_str(&format!("target: {}\n", t + 1));
    }
    match &report.witness {
        Some(Witness::Edge(a, b)) => s.push_str(&format!("witness: {} {}\n", l(*a), l(*b))),
        Some(Witness::Triple(a, b, c)) => s.push_str(&format!("witness: {} {} {}\n", l(*a), l(*b), l(*c))),
        Some(Witness::Path(p, z)) => {
            let p: Vec<String> = p.iter().map(|&v| l(v)).collect();
            s.push_str(&format!("witness: {} at {}\n", p.join(" "), l(*z)));
        }
        None => {}
    }
    s
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<u8, Error> {
    match cmd {
        Command::Count { n } => {
            let count = if n <= imec_core::enumeration::MAX_ENUMERATION_NODES {
                enumerate_admgs(n)?.count() as u64
            } else {
                admg_count(n)
            };
            writeln!(out, "{count}")?;
        }
        Command::Enumerate { n, out: path } => {
            let mut f = std::io::BufWriter::new(fs::File::create(path)?);
            for (k, g) in enumerate_admgs(n)?.enumerate() {
                if k > 0 {
                    writeln!(f, "---")?;
                }
                f.write_all(write_admg(&g).as_bytes())?;
            }
            f.flush()?;
        }
        Command::Equiv { g1, g2, targets, regime } => {
            let a = read_graph(&g1)?;
            let b = read_graph(&g2)?;
            let b = if b.labels() == a.labels() {
                b
            } else {
                let perm: Vec<usize> = b
                    .labels()
                    .iter()
                    .map(|l| a.index_of(l).ok_or_else(|| imec_core::Error::UnknownLabel(l.clone())))
                    .collect::<Result<_, _>>()?;
                if perm.len() != a.n() {
                    return Err(imec_core::Error::UniverseMismatch.into());
                }
                b.permuted(&perm)
            };
            let iset = parse_targets(&targets, &a)?;
            let regime = Regime::from(regime);
            let r = i_markov_equivalent(&a, &b, &iset, regime)?;
            if r.equivalent {
                writeln!(out, "equivalent")?;
                return Ok(0);
            }
            writeln!(out, "not equivalent")?;
            out.write_all(describe(&r, &node_labels(&a, &iset, &r, regime)).as_bytes())?;
            return Ok(1);
        }
        Command::Project { graph } => {
            out.write_all(write_mixed(&latent_project(&read_graph(&graph)?)?).as_bytes())?;
        }
        Command::Twin { graph, pair } => {
            let g = read_graph(&graph)?;
            let t = pair_targets(&pair, &g)?;
            let twin = twin_augmented_mag(&g, &t.pair(0, 1)?)?;
            out.write_all(write_augmented("twin", &twin).as_bytes())?;
        }
        Command::Iaug { graph, targets } => {
            let g = read_graph(&graph)?;
            let iset = parse_targets(&targets, &g)?;
            for (i, a) in i_augmented_tuple(&g, &iset)?.iter().enumerate() {
                out.write_all(write_augmented(&format!("target {}", i + 1), a).as_bytes())?;
            }
        }
        Command::Learn { graph, targets } => {
            let g = read_graph(&graph)?;
            let iset = parse_targets(&targets, &g)?;
            let o = SeparationOracle::new(g.clone(), iset)?;
            let res = learn(&o)?;
            for (i, p) in res.pags.iter().enumerate() {
                out.write_all(write_augmented(&format!("target {}", i + 1), p).as_bytes())?;
            }
            writeln!(out, "# separating sets")?;
            out.write_all(write_sepsets(&res.sepsets, g.labels()).as_bytes())?;
        }
        Command::Mec {
            graph,
            targets,
            regime,
            exhaustive,
            sample,
            eps,
            delta,
            seed,
            mode,
            density,
            floor_m,
        } => {
            let g = read_graph(&graph)?;
            let iset = parse_targets(&targets, &g)?;
            let regime = Regime::from(regime);
            if sample || (!exhaustive && g.n() > imec_core::enumeration::MAX_ENUMERATION_NODES) {
                let mode = match mode {
                    ModeArg::Random => SampleMode::Random,
                    ModeArg::Complete => SampleMode::Complete,
                    ModeArg::Uniform => SampleMode::Uniform,
                };
                let sampler = Sampler::new(g.n(), mode, density)?;
                let g = g.relabeled(imec_core::enumeration::enumeration_labels(g.n()))?;
                let rounding = if floor_m { Rounding::Floor } else { Rounding::Ceil };
                let (h, s) = mec_probability_sampled(&g, &iset, &sampler, eps, delta, rounding, seed)?;
                let r = if regime == Regime::Hard { h } else { s };
                writeln!(out, "estimate: {:.6}", r.estimate)?;
                writeln!(out, "samples: {}", r.samples)?;
                writeln!(out, "epsilon: {} delta: {} seed: {}", r.epsilon, r.delta, r.seed)?;
            } else {
                writeln!(out, "{}", mec_size_exhaustive(&g, &iset, regime)?)?;
            }
        }
        Command::Table {
            id,
            trials,
            seed,
            out: path,
            samples,
            n,
        } => {
            let results = run_table(id, trials, seed, samples, n.as_deref())?;
            write_csv(fs::File::create(&path)?, &results)?;
            writeln!(out, "wrote {} rows to {}", 2 * results.len(), path.display())?;
        }
    }
    Ok(0)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
