//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use imec::experiments::{class_sizes, mec_probability_sampled, run_setting, Rounding, Setting};
use imec::sampling::{SampleMode, Sampler};
use imec_core::augmentation::i_essential_graph;
use imec_core::enumeration::{enumerate_admgs, enumerate_admgs_labeled};
use imec_core::oracle::{do_invariance_conjuncts, do_invariance_fnode};
use imec_core::projection::{edge_symbol, parse_edge_symbol};
use imec_core::{
    augmented_pair_graph, i_markov_equivalent, latent_project, learn, twin_augmented_mag, validate_mag, Admg,
    InterventionPair, InterventionSet, Mark, MixedGraph, NodeSet, Regime, SeparationOracle,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn admg(labels: &[&str], directed: &[(&str, &str)], bidirected: &[(&str, &str)]) -> Admg {
    Admg::from_labeled(labels, directed, bidirected).unwrap()
}

fn d1() -> Admg {
    admg(&["X", "Z", "Y"], &[("X", "Z"), ("Z", "Y")], &[("Z", "Y")])
}

fn d2() -> Admg {
    admg(&["X", "Z", "Y"], &[("X", "Z"), ("Z", "Y"), ("X", "Y")], &[("Z", "Y")])
}

fn five_node() -> Admg {
    admg(
        &["X1", "X2", "X3", "X4", "X5"],
        &[("X1", "X2"), ("X2", "X3"), ("X4", "X3"), ("X5", "X4")],
        &[("X2", "X3"), ("X4", "X3")],
    )
}

fn canonical(a: &str, sym: &str, b: &str) -> (String, String, Mark, Mark) {
    let (ma, mb) = parse_edge_symbol(sym).unwrap();
    if a <= b {
        (a.to_string(), b.to_string(), ma, mb)
    } else {
        (b.to_string(), a.to_string(), mb, ma)
    }
}

fn same_edges(what: &str, m: &MixedGraph, expected: &[&str]) -> Result<(), String> {
    let want: BTreeSet<_> = expected
        .iter()
        .map(|e| {
            let p: Vec<&str> = e.split_whitespace().collect();
            canonical(p[0], p[1], p[2])
        })
        .collect();
    let got: BTreeSet<_> = m.edges().map(|(a, b, ma, mb)| canonical(m.label(a), edge_symbol(ma, mb), m.label(b))).collect();
    ensure(got == want, || format!("{what}: got {:?}", m.edge_list()))
}

fn same_admg_edges(what: &str, g: &Admg, expected: &[&str]) -> Result<(), String> {
    let got: BTreeSet<String> = g
        .directed_edges()
        .map(|(a, b)| format!("{} --> {}", g.label(a), g.label(b)))
        .chain(g.bidirected_edges().map(|(a, b)| format!("{} <-> {}", g.label(a), g.label(b))))
        .collect();
    let want: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
    ensure(got == want, || format!("{what}: got {got:?}"))
}

/// Unordered target pairs from the empty set and singletons.
fn target_pairs(n: usize) -> Vec<InterventionSet> {
    let mut pool = vec![NodeSet::EMPTY];
    pool.extend((0..n).map(NodeSet::singleton));
    let mut out = Vec::new();
    for (k, &a) in pool.iter().enumerate() {
        for &b in &pool[k + 1..] {
            out.push(InterventionSet::new(vec![a, b]).unwrap());
        }
    }
    out
}

fn criterion_1() -> Check {
    let mut counts = Vec::new();
    let mut n4 = Duration::ZERO;
    for n in 2..=4 {
        let start = Instant::now();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = imec::cli::run(["imec", "count", "--n", &n.to_string()], &mut out, &mut err);
        ensure(code == 0, || format!("count --n {n} exited {code}"))?;
        counts.push(String::from_utf8(out).unwrap().trim().parse::<u64>().unwrap());
        if n == 4 {
            n4 = start.elapsed();
        }
    }
    ensure(counts == [6, 200, 34_752], || format!("counts {counts:?}"))?;
    ensure(n4 < Duration::from_secs(10), || format!("n = 4 took {n4:?}"))?;
    Ok(format!("counts {counts:?}, n = 4 in {n4:.2?}"))
}

fn criterion_2() -> Check {
    let p = InterventionPair::new(NodeSet::EMPTY, NodeSet::singleton(1));
    let mag_d1 = ["X@1 --> Z@1", "Z@1 --> Y@1", "X@1 --> Y@1", "F@1,2 --> Z@1", "F@1,2 --> Y@1", "F@1,2 --> Z@2", "Z@2 --> Y@2"];
    let mag_d2 = [&mag_d1[..], &["X@2 --> Y@2"]].concat();
    let cases = [
        (
            "D1",
            d1(),
            vec!["X@1 --> Z@1", "Z@1 --> Y@1", "Z@1 <-> Y@1", "Z@2 --> Y@2", "F@1,2 --> Z@1", "F@1,2 --> Z@2"],
            mag_d1.to_vec(),
        ),
        (
            "D2",
            d2(),
            vec![
                "X@1 --> Z@1",
                "Z@1 --> Y@1",
                "X@1 --> Y@1",
                "Z@1 <-> Y@1",
                "Z@2 --> Y@2",
                "X@2 --> Y@2",
                "F@1,2 --> Z@1",
                "F@1,2 --> Z@2",
            ],
            mag_d2,
        ),
    ];
    for (name, g, pair_graph, mag) in cases {
        let aug = augmented_pair_graph(&g, &p).map_err(|e| e.to_string())?;
        same_admg_edges(&format!("{name} pair graph"), &aug.graph, &pair_graph)?;
        let projected = latent_project(&aug.graph).map_err(|e| e.to_string())?;
        same_edges(&format!("{name} MAG"), &projected, &mag)?;
        let twin = twin_augmented_mag(&g, &p).map_err(|e| e.to_string())?;
        let mut twin_edges = mag.clone();
        twin_edges.push("F@1,2 --> Y@2");
        same_edges(&format!("{name} twin"), &twin.graph, &twin_edges)?;
    }
    Ok("D1 and D2 pair graphs, MAGs and twins match".into())
}

fn criterion_3() -> Check {
    let eq = |a: &Admg, b: &Admg, t: &InterventionSet, r| i_markov_equivalent(a, b, t, r).unwrap().equivalent;
    let z = InterventionSet::from_labels(&d1(), &[&[], &["Z"]]).unwrap();
    ensure(!eq(&d1(), &d2(), &z, Regime::Hard), || "D1, D2 hard-equivalent".into())?;
    ensure(eq(&d1(), &d2(), &z, Regime::Soft), || "D1, D2 not soft-equivalent".into())?;
    let bi = admg(&["X", "Y"], &[], &[("X", "Y")]);
    let di = admg(&["X", "Y"], &[("X", "Y")], &[]);
    let t = InterventionSet::from_labels(&bi, &[&[], &["Y"], &["X", "Y"]]).unwrap();
    ensure(eq(&bi, &di, &t, Regime::Hard), || "X<->Y, X->Y not hard-equivalent".into())?;
    ensure(!eq(&bi, &di, &t, Regime::Soft), || "X<->Y, X->Y soft-equivalent".into())?;
    let labels = ["X1", "Y1", "X2", "Y2"];
    let d = admg(&labels, &[], &[("X1", "Y1"), ("Y1", "X2"), ("X2", "Y2")]);
    let d_extra = admg(&labels, &[], &[("X1", "Y1"), ("Y1", "X2"), ("X2", "Y2"), ("X1", "Y2")]);
    let d_other = admg(&labels, &[], &[("X1", "Y1"), ("X2", "Y2"), ("X1", "Y2")]);
    let t = InterventionSet::from_labels(&d, &[&["X1", "X2"], &["Y1", "Y2"]]).unwrap();
    for a in [&d, &d_extra, &d_other] {
        for b in [&d, &d_extra, &d_other] {
            ensure(eq(a, b, &t, Regime::Hard), || format!("{a:?} vs {b:?} not hard-equivalent"))?;
        }
    }
    Ok("all seven verdicts match".into())
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let samplers: Vec<Sampler> = (1..=5).map(|n| Sampler::new(n, SampleMode::Random, 0.5).unwrap()).collect();
    let mut failures = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=5);
        let g = samplers[n - 1].sample(&mut rng);
        let full = 1u64 << n;
        let a = NodeSet::from_bits(rng.gen_range(0..full));
        let mut b = NodeSet::from_bits(rng.gen_range(0..full));
        while b == a {
            b = NodeSet::from_bits(rng.gen_range(0..full));
        }
        let twin = twin_augmented_mag(&g, &InterventionPair::new(a, b)).map_err(|e| e.to_string())?;
        if validate_mag(&twin.graph).is_err() {
            failures += 1;
        }
    }
    ensure(failures == 0, || format!("{failures} invalid twins"))?;
    Ok("1000 twins valid".into())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut checked = 0u64;
    let mut pool = vec![NodeSet::EMPTY];
    pool.extend((0..3).map(NodeSet::singleton));
    let full = NodeSet::full(3);
    for g in enumerate_admgs(3).unwrap() {
        for &a in &pool {
            for &b in &pool {
                if a == b {
                    continue;
                }
                let p = InterventionPair::new(a, b);
                for y in full.difference(p.k).subsets().filter(|y| !y.is_empty()) {
                    for w in full.difference(y).subsets() {
                        let fnode = do_invariance_fnode(&g, &p, y, w).map_err(|e| e.to_string())?;
                        ensure(do_invariance_conjuncts(&g, &p, y, w) == fnode, || {
                            format!("{g:?} I={a:?} J={b:?} y={y:?} w={w:?}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!("{checked} queries agree in {t:.2?}"))
}

fn learned(g: Admg, targets: &[&[&str]]) -> Vec<MixedGraph> {
    let iset = InterventionSet::from_labels(&g, targets).unwrap();
    let o = SeparationOracle::new(g, iset).unwrap();
    learn(&o).unwrap().pags.into_iter().map(|p| p.graph).collect()
}

fn criterion_6() -> Check {
    let first = ["X@1 o-> Z@1", "X@1 o-> Y@1", "Z@1 --> Y@1", "F@1,2 --> Z@1", "F@1,2 --> Y@1"];
    let t = learned(d1(), &[&[], &["Z"]]);
    same_edges("D1 domain 1", &t[0], &first)?;
    same_edges("D1 domain 2", &t[1], &["F@1,2 --> Z@2", "F@1,2 --> Y@2", "Z@2 --> Y@2"])?;
    let t = learned(d2(), &[&[], &["Z"]]);
    same_edges("D2 domain 1", &t[0], &first)?;
    same_edges("D2 domain 2", &t[1], &["F@1,2 --> Z@2", "F@1,2 --> Y@2", "Z@2 --> Y@2", "X@2 o-> Y@2"])?;
    let t = learned(five_node(), &[&["X2"], &["X4"]]);
    same_edges(
        "five-node domain 1",
        &t[0],
        &["X2@1 --> X3@1", "X4@1 o-> X3@1", "X5@1 o-> X4@1", "X5@1 o-> X3@1", "F@1,2 --> X2@1", "F@1,2 --> X3@1", "F@1,2 --> X4@1"],
    )?;
    same_edges(
        "five-node domain 2",
        &t[1],
        &["X4@2 --> X3@2", "X2@2 o-> X3@2", "X1@2 o-> X2@2", "X1@2 o-> X3@2", "F@1,2 --> X2@2", "F@1,2 --> X3@2", "F@1,2 --> X4@2"],
    )?;
    Ok("D1, D2 and five-node outputs match".into())
}

fn criterion_7() -> Check {
    let mut checked = 0;
    for truth in enumerate_admgs(3).unwrap() {
        for iset in target_pairs(3) {
            let out = learn(&SeparationOracle::new(truth.clone(), iset.clone()).unwrap()).map_err(|e| e.to_string())?;
            let space = enumerate_admgs_labeled(truth.labels().to_vec()).unwrap();
            let ess = i_essential_graph(&truth, &iset, space, 1000).map_err(|e| e.to_string())?;
            for (l, e) in out.pags.iter().zip(&ess) {
                for (a, b, ma, mb) in l.graph.edges() {
                    ensure(e.graph.adjacent(a, b), || format!("{truth:?} {iset:?}: extra adjacency"))?;
                    for (at, other, m) in [(a, b, ma), (b, a, mb)] {
                        ensure(m == Mark::Circle || e.graph.mark_at(at, other) == Some(m), || {
                            format!("{truth:?} {iset:?}: mark at {}", l.graph.label(at))
                        })?;
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} truth and target combinations sound"))
}

fn criterion_8() -> Check {
    let setting = Setting {
        n: 3,
        mode: SampleMode::Random,
        density: 0.5,
        samples: None,
    };
    let r = run_setting(setting, 30, 2024, 0).map_err(|e| e.to_string())?;
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let (h, s) = (mean(&r.hard), mean(&r.soft));
    let ratio = r.ratio();
    let summary = format!("mean hard {h:.2}, mean soft {s:.2}, ratio {ratio:.3}");
    ensure(h < s, || summary.clone())?;
    ensure((0.64 - 0.33..=0.64 + 0.33).contains(&ratio), || summary.clone())?;
    Ok(summary)
}

fn criterion_9() -> Check {
    let truth = admg(&["X1", "X2", "X3"], &[("X1", "X2"), ("X2", "X3")], &[("X2", "X3")]);
    let iset = InterventionSet::new(vec![NodeSet::EMPTY, NodeSet::singleton(1)]).unwrap();
    let exact = class_sizes(&truth, &iset).map_err(|e| e.to_string())?;
    let (ph, ps) = (exact.hard as f64 / exact.total as f64, exact.soft as f64 / exact.total as f64);
    let sampler = Sampler::new(3, SampleMode::Uniform, 0.5).map_err(|e| e.to_string())?;
    let eps = 0.01;
    let mut inside = 0;
    for seed in 0..20 {
        let (h, s) = mec_probability_sampled(&truth, &iset, &sampler, eps, 0.01, Rounding::Ceil, seed).map_err(|e| e.to_string())?;
        ensure(h.samples == 23_026, || format!("M = {}", h.samples))?;
        if (h.estimate - ph).abs() <= 2.0 * eps && (s.estimate - ps).abs() <= 2.0 * eps {
            inside += 1;
        }
    }
    let summary = format!("{inside}/20 runs within 2 eps of hard {ph:.3}, soft {ps:.3}");
    ensure(inside >= 18, || summary.clone())?;
    Ok(summary)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("enumeration counts", criterion_1),
        ("augmented pair graphs, MAGs and twins", criterion_2),
        ("equivalence verdicts", criterion_3),
        ("twin MAG validity", criterion_4),
        ("oracle correspondence", criterion_5),
        ("learner fixtures", criterion_6),
        ("learner soundness", criterion_7),
        ("hard versus soft class sizes", criterion_8),
        ("Hoeffding harness", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {name}: {detail}", k + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
