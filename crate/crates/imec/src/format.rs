//! Plain-text graph and target formats.
//!
//! A graph file lists one edge per line, with an optional `nodes:` header
//! fixing the node order:
//!
//! ```text
//! # D1
//! nodes: X Z Y
//! X -> Z
//! Z -> Y
//! Z <-> Y
//! ```
//!
//! Without a header, nodes are numbered in order of first appearance.
//! A single label on its own line declares an isolated node. Mixed graphs
//! use three-character endpoint symbols such as `o->`, `<->` or `---`.

use std::fmt::Write as _;

use imec_core::augmentation::AugmentedGraph;
use imec_core::learner::SepSetTable;
use imec_core::projection::{edge_symbol, parse_edge_symbol};
use imec_core::{Admg, InterventionSet, Mark, MixedGraph, NodeSet};

use crate::Error;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn edge_marks(sym: &str) -> Option<(Mark, Mark)> {
    match sym {
        "->" => Some((Mark::Tail, Mark::Arrow)),
        "<-" => Some((Mark::Arrow, Mark::Tail)),
        _ => parse_edge_symbol(sym),
    }
}

struct Parsed {
    labels: Vec<String>,
    edges: Vec<(String, Mark, Mark, String, usize)>,
}

fn parse_lines(text: &str) -> Result<Parsed, Error> {
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut header = false;
    let add = |labels: &mut Vec<String>, l: &str, line: usize, header: bool| -> Result<(), Error> {
        if !labels.iter().any(|x| x == l) {
            if header {
                return Err(parse_err(line, format!("node `{l}` is not in the header")));
            }
            labels.push(l.to_string());
        }
        Ok(())
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("nodes:") {
            if header || !labels.is_empty() {
                return Err(parse_err(line, "`nodes:` must come first and only once"));
            }
            for l in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                if labels.iter().any(|x| x == l) {
                    return Err(parse_err(line, format!("duplicate node `{l}`")));
                }
                labels.push(l.to_string());
            }
            header = true;
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        match parts.as_slice() {
            [one] => add(&mut labels, one, line, header)?,
            [a, sym, b] => {
                let (ma, mb) = edge_marks(sym).ok_or_else(|| parse_err(line, format!("unknown edge `{sym}`")))?;
                add(&mut labels, a, line, header)?;
                add(&mut labels, b, line, header)?;
                edges.push((a.to_string(), ma, mb, b.to_string(), line));
            }
            _ => return Err(parse_err(line, format!("expected `A -> B`, got `{body}`"))),
        }
    }
    Ok(Parsed { labels, edges })
}

/// Parses an ADMG; only `->`, `<-` and `<->` edges are allowed.
pub fn parse_admg(text: &str) -> Result<Admg, Error> {
    let p = parse_lines(text)?;
    let mut directed = Vec::new();
    let mut bidirected = Vec::new();
    for (a, ma, mb, b, line) in &p.edges {
        match (ma, mb) {
            (Mark::Tail, Mark::Arrow) => directed.push((a.as_str(), b.as_str())),
            (Mark::Arrow, Mark::Tail) => directed.push((b.as_str(), a.as_str())),
            (Mark::Arrow, Mark::Arrow) => bidirected.push((a.as_str(), b.as_str())),
            _ => return Err(parse_err(*line, "only ->, <- and <-> edges are allowed in an ADMG")),
        }
    }
    let labels: Vec<&str> = p.labels.iter().map(String::as_str).collect();
    Ok(Admg::from_labeled(&labels, &directed, &bidirected)?)
}

/// Parses a mixed graph with arbitrary endpoint marks.
pub fn parse_mixed(text: &str) -> Result<MixedGraph, Error> {
    let p = parse_lines(text)?;
    let mut m = MixedGraph::empty(p.labels.clone())?;
    for (a, ma, mb, b, line) in &p.edges {
        let ia = m.index_of(a).unwrap();
        let ib = m.index_of(b).unwrap();
        if m.adjacent(ia, ib) {
            return Err(parse_err(*line, format!("second edge between `{a}` and `{b}`")));
        }
        m.set_edge(ia, ib, *ma, *mb)?;
    }
    Ok(m)
}

fn header(labels: &[String]) -> String {
    format!("nodes: {}\n", labels.join(" "))
}

/// Writes an ADMG in the format read by [`parse_admg`].
pub fn write_admg(g: &Admg) -> String {
    let mut s = header(g.labels());
    for (a, b) in g.directed_edges() {
        let _ = writeln!(s, "{} -> {}", g.label(a), g.label(b));
    }
    for (a, b) in g.bidirected_edges() {
        let _ = writeln!(s, "{} <-> {}", g.label(a), g.label(b));
    }
    s
}

/// Writes a mixed graph in the format read by [`parse_mixed`].
///
/// Edges whose first endpoint carries an arrow are flipped so that
/// `-->` and `o->` read left to right.
pub fn write_mixed(m: &MixedGraph) -> String {
    let mut s = header(m.labels());
    for (a, b, ma, mb) in m.edges() {
        let (a, b, ma, mb) = if ma == Mark::Arrow && mb != Mark::Arrow { (b, a, mb, ma) } else { (a, b, ma, mb) };
        let _ = writeln!(s, "{} {} {}", m.label(a), edge_symbol(ma, mb), m.label(b));
    }
    s
}

/// Writes an augmented graph with a title line.
pub fn write_augmented(title: &str, g: &AugmentedGraph<MixedGraph>) -> String {
    format!("# {title}\n{}", write_mixed(&g.graph))
}

/// Writes the separating-set table, one pair per line.
pub fn write_sepsets(t: &SepSetTable, base_labels: &[String]) -> String {
    let mut s = String::new();
    for ((a, b), set) in t.iter() {
        let members: Vec<String> = set.iter().map(|v| v.label(base_labels)).collect();
        let _ = writeln!(s, "{} | {} : {{{}}}", a.label(base_labels), b.label(base_labels), members.join(","));
    }
    s
}

/// Parses a target list such as `{};{Z};{X,Y}`.
pub fn parse_targets(spec: &str, g: &Admg) -> Result<InterventionSet, Error> {
    let mut targets = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('{')
            .and_then(|p| p.strip_suffix('}'))
            .ok_or_else(|| parse_err(0, format!("target `{part}` must be written as {{A,B}}")))?;
        let mut set = NodeSet::EMPTY;
        for l in inner.split(',').map(str::trim).filter(|l| !l.is_empty()) {
            let v = g.index_of(l).ok_or_else(|| Error::Core(imec_core::Error::UnknownLabel(l.to_string())))?;
            set.insert(v);
        }
        targets.push(set);
    }
    Ok(InterventionSet::new(targets)?)
}

/// Writes targets in the format read by [`parse_targets`].
pub fn write_targets(iset: &InterventionSet, g: &Admg) -> String {
    iset.targets()
        .iter()
        .map(|t| format!("{{{}}}", t.iter().map(|v| g.label(v)).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(";")
}
