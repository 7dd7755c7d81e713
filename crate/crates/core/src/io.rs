//! The shared line-oriented text formats: point, sphere, hyperplane, graph,
//! and set-system files, plus nondegeneracy reports and peel certificates.
//!
//! All writers emit canonical forms (reduced rationals, sorted edges and
//! sets), so parse-then-write round-trips are byte exact. Lines starting
//! with `#` are comments; a leading `# seed: N` comment records the RNG
//! seed a generated file came from and survives round-trips.

use std::path::Path;

use thiserror::Error;

use crate::geom::{GeomError, Hyperplane, RationalPoint, Sphere};
use crate::incidence::{BipartiteIncidenceGraph, NondegeneracyReport, Witness};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::setsystem::{PeelCertificate, PeelStep, SetSystem, SetSystemError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    SetSystem(#[from] SetSystemError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line: line + 1,
        message: message.into(),
    }
}

/// Content lines of a file with 1-based... no: 0-based original indices,
/// with comments dropped and any `# seed:` comment extracted.
struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    seed: Option<u64>,
}

fn split_lines(text: &str, keep_blank: bool) -> Result<Lines<'_>, IoError> {
    let mut items = Vec::new();
    let mut seed = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if let Some(rest) = line.strip_prefix("# seed:") {
            let value: u64 = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(idx, format!("bad seed comment `{line}`")))?;
            if seed.replace(value).is_some() {
                return Err(parse_err(idx, "duplicate `# seed:` comment"));
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if line.trim().is_empty() && !keep_blank {
            continue;
        }
        items.push((idx, line));
    }
    Ok(Lines { items, seed })
}

fn seed_comment(seed: Option<u64>) -> String {
    match seed {
        Some(s) => format!("# seed: {s}\n"),
        None => String::new(),
    }
}

fn expect_header<'a>(
    lines: &'a Lines<'_>,
    keyword: &str,
) -> Result<(usize, &'a str), IoError> {
    let &(idx, line) = lines
        .items
        .first()
        .ok_or_else(|| parse_err(0, format!("missing `{keyword}` header")))?;
    let rest = line
        .strip_prefix(keyword)
        .ok_or_else(|| parse_err(idx, format!("expected `{keyword} ...` header, got `{line}`")))?;
    Ok((idx, rest.trim()))
}

fn parse_usize(idx: usize, token: &str, what: &str) -> Result<usize, IoError> {
    token
        .parse()
        .map_err(|_| parse_err(idx, format!("bad {what} `{token}`")))
}

fn parse_rat(idx: usize, token: &str) -> Result<Rational, IoError> {
    parse_rational(token).map_err(|e| parse_err(idx, e.to_string()))
}

fn parse_rationals(idx: usize, text: &str, dim: usize, what: &str) -> Result<Vec<Rational>, IoError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() != dim {
        return Err(parse_err(
            idx,
            format!("expected {dim} {what} coordinates, got {}", tokens.len()),
        ));
    }
    tokens.iter().map(|t| parse_rat(idx, t)).collect()
}

// ---- point files: `dim d` then d whitespace-separated rationals per line

pub fn write_points(points: &[RationalPoint], seed: Option<u64>) -> String {
    let dim = points.first().map_or(0, RationalPoint::dim);
    let mut out = seed_comment(seed);
    out.push_str(&format!("dim {dim}\n"));
    for p in points {
        let parts: Vec<String> = p.coords().iter().map(format_rational).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_points(text: &str) -> Result<(Vec<RationalPoint>, Option<u64>), IoError> {
    let lines = split_lines(text, false)?;
    let (hidx, rest) = expect_header(&lines, "dim")?;
    let dim = parse_usize(hidx, rest, "dimension")?;
    if dim == 0 && lines.items.len() > 1 {
        return Err(parse_err(hidx, "dim 0 file cannot contain points"));
    }
    let mut points = Vec::new();
    for &(idx, line) in &lines.items[1..] {
        points.push(RationalPoint::new(parse_rationals(idx, line, dim, "point")?));
    }
    Ok((points, lines.seed))
}

// ---- sphere files: `dim d` then `c1 .. cd ; sq_radius` per line

pub fn write_spheres(spheres: &[Sphere], seed: Option<u64>) -> String {
    let dim = spheres.first().map_or(0, Sphere::dim);
    let mut out = seed_comment(seed);
    out.push_str(&format!("dim {dim}\n"));
    for s in spheres {
        let parts: Vec<String> = s.center().coords().iter().map(format_rational).collect();
        out.push_str(&format!(
            "{} ; {}\n",
            parts.join(" "),
            format_rational(s.sq_radius())
        ));
    }
    out
}

fn split_semicolon(idx: usize, line: &str) -> Result<(String, String), IoError> {
    let mut parts = line.splitn(2, ';');
    let left = parts.next().unwrap_or("").trim().to_string();
    let right = parts
        .next()
        .ok_or_else(|| parse_err(idx, "missing `;` separator"))?
        .trim()
        .to_string();
    if right.contains(';') {
        return Err(parse_err(idx, "more than one `;` separator"));
    }
    Ok((left, right))
}

pub fn parse_spheres(text: &str) -> Result<(Vec<Sphere>, Option<u64>), IoError> {
    let lines = split_lines(text, false)?;
    let (hidx, rest) = expect_header(&lines, "dim")?;
    let dim = parse_usize(hidx, rest, "dimension")?;
    let mut spheres = Vec::new();
    for &(idx, line) in &lines.items[1..] {
        let (center, radius) = split_semicolon(idx, line)?;
        let coords = parse_rationals(idx, &center, dim, "center")?;
        let sq_radius = parse_rat(idx, &radius)?;
        spheres.push(Sphere::new(RationalPoint::new(coords), sq_radius)?);
    }
    Ok((spheres, lines.seed))
}

// ---- hyperplane files: `dim d` then `n1 .. nd ; offset` per line

pub fn write_hyperplanes(planes: &[Hyperplane], seed: Option<u64>) -> String {
    let dim = planes.first().map_or(0, Hyperplane::dim);
    let mut out = seed_comment(seed);
    out.push_str(&format!("dim {dim}\n"));
    for h in planes {
        let parts: Vec<String> = h.normal().iter().map(format_rational).collect();
        out.push_str(&format!(
            "{} ; {}\n",
            parts.join(" "),
            format_rational(h.offset())
        ));
    }
    out
}

pub fn parse_hyperplanes(text: &str) -> Result<(Vec<Hyperplane>, Option<u64>), IoError> {
    let lines = split_lines(text, false)?;
    let (hidx, rest) = expect_header(&lines, "dim")?;
    let dim = parse_usize(hidx, rest, "dimension")?;
    let mut planes = Vec::new();
    for &(idx, line) in &lines.items[1..] {
        let (normal, offset) = split_semicolon(idx, line)?;
        let normal = parse_rationals(idx, &normal, dim, "normal")?;
        let offset = parse_rat(idx, &offset)?;
        planes.push(Hyperplane::new(normal, offset)?);
    }
    Ok((planes, lines.seed))
}

// ---- graph files: `m n` then `i j` edge lines, 0-based, lex-sorted

pub fn write_graph(graph: &BipartiteIncidenceGraph, seed: Option<u64>) -> String {
    let mut out = seed_comment(seed);
    out.push_str(&format!("{} {}\n", graph.left_size(), graph.right_size()));
    for (i, j) in graph.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<(BipartiteIncidenceGraph, Option<u64>), IoError> {
    let lines = split_lines(text, false)?;
    let &(hidx, header) = lines
        .items
        .first()
        .ok_or_else(|| parse_err(0, "missing `m n` header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(parse_err(hidx, format!("expected `m n` header, got `{header}`")));
    }
    let m = parse_usize(hidx, tokens[0], "left size")?;
    let n = parse_usize(hidx, tokens[1], "right size")?;
    let mut edges = Vec::new();
    for &(idx, line) in &lines.items[1..] {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_err(idx, format!("expected edge `i j`, got `{line}`")));
        }
        let i = parse_usize(idx, tokens[0], "left index")?;
        let j = parse_usize(idx, tokens[1], "right index")?;
        if i >= m {
            return Err(parse_err(idx, format!("left index {i} out of range for m = {m}")));
        }
        if j >= n {
            return Err(parse_err(idx, format!("right index {j} out of range for n = {n}")));
        }
        edges.push((i, j));
    }
    Ok((BipartiteIncidenceGraph::from_edges(m, n, &edges), lines.seed))
}

// ---- set-system files: `ground g` then one sorted set per line
//      (an empty line is the empty set)

pub fn write_setsystem(system: &SetSystem, seed: Option<u64>) -> String {
    let mut out = seed_comment(seed);
    out.push_str(&format!("ground {}\n", system.ground_size()));
    for set in system.sets() {
        let parts: Vec<String> = set.iter().map(usize::to_string).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_setsystem(text: &str) -> Result<(SetSystem, Option<u64>), IoError> {
    let lines = split_lines(text, true)?;
    let (hidx, rest) = expect_header(&lines, "ground")?;
    let ground = parse_usize(hidx, rest, "ground size")?;
    let mut sets = Vec::new();
    for &(idx, line) in &lines.items[1..] {
        let mut set = Vec::new();
        for token in line.split_whitespace() {
            set.push(parse_usize(idx, token, "element index")?);
        }
        sets.push(set);
    }
    Ok((SetSystem::new(ground, sets)?, lines.seed))
}

// ---- nondegeneracy reports: `verdict true|false` then `q q' inter deg`

pub fn write_report(report: &NondegeneracyReport) -> String {
    let mut out = format!("verdict {}\n", report.verdict);
    for w in &report.witnesses {
        out.push_str(&format!(
            "{} {} {} {}\n",
            w.q, w.q_other, w.intersection, w.degree
        ));
    }
    out
}

pub fn parse_report(text: &str) -> Result<(bool, Vec<Witness>), IoError> {
    let lines = split_lines(text, false)?;
    let (hidx, rest) = expect_header(&lines, "verdict")?;
    let verdict = match rest {
        "true" => true,
        "false" => false,
        other => return Err(parse_err(hidx, format!("bad verdict `{other}`"))),
    };
    let mut witnesses = Vec::new();
    for &(idx, line) in &lines.items[1..] {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(parse_err(
                idx,
                format!("expected witness `q q' inter deg`, got `{line}`"),
            ));
        }
        witnesses.push(Witness {
            q: parse_usize(idx, tokens[0], "witness q")?,
            q_other: parse_usize(idx, tokens[1], "witness q'")?,
            intersection: parse_usize(idx, tokens[2], "intersection size")?,
            degree: parse_usize(idx, tokens[3], "degree")?,
        });
    }
    Ok((verdict, witnesses))
}

// ---- peel certificates: step lines `q1 q2 setminus num/den`,
//      then `final_degree k` and `bound num/den`

fn explicit_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn write_peel_certificate(cert: &PeelCertificate) -> String {
    let mut out = String::new();
    for step in &cert.steps {
        out.push_str(&format!(
            "{} {} {} {}\n",
            step.q1,
            step.q2,
            step.setminus_size,
            explicit_fraction(&step.charge)
        ));
    }
    out.push_str(&format!("final_degree {}\n", cert.final_degree));
    out.push_str(&format!("bound {}\n", explicit_fraction(&cert.certified_bound)));
    out
}

/// The serialized portion of a certificate: steps, final degree, bound.
pub fn parse_peel_certificate(
    text: &str,
) -> Result<(Vec<PeelStep>, usize, Rational), IoError> {
    let lines = split_lines(text, false)?;
    let mut steps = Vec::new();
    let mut final_degree = None;
    let mut bound = None;
    for &(idx, line) in &lines.items {
        if let Some(rest) = line.strip_prefix("final_degree") {
            if final_degree.is_some() {
                return Err(parse_err(idx, "duplicate `final_degree` line"));
            }
            final_degree = Some(parse_usize(idx, rest.trim(), "final degree")?);
        } else if let Some(rest) = line.strip_prefix("bound") {
            if bound.is_some() {
                return Err(parse_err(idx, "duplicate `bound` line"));
            }
            bound = Some(parse_rat(idx, rest.trim())?);
        } else {
            if final_degree.is_some() || bound.is_some() {
                return Err(parse_err(idx, "step line after trailer"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(parse_err(
                    idx,
                    format!("expected step `q1 q2 setminus charge`, got `{line}`"),
                ));
            }
            steps.push(PeelStep {
                q1: parse_usize(idx, tokens[0], "step q1")?,
                q2: parse_usize(idx, tokens[1], "step q2")?,
                setminus_size: parse_usize(idx, tokens[2], "setminus size")?,
                charge: parse_rat(idx, tokens[3])?,
            });
        }
    }
    let final_degree =
        final_degree.ok_or_else(|| parse_err(lines.items.len(), "missing `final_degree` line"))?;
    let bound = bound.ok_or_else(|| parse_err(lines.items.len(), "missing `bound` line"))?;
    Ok((steps, final_degree, bound))
}

// ---- file helpers

pub fn read_to_string(path: impl AsRef<Path>) -> Result<String, IoError> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn write_string(path: impl AsRef<Path>, content: &str) -> Result<(), IoError> {
    Ok(std::fs::write(path, content)?)
}
