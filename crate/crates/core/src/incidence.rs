//! Bipartite incidence graphs, beta-nondegeneracy (graph and geometric
//! flavors), and spanning-object counting.
//!
//! Strictness conventions differ on purpose and follow the defining texts
//! verbatim: the graph check uses strict `|N(q) cap N(q')| < beta |N(q)|`,
//! a sphere is geometrically degenerate when some flat section holds
//! `>= beta` of its points, and a hyperplane when some sub-flat holds
//! strictly more than `beta` of its points.

use crate::geom::{
    affine_rank, circumsphere, hyperplane_through, in_affine_hull, on_hyperplane, on_sphere,
    GeomError, Hyperplane, RationalPoint, Sphere,
};
use crate::rational::Rational;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("beta must satisfy 0 < beta < 1, got {0}")]
    BetaOutOfRange(String),
    #[error("vertex index {0} out of range (size {1})")]
    VertexOutOfRange(usize, usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

pub fn check_beta(beta: &Rational) -> Result<(), IncidenceError> {
    if beta.is_positive() && *beta < Rational::one() {
        Ok(())
    } else {
        Err(IncidenceError::BetaOutOfRange(
            crate::rational::format_rational(beta),
        ))
    }
}

use num_traits::Signed;

/// The bipartite graph `G = (P, Q)`: for each right vertex `q`, the sorted,
/// duplicate-free neighbor set `N(q)` of left indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteIncidenceGraph {
    m: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteIncidenceGraph {
    pub fn new(m: usize, mut adjacency: Vec<Vec<usize>>) -> Self {
        for nq in &mut adjacency {
            nq.sort_unstable();
            nq.dedup();
            if let Some(&max) = nq.last() {
                assert!(max < m, "neighbor index {max} out of range for m = {m}");
            }
        }
        BipartiteIncidenceGraph { m, adjacency }
    }

    pub fn from_edges(m: usize, n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            assert!(j < n, "right index {j} out of range for n = {n}");
            adjacency[j].push(i);
        }
        BipartiteIncidenceGraph::new(m, adjacency)
    }

    pub fn left_size(&self) -> usize {
        self.m
    }

    pub fn right_size(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Lexicographically sorted edge list `(p, q)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(q, nq)| nq.iter().map(move |&p| (p, q)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn transpose(&self) -> BipartiteIncidenceGraph {
        let mut adjacency = vec![Vec::new(); self.m];
        for (q, nq) in self.adjacency.iter().enumerate() {
            for &p in nq {
                adjacency[p].push(q);
            }
        }
        BipartiteIncidenceGraph {
            m: self.right_size(),
            adjacency,
        }
    }
}

/// Size of the intersection of two sorted index lists.
pub fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// One violating pair: `|N(q) cap N(q'))| >= beta |N(q)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub q: usize,
    pub q_other: usize,
    pub intersection: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegeneracyReport {
    pub beta: Rational,
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
}

pub const DEFAULT_WITNESS_CAP: usize = 64;

/// Geometric objects a point set can be incident to.
#[derive(Debug, Clone)]
pub enum GeometricObjects {
    Spheres(Vec<Sphere>),
    Hyperplanes(Vec<Hyperplane>),
}

impl GeometricObjects {
    pub fn len(&self) -> usize {
        match self {
            GeometricObjects::Spheres(v) => v.len(),
            GeometricObjects::Hyperplanes(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn incident(&self, j: usize, p: &RationalPoint) -> bool {
        match self {
            GeometricObjects::Spheres(v) => on_sphere(p, &v[j]),
            GeometricObjects::Hyperplanes(v) => on_hyperplane(p, &v[j]),
        }
    }

    fn dim(&self, j: usize) -> usize {
        match self {
            GeometricObjects::Spheres(v) => v[j].dim(),
            GeometricObjects::Hyperplanes(v) => v[j].dim(),
        }
    }
}

/// Build the incidence graph: edge `(p, q)` iff the exact incidence
/// predicate holds. Ordering is by input index on both sides.
pub fn build_incidence(
    points: &[RationalPoint],
    objects: &GeometricObjects,
) -> Result<BipartiteIncidenceGraph, IncidenceError> {
    let dim = points.first().map(RationalPoint::dim);
    for p in points {
        if p.dim() != dim.unwrap() {
            return Err(GeomError::DimensionMismatch(dim.unwrap(), p.dim()).into());
        }
    }
    let adjacency = (0..objects.len())
        .map(|j| {
            if let Some(d) = dim {
                if objects.dim(j) != d {
                    return Err(GeomError::DimensionMismatch(d, objects.dim(j)).into());
                }
            }
            Ok(points
                .iter()
                .enumerate()
                .filter(|(_, p)| objects.incident(j, p))
                .map(|(i, _)| i)
                .collect())
        })
        .collect::<Result<Vec<Vec<usize>>, IncidenceError>>()?;
    Ok(BipartiteIncidenceGraph::new(points.len(), adjacency))
}

fn strictly_less_than_beta_fraction(part: usize, beta: &Rational, whole: usize) -> bool {
    // part < beta * whole, exactly.
    BigInt::from(part) * beta.denom() < beta.numer() * BigInt::from(whole)
}

/// Def.-style check for one right vertex: every other `q'` shares strictly
/// less than `beta |N(q)|` neighbors with `q`.
pub fn is_vertex_nondegenerate(
    graph: &BipartiteIncidenceGraph,
    q: usize,
    beta: &Rational,
) -> Result<bool, IncidenceError> {
    check_beta(beta)?;
    if q >= graph.right_size() {
        return Err(IncidenceError::VertexOutOfRange(q, graph.right_size()));
    }
    let nq = graph.neighbors(q);
    for q_other in 0..graph.right_size() {
        if q_other == q {
            continue;
        }
        let inter = intersection_size(nq, graph.neighbors(q_other));
        if !strictly_less_than_beta_fraction(inter, beta, nq.len()) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_nondegenerate(
    graph: &BipartiteIncidenceGraph,
    beta: &Rational,
) -> Result<NondegeneracyReport, IncidenceError> {
    check_nondegenerate_capped(graph, beta, DEFAULT_WITNESS_CAP)
}

pub fn check_nondegenerate_capped(
    graph: &BipartiteIncidenceGraph,
    beta: &Rational,
    witness_cap: usize,
) -> Result<NondegeneracyReport, IncidenceError> {
    check_beta(beta)?;
    let mut witnesses = Vec::new();
    let n = graph.right_size();
    'outer: for q in 0..n {
        let nq = graph.neighbors(q);
        for q_other in 0..n {
            if q_other == q {
                continue;
            }
            let inter = intersection_size(nq, graph.neighbors(q_other));
            if !strictly_less_than_beta_fraction(inter, beta, nq.len()) {
                witnesses.push(Witness {
                    q,
                    q_other,
                    intersection: inter,
                    degree: nq.len(),
                });
                if witnesses.len() >= witness_cap {
                    break 'outer;
                }
            }
        }
    }
    Ok(NondegeneracyReport {
        beta: beta.clone(),
        verdict: witnesses.is_empty(),
        witnesses,
    })
}

/// Dual check: the left part against the right (runs on the transpose).
pub fn check_dually_nondegenerate(
    graph: &BipartiteIncidenceGraph,
    beta: &Rational,
) -> Result<NondegeneracyReport, IncidenceError> {
    check_nondegenerate(&graph.transpose(), beta)
}

/// Indices of `points` lying exactly on the object.
fn points_on_sphere(points: &[RationalPoint], s: &Sphere) -> Vec<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| on_sphere(p, s))
        .map(|(i, _)| i)
        .collect()
}

fn points_on_hyperplane(points: &[RationalPoint], h: &Hyperplane) -> Vec<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| on_hyperplane(p, h))
        .map(|(i, _)| i)
        .collect()
}

/// Richness of the richest proper flat among a point set: the maximum, over
/// affine flats spanned by 1..=max_span affinely independent members, of the
/// number of members on the flat. Every proper subsphere (or sub-flat) lies
/// in such a flat and richness is monotone under enlarging, so this captures
/// the richest proper section exactly.
fn max_flat_richness(members: &[RationalPoint], max_span: usize) -> usize {
    let k_max = max_span.min(members.len());
    let mut best = if members.is_empty() { 0 } else { 1 };
    for k in 2..=k_max {
        for subset in (0..members.len()).combinations(k) {
            let pts: Vec<RationalPoint> = subset.iter().map(|&i| members[i].clone()).collect();
            match affine_rank(&pts) {
                Ok(rank) if rank == k - 1 => {
                    let count = members
                        .iter()
                        .filter(|p| in_affine_hull(p, &pts).unwrap_or(false))
                        .count();
                    best = best.max(count);
                }
                _ => {}
            }
        }
    }
    best
}

/// True iff no flat section of the sphere holds `>= beta` of its points.
/// Candidate sections are the affine flats of dimension `0..=d-1` spanned by
/// points on the sphere.
pub fn geometric_nondegeneracy_sphere(
    points: &[RationalPoint],
    sphere: &Sphere,
    beta: &Rational,
) -> Result<bool, IncidenceError> {
    check_beta(beta)?;
    let on: Vec<RationalPoint> = points_on_sphere(points, sphere)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();
    if on.len() <= 1 {
        return Ok(true);
    }
    let richest = max_flat_richness(&on, sphere.dim());
    // Degenerate iff richest >= beta * |W|  (non-strict, per the defining text).
    Ok(strictly_less_than_beta_fraction(richest, beta, on.len()))
}

/// True iff no proper sub-flat of the hyperplane holds strictly more than
/// `beta` of its points.
pub fn geometric_nondegeneracy_hyperplane(
    points: &[RationalPoint],
    hyperplane: &Hyperplane,
    beta: &Rational,
) -> Result<bool, IncidenceError> {
    check_beta(beta)?;
    let on: Vec<RationalPoint> = points_on_hyperplane(points, hyperplane)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();
    if on.len() <= 1 {
        return Ok(true);
    }
    let d = hyperplane.dim();
    let richest = max_flat_richness(&on, d - 1);
    // Degenerate iff richest > beta * |W|  (strict, per the defining text).
    let violates = BigInt::from(richest) * beta.denom() > beta.numer() * BigInt::from(on.len());
    Ok(!violates)
}

fn hyperplane_key(h: &Hyperplane) -> String {
    let coords: Vec<String> = h
        .normal()
        .iter()
        .chain(std::iter::once(h.offset()))
        .map(crate::rational::format_rational)
        .collect();
    coords.join(";")
}

fn sphere_key(s: &Sphere) -> String {
    let coords: Vec<String> = s
        .center()
        .coords()
        .iter()
        .chain(std::iter::once(s.sq_radius()))
        .map(crate::rational::format_rational)
        .collect();
    coords.join(";")
}

/// Number of distinct hyperplanes spanned by `d` affinely independent input
/// points, deduplicated via canonical forms.
pub fn count_spanning_hyperplanes(points: &[RationalPoint]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let d = first.dim();
    if points.len() < d {
        return 0;
    }
    let mut seen = HashSet::new();
    for subset in (0..points.len()).combinations(d) {
        let pts: Vec<RationalPoint> = subset.iter().map(|&i| points[i].clone()).collect();
        if let Ok(h) = hyperplane_through(&pts) {
            seen.insert(hyperplane_key(&h));
        }
    }
    seen.len()
}

/// Number of distinct spheres spanned by `d+1` affinely independent input
/// points, deduplicated via canonical forms.
pub fn count_spanning_spheres(points: &[RationalPoint]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let d = first.dim();
    if points.len() < d + 1 {
        return 0;
    }
    let mut seen = HashSet::new();
    for subset in (0..points.len()).combinations(d + 1) {
        let pts: Vec<RationalPoint> = subset.iter().map(|&i| points[i].clone()).collect();
        if let Ok(s) = circumsphere(&pts) {
            seen.insert(sphere_key(&s));
        }
    }
    seen.len()
}

/// Spanning test for one sphere: does it carry `d+1` of the points in
/// general position (affinely independent)?
pub fn sphere_is_spanning(points: &[RationalPoint], sphere: &Sphere) -> bool {
    let d = sphere.dim();
    let on: Vec<RationalPoint> = points_on_sphere(points, sphere)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();
    if on.len() < d + 1 {
        return false;
    }
    affine_rank(&on).map(|r| r == d).unwrap_or(false)
}

/// Spanning test for one hyperplane: does it carry `d` of the points in
/// general position?
pub fn hyperplane_is_spanning(points: &[RationalPoint], hyperplane: &Hyperplane) -> bool {
    let d = hyperplane.dim();
    let on: Vec<RationalPoint> = points_on_hyperplane(points, hyperplane)
        .into_iter()
        .map(|i| points[i].clone())
        .collect();
    if on.len() < d {
        return false;
    }
    affine_rank(&on).map(|r| r == d - 1).unwrap_or(false)
}
