//! Seeded generators: the random dense nondegenerate graph construction,
//! rational point clouds, exact cospherical points via inverse stereographic
//! projection, circumsphere families, and degenerate clusters.
//!
//! PRNG contract: every generator derives a ChaCha20 stream from
//! `(seed, site)` where `site` is a fixed constant per decision site, mixed
//! through splitmix64. Identical `(parameters, seed)` reproduce identical
//! output bit for bit; independent sites never share a stream.

use crate::geom::{circumsphere, on_sphere, RationalPoint, Sphere};
use crate::incidence::{check_nondegenerate_capped, intersection_size, BipartiteIncidenceGraph};
use crate::rational::{rational_sqrt, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("cannot draw {count} distinct points from {available} lattice points")]
    InfeasibleDedup { count: u64, available: String },
    #[error("sphere squared radius is not the square of a rational; no exact rational points")]
    UnrepresentableRadius,
    #[error("retry budget exhausted after {0} attempts")]
    Exhausted(u64),
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
}

/// Seed for all randomized constructions. Identical seeds reproduce
/// identical outputs across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

// One named substream per decision site.
const SITE_THM1_EDGES: u64 = 0x01;
const SITE_LATTICE_POINTS: u64 = 0x02;
const SITE_ON_SPHERE: u64 = 0x03;
const SITE_SPHERE_FAMILY: u64 = 0x04;
const SITE_CLUSTER: u64 = 0x05;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

fn substream(seed: Seed, site: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(splitmix64(splitmix64(seed.0) ^ site))
}

/// Result of one run of the random dense construction, with the measured
/// statistics the concentration argument predicts.
#[derive(Debug, Clone)]
pub struct ConstructionOutcome {
    pub graph: BipartiteIncidenceGraph,
    pub rho: Rational,
    pub min_degree: usize,
    pub max_pair_intersection: usize,
    /// True iff the graph is beta-nondegenerate and has at least
    /// `(beta/6) m n` edges.
    pub passed: bool,
}

/// Sample each edge of `P x Q` independently with probability `rho = beta/3`
/// and measure whether the run succeeded. Never retries; failure stays
/// observable. Edge draws compare a uniform u64 against `floor(rho * 2^64)`,
/// so the sampling bias is below `2^-64`.
pub fn thm1_random_graph(
    m: usize,
    n: usize,
    beta: &Rational,
    seed: Seed,
) -> Result<ConstructionOutcome, crate::incidence::IncidenceError> {
    crate::incidence::check_beta(beta)?;
    let rho = beta / Rational::from_integer(3.into());
    let threshold: u128 = {
        let scaled: BigInt = (rho.numer() * (BigInt::one() << 64)) / rho.denom();
        let (_, digits) = scaled.to_u64_digits();
        digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| (acc << 64) | d as u128)
    };
    let mut rng = substream(seed, SITE_THM1_EDGES);
    let mut adjacency = vec![Vec::new(); n];
    for (q, nq) in adjacency.iter_mut().enumerate() {
        let _ = q;
        for p in 0..m {
            if (rng.next_u64() as u128) < threshold {
                nq.push(p);
            }
        }
    }
    let graph = BipartiteIncidenceGraph::new(m, adjacency);

    let min_degree = (0..n).map(|q| graph.degree(q)).min().unwrap_or(0);
    let mut max_pair_intersection = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            max_pair_intersection = max_pair_intersection
                .max(intersection_size(graph.neighbors(a), graph.neighbors(b)));
        }
    }
    let nondegenerate = check_nondegenerate_capped(&graph, beta, 1)?.verdict;
    // |E| >= (beta/6) m n, exactly: 6 |E| den >= num m n.
    let enough_edges = BigInt::from(graph.edge_count()) * 6 * beta.denom()
        >= beta.numer() * BigInt::from(m) * BigInt::from(n);
    Ok(ConstructionOutcome {
        graph,
        rho,
        min_degree,
        max_pair_intersection,
        passed: nondegenerate && enough_edges,
    })
}

/// Distinct integer-coordinate points uniform in `[-coord_bound, coord_bound]^dim`.
pub fn gen_random_points(
    count: usize,
    dim: usize,
    coord_bound: i64,
    seed: Seed,
) -> Result<Vec<RationalPoint>, ConstructError> {
    assert!(count >= 1 && dim >= 1 && coord_bound >= 0);
    let side = BigInt::from(2 * coord_bound + 1);
    let available = num_traits::pow::pow(side, dim);
    if BigInt::from(count) > available {
        return Err(ConstructError::InfeasibleDedup {
            count: count as u64,
            available: available.to_string(),
        });
    }
    let mut rng = substream(seed, SITE_LATTICE_POINTS);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let budget = 1000 * count as u64 + 1000;
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > budget {
            return Err(ConstructError::Exhausted(budget));
        }
        let coords: Vec<i64> = (0..dim)
            .map(|_| rng.random_range(-coord_bound..=coord_bound))
            .collect();
        if seen.insert(coords.clone()) {
            out.push(RationalPoint::from_ints(&coords));
        }
    }
    Ok(out)
}

/// Inverse stereographic projection of `t in Q^{d-1}` onto the unit sphere
/// of `R^d`, projecting from the south pole `(0, .., 0, -1)`:
/// `x_i = 2 t_i / (1 + |t|^2)`, `x_d = (1 - |t|^2) / (1 + |t|^2)`.
/// `t = 0` maps to the north pole; `t = 1/2` in the plane gives `(4/5, 3/5)`.
pub fn inverse_stereographic(t: &[Rational]) -> RationalPoint {
    let sq: Rational = t.iter().map(|c| c * c).sum();
    let denom = Rational::one() + &sq;
    let mut coords: Vec<Rational> = t
        .iter()
        .map(|c| (c + c) / &denom)
        .collect();
    coords.push((Rational::one() - &sq) / &denom);
    RationalPoint::new(coords)
}

fn random_rational(rng: &mut ChaCha20Rng, num_bound: i64, den_bound: i64) -> Rational {
    let n = rng.random_range(-num_bound..=num_bound);
    let d = rng.random_range(1..=den_bound);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Distinct rational points exactly on the given sphere, via inverse
/// stereographic projection of random rational parameters. Requires the
/// squared radius to be the square of a rational, so the unit-sphere points
/// can be scaled and translated exactly.
pub fn gen_points_on_sphere(
    count: usize,
    dim: usize,
    sphere: &Sphere,
    seed: Seed,
) -> Result<Vec<RationalPoint>, ConstructError> {
    assert!(dim >= 2);
    if sphere.dim() != dim {
        return Err(ConstructError::InfeasibleParams(format!(
            "sphere dimension {} does not match requested dimension {dim}",
            sphere.dim()
        )));
    }
    let radius = rational_sqrt(sphere.sq_radius()).ok_or(ConstructError::UnrepresentableRadius)?;
    let mut rng = substream(seed, SITE_ON_SPHERE);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let budget = 1000 * count as u64 + 1000;
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > budget {
            return Err(ConstructError::Exhausted(budget));
        }
        let t: Vec<Rational> = (0..dim - 1).map(|_| random_rational(&mut rng, 20, 20)).collect();
        let unit = inverse_stereographic(&t);
        let p = sphere.center().add(&unit.scale(&radius));
        debug_assert!(on_sphere(&p, sphere));
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
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

/// `k` distinct spheres, each the circumsphere of a random affinely
/// independent `(dim+1)`-subset of the input points.
pub fn gen_sphere_family(
    points: &[RationalPoint],
    k: usize,
    seed: Seed,
) -> Result<Vec<Sphere>, ConstructError> {
    let dim = points.first().map(RationalPoint::dim).unwrap_or(0);
    if points.len() < dim + 1 {
        return Err(ConstructError::InfeasibleParams(format!(
            "need at least {} points in dimension {dim}, got {}",
            dim + 1,
            points.len()
        )));
    }
    let mut rng = substream(seed, SITE_SPHERE_FAMILY);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(k);
    let budget = 500 * k as u64 + 500;
    let mut attempts = 0;
    while out.len() < k {
        attempts += 1;
        if attempts > budget {
            return Err(ConstructError::Exhausted(budget));
        }
        let idx = rand::seq::index::sample(&mut rng, points.len(), dim + 1);
        let subset: Vec<RationalPoint> = idx.iter().map(|i| points[i].clone()).collect();
        if let Ok(s) = circumsphere(&subset) {
            if seen.insert(sphere_key(&s)) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// `circle_count` rational points on a fixed circle plus `off_count` points
/// on the unit sphere of `R^dim` but off the circle's plane, together with
/// the common sphere. The circle section makes the sphere geometrically
/// degenerate at any `beta <= circle_count / (circle_count + off_count)`.
pub fn gen_degenerate_cluster(
    dim: usize,
    circle_count: usize,
    off_count: usize,
    seed: Seed,
) -> Result<(Vec<RationalPoint>, Sphere), ConstructError> {
    if dim < 3 {
        return Err(ConstructError::InfeasibleParams(
            "dimension must be at least 3".into(),
        ));
    }
    if circle_count < 3 {
        return Err(ConstructError::InfeasibleParams(
            "need at least 3 circle points".into(),
        ));
    }
    let sphere = Sphere::unit(dim);
    let mut rng = substream(seed, SITE_CLUSTER);
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    let budget = 1000 * (circle_count + off_count) as u64 + 1000;
    let mut attempts = 0;

    // Circle: the unit circle in the first two coordinates,
    // t -> ((1 - t^2) / (1 + t^2), 2t / (1 + t^2), 0, .., 0).
    while points.len() < circle_count {
        attempts += 1;
        if attempts > budget {
            return Err(ConstructError::Exhausted(budget));
        }
        let t = random_rational(&mut rng, 40, 40);
        let denom = Rational::one() + &t * &t;
        let mut coords = vec![
            (Rational::one() - &t * &t) / &denom,
            (&t + &t) / &denom,
        ];
        coords.resize(dim, Rational::zero());
        let p = RationalPoint::new(coords);
        debug_assert!(on_sphere(&p, &sphere));
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }

    // Off-circle points: unit-sphere points with some coordinate beyond the
    // first two nonzero.
    while points.len() < circle_count + off_count {
        attempts += 1;
        if attempts > budget {
            return Err(ConstructError::Exhausted(budget));
        }
        let t: Vec<Rational> = (0..dim - 1).map(|_| random_rational(&mut rng, 20, 20)).collect();
        let p = inverse_stereographic(&t);
        let off_plane = p.coords()[2..].iter().any(|c| !c.is_zero());
        debug_assert!(on_sphere(&p, &sphere));
        if off_plane && seen.insert(p.clone()) {
            points.push(p);
        }
    }
    Ok((points, sphere))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{check_nondegenerate, geometric_nondegeneracy_sphere};
    use crate::rational::{rational, rational_from_int as ri};

    #[test]
    fn thm1_tiny() {
        let beta = rational(1, 2);
        let out = thm1_random_graph(1, 1, &beta, Seed(7)).unwrap();
        // One potential edge: nondegenerate either way, passed iff drawn.
        let edges = out.graph.edge_count();
        assert!(edges <= 1);
        assert_eq!(out.passed, edges == 1);
    }

    #[test]
    fn thm1_deterministic() {
        let beta = rational(3, 10);
        let a = thm1_random_graph(200, 10, &beta, Seed(42)).unwrap();
        let b = thm1_random_graph(200, 10, &beta, Seed(42)).unwrap();
        assert_eq!(a.graph, b.graph);
        let c = thm1_random_graph(200, 10, &beta, Seed(43)).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn thm1_concentration_run() {
        let beta = rational(3, 10);
        let out = thm1_random_graph(4000, 60, &beta, Seed(0)).unwrap();
        assert_eq!(out.rho, rational(1, 10));
        assert!(out.passed);
        assert!(check_nondegenerate(&out.graph, &beta).unwrap().verdict);
    }

    #[test]
    fn points_deterministic_and_distinct() {
        let a = gen_random_points(10, 2, 100, Seed(1)).unwrap();
        let b = gen_random_points(10, 2, 100, Seed(1)).unwrap();
        assert_eq!(a, b);
        let set: HashSet<_> = a.iter().collect();
        assert_eq!(set.len(), 10);
    }

    #[test]
    fn points_edge_cases() {
        let origin = gen_random_points(1, 4, 0, Seed(5)).unwrap();
        assert_eq!(origin, vec![RationalPoint::origin(4)]);
        assert!(matches!(
            gen_random_points(5, 1, 1, Seed(5)),
            Err(ConstructError::InfeasibleDedup { .. })
        ));
    }

    #[test]
    fn stereographic_classics() {
        let p = inverse_stereographic(&[rational(1, 2)]);
        assert_eq!(
            p,
            RationalPoint::new(vec![rational(4, 5), rational(3, 5)])
        );
        let pole = inverse_stereographic(&[ri(0)]);
        assert_eq!(pole, RationalPoint::from_ints(&[0, 1]));
    }

    #[test]
    fn on_sphere_generation() {
        let sphere = Sphere::unit(4);
        let pts = gen_points_on_sphere(20, 4, &sphere, Seed(9)).unwrap();
        assert_eq!(pts.len(), 20);
        let set: HashSet<_> = pts.iter().collect();
        assert_eq!(set.len(), 20);
        for p in &pts {
            assert!(on_sphere(p, &sphere));
        }
    }

    #[test]
    fn on_sphere_scaled_and_translated() {
        let sphere = Sphere::new(RationalPoint::from_ints(&[3, -1]), rational(9, 4)).unwrap();
        let pts = gen_points_on_sphere(8, 2, &sphere, Seed(11)).unwrap();
        for p in &pts {
            assert!(on_sphere(p, &sphere));
        }
    }

    #[test]
    fn on_sphere_unrepresentable() {
        let sphere = Sphere::new(RationalPoint::origin(2), ri(2)).unwrap();
        assert!(matches!(
            gen_points_on_sphere(3, 2, &sphere, Seed(1)),
            Err(ConstructError::UnrepresentableRadius)
        ));
    }

    #[test]
    fn sphere_family_from_triangle() {
        let pts = [
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[2, 0]),
            RationalPoint::from_ints(&[0, 2]),
        ];
        let fam = gen_sphere_family(&pts, 1, Seed(1)).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].center(), &RationalPoint::from_ints(&[1, 1]));
    }

    #[test]
    fn sphere_family_collinear_exhausts() {
        let pts: Vec<RationalPoint> =
            (0..4).map(|i| RationalPoint::from_ints(&[i, 0])).collect();
        assert!(matches!(
            gen_sphere_family(&pts, 1, Seed(1)),
            Err(ConstructError::Exhausted(_))
        ));
    }

    #[test]
    fn sphere_family_distinct_and_incident() {
        let pts = gen_random_points(30, 3, 8, Seed(3)).unwrap();
        let fam = gen_sphere_family(&pts, 15, Seed(4)).unwrap();
        assert_eq!(fam.len(), 15);
        for s in &fam {
            let on = pts.iter().filter(|p| on_sphere(p, s)).count();
            assert!(on >= 4, "circumsphere must contain its 4 defining points");
        }
    }

    #[test]
    fn degenerate_cluster_examples() {
        let (pts, sphere) = gen_degenerate_cluster(3, 6, 1, Seed(2)).unwrap();
        assert_eq!(pts.len(), 7);
        for p in &pts {
            assert!(on_sphere(p, &sphere));
        }
        assert!(!geometric_nondegeneracy_sphere(&pts, &sphere, &rational(6, 7)).unwrap());

        let (pts, sphere) = gen_degenerate_cluster(4, 8, 4, Seed(7)).unwrap();
        assert_eq!(pts.len(), 12);
        for p in &pts {
            assert!(on_sphere(p, &sphere));
        }
        assert!(!geometric_nondegeneracy_sphere(&pts, &sphere, &rational(1, 2)).unwrap());
        assert!(matches!(
            gen_degenerate_cluster(2, 6, 1, Seed(2)),
            Err(ConstructError::InfeasibleParams(_))
        ));
    }
}
