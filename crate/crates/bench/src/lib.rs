//! Shared fixtures for the benchmarks: deterministic mid-sized inputs built
//! once per run.

use nondeg_core::constructions::{gen_random_points, gen_sphere_family, Seed};
use nondeg_core::geom::{RationalPoint, Sphere};

pub fn bench_points(count: usize, dim: usize, seed: u64) -> Vec<RationalPoint> {
    gen_random_points(count, dim, 40, Seed(seed)).expect("feasible fixture")
}

pub fn bench_spheres(points: &[RationalPoint], k: usize, seed: u64) -> Vec<Sphere> {
    gen_sphere_family(points, k, Seed(seed)).expect("feasible fixture")
}
