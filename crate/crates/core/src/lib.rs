//! Exact-arithmetic toolkit for incidence geometry over the rationals.
//!
//! Everything here works over `Q` with arbitrary-precision integers: points,
//! spheres and hyperplanes with exact membership predicates, bipartite
//! incidence graphs with beta-nondegeneracy checks, VC-dimension and shatter
//! function computation, seeded random constructions, similar-triangle
//! counting via sphere orbits, and high-precision evaluation of the
//! closed-form incidence bounds. No floating point appears anywhere on a
//! correctness path.

pub mod bounds;
pub mod constructions;
pub mod geom;
pub mod incidence;
pub mod io;
pub mod rational;
pub mod setsystem;
pub mod simtri;

pub use geom::{CarriedSphere, Hyperplane, RationalPoint, Sphere};
pub use incidence::{BipartiteIncidenceGraph, NondegeneracyReport};
pub use rational::Rational;
pub use setsystem::{PeelCertificate, SetSystem};
pub use simtri::TriangleShape;
