//! Exact rational geometry: points, hyperplanes, spheres, circumspheres, the
//! paraboloid lifting map, and affine-rank tests.
//!
//! All predicates are exact equality tests over `Q`; there is no tolerance
//! parameter anywhere in this module. Spheres are stored as (center, squared
//! radius) so irrational radii never arise. Hyperplanes are canonicalized
//! (first nonzero normal entry = 1) so equal objects have equal
//! representations and can be hashed for dedup.

use crate::rational::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("sphere intersection is empty (tangent: {tangent})")]
    EmptyOrbit {
        tangent: bool,
        /// The single common point, present exactly in the tangent case.
        point: Option<RationalPoint>,
    },
    #[error("sphere centers coincide")]
    IdenticalCenters,
    #[error("squared radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("hyperplane normal is the zero vector")]
    ZeroNormal,
    #[error("expected {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
}

/// A point of `Q^d` with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "a point needs at least one coordinate");
        RationalPoint { coords }
    }

    pub fn origin(dim: usize) -> Self {
        RationalPoint::new(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// Inner product with another point taken as a vector.
    pub fn dot(&self, other: &RationalPoint) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn sub(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, by: &Rational) -> RationalPoint {
        RationalPoint::new(self.coords.iter().map(|c| c * by).collect())
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A hyperplane `normal . x = offset` in `R^d`, canonicalized so the first
/// nonzero normal entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Vec<Rational>,
    offset: Rational,
}

impl Hyperplane {
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Self, GeomError> {
        let lead = normal.iter().find(|c| !c.is_zero()).cloned();
        let lead = lead.ok_or(GeomError::ZeroNormal)?;
        let normal = normal.into_iter().map(|c| c / &lead).collect();
        Ok(Hyperplane {
            normal,
            offset: offset / lead,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }
}

/// A `(d-1)`-sphere in `R^d` given by exact center and squared radius.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sphere {
    center: RationalPoint,
    sq_radius: Rational,
}

impl Sphere {
    pub fn new(center: RationalPoint, sq_radius: Rational) -> Result<Self, GeomError> {
        if !sq_radius.is_positive() {
            return Err(GeomError::NonPositiveRadius(format_rational(&sq_radius)));
        }
        Ok(Sphere { center, sq_radius })
    }

    pub fn unit(dim: usize) -> Self {
        Sphere {
            center: RationalPoint::origin(dim),
            sq_radius: Rational::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &RationalPoint {
        &self.center
    }

    pub fn sq_radius(&self) -> &Rational {
        &self.sq_radius
    }
}

/// A codimension-2 sphere in `R^d`: a sphere together with the hyperplane
/// that carries it. The carrier contains the sphere's center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarriedSphere {
    pub sphere: Sphere,
    pub carrier: Hyperplane,
}

fn check_dims(a: usize, b: usize) -> Result<(), GeomError> {
    if a == b {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch(a, b))
    }
}

/// Exact squared Euclidean distance.
pub fn squared_distance(p: &RationalPoint, q: &RationalPoint) -> Rational {
    debug_assert_eq!(p.dim(), q.dim());
    p.coords
        .iter()
        .zip(&q.coords)
        .map(|(a, b)| {
            let d = a - b;
            &d * &d
        })
        .sum()
}

pub fn try_squared_distance(p: &RationalPoint, q: &RationalPoint) -> Result<Rational, GeomError> {
    check_dims(p.dim(), q.dim())?;
    Ok(squared_distance(p, q))
}

/// True iff `p` lies exactly on `s`.
pub fn on_sphere(p: &RationalPoint, s: &Sphere) -> bool {
    p.dim() == s.dim() && squared_distance(p, s.center()) == *s.sq_radius()
}

/// True iff `normal . p = offset` exactly.
pub fn on_hyperplane(p: &RationalPoint, h: &Hyperplane) -> bool {
    if p.dim() != h.dim() {
        return false;
    }
    let dot: Rational = p.coords.iter().zip(h.normal()).map(|(a, b)| a * b).sum();
    dot == *h.offset()
}

/// Row-reduce a matrix of rationals in place; returns its rank.
fn rank_of(mut rows: Vec<Vec<Rational>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] / &lead;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - sub;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Dimension of the affine hull (0 for a single point).
pub fn affine_rank(pts: &[RationalPoint]) -> Result<usize, GeomError> {
    let first = pts.first().ok_or(GeomError::EmptyInput)?;
    for p in &pts[1..] {
        check_dims(first.dim(), p.dim())?;
    }
    let rows: Vec<Vec<Rational>> = pts[1..]
        .iter()
        .map(|p| p.sub(first).coords)
        .collect();
    Ok(rank_of(rows))
}

/// True iff `p` lies in the affine hull of `pts`.
pub fn in_affine_hull(p: &RationalPoint, pts: &[RationalPoint]) -> Result<bool, GeomError> {
    let base = affine_rank(pts)?;
    let mut ext = pts.to_vec();
    ext.push(p.clone());
    Ok(affine_rank(&ext)? == base)
}

/// Solve `A x = b` exactly. Returns `None` when `A` is singular.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let lead = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &lead;
        }
        b[col] = &b[col] / &lead;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..n {
                    let sub = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - sub;
                }
                let sub = &factor * &b[col];
                b[r] = &b[r] - sub;
            }
        }
    }
    Some(b)
}

/// The unique hyperplane through `d` affinely independent points of `R^d`.
pub fn hyperplane_through(pts: &[RationalPoint]) -> Result<Hyperplane, GeomError> {
    let first = pts.first().ok_or(GeomError::EmptyInput)?;
    let d = first.dim();
    if pts.len() != d {
        return Err(GeomError::WrongPointCount {
            expected: d,
            got: pts.len(),
        });
    }
    for p in pts {
        check_dims(d, p.dim())?;
    }
    if affine_rank(pts)? != d - 1 {
        return Err(GeomError::DegenerateInput(
            "points do not span a unique hyperplane".into(),
        ));
    }
    // Normal = nullspace of the (d-1) x d difference matrix.
    let mut rows: Vec<Vec<Rational>> = pts[1..].iter().map(|p| p.sub(first).coords).collect();
    // Reduce to row echelon form, then back-substitute for a nullspace vector.
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < d {
        let pivot = (rank..nrows).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for c in col..d {
            rows[rank][c] = &rows[rank][c] / &lead;
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..d {
                    let sub = &factor * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        col += 1;
    }
    debug_assert_eq!(rank, d - 1);
    let free_col = (0..d).find(|c| !pivots.contains(c)).expect("rank d-1 leaves one free column");
    let mut normal = vec![Rational::zero(); d];
    normal[free_col] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        normal[pc] = -rows[r][free_col].clone();
    }
    let offset = RationalPoint::new(normal.clone()).dot(first);
    Hyperplane::new(normal, offset)
}

/// The unique sphere through `d+1` affinely independent points of `R^d`,
/// via the exact linear system obtained by equating squared distances.
pub fn circumsphere(pts: &[RationalPoint]) -> Result<Sphere, GeomError> {
    let first = pts.first().ok_or(GeomError::EmptyInput)?;
    let d = first.dim();
    if pts.len() != d + 1 {
        return Err(GeomError::WrongPointCount {
            expected: d + 1,
            got: pts.len(),
        });
    }
    for p in pts {
        check_dims(d, p.dim())?;
    }
    // |c - p_i|^2 = |c - p_0|^2  <=>  2 (p_i - p_0) . c = |p_i|^2 - |p_0|^2
    let two = Rational::from_integer(2.into());
    let a: Vec<Vec<Rational>> = pts[1..]
        .iter()
        .map(|p| p.sub(first).coords.iter().map(|c| c * &two).collect())
        .collect();
    let b: Vec<Rational> = pts[1..]
        .iter()
        .map(|p| p.dot(p) - first.dot(first))
        .collect();
    let center = solve_linear(a, b).ok_or_else(|| {
        GeomError::DegenerateInput("points lie on a common hyperplane".into())
    })?;
    let center = RationalPoint::new(center);
    let sq_radius = squared_distance(first, &center);
    Sphere::new(center, sq_radius)
}

/// Paraboloid lifting: append the squared norm as coordinate `d+1`.
pub fn lift_point(p: &RationalPoint) -> RationalPoint {
    let mut coords = p.coords.clone();
    coords.push(p.dot(p));
    RationalPoint::new(coords)
}

/// Lift a sphere of `R^d` to the hyperplane of `R^{d+1}` meeting the
/// paraboloid exactly in the lifted sphere:
/// `2 c . x - x_{d+1} = c . c - r^2`.
pub fn lift_sphere(s: &Sphere) -> Hyperplane {
    let two = Rational::from_integer(2.into());
    let mut normal: Vec<Rational> = s.center().coords().iter().map(|c| c * &two).collect();
    normal.push(-Rational::one());
    let offset = s.center().dot(s.center()) - s.sq_radius();
    Hyperplane::new(normal, offset).expect("normal has a -1 entry")
}

/// Intersection of the spheres `|x - a|^2 = ra2` and `|x - b|^2 = rb2`:
/// a codimension-2 sphere on the hyperplane `2 (b - a) . x = |b|^2 - |a|^2 + ra2 - rb2`,
/// centered at the foot of `a` on that hyperplane.
pub fn sphere_sphere_orbit(
    a: &RationalPoint,
    b: &RationalPoint,
    ra2: &Rational,
    rb2: &Rational,
) -> Result<CarriedSphere, GeomError> {
    check_dims(a.dim(), b.dim())?;
    if a == b {
        return Err(GeomError::IdenticalCenters);
    }
    if !ra2.is_positive() {
        return Err(GeomError::NonPositiveRadius(format_rational(ra2)));
    }
    if !rb2.is_positive() {
        return Err(GeomError::NonPositiveRadius(format_rational(rb2)));
    }
    let two = Rational::from_integer(2.into());
    let dir = b.sub(a);
    let raw_normal: Vec<Rational> = dir.coords().iter().map(|c| c * &two).collect();
    let raw_offset = b.dot(b) - a.dot(a) + ra2 - rb2;
    // Foot of a on the carrier: a + t (b - a).
    let t = (&raw_offset - RationalPoint::new(raw_normal.clone()).dot(a))
        / (&two * dir.dot(&dir));
    let foot = a.add(&dir.scale(&t));
    let orbit_sq_radius = ra2 - squared_distance(a, &foot);
    let carrier = Hyperplane::new(raw_normal, raw_offset)?;
    if orbit_sq_radius.is_zero() {
        return Err(GeomError::EmptyOrbit {
            tangent: true,
            point: Some(foot),
        });
    }
    if orbit_sq_radius.is_negative() {
        return Err(GeomError::EmptyOrbit {
            tangent: false,
            point: None,
        });
    }
    Ok(CarriedSphere {
        sphere: Sphere::new(foot, orbit_sq_radius)?,
        carrier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rational, rational_from_int as ri};

    fn pt(coords: &[i64]) -> RationalPoint {
        RationalPoint::from_ints(coords)
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&pt(&[0, 0]), &pt(&[0, 0])), ri(0));
        assert_eq!(squared_distance(&pt(&[0, 0]), &pt(&[3, 4])), ri(25));
        let p = RationalPoint::new(vec![rational(1, 2), ri(0), ri(0), ri(0)]);
        let q = RationalPoint::new(vec![ri(0), rational(1, 2), ri(0), ri(0)]);
        assert_eq!(squared_distance(&p, &q), rational(1, 2));
    }

    #[test]
    fn squared_distance_dimension_mismatch() {
        assert!(matches!(
            try_squared_distance(&pt(&[0, 0]), &pt(&[0, 0, 0])),
            Err(GeomError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn on_sphere_examples() {
        let unit = Sphere::unit(2);
        assert!(on_sphere(&pt(&[1, 0]), &unit));
        assert!(!on_sphere(&pt(&[1, 1]), &unit));
        let p = RationalPoint::new(vec![rational(3, 5), rational(4, 5)]);
        assert!(on_sphere(&p, &unit));
    }

    #[test]
    fn on_hyperplane_examples() {
        let x1 = Hyperplane::new(vec![ri(1), ri(0), ri(0)], ri(0)).unwrap();
        assert!(on_hyperplane(&pt(&[0, 0, 0]), &x1));
        assert!(!on_hyperplane(&pt(&[1, 0, 0]), &x1));
        let h = Hyperplane::new(vec![ri(1), ri(1), ri(-1)], ri(0)).unwrap();
        assert!(on_hyperplane(&pt(&[1, 2, 3]), &h));
    }

    #[test]
    fn affine_rank_examples() {
        assert_eq!(affine_rank(&[pt(&[0, 0])]).unwrap(), 0);
        assert_eq!(affine_rank(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[2, 0])]).unwrap(), 1);
        assert_eq!(affine_rank(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap(), 2);
        assert!(matches!(affine_rank(&[]), Err(GeomError::EmptyInput)));
    }

    #[test]
    fn hyperplane_through_examples() {
        let line = hyperplane_through(&[pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        assert_eq!(line, Hyperplane::new(vec![ri(1), ri(1)], ri(1)).unwrap());
        let diag = hyperplane_through(&[pt(&[0, 0]), pt(&[1, 1])]).unwrap();
        assert_eq!(diag, Hyperplane::new(vec![ri(1), ri(-1)], ri(0)).unwrap());
        assert!(matches!(
            hyperplane_through(&[pt(&[0, 0]), pt(&[0, 0])]),
            Err(GeomError::DegenerateInput(_))
        ));
    }

    #[test]
    fn circumsphere_examples() {
        let s = circumsphere(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        assert_eq!(s.center(), &pt(&[1, 1]));
        assert_eq!(s.sq_radius(), &ri(2));

        let simplex = [
            pt(&[1, 0, 0, 0]),
            pt(&[-1, 0, 0, 0]),
            pt(&[0, 1, 0, 0]),
            pt(&[0, 0, 1, 0]),
            pt(&[0, 0, 0, 1]),
        ];
        let s = circumsphere(&simplex).unwrap();
        assert_eq!(s.center(), &RationalPoint::origin(4));
        assert_eq!(s.sq_radius(), &ri(1));
        for p in &simplex {
            assert!(on_sphere(p, &s));
        }

        assert!(matches!(
            circumsphere(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[2, 0])]),
            Err(GeomError::DegenerateInput(_))
        ));
    }

    #[test]
    fn lift_point_examples() {
        assert_eq!(lift_point(&pt(&[0, 0])), pt(&[0, 0, 0]));
        assert_eq!(lift_point(&pt(&[1, 2])), pt(&[1, 2, 5]));
        let half = RationalPoint::new(vec![rational(1, 2), rational(1, 2)]);
        assert_eq!(
            lift_point(&half),
            RationalPoint::new(vec![rational(1, 2), rational(1, 2), rational(1, 2)])
        );
    }

    #[test]
    fn lift_sphere_examples() {
        // Unit circle lifts to the plane x3 = 1.
        let h = lift_sphere(&Sphere::unit(2));
        assert_eq!(h, Hyperplane::new(vec![ri(0), ri(0), ri(1)], ri(1)).unwrap());
        // Circle at (1,0) with r^2 = 1 lifts to 2 x1 - x3 = 0.
        let s = Sphere::new(pt(&[1, 0]), ri(1)).unwrap();
        let h = lift_sphere(&s);
        assert_eq!(h, Hyperplane::new(vec![ri(2), ri(0), ri(-1)], ri(0)).unwrap());
        // Unit 3-sphere in R^4 lifts to x5 = 1.
        let h = lift_sphere(&Sphere::unit(4));
        assert_eq!(
            h,
            Hyperplane::new(vec![ri(0), ri(0), ri(0), ri(0), ri(1)], ri(1)).unwrap()
        );
    }

    #[test]
    fn orbit_examples() {
        let a = pt(&[0, 0, 0, 0]);
        let b = pt(&[2, 0, 0, 0]);
        let cs = sphere_sphere_orbit(&a, &b, &ri(4), &ri(4)).unwrap();
        assert_eq!(
            cs.carrier,
            Hyperplane::new(vec![ri(1), ri(0), ri(0), ri(0)], ri(1)).unwrap()
        );
        assert_eq!(cs.sphere.center(), &pt(&[1, 0, 0, 0]));
        assert_eq!(cs.sphere.sq_radius(), &ri(3));

        let far = pt(&[4, 0, 0, 0]);
        assert!(matches!(
            sphere_sphere_orbit(&a, &far, &ri(1), &ri(1)),
            Err(GeomError::EmptyOrbit { tangent: false, .. })
        ));

        match sphere_sphere_orbit(&a, &b, &ri(1), &ri(1)) {
            Err(GeomError::EmptyOrbit {
                tangent: true,
                point: Some(p),
            }) => assert_eq!(p, pt(&[1, 0, 0, 0])),
            other => panic!("expected tangent orbit, got {other:?}"),
        }

        assert!(matches!(
            sphere_sphere_orbit(&a, &a, &ri(1), &ri(1)),
            Err(GeomError::IdenticalCenters)
        ));
    }

    #[test]
    fn orbit_carrier_contains_center() {
        let a = pt(&[1, 2, 3, 4]);
        let b = pt(&[-2, 0, 5, 1]);
        let cs = sphere_sphere_orbit(&a, &b, &ri(50), &ri(40)).unwrap();
        assert!(on_hyperplane(cs.sphere.center(), &cs.carrier));
    }
}
