//! Counting triangles similar to a fixed shape among rational points, by a
//! cubic brute-force oracle and by the orbit/bucketing algorithm: for each
//! ordered base pair the third vertex lies on the intersection of two
//! spheres, which a squared-distance index answers with one bucket lookup.
//!
//! Shapes are given by squared side lengths, so every test stays in `Q`
//! even when the side lengths themselves are irrational. The ordered match
//! total is divided by the shape's automorphism count, making the count
//! exact rather than "up to a constant factor".

use crate::geom::{squared_distance, sphere_sphere_orbit, CarriedSphere, GeomError, RationalPoint};
use crate::rational::{format_rational, Rational};
use itertools::Itertools;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimTriError {
    #[error("side lengths must be positive, got {0}")]
    NonPositiveSide(String),
    #[error("squared sides {0}, {1}, {2} violate the triangle inequality")]
    DegenerateShape(String, String, String),
    #[error("coincident points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("points must be distinct")]
    CoincidentInput,
    #[error("ordered total {total} not divisible by automorphism count {aut}")]
    InternalError { total: u64, aut: u64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A similarity class of triangles: squared side lengths sorted
/// `longest >= second >= third > 0`, plus the automorphism count of the
/// side multiset (1 scalene, 2 isosceles, 6 equilateral).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleShape {
    sq_sides: [Rational; 3],
    aut: u64,
}

impl TriangleShape {
    pub fn new(sides: [Rational; 3]) -> Result<Self, SimTriError> {
        use num_traits::Signed;
        for s in &sides {
            if !s.is_positive() {
                return Err(SimTriError::NonPositiveSide(format_rational(s)));
            }
        }
        let mut sq = sides;
        sq.sort_by(|a, b| b.cmp(a));
        let [l, s2, s3] = &sq;
        // Triangle inequality on the square roots, equivalently
        // 2(l s2 + l s3 + s2 s3) > l^2 + s2^2 + s3^2, strict.
        let two = Rational::from_integer(2.into());
        let lhs = &two * (l * s2 + l * s3 + s2 * s3);
        let rhs = l * l + s2 * s2 + s3 * s3;
        if lhs <= rhs {
            return Err(SimTriError::DegenerateShape(
                format_rational(l),
                format_rational(s2),
                format_rational(s3),
            ));
        }
        let aut = if l == s3 {
            6
        } else if l == s2 || s2 == s3 {
            2
        } else {
            1
        };
        Ok(TriangleShape { sq_sides: sq, aut })
    }

    pub fn from_ints(sides: [i64; 3]) -> Result<Self, SimTriError> {
        Self::new(sides.map(|s| Rational::from_integer(s.into())))
    }

    /// Squared sides, sorted descending.
    pub fn sq_sides(&self) -> &[Rational; 3] {
        &self.sq_sides
    }

    pub fn longest(&self) -> &Rational {
        &self.sq_sides[0]
    }

    pub fn aut(&self) -> u64 {
        self.aut
    }
}

/// True iff the triple spans a triangle similar to the shape: the sorted
/// squared distances are proportional to the shape's squared sides, tested
/// by cross-multiplication. Collinear triples always fail because the shape
/// satisfies the strict triangle inequality.
pub fn similarity_test(
    a: &RationalPoint,
    b: &RationalPoint,
    c: &RationalPoint,
    shape: &TriangleShape,
) -> Result<bool, SimTriError> {
    if a == b || a == c || b == c {
        return Err(SimTriError::CoincidentInput);
    }
    let mut d = [
        squared_distance(a, b),
        squared_distance(a, c),
        squared_distance(b, c),
    ];
    d.sort_by(|x, y| y.cmp(x));
    let [l, s2, s3] = shape.sq_sides();
    Ok(&d[0] * s2 == &d[1] * l && &d[0] * s3 == &d[2] * l)
}

fn check_distinct(points: &[RationalPoint]) -> Result<(), SimTriError> {
    let mut indexed: Vec<(usize, &RationalPoint)> = points.iter().enumerate().collect();
    indexed.sort_by(|x, y| x.1.cmp(y.1));
    for w in indexed.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(SimTriError::DuplicatePoints(
                w[0].0.min(w[1].0),
                w[0].0.max(w[1].0),
            ));
        }
    }
    Ok(())
}

/// All pairwise squared distances, with `dist[i][j] = dist[j][i]`.
fn distance_matrix(points: &[RationalPoint]) -> Vec<Vec<Rational>> {
    let n = points.len();
    let mut m = vec![vec![Rational::default(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_distance(&points[i], &points[j]);
            m[i][j] = d.clone();
            m[j][i] = d;
        }
    }
    m
}

/// Cubic oracle: the number of unordered 3-subsets similar to the shape.
pub fn count_similar_brute(
    points: &[RationalPoint],
    shape: &TriangleShape,
) -> Result<u64, SimTriError> {
    check_distinct(points)?;
    let dist = distance_matrix(points);
    let [l, s2, s3] = shape.sq_sides();
    let mut count = 0u64;
    for triple in (0..points.len()).combinations(3) {
        let (i, j, k) = (triple[0], triple[1], triple[2]);
        let mut d = [dist[i][j].clone(), dist[i][k].clone(), dist[j][k].clone()];
        d.sort_by(|x, y| y.cmp(x));
        if &d[0] * s2 == &d[1] * l && &d[0] * s3 == &d[2] * l {
            count += 1;
        }
    }
    Ok(count)
}

/// Per-anchor squared-distance level sets: for each anchor `a`, a map from
/// squared distance to the sorted indices of points at that distance.
#[derive(Debug, Clone)]
pub struct DistanceIndex {
    buckets: Vec<BTreeMap<Rational, Vec<usize>>>,
}

impl DistanceIndex {
    pub fn anchors(&self) -> usize {
        self.buckets.len()
    }

    /// Occurring squared distances from anchor `a` (the distance set).
    pub fn distances(&self, a: usize) -> impl Iterator<Item = &Rational> {
        self.buckets[a].keys()
    }

    /// The level set of points at squared distance `r` from anchor `a`.
    pub fn level_set(&self, a: usize, r: &Rational) -> &[usize] {
        self.buckets[a].get(r).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Build the exact squared-distance index over distinct points.
pub fn build_distance_index(points: &[RationalPoint]) -> Result<DistanceIndex, SimTriError> {
    check_distinct(points)?;
    let dist = distance_matrix(points);
    let n = points.len();
    let mut buckets = Vec::with_capacity(n);
    for a in 0..n {
        let mut map: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (b, d) in dist[a].iter().enumerate() {
            if b != a {
                map.entry(d.clone()).or_default().push(b);
            }
        }
        buckets.push(map);
    }
    Ok(DistanceIndex { buckets })
}

/// Ordered matches: triples `(a, b, c)` with `|ab|^2 : |ac|^2 : |bc|^2`
/// exactly proportional to the shape's sorted squared sides.
pub fn count_similar_ordered(
    points: &[RationalPoint],
    shape: &TriangleShape,
) -> Result<u64, SimTriError> {
    check_distinct(points)?;
    let dist = distance_matrix(points);
    let index = {
        // Reuse the matrix instead of rebuilding it.
        let n = points.len();
        let mut buckets = Vec::with_capacity(n);
        for a in 0..n {
            let mut map: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
            for (b, d) in dist[a].iter().enumerate() {
                if b != a {
                    map.entry(d.clone()).or_default().push(b);
                }
            }
            buckets.push(map);
        }
        DistanceIndex { buckets }
    };
    let [l, s2, s3] = shape.sq_sides();
    let n = points.len();
    let mut ordered = 0u64;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let r = &dist[a][b];
            // |ac|^2 = r s2 / l, a single bucket lookup in a's index.
            let ka = r * s2 / l;
            let kb = r * s3 / l;
            for &c in index.level_set(a, &ka) {
                if c != b && &dist[b][c] == &kb {
                    ordered += 1;
                }
            }
        }
    }
    Ok(ordered)
}

/// Unordered count via the orbit algorithm: the ordered total divided by
/// the shape's automorphism count (divisibility is asserted).
pub fn count_similar_orbit(
    points: &[RationalPoint],
    shape: &TriangleShape,
) -> Result<u64, SimTriError> {
    let ordered = count_similar_ordered(points, shape)?;
    if ordered % shape.aut() != 0 {
        return Err(SimTriError::InternalError {
            total: ordered,
            aut: shape.aut(),
        });
    }
    Ok(ordered / shape.aut())
}

/// The locus of third vertices completing a triangle similar to the shape
/// on base `(a, b)`, with `ab` in the longest-side role and `ac` second:
/// the intersection of spheres of squared radii `|ab|^2 s2 / l` around `a`
/// and `|ab|^2 s3 / l` around `b`.
pub fn orbit_sphere_of_pair(
    a: &RationalPoint,
    b: &RationalPoint,
    shape: &TriangleShape,
) -> Result<CarriedSphere, SimTriError> {
    let r = squared_distance(a, b);
    let [l, s2, s3] = shape.sq_sides();
    let ra2 = &r * s2 / l;
    let rb2 = &r * s3 / l;
    Ok(sphere_sphere_orbit(a, b, &ra2, &rb2)?)
}
