//! Closed-form incidence-bound evaluation at high precision, with the
//! epsilon terms fixed to zero, plus measured-to-bound ratio reporting.
//!
//! Values are fixed-point decimals `mantissa / 10^scale` over `BigInt`.
//! Each term `m^{a/b} n^{c/e}` is computed by exact integer powers and
//! integer nth roots, rounded outward (up) so reported bounds are
//! conservative; the default scale of 60 digits leaves the result well
//! within 10^-50 relative error.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub const DEFAULT_SCALE: usize = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("bound kind `{0}` requires the dimension parameter d")]
    MissingDimension(&'static str),
    #[error("dimension {0} out of range for kind `{1}` (need d >= {2})")]
    DimensionOutOfRange(u32, &'static str, u32),
    #[error("unknown bound kind `{0}`")]
    UnknownKind(String),
    #[error("m and n must be at least 1")]
    SizeOutOfRange,
}

/// Fixed-point nonnegative decimal: `mantissa / 10^scale`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HpReal {
    mantissa: BigInt,
    scale: usize,
}

fn pow10(scale: usize) -> BigInt {
    BigInt::from(10u32).pow(scale as u32)
}

impl HpReal {
    pub fn from_scaled(mantissa: BigInt, scale: usize) -> Self {
        assert!(!mantissa.is_negative());
        HpReal { mantissa, scale }
    }

    pub fn from_integer(value: u64, scale: usize) -> Self {
        HpReal {
            mantissa: BigInt::from(value) * pow10(scale),
            scale,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn add(&self, other: &HpReal) -> HpReal {
        assert_eq!(self.scale, other.scale);
        HpReal {
            mantissa: &self.mantissa + &other.mantissa,
            scale: self.scale,
        }
    }

    /// `self / other` rounded toward zero, at this value's scale.
    pub fn div_trunc(&self, other: &HpReal) -> HpReal {
        assert_eq!(self.scale, other.scale);
        assert!(!other.mantissa.is_zero());
        HpReal {
            mantissa: (&self.mantissa * pow10(self.scale)) / &other.mantissa,
            scale: self.scale,
        }
    }

    /// Absolute relative difference to another value, as an f64 upper bound.
    pub fn relative_error_vs(&self, reference: &HpReal) -> f64 {
        let (a, b) = if self.scale >= reference.scale {
            (
                self.mantissa.clone(),
                &reference.mantissa * pow10(self.scale - reference.scale),
            )
        } else {
            (
                &self.mantissa * pow10(reference.scale - self.scale),
                reference.mantissa.clone(),
            )
        };
        if b.is_zero() {
            return if a.is_zero() { 0.0 } else { f64::INFINITY };
        }
        let diff = (&a - &b).magnitude().clone();
        // diff / b as an f64, computed via 10^30-scaled integer division so
        // tiny ratios survive.
        let scaled = (BigInt::from(diff) * pow10(30)) / &b;
        scaled.to_f64().map(|v| v / 1e30).unwrap_or(f64::INFINITY)
    }

    /// Decimal form with the full stored scale.
    pub fn to_decimal_string(&self) -> String {
        let s = self.mantissa.to_string();
        if self.scale == 0 {
            return s;
        }
        if s.len() <= self.scale {
            format!("0.{}{}", "0".repeat(self.scale - s.len()), s)
        } else {
            let (int, frac) = s.split_at(s.len() - self.scale);
            format!("{int}.{frac}")
        }
    }

    /// Decimal form truncated to `digits` fractional digits.
    pub fn to_decimal_string_truncated(&self, digits: usize) -> String {
        let full = self.to_decimal_string();
        match full.find('.') {
            None => full,
            Some(dot) => {
                let keep = (dot + 1 + digits).min(full.len());
                full[..keep].trim_end_matches('0').trim_end_matches('.').to_string()
            }
        }
    }
}

/// One term `m^{m_exp} n^{n_exp}` with nonnegative rational exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub m_exp: (u32, u32),
    pub n_exp: (u32, u32),
}

impl Term {
    fn new(m_exp: (u32, u32), n_exp: (u32, u32)) -> Self {
        Term { m_exp, n_exp }
    }

    /// Ceil-rounded value at the given scale: one integer nth root over the
    /// joint radicand `m^{a l/b} n^{c l/e} 10^{scale l}` with
    /// `l = lcm(b, e)`, so exact powers stay exact and the rounding error
    /// is a single final ulp.
    pub fn evaluate(&self, m: u64, n: u64, scale: usize) -> HpReal {
        let (am, bm) = self.m_exp;
        let (an, bn) = self.n_exp;
        let l = num_integer::lcm(bm, bn);
        let radicand = BigUint::from(m).pow(am * (l / bm))
            * BigUint::from(n).pow(an * (l / bn))
            * BigUint::from(10u32).pow(scale as u32 * l);
        let root = radicand.nth_root(l);
        let exact = root.clone().pow(l) == radicand;
        let root = if exact { root } else { root + 1u32 };
        HpReal::from_scaled(BigInt::from(root), scale)
    }

    pub fn describe(&self) -> String {
        let part = |name: &str, (p, q): (u32, u32)| -> Option<String> {
            if p == 0 {
                None
            } else if p == q {
                Some(name.to_string())
            } else {
                Some(format!("{name}^({p}/{q})"))
            }
        };
        let parts: Vec<String> = [part("m", self.m_exp), part("n", self.n_exp)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

/// The closed-form bounds, each a sum of power terms evaluated with the
/// epsilon losses set to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `(mn)^{d/(d+1)} + m n^{1-1/(d-1)}` — nondegenerate hyperplanes in R^d.
    ElekesToth,
    /// `(mn)^{(d+1)/(d+2)} + m n^{1-1/d}` — spheres via the lifting map.
    Lifting,
    /// `m^{8/11} n^{9/11} + m n^{1/2}` — nondegenerate spheres in R^3.
    ApfelbaumSharir,
    /// `m^{8/11} n^{9/11} + m n^{1/2} + n` — nondegenerate 2-spheres, d >= 3.
    ProjectedSphere,
    /// `m n^{1-1/d} + n` — bounded left VC dimension d.
    Vc,
    /// `m n^{1-1/d2} + n` — semi-algebraic graphs of description dimension d2.
    SemiAlgebraic,
    /// `m^{15/19} n^{16/19} + m n^{2/3} + n` — nondegenerate 3-spheres in R^4.
    R4Spheres,
    /// `n^{2+4/11}` — similar triangles in R^4 (m ignored).
    SimTriR4,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::ElekesToth,
        BoundKind::Lifting,
        BoundKind::ApfelbaumSharir,
        BoundKind::ProjectedSphere,
        BoundKind::Vc,
        BoundKind::SemiAlgebraic,
        BoundKind::R4Spheres,
        BoundKind::SimTriR4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::ElekesToth => "elekes_toth",
            BoundKind::Lifting => "lifting",
            BoundKind::ApfelbaumSharir => "apfelbaum_sharir",
            BoundKind::ProjectedSphere => "projected_sphere",
            BoundKind::Vc => "vc",
            BoundKind::SemiAlgebraic => "semi_algebraic",
            BoundKind::R4Spheres => "r4_spheres",
            BoundKind::SimTriR4 => "simtri_r4",
        }
    }

    pub fn needs_dimension(&self) -> bool {
        matches!(
            self,
            BoundKind::ElekesToth | BoundKind::Lifting | BoundKind::Vc | BoundKind::SemiAlgebraic
        )
    }
}

impl std::str::FromStr for BoundKind {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| BoundsError::UnknownKind(s.to_string()))
    }
}

/// A bound formula together with its dimension parameter where one applies
/// (ambient dimension, VC dimension, or description dimension).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundFormula {
    pub kind: BoundKind,
    pub dimension: Option<u32>,
}

impl BoundFormula {
    pub fn new(kind: BoundKind, dimension: Option<u32>) -> Result<Self, BoundsError> {
        let formula = BoundFormula { kind, dimension };
        formula.terms()?;
        Ok(formula)
    }

    fn dim(&self, min: u32) -> Result<u32, BoundsError> {
        let d = self
            .dimension
            .ok_or(BoundsError::MissingDimension(self.kind.name()))?;
        if d < min {
            return Err(BoundsError::DimensionOutOfRange(d, self.kind.name(), min));
        }
        Ok(d)
    }

    /// The formula's terms in written order.
    pub fn terms(&self) -> Result<Vec<Term>, BoundsError> {
        Ok(match self.kind {
            BoundKind::ElekesToth => {
                let d = self.dim(2)?;
                vec![
                    Term::new((d, d + 1), (d, d + 1)),
                    Term::new((1, 1), (d - 2, d - 1)),
                ]
            }
            BoundKind::Lifting => {
                let d = self.dim(1)?;
                vec![
                    Term::new((d + 1, d + 2), (d + 1, d + 2)),
                    Term::new((1, 1), (d - 1, d)),
                ]
            }
            BoundKind::ApfelbaumSharir => vec![
                Term::new((8, 11), (9, 11)),
                Term::new((1, 1), (1, 2)),
            ],
            BoundKind::ProjectedSphere => vec![
                Term::new((8, 11), (9, 11)),
                Term::new((1, 1), (1, 2)),
                Term::new((0, 1), (1, 1)),
            ],
            BoundKind::Vc | BoundKind::SemiAlgebraic => {
                let d = self.dim(1)?;
                vec![
                    Term::new((1, 1), (d - 1, d)),
                    Term::new((0, 1), (1, 1)),
                ]
            }
            BoundKind::R4Spheres => vec![
                Term::new((15, 19), (16, 19)),
                Term::new((1, 1), (2, 3)),
                Term::new((0, 1), (1, 1)),
            ],
            BoundKind::SimTriR4 => vec![Term::new((0, 1), (26, 11))],
        })
    }
}

/// Evaluate the bound at `(m, n)` with the default 60-digit scale.
pub fn evaluate(formula: &BoundFormula, m: u64, n: u64) -> Result<HpReal, BoundsError> {
    evaluate_scaled(formula, m, n, DEFAULT_SCALE)
}

pub fn evaluate_scaled(
    formula: &BoundFormula,
    m: u64,
    n: u64,
    scale: usize,
) -> Result<HpReal, BoundsError> {
    if m < 1 || n < 1 {
        return Err(BoundsError::SizeOutOfRange);
    }
    let mut total = HpReal::from_scaled(BigInt::zero(), scale);
    for term in formula.terms()? {
        total = total.add(&term.evaluate(m, n, scale));
    }
    Ok(total)
}

/// Index (and description) of the largest term; ties go to the earlier term.
pub fn dominant_term(
    formula: &BoundFormula,
    m: u64,
    n: u64,
) -> Result<(usize, Term), BoundsError> {
    if m < 1 || n < 1 {
        return Err(BoundsError::SizeOutOfRange);
    }
    let terms = formula.terms()?;
    let values: Vec<HpReal> = terms
        .iter()
        .map(|t| t.evaluate(m, n, DEFAULT_SCALE))
        .collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v > &values[best] {
            best = i;
        }
    }
    Ok((best, terms[best]))
}

/// A measured count against the bound value it is monitored with.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub kind: BoundKind,
    pub m: u64,
    pub n: u64,
    pub measured: u64,
    pub bound_value: HpReal,
    pub ratio: HpReal,
}

impl RatioReport {
    pub fn csv_header() -> &'static str {
        "kind,m,n,measured,bound,ratio"
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.kind.name(),
            self.m,
            self.n,
            self.measured,
            self.bound_value.to_decimal_string_truncated(30),
            self.ratio.to_decimal_string_truncated(30),
        )
    }
}

pub fn ratio_report(
    measured: u64,
    formula: &BoundFormula,
    m: u64,
    n: u64,
) -> Result<RatioReport, BoundsError> {
    let bound_value = evaluate(formula, m, n)?;
    let measured_hp = HpReal::from_integer(measured, DEFAULT_SCALE);
    let ratio = measured_hp.div_trunc(&bound_value);
    Ok(RatioReport {
        kind: formula.kind,
        m,
        n,
        measured,
        bound_value,
        ratio,
    })
}
