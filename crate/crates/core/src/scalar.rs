//! Scalar function descriptors on `[0, inf)` and the matrix functional
//! calculus `f(x) = U diag(f(eig)) U*` for positive semidefinite `x`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomp::{hermitian_eigen, PSD_CLAMP};
use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ScalarKind {
    /// `t^alpha`, alpha > 0.
    Power(f64),
    /// `c * log(1 + t/c)`; the unscaled variant has `c = 1`.
    LogShift { scale: f64 },
    /// `c * t / (c + t)`; the unscaled variant has `c = 1`.
    Rational { scale: f64 },
    /// Piecewise-linear interpolation through sorted knots, extrapolated by
    /// the final slope. Concavity is probed at construction.
    PiecewiseLinearConcave { knots: Vec<(f64, f64)> },
    /// `1 + t` (determinant family, `f(0) = 1`).
    AffinePlusOne,
    /// Arbitrary table, linearly interpolated.
    Table { points: Vec<(f64, f64)> },
}

/// A scalar function plus monotonicity/concavity flags probed on a
/// 1000-point grid at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarFunction {
    kind: ScalarKind,
    increasing: bool,
    concave: bool,
}

const PROBE_POINTS: usize = 1000;
const PROBE_MAX: f64 = 8.0;

impl ScalarFunction {
    pub fn new(kind: ScalarKind) -> Result<Self> {
        match &kind {
            ScalarKind::Power(a) => {
                if !a.is_finite() || *a <= 0.0 {
                    return Err(Error::Domain(format!("power exponent must be > 0, got {a}")));
                }
            }
            ScalarKind::LogShift { scale } | ScalarKind::Rational { scale } => {
                if !scale.is_finite() || *scale <= 0.0 {
                    return Err(Error::Domain(format!("scale must be > 0, got {scale}")));
                }
            }
            ScalarKind::PiecewiseLinearConcave { knots } => {
                if knots.len() < 2 {
                    return Err(Error::Domain("need at least two knots".into()));
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::Domain("knot abscissae must be strictly increasing".into()));
                }
                if knots[0].0 != 0.0 {
                    return Err(Error::Domain("first knot must sit at t = 0".into()));
                }
            }
            ScalarKind::Table { points } => {
                if points.len() < 2 || points.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::Domain("table needs >= 2 strictly increasing points".into()));
                }
            }
            ScalarKind::AffinePlusOne => {}
        }
        let mut f = Self {
            kind,
            increasing: false,
            concave: false,
        };
        let mut prev = f.eval(0.0);
        if !prev.is_finite() {
            return Err(Error::Domain("function not evaluable at 0".into()));
        }
        let mut increasing = true;
        let mut concave = true;
        let step = PROBE_MAX / PROBE_POINTS as f64;
        let mut samples = Vec::with_capacity(PROBE_POINTS + 1);
        samples.push(prev);
        for k in 1..=PROBE_POINTS {
            let v = f.eval(k as f64 * step);
            if !v.is_finite() {
                return Err(Error::Domain("function not evaluable on the probe grid".into()));
            }
            if v < prev - 1e-12 {
                increasing = false;
            }
            samples.push(v);
            prev = v;
        }
        for k in 1..PROBE_POINTS {
            let mid = samples[k];
            let chord = 0.5 * (samples[k - 1] + samples[k + 1]);
            if mid < chord - 1e-12 {
                concave = false;
            }
        }
        f.increasing = increasing;
        f.concave = concave;
        Ok(f)
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(ScalarKind::Power(alpha))
    }

    pub fn log_shift() -> Self {
        Self::new(ScalarKind::LogShift { scale: 1.0 }).unwrap()
    }

    pub fn rational() -> Self {
        Self::new(ScalarKind::Rational { scale: 1.0 }).unwrap()
    }

    pub fn kind(&self) -> &ScalarKind {
        &self.kind
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0, "scalar functions are defined on [0, inf)");
        match &self.kind {
            ScalarKind::Power(a) => t.powf(*a),
            ScalarKind::LogShift { scale } => scale * (t / scale).ln_1p(),
            ScalarKind::Rational { scale } => scale * t / (scale + t),
            ScalarKind::PiecewiseLinearConcave { knots } => interpolate(knots, t),
            ScalarKind::AffinePlusOne => 1.0 + t,
            ScalarKind::Table { points } => interpolate(points, t),
        }
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn is_concave(&self) -> bool {
        self.concave
    }

    pub fn at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    /// Concave family hypothesis: nonnegative concave with `f(0) = 0`.
    pub fn is_concave_vanishing(&self) -> bool {
        self.concave && self.at_zero().abs() <= 1e-12 && self.eval(PROBE_MAX) >= -1e-12
    }
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let first = points[0];
    if t <= first.0 {
        return first.1;
    }
    for w in points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if t <= x1 {
            return y0 + (y1 - y0) * (t - x0) / (x1 - x0);
        }
    }
    let (x0, y0) = points[points.len() - 2];
    let (x1, y1) = points[points.len() - 1];
    y1 + (y1 - y0) * (t - x1) / (x1 - x0)
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ScalarKind::Power(a) => write!(f, "power({a})"),
            ScalarKind::LogShift { scale } => write!(f, "logshift({scale})"),
            ScalarKind::Rational { scale } => write!(f, "rational({scale})"),
            ScalarKind::PiecewiseLinearConcave { knots } => {
                write!(f, "pwl(")?;
                for (i, (x, y)) in knots.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x}:{y}")?;
                }
                write!(f, ")")
            }
            ScalarKind::AffinePlusOne => write!(f, "affine_plus_one"),
            ScalarKind::Table { points } => {
                write!(f, "table(")?;
                for (i, (x, y)) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{x}:{y}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for ScalarFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 1,
            column: 1,
            message: format!("scalar function `{s}`: {msg}"),
        };
        if s == "affine_plus_one" {
            return Self::new(ScalarKind::AffinePlusOne);
        }
        let (name, rest) = s.split_once('(').ok_or_else(|| bad("expected name(args)"))?;
        let args = rest.strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
        let parse_f64 = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| bad(&format!("bad number `{v}`")))
        };
        let parse_pairs = |v: &str| -> Result<Vec<(f64, f64)>> {
            v.split(';')
                .map(|pair| {
                    let (x, y) = pair.split_once(':').ok_or_else(|| bad("expected x:y"))?;
                    Ok((parse_f64(x)?, parse_f64(y)?))
                })
                .collect()
        };
        match name {
            "power" => Self::new(ScalarKind::Power(parse_f64(args)?)),
            "logshift" => Self::new(ScalarKind::LogShift {
                scale: parse_f64(args)?,
            }),
            "rational" => Self::new(ScalarKind::Rational {
                scale: parse_f64(args)?,
            }),
            "pwl" => Self::new(ScalarKind::PiecewiseLinearConcave {
                knots: parse_pairs(args)?,
            }),
            "table" => Self::new(ScalarKind::Table {
                points: parse_pairs(args)?,
            }),
            _ => Err(bad("unknown function family")),
        }
    }
}

/// `f(x)` for positive semidefinite `x` via eigendecomposition.
///
/// Eigenvalues in `[-PSD_CLAMP * ||x||, 0)` are clamped to zero; anything
/// more negative is a positivity failure.
pub fn apply_scalar_function(x: &ComplexMatrix, f: &ScalarFunction) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(x)?;
    let lmax = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let clamp = PSD_CLAMP * lmax.max(f64::MIN_POSITIVE);
    let mut mapped = Vec::with_capacity(eig.eigenvalues.len());
    for &l in &eig.eigenvalues {
        if l < -clamp {
            return Err(Error::NotPositive { min_eigenvalue: l });
        }
        mapped.push(f.eval(l.max(0.0)));
    }
    let n = x.dim();
    let scaled = ComplexMatrix::from_fn(n, |i, j| eig.unitary.get(i, j) * mapped[j]);
    let result = &scaled * &eig.unitary.adjoint();
    // Hermitize exactly: the product carries rounding noise only.
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (result.get(i, j) + result.get(j, i).conj()) * 0.5
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn power_one_is_identity_map() {
        let f = ScalarFunction::power(1.0).unwrap();
        let x = ComplexMatrix::diag(&[0.5, 2.0]);
        let y = apply_scalar_function(&x, &f).unwrap();
        assert!((&y - &x).frobenius_norm() < 1e-12);
    }

    #[test]
    fn power_two_on_diagonal() {
        let f = ScalarFunction::power(2.0).unwrap();
        let y = apply_scalar_function(&ComplexMatrix::diag(&[2.0, 3.0]), &f).unwrap();
        assert!((&y - &ComplexMatrix::diag(&[4.0, 9.0])).frobenius_norm() < 1e-12);
    }

    #[test]
    fn log_shift_hits_one_at_e_minus_one() {
        let f = ScalarFunction::log_shift();
        let x = ComplexMatrix::diag(&[0.0, std::f64::consts::E - 1.0]);
        let y = apply_scalar_function(&x, &f).unwrap();
        assert!((&y - &ComplexMatrix::diag(&[0.0, 1.0])).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let f = ScalarFunction::power(0.5).unwrap();
        let x = ComplexMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(
            apply_scalar_function(&x, &f),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn flags_probed_at_construction() {
        assert!(ScalarFunction::power(0.5).unwrap().is_concave());
        assert!(ScalarFunction::power(0.5).unwrap().is_increasing());
        assert!(!ScalarFunction::power(2.0).unwrap().is_concave());
        assert!(ScalarFunction::log_shift().is_concave_vanishing());
        assert!(ScalarFunction::rational().is_concave_vanishing());
        let affine = ScalarFunction::new(ScalarKind::AffinePlusOne).unwrap();
        assert_eq!(affine.at_zero(), 1.0);
        // power(1) sits on the concave/convex boundary
        assert!(ScalarFunction::power(1.0).unwrap().is_concave());
    }

    #[test]
    fn commutes_with_argument() {
        let f = ScalarFunction::power(0.5).unwrap();
        let x = {
            let m = ComplexMatrix::from_fn(3, |i, j| {
                Complex64::new((i * 3 + j) as f64 * 0.1 + 1.0, (i as f64 - j as f64) * 0.05)
            });
            &m.adjoint() * &m
        };
        let fx = apply_scalar_function(&x, &f).unwrap();
        let comm = (&(&x * &fx) - &(&fx * &x)).frobenius_norm();
        assert!(comm <= 1e-9 * x.frobenius_norm() * fx.frobenius_norm());
    }

    #[test]
    fn display_round_trip() {
        for s in ["power(0.5)", "logshift(1)", "rational(2)", "affine_plus_one", "pwl(0:0;1:0.5;2:0.75)"] {
            let f: ScalarFunction = s.parse().unwrap();
            let back: ScalarFunction = f.to_string().parse().unwrap();
            assert_eq!(f, back);
        }
    }
}
