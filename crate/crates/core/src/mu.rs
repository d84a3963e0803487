//! Generalized singular number calculus on the uniform grid `k/n` of `(0,1)`:
//! step functions for the right- and left-continuous singular number
//! functions, piecewise-linear log-integral curves, the Fuglede-Kadison
//! determinant, logarithmic submajorization, and the commutative
//! rearrangement model.

use serde::{Deserialize, Serialize};

use crate::decomp::svd;
use crate::matrix::ComplexMatrix;
use crate::scalar::{apply_scalar_function, ScalarFunction};
use crate::{Error, Result, LOG_FLOOR, SLACK_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Continuity {
    /// Value `v_k` holds on `[(k-1)/n, k/n)`.
    Right,
    /// Value `v_k` holds on `((k-1)/n, k/n]`.
    Left,
}

/// A nonincreasing nonnegative step function on `(0,1)` with grid `k/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    n: usize,
    values: Vec<f64>,
    continuity: Continuity,
}

impl StepFunction {
    pub fn new(values: Vec<f64>, continuity: Continuity) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("step function needs at least one cell".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain("step function values must be nonincreasing".into()));
        }
        Ok(Self {
            n: values.len(),
            values,
            continuity,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    /// Evaluate at `t` in `(0,1)` honoring the continuity flavor.
    /// By convention the value is 0 for `t >= 1` (Right) / `t > 1` (Left).
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.n as f64;
        let cell = match self.continuity {
            Right => {
                if t >= 1.0 {
                    return 0.0;
                }
                (t * n).floor() as usize
            }
            Left => {
                if t > 1.0 {
                    return 0.0;
                }
                if t <= 0.0 {
                    0
                } else {
                    (t * n).ceil() as usize - 1
                }
            }
        };
        self.values[cell.min(self.n - 1)]
    }

    /// The step function `s -> self(1 - s)` with the opposite continuity
    /// flavor: an exact index reversal on the grid.
    pub fn reversed_complement_grid(&self) -> Vec<f64> {
        self.values.iter().rev().copied().collect()
    }
}

use Continuity::{Left, Right};

/// Right-continuous generalized singular numbers: sorted singular values of
/// `x`, value `s_k` on `[(k-1)/n, k/n)`.
pub fn mu(x: &ComplexMatrix) -> Result<StepFunction> {
    let s = svd(x)?;
    StepFunction::new(s.values, Right)
}

/// Left-continuous variant: same values, flavor `((k-1)/n, k/n]`.
pub fn mu_left(x: &ComplexMatrix) -> Result<StepFunction> {
    let s = svd(x)?;
    StepFunction::new(s.values, Left)
}

/// Spectral-counting evaluation of the right-continuous singular numbers:
/// at each grid-cell midpoint, `inf { l >= 0 : #{j : s_j > l} / n <= t }`.
///
/// This is the test oracle for [`mu`]; it shares only the spectrum with it.
pub fn mu_by_counting(x: &ComplexMatrix) -> Result<StepFunction> {
    let spectrum = svd(x)?.values;
    let n = spectrum.len();
    let values = (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            counting_inf(&spectrum, t, false)
        })
        .collect();
    StepFunction::new(values, Right)
}

/// Strict-inequality counting evaluation for the left-continuous variant:
/// `inf { l >= 0 : #{j : s_j > l} / n < t }` at right cell endpoints.
pub fn mu_left_by_counting(x: &ComplexMatrix) -> Result<StepFunction> {
    let spectrum = svd(x)?.values;
    let n = spectrum.len();
    let values = (0..n)
        .map(|k| {
            let t = (k as f64 + 1.0) / n as f64;
            counting_inf(&spectrum, t, true)
        })
        .collect();
    StepFunction::new(values, Left)
}

fn counting_inf(spectrum: &[f64], t: f64, strict: bool) -> f64 {
    let n = spectrum.len() as f64;
    // Candidate infima are the spectrum points and 0.
    let mut candidates: Vec<f64> = spectrum.to_vec();
    candidates.push(0.0);
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for &lambda in &candidates {
        let count = spectrum.iter().filter(|&&s| s > lambda).count() as f64 / n;
        let ok = if strict { count < t } else { count <= t };
        if ok {
            return lambda;
        }
    }
    spectrum[0]
}

/// `log v` with values below [`LOG_FLOOR`] treated as exact zero.
pub fn floored_log(v: f64) -> f64 {
    if v < LOG_FLOOR {
        f64::NEG_INFINITY
    } else {
        v.ln()
    }
}

/// The piecewise-linear log-integral `t -> integral_0^t log g(s) ds` of a
/// step function `g` on the uniform grid, stored at the grid points
/// `L_k = (1/n) sum_{j<=k} log v_j` with `L_0 = 0` and `-inf` allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaCurve {
    n: usize,
    log_values: Vec<f64>,
}

impl LambdaCurve {
    /// Curve of a genuine singular-number step function. The increments are
    /// nonincreasing because the values are sorted; this is asserted.
    pub fn from_step(step: &StepFunction) -> Self {
        let curve = Self::from_increments(step.values.iter().map(|&v| floored_log(v)).collect());
        debug_assert!(curve.increments_nonincreasing());
        curve
    }

    /// General log-integral curve from per-cell log increments (the shifted
    /// curves of the product inequalities are not concave).
    pub fn from_increments(log_increments: Vec<f64>) -> Self {
        let n = log_increments.len();
        let mut log_values = Vec::with_capacity(n + 1);
        log_values.push(0.0);
        let mut acc = 0.0f64;
        for inc in log_increments {
            acc += inc / n as f64;
            log_values.push(acc);
        }
        Self { n, log_values }
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    /// `L_k`, the log of the curve at `t = k/n`.
    pub fn log_at(&self, k: usize) -> f64 {
        self.log_values[k]
    }

    /// `Lambda` at `t = k/n`.
    pub fn value_at(&self, k: usize) -> f64 {
        self.log_values[k].exp()
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    /// Log-domain increment over cell `k` (1-based).
    pub fn increment(&self, k: usize) -> f64 {
        let d = self.log_values[k] - self.log_values[k - 1];
        if d.is_nan() {
            // -inf minus -inf: the tail keeps increment -inf.
            f64::NEG_INFINITY
        } else {
            d
        }
    }

    pub fn increments_nonincreasing(&self) -> bool {
        let mut prev = f64::INFINITY;
        for k in 1..=self.n {
            let inc = self.increment(k);
            if inc > prev + 1e-12 {
                return false;
            }
            prev = prev.min(inc);
        }
        true
    }

    /// Pointwise sum in the log domain: the curve of a product bound.
    pub fn log_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let log_values = self
            .log_values
            .iter()
            .zip(&other.log_values)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self {
            n: self.n,
            log_values,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            log_values: self.log_values.iter().map(|&v| v * factor).collect(),
        }
    }

    /// CSV dump rows `k, t=k/n, logValue` with `-inf` rendered literally.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,t,logValue\n");
        for (k, &v) in self.log_values.iter().enumerate() {
            let rendered = if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{v}")
            };
            out.push_str(&format!("{},{},{}\n", k, k as f64 / self.n as f64, rendered));
        }
        out
    }
}

/// `Lambda_t(x)`: the log-integral curve of the singular numbers of `x`.
/// At `t = k/n` the value is the n-th root of the k-th partial product of
/// singular values; zero singular values produce a `-inf` tail.
pub fn lambda_curve(x: &ComplexMatrix) -> Result<LambdaCurve> {
    Ok(LambdaCurve::from_step(&mu(x)?))
}

/// Transforms for the shifted log-integral curves of the product
/// inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftTransform {
    /// `integral_0^t log(1 - mu_s(x)) ds`.
    OneMinusRight,
    /// `integral_0^t log(1 - mu^l_s(x)) ds`.
    OneMinusLeft,
    /// `integral_{1-t}^1 log mu^l_s(x) ds`, indexed by `t` on the same grid.
    LogTailLeft,
}

/// Exact piecewise-linear log-integral of a transformed step function of a
/// contraction `x`.
pub fn shifted_log_curve(x: &ComplexMatrix, transform: ShiftTransform) -> Result<LambdaCurve> {
    let step = match transform {
        ShiftTransform::OneMinusRight => mu(x)?,
        ShiftTransform::OneMinusLeft | ShiftTransform::LogTailLeft => mu_left(x)?,
    };
    if step.values()[0] > 1.0 + 1e-12 {
        return Err(Error::NotContraction {
            norm: step.values()[0],
        });
    }
    let increments = match transform {
        ShiftTransform::OneMinusRight | ShiftTransform::OneMinusLeft => step
            .values()
            .iter()
            .map(|&v| {
                let w = 1.0 - v;
                if w < -1e-12 {
                    return Err(Error::Domain(format!(
                        "transformed value 1 - {v} is negative"
                    )));
                }
                Ok(floored_log(w.max(0.0)))
            })
            .collect::<Result<Vec<f64>>>()?,
        ShiftTransform::LogTailLeft => {
            // Integration from 1-t down-up to 1 sweeps the top cells, which
            // hold the smallest values: reversed order.
            step.values()
                .iter()
                .rev()
                .map(|&v| floored_log(v.max(0.0)))
                .collect()
        }
    };
    Ok(LambdaCurve::from_increments(increments))
}

/// Tail log-integral `t -> integral_{1-t}^1 log g(s) ds` of a left-continuous
/// step function given by its sorted nonincreasing values. Used where the
/// integrand is not a contraction (norms up to 2 appear in the self-adjoint
/// chain).
pub fn tail_log_curve(values_desc: &[f64]) -> LambdaCurve {
    LambdaCurve::from_increments(values_desc.iter().rev().map(|&v| floored_log(v.max(0.0))).collect())
}

/// The Fuglede-Kadison determinant `(prod_j s_j)^{1/n}`; exactly 0 when any
/// singular value vanishes.
pub fn fk_determinant(x: &ComplexMatrix) -> Result<f64> {
    let curve = lambda_curve(x)?;
    let log = curve.log_at(curve.grid_size());
    Ok(if log == f64::NEG_INFINITY { 0.0 } else { log.exp() })
}

/// One grid-point margin of a log-domain comparison, oriented so that
/// `slack >= 0` means the inequality `lhs <= rhs` holds there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckMargin {
    /// Grid index, `t = k/n`.
    pub k: usize,
    pub t: f64,
    #[serde(with = "ext_real")]
    pub lhs_log: f64,
    #[serde(with = "ext_real")]
    pub rhs_log: f64,
    #[serde(with = "ext_real")]
    pub slack: f64,
}

impl CheckMargin {
    pub fn new(k: usize, n: usize, lhs_log: f64, rhs_log: f64) -> Self {
        Self {
            k,
            t: k as f64 / n as f64,
            lhs_log,
            rhs_log,
            slack: slack_of(lhs_log, rhs_log),
        }
    }
}

/// `rhs - lhs` with infinity-aware rules: two infinities of the same sign
/// compare as zero slack.
pub fn slack_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs && lhs.is_infinite() {
        0.0
    } else {
        rhs - lhs
    }
}

/// Serialize extended reals as JSON numbers when finite and the literal
/// strings `-inf` / `inf` otherwise (bare JSON has no infinities).
pub mod ext_real {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_str("nan")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "inf" => Ok(f64::INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("bad extended real `{other}`"))),
            },
        }
    }
}

/// `x` logarithmically submajorized by `y`: the Lambda curve of `x` lies
/// below that of `y` at every grid point (curves are piecewise linear with
/// kinks only on the grid, so grid-point ordering is pointwise ordering).
pub fn log_submajorize(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<(bool, Vec<CheckMargin>)> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let cx = lambda_curve(x)?;
    let cy = lambda_curve(y)?;
    let n = x.dim();
    let margins: Vec<CheckMargin> = (1..=n)
        .map(|k| CheckMargin::new(k, n, cx.log_at(k), cy.log_at(k)))
        .collect();
    let holds = margins.iter().all(|m| m.slack >= -SLACK_TOL);
    Ok((holds, margins))
}

/// Decreasing rearrangement of samples on a uniform grid of `[0,1]`:
/// `|samples|` sorted nonincreasing. Agrees exactly with `mu` of the
/// diagonal matrix of the samples.
pub fn rearrange_function(samples: &[f64]) -> Result<StepFunction> {
    if samples.is_empty() {
        return Err(Error::Domain("need at least one sample".into()));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut values: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    StepFunction::new(values, Right)
}

/// Both sides of the trace formula for positive `x` and increasing `f` with
/// `f(0) >= 0`: the normalized trace of `f(x)` and the grid integral
/// `(1/n) sum_j f(s_j)`. The two agree to about 1e-10.
pub fn trace_of_function(x: &ComplexMatrix, f: &ScalarFunction) -> Result<(f64, f64)> {
    if !f.is_increasing() || f.at_zero() < -1e-12 {
        return Err(Error::InvalidStatementParams(
            "trace formula requires increasing f with f(0) >= 0".into(),
        ));
    }
    let fx = apply_scalar_function(x, f)?;
    let via_trace = fx.normalized_trace().re;
    let step = mu(x)?;
    let n = step.grid_size() as f64;
    let via_integral = step.values().iter().map(|&s| f.eval(s)).sum::<f64>() / n;
    Ok((via_trace, via_integral))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarFunction;

    #[test]
    fn mu_of_identity_is_constant_one() {
        let s = mu(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
        assert_eq!(s.value_at(0.0), 1.0);
        assert_eq!(s.value_at(0.999), 1.0);
        assert_eq!(s.value_at(1.0), 0.0);
    }

    #[test]
    fn mu_of_diagonal_by_counting() {
        let x = ComplexMatrix::diag(&[0.8, 0.2]);
        let s = mu_by_counting(&x).unwrap();
        assert_eq!(s.values(), &[0.8, 0.2]);
        let direct = mu(&x).unwrap();
        assert_eq!(direct.values(), s.values());
    }

    #[test]
    fn mu_left_same_values_other_flavor() {
        let x = ComplexMatrix::diag(&[0.9, 0.3]);
        let l = mu_left(&x).unwrap();
        assert_eq!(l.values(), &[0.9, 0.3]);
        assert_eq!(l.continuity(), Continuity::Left);
        assert_eq!(l.value_at(0.5), 0.9);
        assert_eq!(l.value_at(0.50001), 0.3);
        let r = mu(&x).unwrap();
        assert_eq!(r.value_at(0.5), 0.3);
        let lc = mu_left_by_counting(&x).unwrap();
        assert_eq!(lc.values(), l.values());
    }

    #[test]
    fn lambda_partial_products() {
        let c = lambda_curve(&ComplexMatrix::diag(&[0.8, 0.2])).unwrap();
        assert!((c.value_at(1) - 0.8f64.sqrt()).abs() < 1e-14);
        assert!((c.value_at(2) - 0.4).abs() < 1e-14);
        let id = lambda_curve(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(id.log_values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn lambda_zero_tail_is_neg_inf() {
        let c = lambda_curve(&ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        assert_eq!(c.log_at(1), 0.0);
        assert_eq!(c.log_at(2), f64::NEG_INFINITY);
        assert!(c.increments_nonincreasing());
    }

    #[test]
    fn fk_determinant_examples() {
        assert!((fk_determinant(&ComplexMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-15);
        assert!((fk_determinant(&ComplexMatrix::diag(&[0.8, 0.2])).unwrap() - 0.4).abs() < 1e-14);
        assert_eq!(
            fk_determinant(&ComplexMatrix::diag(&[1.0, 0.5, 0.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn shifted_curve_examples() {
        // x = 0: integrand log(1-0) = 0.
        let c = shifted_log_curve(&ComplexMatrix::zeros(2), ShiftTransform::OneMinusRight).unwrap();
        assert_eq!(c.log_values(), &[0.0, 0.0, 0.0]);
        // one-step closed form
        let c = shifted_log_curve(&ComplexMatrix::diag(&[0.6]), ShiftTransform::OneMinusRight).unwrap();
        assert!((c.log_at(1) - 0.4f64.ln()).abs() < 1e-15);
        // unitary boundary: all -inf
        let c = shifted_log_curve(&ComplexMatrix::identity(2), ShiftTransform::OneMinusLeft).unwrap();
        assert_eq!(c.log_at(1), f64::NEG_INFINITY);
        assert_eq!(c.log_at(2), f64::NEG_INFINITY);
    }

    #[test]
    fn shifted_curve_rejects_non_contraction() {
        let r = shifted_log_curve(&ComplexMatrix::diag(&[1.5]), ShiftTransform::OneMinusRight);
        assert!(matches!(r, Err(Error::NotContraction { .. })));
    }

    #[test]
    fn tail_curve_reverses_cells() {
        // values (0.9, 0.4) left-continuous; integral over [1/2, 1] sees 0.4.
        let c = tail_log_curve(&[0.9, 0.4]);
        assert!((c.log_at(1) - 0.4f64.ln() / 2.0).abs() < 1e-15);
        assert!((c.log_at(2) - (0.4f64.ln() + 0.9f64.ln()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn submajorization_reflexive_and_hand_case() {
        let x = ComplexMatrix::diag(&[0.5, 0.5]);
        let (holds, _) = log_submajorize(&x, &x).unwrap();
        assert!(holds);
        // partial products (0.5, 0.25) vs (1, 0.25)
        let y = ComplexMatrix::diag(&[1.0, 0.25]);
        let (holds, margins) = log_submajorize(&x, &y).unwrap();
        assert!(holds);
        assert!((margins[0].slack - (0.5f64.ln() / 2.0).abs()).abs() < 1e-12);
        assert!(margins[1].slack.abs() < 1e-12);
    }

    #[test]
    fn submajorization_dimension_mismatch() {
        let r = log_submajorize(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert!(matches!(r, Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn slack_handles_infinities() {
        assert_eq!(slack_of(f64::NEG_INFINITY, f64::NEG_INFINITY), 0.0);
        assert_eq!(slack_of(f64::NEG_INFINITY, 0.0), f64::INFINITY);
        assert_eq!(slack_of(0.0, f64::NEG_INFINITY), f64::NEG_INFINITY);
        assert_eq!(slack_of(1.0, 3.0), 2.0);
    }

    #[test]
    fn rearrangement_examples() {
        let s = rearrange_function(&[0.1, 0.9, 0.5]).unwrap();
        assert_eq!(s.values(), &[0.9, 0.5, 0.1]);
        let c = rearrange_function(&[-0.3, -0.3]).unwrap();
        assert_eq!(c.values(), &[0.3, 0.3]);
    }

    #[test]
    fn trace_formula_closed_forms() {
        let f1 = ScalarFunction::power(1.0).unwrap();
        let (a, b) = trace_of_function(&ComplexMatrix::diag(&[1.0, 2.0]), &f1).unwrap();
        assert!((a - 1.5).abs() < 1e-12 && (b - 1.5).abs() < 1e-12);
        let f2 = ScalarFunction::power(2.0).unwrap();
        let (a, b) = trace_of_function(&ComplexMatrix::diag(&[1.0, 2.0]), &f2).unwrap();
        assert!((a - 2.5).abs() < 1e-12 && (b - 2.5).abs() < 1e-12);
        let (a, b) = trace_of_function(&ComplexMatrix::zeros(2), &ScalarFunction::log_shift()).unwrap();
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
    }

    #[test]
    fn ext_real_json_round_trip() {
        let m = CheckMargin::new(2, 4, f64::NEG_INFINITY, 0.0);
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"-inf\""));
        assert!(json.contains("\"inf\""));
        let back: CheckMargin = serde_json::from_str(&json).unwrap();
        assert_eq!(back.lhs_log, f64::NEG_INFINITY);
        assert_eq!(back.slack, f64::INFINITY);
    }
}
