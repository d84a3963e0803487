//! Every displayed inequality as an executable statement: given concrete
//! inputs, each check evaluates both sides on the grid and returns margins
//! and a verdict. Orientation is normalized so that nonnegative slack means
//! the inequality holds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decomp::{
    contraction_factor, hermitian_eigen, operator_norm, svd, svd_unclamped, HermitianEigen,
    PSD_CLAMP,
};
use crate::matrix::ComplexMatrix;
use crate::mu::{
    fk_determinant, floored_log, lambda_curve, mu, mu_left, shifted_log_curve, tail_log_curve,
    CheckMargin, LambdaCurve, ShiftTransform,
};
use crate::scalar::{apply_scalar_function, ScalarFunction};
use crate::{Error, Result, SLACK_TOL};

/// Identifier of one checkable statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatementId {
    Rotfeld11,
    GargAujla12,
    Power13,
    Holder14,
    MuAxioms2,
    Lemma31,
    Lemma32,
    Theorem33,
    Lemma41,
    Lemma42,
    Lemma43,
    Lemma45,
    Theorem46,
    Corollary47,
    Remark48,
    /// Deliberately reversed power bound; a harness sanity control that is
    /// expected to fail.
    NegativeControl33,
}

impl StatementId {
    pub fn as_str(self) -> &'static str {
        match self {
            StatementId::Rotfeld11 => "ROTFELD_1_1",
            StatementId::GargAujla12 => "GARG_AUJLA_1_2",
            StatementId::Power13 => "POWER_1_3",
            StatementId::Holder14 => "HOLDER_1_4",
            StatementId::MuAxioms2 => "MU_AXIOMS_2",
            StatementId::Lemma31 => "LEMMA_3_1",
            StatementId::Lemma32 => "LEMMA_3_2",
            StatementId::Theorem33 => "THEOREM_3_3",
            StatementId::Lemma41 => "LEMMA_4_1",
            StatementId::Lemma42 => "LEMMA_4_2",
            StatementId::Lemma43 => "LEMMA_4_3",
            StatementId::Lemma45 => "LEMMA_4_5",
            StatementId::Theorem46 => "THEOREM_4_6",
            StatementId::Corollary47 => "COROLLARY_4_7",
            StatementId::Remark48 => "REMARK_4_8",
            StatementId::NegativeControl33 => "NEGATIVE_CONTROL_3_3",
        }
    }

    pub fn all() -> &'static [StatementId] {
        use StatementId::*;
        &[
            Rotfeld11, GargAujla12, Power13, Holder14, MuAxioms2, Lemma31, Lemma32, Theorem33,
            Lemma41, Lemma42, Lemma43, Lemma45, Theorem46, Corollary47, Remark48,
        ]
    }

    pub fn is_control(self) -> bool {
        matches!(self, StatementId::NegativeControl33)
    }
}

impl Serialize for StatementId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for StatementId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatementId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatementId::all()
            .iter()
            .chain([StatementId::NegativeControl33].iter())
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidStatementParams(format!("unknown statement `{s}`")))
    }
}

/// Statement-specific parameters. Unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatementParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<f64>>,
    /// Number of factors for the product statements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Scalar function descriptor, e.g. `power(0.5)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
}

impl StatementParams {
    fn need_f64(&self, field: &str) -> Result<f64> {
        let v = match field {
            "r" => self.r,
            "p" => self.p,
            "rho" => self.rho,
            "alpha" => self.alpha,
            _ => None,
        };
        v.ok_or_else(|| Error::InvalidStatementParams(format!("missing parameter `{field}`")))
    }

    fn need_function(&self) -> Result<ScalarFunction> {
        self.function
            .as_deref()
            .ok_or_else(|| Error::InvalidStatementParams("missing parameter `function`".into()))?
            .parse()
    }

    fn need_exponents(&self) -> Result<Vec<f64>> {
        self.exponents
            .clone()
            .ok_or_else(|| Error::InvalidStatementParams("missing parameter `exponents`".into()))
    }
}

/// Verdict of one statement evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub statement: StatementId,
    pub params: StatementParams,
    pub pass: bool,
    #[serde(with = "crate::mu::ext_real")]
    pub worst_slack: f64,
    pub margins: Vec<CheckMargin>,
    pub witness: Vec<ComplexMatrix>,
}

fn build_result(
    statement: StatementId,
    params: StatementParams,
    margins: Vec<CheckMargin>,
    witness: Vec<ComplexMatrix>,
) -> CheckResult {
    let worst_slack = margins
        .iter()
        .map(|m| m.slack)
        .fold(f64::INFINITY, f64::min);
    CheckResult {
        statement,
        params,
        pass: worst_slack >= -SLACK_TOL,
        worst_slack,
        margins,
        witness,
    }
}

// ---- margin helpers --------------------------------------------------------

/// Inequality margins `lo <= hi` at every grid point, log domain.
fn curve_le_margins(lo: &LambdaCurve, hi: &LambdaCurve, out: &mut Vec<CheckMargin>) {
    let n = lo.grid_size();
    for k in 1..=n {
        out.push(CheckMargin::new(k, n, lo.log_at(k), hi.log_at(k)));
    }
}

/// Equality margins: both orientations at every grid point.
fn curve_eq_margins(a: &LambdaCurve, b: &LambdaCurve, out: &mut Vec<CheckMargin>) {
    curve_le_margins(a, b, out);
    curve_le_margins(b, a, out);
}

/// Equality of step-function values, compared in the value domain.
fn values_eq_margins(a: &[f64], b: &[f64], out: &mut Vec<CheckMargin>) {
    let n = a.len();
    for k in 1..=n {
        out.push(CheckMargin::new(k, n, a[k - 1], b[k - 1]));
        out.push(CheckMargin::new(k, n, b[k - 1], a[k - 1]));
    }
}

/// Pointwise inequality of step-function values `a <= b`, value domain.
fn values_le_margins(a: &[f64], b: &[f64], out: &mut Vec<CheckMargin>) {
    let n = a.len();
    for k in 1..=n {
        out.push(CheckMargin::new(k, n, a[k - 1], b[k - 1]));
    }
}

fn require_contraction(x: &ComplexMatrix) -> Result<Vec<f64>> {
    let values = svd(x)?.values;
    if values[0] > 1.0 + 1e-12 {
        return Err(Error::NotContraction { norm: values[0] });
    }
    Ok(values.into_iter().map(|v| v.min(1.0)).collect())
}

fn abs_matrix(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(svd(x)?.abs_matrix())
}

/// `|x|^r = V diag(s^r) V*`, straight from the SVD. Exponents can be very
/// large (Hoelder tuples put no upper bound on r * p_i), so this bypasses the
/// scalar-function probe grid, which only covers moderate powers.
fn power_of_abs(x: &ComplexMatrix, r: f64) -> Result<ComplexMatrix> {
    let spectrum = svd(x)?;
    let n = x.dim();
    let v = &spectrum.right_factor;
    let scaled = ComplexMatrix::from_fn(n, |i, j| v.get(i, j) * spectrum.values[j].powf(r));
    let m = &scaled * &v.adjoint();
    // exact re-Hermitization against rounding in the triple product
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        (m.get(i, j) + m.get(j, i).conj()) * 0.5
    }))
}

fn log_det(x: &ComplexMatrix) -> Result<f64> {
    Ok(floored_log(fk_determinant(x)?))
}

/// Eigendecomposition of a positive operator, with tiny negative roundoff
/// clamped to zero.
fn positive_eigen(x: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut eigen = hermitian_eigen(x)?;
    let top = eigen.eigenvalues.first().copied().unwrap_or(0.0).max(1.0);
    if let Some(&min) = eigen.eigenvalues.last() {
        if min < -PSD_CLAMP * top {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    for v in &mut eigen.eigenvalues {
        *v = v.max(0.0);
    }
    Ok(eigen)
}

// ---- the checks ------------------------------------------------------------

/// Axioms of the singular number calculus: the `x*x`/`xx*` symmetry, the
/// three-factor norm bound, commutation with increasing functions, the power
/// rule and submultiplicativity of the Lambda curve, and the identity shift.
pub fn check_mu_axioms(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    f: &ScalarFunction,
    alpha: f64,
) -> Result<CheckResult> {
    if !f.is_increasing() || f.at_zero() < -1e-12 {
        return Err(Error::InvalidStatementParams(
            "axiom battery requires increasing f with f(0) >= 0".into(),
        ));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidStatementParams(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let n = x.dim();
    let mut margins = Vec::new();

    // mu(x*x) = mu(xx*)
    let xsx = &x.adjoint() * x;
    let xxs = x * &x.adjoint();
    values_eq_margins(mu(&xsx)?.values(), mu(&xxs)?.values(), &mut margins);

    // mu(uxv) <= ||u|| mu(x) ||v||
    let uxv = &(u * x) * v;
    let scale = operator_norm(u) * operator_norm(v);
    let bound: Vec<f64> = mu(x)?.values().iter().map(|&s| scale * s).collect();
    values_le_margins(mu(&uxv)?.values(), &bound, &mut margins);

    // mu(f(p)) = f(mu(p)) for positive p = |x|
    let p = abs_matrix(x)?;
    let fp = apply_scalar_function(&p, f)?;
    let mapped: Vec<f64> = mu(&p)?.values().iter().map(|&s| f.eval(s)).collect();
    values_eq_margins(mu(&fp)?.values(), &mapped, &mut margins);

    // Lambda(q^alpha) = Lambda(q)^alpha for strictly positive q. The floor
    // keeps q well conditioned: both curves are recomputed from explicitly
    // formed matrices, and the log of a deep eigenvalue of q^alpha is only
    // accurate to about eps * cond(q)^alpha.
    let q = p.plus_identity(0.05 * (1.0 + operator_norm(&p)));
    let qa = apply_scalar_function(&q, &ScalarFunction::power(alpha)?)?;
    curve_eq_margins(
        &lambda_curve(&qa)?,
        &lambda_curve(&q)?.scale(alpha),
        &mut margins,
    );

    // Lambda(xy) <= Lambda(x) Lambda(y)
    let xy = x * y;
    curve_le_margins(
        &lambda_curve(&xy)?,
        &lambda_curve(x)?.log_add(&lambda_curve(y)?)?,
        &mut margins,
    );

    // mu(1 + p) = 1 + mu(p) for positive p
    let shifted = p.plus_identity(1.0);
    let plus_one: Vec<f64> = mu(&p)?.values().iter().map(|&s| 1.0 + s).collect();
    values_eq_margins(mu(&shifted)?.values(), &plus_one, &mut margins);

    let _ = n;
    Ok(build_result(
        StatementId::MuAxioms2,
        StatementParams {
            alpha: Some(alpha),
            function: Some(f.to_string()),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone(), u.clone(), v.clone()],
    ))
}

/// Identity shift of the singular numbers plus the positive 2x2 block
/// factorization round trip.
pub fn check_lemma_3_1(
    xpos: &ComplexMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    w: &ComplexMatrix,
) -> Result<CheckResult> {
    let mut margins = Vec::new();

    // mu(1 + x) = 1 + mu(x), x positive.
    let plus_one: Vec<f64> = mu(xpos)?.values().iter().map(|&s| 1.0 + s).collect();
    values_eq_margins(
        mu(&xpos.plus_identity(1.0))?.values(),
        &plus_one,
        &mut margins,
    );

    // Forward: x = a^{1/2} w b^{1/2} makes the block PSD, and the recovered
    // factor recomposes to x and is a contraction.
    let half = ScalarFunction::power(0.5)?;
    let ra = apply_scalar_function(a, &half)?;
    let rb = apply_scalar_function(b, &half)?;
    let x = &(&ra * w) * &rb;
    let w2 = contraction_factor(a, b, &x)?;
    let recomposed = &(&ra * &w2) * &rb;
    let scale = (1.0 + operator_norm(a)) * (1.0 + operator_norm(b));
    let residual = (&recomposed - &x).frobenius_norm() / scale;
    let n = x.dim();
    margins.push(CheckMargin::new(n, n, residual, 0.0));
    margins.push(CheckMargin::new(n, n, operator_norm(&w2), 1.0));

    Ok(build_result(
        StatementId::Lemma31,
        StatementParams::default(),
        margins,
        vec![xpos.clone(), a.clone(), b.clone(), w.clone()],
    ))
}

/// Determinant perturbation bound for `0 < p <= 1` and `rho > 0`.
pub fn check_rotfeld(x: &ComplexMatrix, y: &ComplexMatrix, rho: f64, p: f64) -> Result<CheckResult> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidStatementParams(format!("rho must be > 0, got {rho}")));
    }
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidStatementParams(format!(
            "p must lie in (0, 1], got {p}"
        )));
    }
    let perturbed = |z: &ComplexMatrix| -> Result<ComplexMatrix> {
        Ok(power_of_abs(z, p)?.scale(rho).plus_identity(1.0))
    };
    let lhs = log_det(&perturbed(&(x + y))?)?;
    let rhs = log_det(&perturbed(x)?)? + log_det(&perturbed(y)?)?;
    let n = x.dim();
    let margins = vec![CheckMargin::new(n, n, lhs, rhs)];
    Ok(build_result(
        StatementId::Rotfeld11,
        StatementParams {
            rho: Some(rho),
            p: Some(p),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

/// Submajorization of `1 + f(|x + y|)` by the product of the perturbed
/// factors, for nonnegative concave `f` with `f(0) = 0`.
pub fn check_concave_perturbation(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    f: &ScalarFunction,
) -> Result<CheckResult> {
    if !f.is_concave_vanishing() {
        return Err(Error::InvalidStatementParams(
            "requires nonnegative concave f with f(0) = 0".into(),
        ));
    }
    let perturbed =
        |z: &ComplexMatrix| -> Result<ComplexMatrix> {
            Ok(apply_scalar_function(&abs_matrix(z)?, f)?.plus_identity(1.0))
        };
    let lhs = lambda_curve(&perturbed(&(x + y))?)?;
    let rhs = lambda_curve(&perturbed(x)?)?.log_add(&lambda_curve(&perturbed(y)?)?)?;
    let mut margins = Vec::new();
    curve_le_margins(&lhs, &rhs, &mut margins);
    Ok(build_result(
        StatementId::GargAujla12,
        StatementParams {
            function: Some(f.to_string()),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

fn power_bound_sides(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    r: f64,
) -> Result<(LambdaCurve, LambdaCurve, f64, f64)> {
    // Curve route: singular values plus scalar transforms.
    let s_sum = svd(&(x + y))?.values;
    let lhs = LambdaCurve::from_increments(s_sum.iter().map(|&s| r * floored_log(s)).collect());
    let shifted_curve = |z: &ComplexMatrix| -> Result<LambdaCurve> {
        let values = svd(z)?.values;
        Ok(LambdaCurve::from_increments(
            values.iter().map(|&s| (1.0 + s.powf(r)).ln()).collect(),
        ))
    };
    let rhs = shifted_curve(x)?.log_add(&shifted_curve(y)?)?;
    // Determinant specialization, via the functional calculus route.
    let det_lhs = log_det(&power_of_abs(&(x + y), r)?)?;
    let det_rhs = log_det(&power_of_abs(x, r)?.plus_identity(1.0))?
        + log_det(&power_of_abs(y, r)?.plus_identity(1.0))?;
    Ok((lhs, rhs, det_lhs, det_rhs))
}

fn validate_power_r(r: f64) -> Result<()> {
    if !(r.is_finite() && (1.0..=2.0).contains(&r)) {
        return Err(Error::InvalidStatementParams(format!(
            "r must lie in [1, 2], got {r}"
        )));
    }
    Ok(())
}

/// Lambda-curve power bound with the t = 1 determinant specialization.
pub fn check_power_bound(x: &ComplexMatrix, y: &ComplexMatrix, r: f64) -> Result<CheckResult> {
    validate_power_r(r)?;
    check_power_bound_unvalidated(x, y, r)
}

/// Same computation without the parameter-range gate; used by the
/// exploratory out-of-range sweeps, whose verdicts are advisory only.
pub fn check_power_bound_unvalidated(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    r: f64,
) -> Result<CheckResult> {
    let (lhs, rhs, det_lhs, det_rhs) = power_bound_sides(x, y, r)?;
    let mut margins = Vec::new();
    curve_le_margins(&lhs, &rhs, &mut margins);
    let n = x.dim();
    margins.push(CheckMargin::new(n, n, det_lhs, det_rhs));
    Ok(build_result(
        StatementId::Theorem33,
        StatementParams {
            r: Some(r),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

/// Matrix specialization of the power bound: k-th partial products of the
/// singular values of the explicitly assembled matrices. Margins here are
/// `n` times the curve margins of [`check_power_bound`].
pub fn check_power_bound_partial_products(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    r: f64,
) -> Result<CheckResult> {
    validate_power_r(r)?;
    let n = x.dim();
    let s_m = svd(&power_of_abs(&(x + y), r)?)?.values;
    let s_a = svd(&power_of_abs(x, r)?.plus_identity(1.0))?.values;
    let s_b = svd(&power_of_abs(y, r)?.plus_identity(1.0))?.values;
    let mut margins = Vec::new();
    let mut lhs = 0.0f64;
    let mut rhs = 0.0f64;
    for k in 1..=n {
        lhs += floored_log(s_m[k - 1]);
        rhs += floored_log(s_a[k - 1]) + floored_log(s_b[k - 1]);
        margins.push(CheckMargin::new(k, n, lhs, rhs));
    }
    Ok(build_result(
        StatementId::Power13,
        StatementParams {
            r: Some(r),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

/// The reversed power bound: expected to FAIL on generic inputs. A suite
/// that cannot produce a failure proves nothing.
pub fn check_power_bound_reversed(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    r: f64,
) -> Result<CheckResult> {
    validate_power_r(r)?;
    let (lhs, rhs, det_lhs, det_rhs) = power_bound_sides(x, y, r)?;
    let mut margins = Vec::new();
    curve_le_margins(&rhs, &lhs, &mut margins);
    let n = x.dim();
    margins.push(CheckMargin::new(n, n, det_rhs, det_lhs));
    Ok(build_result(
        StatementId::NegativeControl33,
        StatementParams {
            r: Some(r),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

/// Sandwich power comparison for positive operators; the direction flips at
/// `p = 1`, where both orientations hold with equality.
pub fn check_lemma_3_2(x: &ComplexMatrix, y: &ComplexMatrix, p: f64) -> Result<CheckResult> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidStatementParams(format!("p must be > 0, got {p}")));
    }
    // Shared eigendecompositions x = U D U*, y = V E V* give
    //   y^p x^p y^p = (x^{p/2} y^p)^* (x^{p/2} y^p),
    //   (yxy)^p     has eigenvalues  s_j(x^{1/2} y)^{2p},
    // and both inner factors reduce to diagonally scaled copies of the single
    // unitary W = U*V. Singular values of a scaled unitary come out with high
    // relative accuracy, which keeps the log-domain margins meaningful even
    // deep in the spectrum; forming the triple products explicitly loses the
    // small eigenvalues to roundoff at scale eps * ||product||.
    let ex = positive_eigen(x)?;
    let ey = positive_eigen(y)?;
    let w = &ex.unitary.adjoint() * &ey.unitary;
    let scaled = |row_pow: f64, col_pow: f64| {
        ComplexMatrix::from_fn(x.dim(), |i, j| {
            w.get(i, j) * ex.eigenvalues[i].powf(row_pow) * ey.eigenvalues[j].powf(col_pow)
        })
    };
    // Unclamped: these scaled unitaries can have honest singular values
    // below RANK_FLOOR times the largest, and a zero-clamp on one side only
    // would fake a -inf violation.
    let sv_sandwich = svd_unclamped(&scaled(p / 2.0, p))?.values;
    let sv_composed = svd_unclamped(&scaled(0.5, 1.0))?.values;
    let c_sandwich =
        LambdaCurve::from_increments(sv_sandwich.iter().map(|&s| 2.0 * floored_log(s)).collect());
    let c_composed = LambdaCurve::from_increments(
        sv_composed
            .iter()
            .map(|&s| 2.0 * p * floored_log(s))
            .collect(),
    );
    let mut margins = Vec::new();
    if p <= 1.0 {
        curve_le_margins(&c_sandwich, &c_composed, &mut margins);
    }
    if p >= 1.0 {
        curve_le_margins(&c_composed, &c_sandwich, &mut margins);
    }
    Ok(build_result(
        StatementId::Lemma32,
        StatementParams {
            p: Some(p),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

/// Exact grid identities relating the two singular number flavors of
/// `1 - |x|` to the reversed grid of `|x|`, plus (for self-adjoint inputs)
/// the pointwise comparison of `1 - |x|` against `1 - x`.
pub fn check_contraction_identities(
    x: &ComplexMatrix,
    self_adjoint_variant: bool,
) -> Result<CheckResult> {
    let spectrum = svd(x)?;
    if spectrum.values[0] > 1.0 + 1e-12 {
        return Err(Error::NotContraction {
            norm: spectrum.values[0],
        });
    }
    let n = x.dim();
    let absx = spectrum.abs_matrix();
    let one_minus_abs = &ComplexMatrix::identity(n) - &absx;

    // 1 - mu^l_{1-s}(|x|): index reversal with the opposite flavor.
    let expected: Vec<f64> = mu_left(&absx)?
        .reversed_complement_grid()
        .iter()
        .map(|&v| 1.0 - v)
        .collect();
    let mut margins = Vec::new();
    values_eq_margins(mu(&one_minus_abs)?.values(), &expected, &mut margins);

    // Companion identity with the flavors swapped.
    let expected_left: Vec<f64> = mu(&absx)?
        .reversed_complement_grid()
        .iter()
        .map(|&v| 1.0 - v)
        .collect();
    values_eq_margins(mu_left(&one_minus_abs)?.values(), &expected_left, &mut margins);

    let statement = if self_adjoint_variant {
        if !x.is_hermitian(1e-12) {
            return Err(Error::NotHermitian {
                residual: x.hermitian_residual(),
                tolerance: 1e-12 * x.frobenius_norm(),
            });
        }
        let one_minus_x = &ComplexMatrix::identity(n) - x;
        values_le_margins(
            mu(&one_minus_abs)?.values(),
            mu(&one_minus_x)?.values(),
            &mut margins,
        );
        StatementId::Lemma42
    } else {
        StatementId::Lemma41
    };

    Ok(build_result(
        statement,
        StatementParams::default(),
        margins,
        vec![x.clone()],
    ))
}

/// Product integral inequalities for a pair of contractions: both displays
/// for each singular number flavor, plus the determinant consequence.
pub fn check_product_integral(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    r: f64,
) -> Result<CheckResult> {
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::InvalidStatementParams(format!("r must be >= 1, got {r}")));
    }
    let _ = require_contraction(x)?;
    let _ = require_contraction(y)?;
    let n = x.dim();
    let prod_xy = x * y;
    let s_xy = require_contraction(&prod_xy)?;
    // The right factor enters through |y*| = (yy*)^{1/2}: since
    // xy = u |x| |y*| v for unitaries u, v, the singular values of xy and
    // |x||y*| coincide. With |y| instead the claim is false (take
    // x = diag(1, 0) and y the nilpotent shift: xy has norm 1 while
    // |x||y| = 0).
    let xr = power_of_abs(x, r)?;
    let yr = power_of_abs(&y.adjoint(), r)?;
    let prod_abs = &xr * &yr;
    let s_abs = require_contraction(&prod_abs)?;

    let mut margins = Vec::new();

    // First displays, scalar route: 1 - mu(xy)^r against 1 - mu(|x|^r|y|^r).
    // The values of `prod_abs` already carry the power r.
    let one_minus = |values: &[f64], rr: f64| -> LambdaCurve {
        LambdaCurve::from_increments(
            values
                .iter()
                .map(|&v| floored_log((1.0 - v.powf(rr)).max(0.0)))
                .collect(),
        )
    };
    let lhs_curve = one_minus(&s_xy, r);
    let rhs_curve = one_minus(&s_abs, 1.0);
    // claim: lhs >= rhs, so the normalized order is rhs <= lhs
    curve_le_margins(&rhs_curve, &lhs_curve, &mut margins);

    // Left-continuous first display, matrix route: mu^l of the functional
    // calculus powers.
    let lhs_left = {
        let m = power_of_abs(&prod_xy, r)?;
        let values = mu_left(&m)?.values().to_vec();
        LambdaCurve::from_increments(
            values
                .iter()
                .map(|&v| floored_log((1.0 - v.min(1.0)).max(0.0)))
                .collect(),
        )
    };
    let rhs_left = {
        let m = abs_matrix(&prod_abs)?; // ||x|^r |y|^r|
        let values = mu_left(&m)?.values().to_vec();
        LambdaCurve::from_increments(
            values
                .iter()
                .map(|&v| floored_log((1.0 - v.min(1.0)).max(0.0)))
                .collect(),
        )
    };
    curve_le_margins(&rhs_left, &lhs_left, &mut margins);

    // Tail displays, matrix route: 1 - |xy|^r against 1 - ||x|^r |y|^r|.
    let m1 = {
        let p = power_of_abs(&prod_xy, r)?;
        &ComplexMatrix::identity(n) - &p
    };
    let m2 = {
        let p = abs_matrix(&prod_abs)?;
        &ComplexMatrix::identity(n) - &p
    };
    let tail1 = shifted_log_curve(&m1, ShiftTransform::LogTailLeft)?;
    let tail2 = shifted_log_curve(&m2, ShiftTransform::LogTailLeft)?;
    curve_le_margins(&tail2, &tail1, &mut margins);

    // Determinant consequence, the t = 1 specialization of the displays:
    // Delta(1 - |xy|^r) >= Delta(1 - ||x|^r |y*|^r|).
    margins.push(CheckMargin::new(n, n, log_det(&m2)?, log_det(&m1)?));

    Ok(build_result(
        StatementId::Lemma43,
        StatementParams {
            r: Some(r),
            ..Default::default()
        },
        margins,
        vec![x.clone(), y.clone()],
    ))
}

/// Generalized Hoelder product inequality for `m` contractions with
/// conjugate exponents, both displays, the `r = 1` corollary, the extra
/// self-adjoint chain when the product is self-adjoint, and both
/// determinant remarks.
pub fn check_holder_main(xs: &[ComplexMatrix], ps: &[f64], r: f64) -> Result<CheckResult> {
    let m = xs.len();
    if m < 2 || ps.len() != m {
        return Err(Error::InvalidStatementParams(format!(
            "need m >= 2 factors with matching exponents, got {m} and {}",
            ps.len()
        )));
    }
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::InvalidStatementParams(format!("r must be >= 1, got {r}")));
    }
    if ps.iter().any(|&p| !(p.is_finite() && p > 0.0)) {
        return Err(Error::InvalidStatementParams("exponents must be positive".into()));
    }
    let recip: f64 = ps.iter().map(|p| 1.0 / p).sum();
    if (recip - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidStatementParams(format!(
            "exponent reciprocals must sum to 1, got {recip}"
        )));
    }
    let n = xs[0].dim();
    if xs.iter().any(|x| x.dim() != n) {
        return Err(Error::DimensionMismatch(n, xs.iter().map(|x| x.dim()).max().unwrap()));
    }
    let factor_values: Vec<Vec<f64>> = xs
        .iter()
        .map(require_contraction)
        .collect::<Result<_>>()?;
    let mut prod = xs[0].clone();
    for x in &xs[1..] {
        prod = &prod * x;
    }
    let s_prod = require_contraction(&prod)?;

    let mut margins = Vec::new();

    // Main display, scalar route.
    let lhs_main = |rr: f64| {
        LambdaCurve::from_increments(
            s_prod
                .iter()
                .map(|&v| floored_log((1.0 - v.powf(rr)).max(0.0)))
                .collect(),
        )
    };
    let rhs_main = |rr: f64| {
        let mut acc = LambdaCurve::from_increments(vec![0.0; n]);
        for (values, &p) in factor_values.iter().zip(ps) {
            let term = LambdaCurve::from_increments(
                values
                    .iter()
                    .map(|&v| floored_log((1.0 - v.powf(rr * p)).max(0.0)) / p)
                    .collect(),
            );
            acc = acc.log_add(&term).unwrap();
        }
        acc
    };
    curve_le_margins(&rhs_main(r), &lhs_main(r), &mut margins);

    // Tail display, matrix route.
    let tail_of = |z: &ComplexMatrix, rr: f64| -> Result<LambdaCurve> {
        let p = power_of_abs(z, rr)?;
        let one_minus = &ComplexMatrix::identity(n) - &p;
        shifted_log_curve(&one_minus, ShiftTransform::LogTailLeft)
    };
    let lhs_tail = tail_of(&prod, r)?;
    let mut rhs_tail = LambdaCurve::from_increments(vec![0.0; n]);
    for (x, &p) in xs.iter().zip(ps) {
        rhs_tail = rhs_tail.log_add(&tail_of(x, r * p)?.scale(1.0 / p))?;
    }
    curve_le_margins(&rhs_tail, &lhs_tail, &mut margins);

    // r = 1 corollary, scalar route.
    curve_le_margins(&rhs_main(1.0), &lhs_main(1.0), &mut margins);

    // Self-adjoint chain when the product is self-adjoint: the tail of
    // 1 - prod dominates the tail of 1 - |prod|, which dominates the sum.
    if prod.hermitian_residual() <= 1e-10 * prod.frobenius_norm().max(f64::MIN_POSITIVE) {
        let one_minus_prod = &ComplexMatrix::identity(n) - &prod;
        let chain_lhs = tail_log_curve(&svd(&one_minus_prod)?.values);
        let one_minus_abs = &ComplexMatrix::identity(n) - &abs_matrix(&prod)?;
        let chain_mid = tail_log_curve(&svd(&one_minus_abs)?.values);
        curve_le_margins(&chain_mid, &chain_lhs, &mut margins);
        let mut chain_rhs = LambdaCurve::from_increments(vec![0.0; n]);
        for (x, &p) in xs.iter().zip(ps) {
            chain_rhs = chain_rhs.log_add(&tail_of(x, p)?.scale(1.0 / p))?;
        }
        curve_le_margins(&chain_rhs, &chain_mid, &mut margins);
    }

    // Determinant remarks at t = 1, for the given r and for r = 1.
    for rr in [r, 1.0] {
        let lhs_det = {
            let p = power_of_abs(&prod, rr)?;
            log_det(&(&ComplexMatrix::identity(n) - &p))?
        };
        let mut rhs_det = 0.0f64;
        for (x, &p) in xs.iter().zip(ps) {
            let q = power_of_abs(x, rr * p)?;
            rhs_det += log_det(&(&ComplexMatrix::identity(n) - &q))? / p;
        }
        margins.push(CheckMargin::new(n, n, rhs_det, lhs_det));
    }

    Ok(build_result(
        StatementId::Theorem46,
        StatementParams {
            r: Some(r),
            exponents: Some(ps.to_vec()),
            m: Some(m),
            ..Default::default()
        },
        margins,
        xs.to_vec(),
    ))
}

/// Matrix eigenvalue form of the Hoelder inequality: k-th partial products
/// of `1 - s_j(.)^r` terms, compared in the log domain.
pub fn check_holder_matrix_form(xs: &[ComplexMatrix], ps: &[f64], r: f64) -> Result<CheckResult> {
    let inner = check_holder_main(xs, ps, r)?;
    let n = xs[0].dim();
    let factor_values: Vec<Vec<f64>> = xs
        .iter()
        .map(require_contraction)
        .collect::<Result<_>>()?;
    let mut prod = xs[0].clone();
    for x in &xs[1..] {
        prod = &prod * x;
    }
    let s_prod = require_contraction(&prod)?;
    let mut margins = Vec::new();
    let mut lhs = 0.0f64;
    let mut rhs = 0.0f64;
    for k in 1..=n {
        lhs += floored_log((1.0 - s_prod[k - 1].powf(r)).max(0.0));
        for (values, &p) in factor_values.iter().zip(ps) {
            rhs += floored_log((1.0 - values[k - 1].powf(r * p)).max(0.0)) / p;
        }
        margins.push(CheckMargin::new(k, n, rhs, lhs));
    }
    let _ = inner;
    Ok(build_result(
        StatementId::Holder14,
        StatementParams {
            r: Some(r),
            exponents: Some(ps.to_vec()),
            m: Some(xs.len()),
            ..Default::default()
        },
        margins,
        xs.to_vec(),
    ))
}

// ---- statement dispatch ----------------------------------------------------

fn expect_witness(witness: &[ComplexMatrix], count: usize) -> Result<()> {
    if witness.len() != count {
        return Err(Error::InvalidStatementParams(format!(
            "expected {count} witness matrices, got {}",
            witness.len()
        )));
    }
    let n = witness[0].dim();
    if witness.iter().any(|w| w.dim() != n) {
        return Err(Error::DimensionMismatch(
            n,
            witness.iter().map(|w| w.dim()).max().unwrap(),
        ));
    }
    Ok(())
}

/// Evaluate a statement on concrete inputs. `allow_out_of_range` lifts the
/// parameter-range gates for exploratory sweeps.
pub fn run_statement(
    id: StatementId,
    params: &StatementParams,
    witness: &[ComplexMatrix],
    allow_out_of_range: bool,
) -> Result<CheckResult> {
    let mut relabel = |mut result: CheckResult| {
        result.statement = id;
        result
    };
    match id {
        StatementId::MuAxioms2 => {
            expect_witness(witness, 4)?;
            let f = params.need_function()?;
            check_mu_axioms(
                &witness[0],
                &witness[1],
                &witness[2],
                &witness[3],
                &f,
                params.need_f64("alpha")?,
            )
        }
        StatementId::Lemma31 => {
            expect_witness(witness, 4)?;
            check_lemma_3_1(&witness[0], &witness[1], &witness[2], &witness[3])
        }
        StatementId::Rotfeld11 => {
            expect_witness(witness, 2)?;
            check_rotfeld(
                &witness[0],
                &witness[1],
                params.need_f64("rho")?,
                params.need_f64("p")?,
            )
        }
        StatementId::GargAujla12 => {
            expect_witness(witness, 2)?;
            let f = params.need_function()?;
            check_concave_perturbation(&witness[0], &witness[1], &f)
        }
        StatementId::Theorem33 => {
            expect_witness(witness, 2)?;
            let r = params.need_f64("r")?;
            if allow_out_of_range {
                check_power_bound_unvalidated(&witness[0], &witness[1], r)
            } else {
                check_power_bound(&witness[0], &witness[1], r)
            }
        }
        StatementId::Power13 => {
            expect_witness(witness, 2)?;
            check_power_bound_partial_products(&witness[0], &witness[1], params.need_f64("r")?)
        }
        StatementId::NegativeControl33 => {
            expect_witness(witness, 2)?;
            check_power_bound_reversed(&witness[0], &witness[1], params.need_f64("r")?)
        }
        StatementId::Lemma32 => {
            expect_witness(witness, 2)?;
            check_lemma_3_2(&witness[0], &witness[1], params.need_f64("p")?)
        }
        StatementId::Lemma41 => {
            expect_witness(witness, 1)?;
            check_contraction_identities(&witness[0], false)
        }
        StatementId::Lemma42 => {
            expect_witness(witness, 1)?;
            check_contraction_identities(&witness[0], true)
        }
        StatementId::Lemma43 | StatementId::Lemma45 => {
            expect_witness(witness, 2)?;
            check_product_integral(&witness[0], &witness[1], params.need_f64("r")?)
                .map(&mut relabel)
        }
        StatementId::Theorem46 | StatementId::Corollary47 | StatementId::Remark48 => {
            let ps = params.need_exponents()?;
            expect_witness(witness, ps.len())?;
            let r = if id == StatementId::Corollary47 {
                1.0
            } else {
                params.need_f64("r")?
            };
            check_holder_main(witness, &ps, r).map(&mut relabel)
        }
        StatementId::Holder14 => {
            let ps = params.need_exponents()?;
            expect_witness(witness, ps.len())?;
            check_holder_matrix_form(witness, &ps, params.need_f64("r")?)
        }
    }
}

// ---- catalog ----------------------------------------------------------------

/// One row of the machine-readable statement table.
#[derive(Clone, Debug, Serialize)]
pub struct StatementInfo {
    pub id: &'static str,
    pub summary: &'static str,
    pub parameters: &'static str,
    pub requires_contractions: bool,
    pub requires_positive: bool,
    pub requires_self_adjoint: bool,
    pub control: bool,
}

pub fn catalog() -> Vec<StatementInfo> {
    fn row(
        id: StatementId,
        summary: &'static str,
        parameters: &'static str,
        requires_contractions: bool,
        requires_positive: bool,
        requires_self_adjoint: bool,
    ) -> StatementInfo {
        StatementInfo {
            id: id.as_str(),
            summary,
            parameters,
            requires_contractions,
            requires_positive,
            requires_self_adjoint,
            control: id.is_control(),
        }
    }
    vec![
        row(StatementId::Rotfeld11, "Rotfel'd determinant perturbation bound", "rho > 0, 0 < p <= 1", false, false, false),
        row(StatementId::GargAujla12, "Garg-Aujla concave perturbation submajorization", "concave f, f(0) = 0", false, false, false),
        row(StatementId::Power13, "power bound, matrix partial-product form", "1 <= r <= 2", false, false, false),
        row(StatementId::Holder14, "Hoelder eigenvalue inequality, matrix form", "conjugate exponents, r >= 1", true, false, false),
        row(StatementId::MuAxioms2, "singular number calculus axiom battery", "increasing f with f(0) >= 0, alpha > 0", false, false, false),
        row(StatementId::Lemma31, "identity shift and positive block factorization", "none", false, true, false),
        row(StatementId::Lemma32, "sandwich power comparison", "p > 0; direction flips at p = 1", false, true, false),
        row(StatementId::Theorem33, "power bound, Lambda-curve form with determinant", "1 <= r <= 2", false, false, false),
        row(StatementId::Lemma41, "exact flavor-swap identities for 1 - |x|", "none", true, false, false),
        row(StatementId::Lemma42, "pointwise bound mu(1-|x|) <= mu(1-x)", "none", true, false, true),
        row(StatementId::Lemma43, "product integral inequality, right-continuous", "r >= 1", true, false, false),
        row(StatementId::Lemma45, "product integral inequality, left-continuous + determinant", "r >= 1", true, false, false),
        row(StatementId::Theorem46, "generalized Hoelder inequality, both displays", "conjugate exponents, r >= 1", true, false, false),
        row(StatementId::Corollary47, "Hoelder corollary at r = 1 with self-adjoint chain", "conjugate exponents", true, false, false),
        row(StatementId::Remark48, "Hoelder determinant inequalities", "conjugate exponents, r >= 1", true, false, false),
        row(StatementId::NegativeControl33, "reversed power bound; expected to fail", "1 <= r <= 2", false, false, false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{
        sample_contraction, sample_ginibre, sample_positive, SeedStream, Purpose,
    };

    fn stream(trial: u64) -> SeedStream {
        SeedStream::new(0xC0FFEE, Purpose::Ginibre, trial)
    }

    #[test]
    fn rotfeld_scalar_case() {
        // x = y = 1 (1x1), rho = 1, p = 1: Delta(3) = 3 <= 4.
        let one = ComplexMatrix::identity(1);
        let res = check_rotfeld(&one, &one, 1.0, 1.0).unwrap();
        assert!(res.pass);
        assert!((res.margins[0].lhs_log - 3.0f64.ln()).abs() < 1e-12);
        assert!((res.margins[0].rhs_log - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rotfeld_zero_second_summand() {
        let x = sample_ginibre(3, &mut stream(1));
        let res = check_rotfeld(&x, &ComplexMatrix::zeros(3), 0.7, 0.5).unwrap();
        assert!(res.pass);
        // slack equals log Delta(1 + rho |x|^p) >= 0
        assert!(res.margins[0].slack >= -1e-12);
    }

    #[test]
    fn rotfeld_rejects_bad_params() {
        let x = ComplexMatrix::identity(2);
        assert!(check_rotfeld(&x, &x, -1.0, 0.5).is_err());
        assert!(check_rotfeld(&x, &x, 1.0, 1.5).is_err());
    }

    #[test]
    fn power_bound_scalar_case() {
        // x = y = 1 (1x1), r = 1: Lambda_1(|2|) = 2 <= 4.
        let one = ComplexMatrix::identity(1);
        let res = check_power_bound(&one, &one, 1.0).unwrap();
        assert!(res.pass);
        let m = &res.margins[0];
        assert!((m.lhs_log - 2.0f64.ln()).abs() < 1e-12);
        assert!((m.rhs_log - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn power_bound_zero_inputs_infinite_slack() {
        let z = ComplexMatrix::zeros(2);
        let res = check_power_bound(&z, &z, 1.5).unwrap();
        assert!(res.pass);
        assert_eq!(res.margins[0].slack, f64::INFINITY);
    }

    #[test]
    fn lemma_3_2_equality_at_p_one() {
        let x = sample_positive(3, &mut stream(2));
        let y = sample_positive(3, &mut stream(3));
        let res = check_lemma_3_2(&x, &y, 1.0).unwrap();
        assert!(res.pass);
        assert!(res.worst_slack >= -1e-10);
    }

    #[test]
    fn lemma_3_2_commuting_diagonals_equal() {
        let x = ComplexMatrix::diag(&[0.5, 2.0]);
        let y = ComplexMatrix::diag(&[1.5, 0.25]);
        for p in [0.3, 0.7, 1.5, 2.0] {
            let res = check_lemma_3_2(&x, &y, p).unwrap();
            assert!(res.pass, "p = {p}");
            assert!(res.worst_slack.abs() < 1e-9, "p = {p}: {}", res.worst_slack);
        }
    }

    #[test]
    fn contraction_identities_hand_case() {
        let x = ComplexMatrix::diag(&[0.9, 0.3]);
        let res = check_contraction_identities(&x, false).unwrap();
        assert!(res.pass);
        // mu(1 - |x|) = (0.7, 0.1)
        assert!((res.margins[0].lhs_log - 0.7).abs() < 1e-14);
        assert!(res.worst_slack >= -1e-12);
    }

    #[test]
    fn contraction_identities_zero_and_selfadjoint() {
        let res = check_contraction_identities(&ComplexMatrix::zeros(2), false).unwrap();
        assert!(res.pass);
        let x = ComplexMatrix::diag(&[-0.5, 0.5]);
        let res = check_contraction_identities(&x, true).unwrap();
        assert!(res.pass);
    }

    #[test]
    fn contraction_identities_reject_expansion() {
        let x = ComplexMatrix::diag(&[1.5, 0.5]);
        assert!(matches!(
            check_contraction_identities(&x, false),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn product_integral_identity_factor() {
        let x = sample_contraction(3, &mut stream(4), true);
        let res = check_product_integral(&x, &ComplexMatrix::identity(3), 2.0).unwrap();
        assert!(res.pass);
        assert!(res.worst_slack >= -1e-8);
    }

    #[test]
    fn product_integral_commuting_diagonals_equal() {
        let x = ComplexMatrix::diag(&[0.8, 0.2]);
        let y = ComplexMatrix::diag(&[0.5, 0.4]);
        let res = check_product_integral(&x, &y, 1.5).unwrap();
        assert!(res.pass);
        assert!(res.worst_slack.abs() < 1e-9);
    }

    #[test]
    fn holder_scalar_equality_case() {
        // m = 2, x_1 = x_2 = diag(c), p = (2,2), r = 1: equality.
        let c = ComplexMatrix::diag(&[0.6]);
        let res = check_holder_main(&[c.clone(), c], &[2.0, 2.0], 1.0).unwrap();
        assert!(res.pass);
        assert!(res.worst_slack.abs() < 1e-10);
    }

    #[test]
    fn holder_unitary_factor_infinite_slack() {
        let x = sample_contraction(2, &mut stream(5), true);
        let res = check_holder_main(
            &[x, ComplexMatrix::identity(2)],
            &[1.5, 3.0],
            1.0,
        )
        .unwrap();
        assert!(res.pass);
    }

    #[test]
    fn holder_rejects_bad_exponents() {
        let x = ComplexMatrix::zeros(2);
        assert!(check_holder_main(&[x.clone(), x.clone()], &[2.0, 3.0], 1.0).is_err());
        assert!(check_holder_main(&[x.clone()], &[1.0], 1.0).is_err());
    }

    #[test]
    fn negative_control_fails_generically() {
        let mut failures = 0;
        for trial in 0..20 {
            let x = sample_ginibre(3, &mut stream(100 + trial));
            let y = sample_ginibre(3, &mut stream(200 + trial));
            let res = check_power_bound_reversed(&x, &y, 1.5).unwrap();
            if !res.pass {
                failures += 1;
            }
        }
        assert!(failures > 0, "the reversed bound never failed");
    }

    #[test]
    fn statement_id_round_trip() {
        for &id in StatementId::all() {
            let back: StatementId = id.as_str().parse().unwrap();
            assert_eq!(id, back);
        }
        let neg: StatementId = "NEGATIVE_CONTROL_3_3".parse().unwrap();
        assert_eq!(neg, StatementId::NegativeControl33);
        assert!("BOGUS".parse::<StatementId>().is_err());
    }

    #[test]
    fn catalog_covers_every_statement() {
        let cat = catalog();
        assert_eq!(cat.len(), 16);
        assert_eq!(cat.iter().filter(|s| s.control).count(), 1);
    }
}
