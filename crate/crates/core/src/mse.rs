//! Closed-form minimum MSEs, optimal weights, relative efficiency and the
//! dominance checks between estimator classes.
//!
//! All quantities are first-order (O(1/n)) approximations in units of `y²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{self, coeffs_of, EstimatorSpec, Family, TmShape};
use crate::expansion::{bias_from_coeffs, error_moments, mse_from_coeffs};
use crate::population::MedianParams;

/// Tie tolerance (relative) for dominance margins.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// `γ·C_y²·(1 − ρ_c²)`, the dimensionless residual variance left after
/// the best linear use of `M̂x`.
fn residual(params: &MedianParams) -> f64 {
    params.gamma * params.cv_y.powi(2) * (1.0 - params.rho_c.powi(2))
}

/// `W(a) = My²·γ·(C_y² + a²C_x² − 2aρ_c·C_y·C_x)`.
fn spread_at_slope(a: f64, params: &MedianParams) -> f64 {
    let (cy, cx) = (params.cv_y, params.cv_x);
    params.median_y.powi(2)
        * params.gamma
        * (cy * cy + a * a * cx * cx - 2.0 * a * params.rho_c * cy * cx)
}

/// Minimum MSE of the difference estimator, the whole ratio/product/power
/// class and every estimator of that class at its optimum:
/// `γ·C_y²·My²·(1 − ρ_c²)`.
pub fn min_mse_difference(params: &MedianParams) -> f64 {
    params.median_y.powi(2) * residual(params)
}

/// Optimal `d1` of `d1 M̂y + (1 − d1)(Mx − M̂x)`.
pub fn ss1_weight(params: &MedianParams) -> f64 {
    let (g, r, cy, cx) = (params.gamma, params.ratio, params.cv_y, params.cv_x);
    let kc = params.optimal_exponent;
    let num = 1.0 + r * g * cx * cx * (r + kc);
    let den = 1.0 + g * (cy * cy + r * cx * cx * (r + 2.0 * kc));
    num / den
}

pub fn min_mse_ss1(params: &MedianParams) -> f64 {
    let (g, r, cy, cx) = (params.gamma, params.ratio, params.cv_y, params.cv_x);
    let kc = params.optimal_exponent;
    let num = 1.0 + r * g * cx * cx * (r + kc);
    let den = 1.0 + g * (cy * cy + r * cx * cx * (r + 2.0 * kc));
    params.median_y.powi(2) * (1.0 + r * r * g * cx * cx - num * num / den)
}

pub fn min_mse_ss2(params: &MedianParams) -> f64 {
    let s = residual(params);
    params.median_y.powi(2) * s / (1.0 + s)
}

/// `My²·s·(1 − R)² / ((1 − R)² + s)` with `s = γC_y²(1 − ρ_c²)`; zero when
/// `R = 1` (see [`MedianParams::degenerate_pivot`]).
pub fn min_mse_ss3(params: &MedianParams) -> f64 {
    let s = residual(params);
    let pivot = (1.0 - params.ratio).powi(2);
    if pivot == 0.0 {
        log::warn!("degenerate pivot: R = 1, minimum MSE is 0");
        return 0.0;
    }
    params.median_y.powi(2) * s * pivot / (pivot + s)
}

/// Shrinkage minimum with effective exponent parameter `delta`; requires
/// `1 − δ²γC_x² > 0`.
pub fn min_mse_ss4(params: &MedianParams, delta: f64) -> Result<f64> {
    let shrink = 1.0 - delta * delta * params.gamma * params.cv_x.powi(2);
    if shrink.is_nan() || shrink <= 0.0 {
        return Err(Error::Domain(format!(
            "1 - delta^2 * gamma * C_x^2 = {shrink} must be positive"
        )));
    }
    let s = residual(params);
    Ok(shrink * params.median_y.powi(2) * s / (shrink + s))
}

/// Terms of the `t_m` quadratic MSE
/// `(1 − 2w1)b² + w1²A + w2²B + 2w1w2C` and its minimiser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub w1_opt: f64,
    pub w2_opt: f64,
}

fn quadratic_terms(shape: &TmShape, params: &MedianParams) -> Result<(f64, f64, f64)> {
    let a_slope = shape.slope(params.median_x)?;
    let (my, mx, g) = (params.median_y, params.median_x, params.gamma);
    let (cy, cx) = (params.cv_y, params.cv_x);
    let gap2 = params.gap * params.gap;
    let a = gap2 + spread_at_slope(a_slope, params);
    let b = mx * mx * g * cx * cx;
    let c = my * mx * g * (params.rho_c * cy - a_slope * cx) * cx;
    Ok((a, b, c))
}

pub fn quadratic_weights(shape: &TmShape, params: &MedianParams) -> Result<QuadraticWeights> {
    let (a, b, c) = quadratic_terms(shape, params)?;
    let det = a * b - c * c;
    if det.is_nan() || det <= 0.0 {
        return Err(Error::DegenerateOptimum(det));
    }
    let gap2 = params.gap * params.gap;
    Ok(QuadraticWeights {
        a,
        b,
        c,
        w1_opt: gap2 * b / det,
        w2_opt: -gap2 * c / det,
    })
}

/// MSE of `t_m` at arbitrary weights.
pub fn mse_at_weights(shape: &TmShape, params: &MedianParams, w1: f64, w2: f64) -> Result<f64> {
    let (a, b, c) = quadratic_terms(shape, params)?;
    let gap2 = params.gap * params.gap;
    Ok((1.0 - 2.0 * w1) * gap2 + w1 * w1 * a + w2 * w2 * b + 2.0 * w1 * w2 * c)
}

/// Optimal `w1` with `w2 = 0`: `b² / A`.
pub fn tmq_weight(shape: &TmShape, params: &MedianParams) -> Result<f64> {
    let (a, _, _) = quadratic_terms(shape, params)?;
    Ok(if a == 0.0 { 0.0 } else { params.gap.powi(2) / a })
}

/// `b²[1 − b²B/(AB − C²)]` evaluated from the quadratic terms of `shape`.
/// Written as `b²(WB − C²)/(AB − C²)` with `W = A − b²`, which avoids the
/// cancellation in `1 − w1*` when `w1*` is close to 1.
pub fn min_mse_tm_via_weights(shape: &TmShape, params: &MedianParams) -> Result<f64> {
    let q = quadratic_weights(shape, params)?;
    let gap2 = params.gap * params.gap;
    let spread = spread_at_slope(shape.slope(params.median_x)?, params);
    Ok(gap2 * (spread * q.b - q.c * q.c) / (q.a * q.b - q.c * q.c))
}

/// Minimum MSE of the full `t_m` class; identical to [`min_mse_ss3`].
pub fn min_mse_tm(params: &MedianParams) -> f64 {
    min_mse_ss3(params)
}

/// `b²W/(b² + W)` with `W` at slope `a`.
pub fn min_mse_tmq_at_slope(a: f64, params: &MedianParams) -> f64 {
    let gap2 = params.gap * params.gap;
    let w = spread_at_slope(a, params);
    if gap2 == 0.0 || gap2 + w == 0.0 {
        return 0.0;
    }
    gap2 * w / (gap2 + w)
}

/// Minimum MSE of `t_mq` (`w2 = 0`, `w1` optimal) for a fixed shape.
pub fn min_mse_tmq(shape: &TmShape, params: &MedianParams) -> Result<f64> {
    Ok(min_mse_tmq_at_slope(shape.slope(params.median_x)?, params))
}

/// First-order bias of a fixed-weight estimator. `None` for the `Ss4`
/// family, whose bias is not covered by this expansion.
pub fn analytic_bias(spec: &EstimatorSpec, params: &MedianParams) -> Result<Option<f64>> {
    if matches!(spec.family, Family::Ss4 { .. }) {
        return Ok(None);
    }
    let coeffs = coeffs_of(spec, params)?;
    Ok(Some(bias_from_coeffs(&coeffs, &error_moments(params))))
}

/// Percent relative efficiency `100·baseline/mse`; `None` flags an infinite
/// efficiency (zero MSE).
pub fn pre(analytic_mse: f64, baseline_var: f64) -> Option<f64> {
    if analytic_mse > 0.0 {
        Some(100.0 * baseline_var / analytic_mse)
    } else {
        None
    }
}

/// Analytic (minimum) MSE reported for a named preset. Estimators with a
/// free scalar are reported at their optimum through the closed forms;
/// fixed estimators go through the expansion coefficients.
pub fn preset_mse(name: &str, params: &MedianParams, ss4_delta: f64) -> Result<f64> {
    let name = estimators::canonical_name(name)?;
    Ok(match name {
        "M_d" | "M_1" | "M_2" | "M_3" | "M_4" | "M_5" | "M_6" | "M_7" | "M_lr" | "t_m3" => {
            min_mse_difference(params)
        }
        "M_d1" => min_mse_ss1(params),
        "M_d2" => min_mse_ss2(params),
        "M_d3" => min_mse_ss3(params),
        "M_d4" => min_mse_ss4(params, ss4_delta)?,
        "t_m" | "t_m8" => min_mse_tm(params),
        "t_m5" => min_mse_tmq(&TmShape::new(1.0, 0.0, 1.0), params)?,
        "t_m6" => min_mse_tmq(&TmShape::new(-1.0, 0.0, 1.0), params)?,
        "t_m7" => min_mse_tmq(&TmShape::new(0.0, 0.0, 1.0), params)?,
        n if n.starts_with("t_mq") => {
            let index: usize = n["t_mq".len()..].parse().expect("preset table");
            let shape = estimators::tmq_shape(index, params).expect("preset table");
            min_mse_tmq(&shape, params)?
        }
        fixed => {
            let spec = estimators::preset(fixed, params)?;
            mse_from_coeffs(&coeffs_of(&spec, params)?, &error_moments(params))
        }
    })
}

/// Row names of the reference table, in order.
pub const TABLE_ROWS: &[&str] = &[
    "M_y", "M_r", "M_d", "M_d1", "M_d2", "M_d3", "M_d4", "t_m", "t_mq1", "t_mq2", "t_mq3",
    "t_mq4", "t_mq5", "t_mq6", "t_mq7", "t_mq8", "t_mq9",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseReportRow {
    pub estimator: String,
    pub analytic_mse: f64,
    pub analytic_bias: Option<f64>,
    pub pre_vs_sample_median: Option<f64>,
}

pub fn report_rows(names: &[&str], params: &MedianParams, ss4_delta: f64) -> Result<Vec<MseReportRow>> {
    let baseline = preset_mse("M_y", params, ss4_delta)?;
    names
        .iter()
        .map(|name| {
            let spec = estimators::preset(name, params)?;
            let analytic_mse = preset_mse(name, params, ss4_delta)?;
            Ok(MseReportRow {
                estimator: spec.id.clone(),
                analytic_mse,
                analytic_bias: analytic_bias(&spec, params)?,
                pre_vs_sample_median: pre(analytic_mse, baseline),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// Margin within [`TIE_TOLERANCE`] of zero.
    Indeterminate,
    /// Preconditions of the comparison are not met.
    NotApplicable,
}

/// One inequality `lhs < rhs` with margin `rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceCheck {
    pub id: String,
    pub claim: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub degenerate_pivot: bool,
}

fn compare(id: &str, claim: &str, lhs: f64, rhs: f64, pivot: bool) -> DominanceCheck {
    let margin = rhs - lhs;
    let scale = lhs.abs().max(rhs.abs());
    let verdict = if margin.abs() <= TIE_TOLERANCE * scale {
        Verdict::Indeterminate
    } else if margin > 0.0 {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    DominanceCheck {
        id: id.into(),
        claim: claim.into(),
        lhs,
        rhs,
        margin,
        verdict,
        degenerate_pivot: pivot,
    }
}

fn not_applicable(id: &str, claim: &str) -> DominanceCheck {
    DominanceCheck {
        id: id.into(),
        claim: claim.into(),
        lhs: f64::NAN,
        rhs: f64::NAN,
        margin: f64::NAN,
        verdict: Verdict::NotApplicable,
        degenerate_pivot: false,
    }
}

/// The five pairwise dominance claims, evaluated numerically.
pub fn dominance_checks(
    params: &MedianParams,
    tmq_shape: &TmShape,
    ss4_delta: f64,
) -> Result<Vec<DominanceCheck>> {
    let pivot = params.degenerate_pivot();
    let tm = min_mse_tm(params);
    let diff = min_mse_difference(params);
    let tmq = min_mse_tmq(tmq_shape, params)?;
    let ss2 = min_mse_ss2(params);
    let ss4 = min_mse_ss4(params, ss4_delta).ok();
    let in_range = params.ratio > 0.0 && params.ratio < 2.0;

    let mut checks = vec![
        compare("3.1", "min MSE(t_m) < min MSE(M_d)", tm, diff, pivot),
        compare("3.2", "min MSE(t_mq) < min MSE(M_d)", tmq, diff, false),
    ];
    let claim = "min MSE(t_m) < min MSE(M_d2) for 0 < R < 2";
    checks.push(if in_range {
        compare("3.3", claim, tm, ss2, pivot)
    } else {
        not_applicable("3.3", claim)
    });
    let (c4, c5) = ("min MSE(M_d4) < min MSE(M_d2)", "min MSE(t_m) < min MSE(M_d4)");
    match ss4 {
        Some(ss4) => {
            checks.push(compare("3.4", c4, ss4, ss2, false));
            checks.push(compare("3.5", c5, tm, ss4, pivot));
        }
        None => {
            checks.push(not_applicable("3.4", c4));
            checks.push(not_applicable("3.5", c5));
        }
    }
    Ok(checks)
}
