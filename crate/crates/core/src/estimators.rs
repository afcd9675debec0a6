//! The estimator catalogue: specifications, point evaluation from sample
//! statistics, first-order expansion coefficients and named presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{exp_constants, k_const, ExpansionCoeffs};
use crate::mse;
use crate::population::MedianParams;

/// Exponent/exponential shape `(α, η, λ)` of the `t_m` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmShape {
    pub alpha: f64,
    pub eta: f64,
    pub lambda: f64,
}

impl TmShape {
    pub const fn new(alpha: f64, eta: f64, lambda: f64) -> Self {
        Self { alpha, eta, lambda }
    }

    /// Linear slope `a = α + k` of the expansion in `e1`.
    pub fn slope(&self, median_x: f64) -> Result<f64> {
        Ok(self.alpha + k_const(self.eta, self.lambda, median_x)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// `M̂y`.
    SampleMedian,
    /// `M̂y · Mx / M̂x`.
    Ratio,
    /// `M̂y · M̂x / Mx`.
    Product,
    /// `M̂y + d(Mx − M̂x)`.
    Difference { d: f64 },
    /// `M̂y (a − M̂x)/(a − Mx)`.
    ShiftedProduct { shift_a: f64 },
    /// `M̂y (a + Mx)/(a + M̂x)`.
    ShiftedRatio { shift_a: f64 },
    /// `M̂y (Mx/M̂x)^α`.
    PowerRatio { alpha: f64 },
    /// `M̂y Mx / (Mx + β(M̂x − Mx))`.
    DampedRatio { beta: f64 },
    /// `M̂y [2 − (Mx/M̂x)^v]`.
    ComplementPower { v: f64 },
    /// `w M̂y + (1 − w) M̂y M̂x/Mx`.
    MixedProduct { w: f64 },
    /// `w M̂y + (1 − w) M̂y Mx/M̂x`.
    MixedRatio { w: f64 },
    /// Difference estimator with the slope estimated from the sample.
    Regression,
    /// `d1 M̂y + (1 − d1)(Mx − M̂x)`.
    Ss1 { d1: f64 },
    /// `d1 M̂y + d2 (Mx − M̂x)`.
    Ss2 { d1: f64, d2: f64 },
    /// `d1 M̂y + d2 M̂x + (1 − d1 − d2) Mx`.
    Ss3 { d1: f64, d2: f64 },
    /// `[d1 M̂y + d2 (Mx − M̂x)] ((φMx + δ)/(φM̂x + δ))^β`.
    Ss4 { d1: f64, d2: f64, phi: f64, delta: f64, beta: f64 },
    /// `w1 M̂y (Mx/M̂x)^α exp(η(Mx − M̂x)/(η(Mx + M̂x) + 2λ)) + w2 M̂x + (1 − w1 − w2) Mx`.
    Tm { w1: f64, w2: f64, shape: TmShape },
    /// `t_m` with `(w1, w2) = (1, 0)`.
    Tmp { shape: TmShape },
    /// `t_m` with `w2 = 0`.
    Tmq { w1: f64, shape: TmShape },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub id: String,
    pub family: Family,
}

impl EstimatorSpec {
    pub fn new(id: impl Into<String>, family: Family) -> Self {
        Self { id: id.into(), family }
    }

    /// Whether evaluation needs sample density estimates.
    pub fn needs_densities(&self) -> bool {
        matches!(self.family, Family::Regression)
    }
}

/// Statistics of one sample that the estimators consume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub my_hat: f64,
    pub mx_hat: f64,
    pub p11_hat: f64,
    pub fy_hat: Option<f64>,
    pub fx_hat: Option<f64>,
}

impl SampleStats {
    pub fn new(my_hat: f64, mx_hat: f64, p11_hat: f64) -> Self {
        Self { my_hat, mx_hat, p11_hat, fy_hat: None, fx_hat: None }
    }
}

fn nonzero(value: f64, what: &str) -> Result<f64> {
    if value == 0.0 {
        Err(Error::Singularity(what.into()))
    } else {
        Ok(value)
    }
}

/// `(Mx/M̂x)^α`, exact for `α ∈ {−1, 0, 1}`.
fn power_of_ratio(median_x: f64, mx_hat: f64, alpha: f64) -> Result<f64> {
    Ok(if alpha == 0.0 {
        1.0
    } else if alpha == 1.0 {
        median_x / nonzero(mx_hat, "mx_hat")?
    } else if alpha == -1.0 {
        mx_hat / median_x
    } else {
        (median_x / nonzero(mx_hat, "mx_hat")?).powf(alpha)
    })
}

fn tm_value(w1: f64, w2: f64, shape: &TmShape, stats: &SampleStats, median_x: f64) -> Result<f64> {
    let TmShape { alpha, eta, lambda } = *shape;
    let mx_hat = stats.mx_hat;
    let denom = nonzero(
        eta * (median_x + mx_hat) + 2.0 * lambda,
        "eta * (M_x + mx_hat) + 2 * lambda",
    )?;
    let exp_factor = (eta * (median_x - mx_hat) / denom).exp();
    Ok(w1 * stats.my_hat * power_of_ratio(median_x, mx_hat, alpha)? * exp_factor
        + w2 * mx_hat
        + (1.0 - w1 - w2) * median_x)
}

/// Point estimate of `My` from one sample. Only the known auxiliary median
/// `known.median_x` is read from `known`.
pub fn evaluate(spec: &EstimatorSpec, stats: &SampleStats, known: &MedianParams) -> Result<f64> {
    let my = stats.my_hat;
    let mx_hat = stats.mx_hat;
    let mx = known.median_x;
    let value = match spec.family {
        Family::SampleMedian => my,
        Family::Ratio => my * power_of_ratio(mx, mx_hat, 1.0)?,
        Family::Product => my * power_of_ratio(mx, mx_hat, -1.0)?,
        Family::Difference { d } => my + d * (mx - mx_hat),
        Family::ShiftedProduct { shift_a } => {
            my * (shift_a - mx_hat) / nonzero(shift_a - mx, "shift_a - M_x")?
        }
        Family::ShiftedRatio { shift_a } => {
            my * (shift_a + mx) / nonzero(shift_a + mx_hat, "shift_a + mx_hat")?
        }
        Family::PowerRatio { alpha } => my * power_of_ratio(mx, mx_hat, alpha)?,
        Family::DampedRatio { beta } => {
            my * mx / nonzero(mx + beta * (mx_hat - mx), "M_x + beta * (mx_hat - M_x)")?
        }
        Family::ComplementPower { v } => my * (2.0 - power_of_ratio(mx, mx_hat, v)?),
        Family::MixedProduct { w } => w * my + (1.0 - w) * my * (mx_hat / mx),
        Family::MixedRatio { w } => {
            w * my + (1.0 - w) * my * (mx / nonzero(mx_hat, "mx_hat")?)
        }
        Family::Regression => {
            let (fy, fx) = match (stats.fy_hat, stats.fx_hat) {
                (Some(fy), Some(fx)) => (fy, fx),
                _ => {
                    return Err(Error::Domain(
                        "regression estimator needs sample density estimates".into(),
                    ))
                }
            };
            let slope = fx / nonzero(fy, "fy_hat")? * (4.0 * stats.p11_hat - 1.0);
            my + slope * (mx - mx_hat)
        }
        Family::Ss1 { d1 } => d1 * my + (1.0 - d1) * (mx - mx_hat),
        Family::Ss2 { d1, d2 } => d1 * my + d2 * (mx - mx_hat),
        Family::Ss3 { d1, d2 } => d1 * my + d2 * mx_hat + (1.0 - d1 - d2) * mx,
        Family::Ss4 { d1, d2, phi, delta, beta } => {
            let base = (phi * mx + delta) / nonzero(phi * mx_hat + delta, "phi * mx_hat + delta")?;
            (d1 * my + d2 * (mx - mx_hat)) * base.powf(beta)
        }
        Family::Tm { w1, w2, shape } => tm_value(w1, w2, &shape, stats, mx)?,
        Family::Tmp { shape } => tm_value(1.0, 0.0, &shape, stats, mx)?,
        Family::Tmq { w1, shape } => tm_value(w1, 0.0, &shape, stats, mx)?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{} evaluated to {value}", spec.id)))
    }
}

fn tm_coeffs(w1: f64, w2: f64, shape: &TmShape, params: &MedianParams) -> Result<ExpansionCoeffs> {
    let (my, mx) = (params.median_y, params.median_x);
    let k = k_const(shape.eta, shape.lambda, mx)?;
    let c = exp_constants(shape.alpha, k, my, mx);
    Ok(ExpansionCoeffs {
        c0: (w1 - 1.0) * c.b,
        c_e0: w1 * my,
        c_e1: -w1 * my * c.a + w2 * mx,
        c_e1sq: w1 * my * c.d,
        c_e0e1: -w1 * my * c.a,
    })
}

/// First-order expansion coefficients of `T − My` under `params`.
pub fn coeffs_of(spec: &EstimatorSpec, params: &MedianParams) -> Result<ExpansionCoeffs> {
    let my = params.median_y;
    let mx = params.median_x;
    let mult = |g1: f64, g2: f64| ExpansionCoeffs::multiplicative(my, g1, g2);
    let coeffs = match spec.family {
        Family::SampleMedian => mult(0.0, 0.0),
        Family::Ratio => mult(-1.0, 1.0),
        Family::Product => mult(1.0, 0.0),
        Family::PowerRatio { alpha } => mult(-alpha, 0.5 * alpha * (alpha + 1.0)),
        Family::Difference { d } => ExpansionCoeffs { c_e0: my, c_e1: -d * mx, ..Default::default() },
        Family::Regression => {
            // d̂ converges to ρ_c·fx/fy = k_c·My/Mx.
            let d = params.optimal_exponent * my / mx;
            ExpansionCoeffs { c_e0: my, c_e1: -d * mx, ..Default::default() }
        }
        Family::ShiftedProduct { shift_a } => {
            let theta = mx / nonzero(shift_a - mx, "shift_a - M_x")?;
            mult(-theta, 0.0)
        }
        Family::ShiftedRatio { shift_a } => {
            let theta = mx / nonzero(shift_a + mx, "shift_a + M_x")?;
            mult(-theta, theta * theta)
        }
        Family::DampedRatio { beta } => mult(-beta, beta * beta),
        Family::ComplementPower { v } => mult(v, -0.5 * v * (v + 1.0)),
        Family::MixedProduct { w } => mult(1.0 - w, 0.0),
        Family::MixedRatio { w } => mult(-(1.0 - w), 1.0 - w),
        Family::Ss1 { d1 } => ExpansionCoeffs {
            c0: (d1 - 1.0) * my,
            c_e0: d1 * my,
            c_e1: -(1.0 - d1) * mx,
            ..Default::default()
        },
        Family::Ss2 { d1, d2 } => ExpansionCoeffs {
            c0: (d1 - 1.0) * my,
            c_e0: d1 * my,
            c_e1: -d2 * mx,
            ..Default::default()
        },
        Family::Ss3 { d1, d2 } => ExpansionCoeffs {
            c0: (d1 - 1.0) * (my - mx),
            c_e0: d1 * my,
            c_e1: d2 * mx,
            ..Default::default()
        },
        Family::Ss4 { d1, d2, phi, delta, beta } => {
            let theta = phi * mx / nonzero(phi * mx + delta, "phi * M_x + delta")?;
            let h1 = -beta * theta;
            let h2 = 0.5 * beta * (beta + 1.0) * theta * theta;
            ExpansionCoeffs {
                c0: (d1 - 1.0) * my,
                c_e0: d1 * my,
                c_e1: d1 * my * h1 - d2 * mx,
                c_e1sq: d1 * my * h2 - d2 * mx * h1,
                c_e0e1: d1 * my * h1,
            }
        }
        Family::Tm { w1, w2, shape } => tm_coeffs(w1, w2, &shape, params)?,
        Family::Tmp { shape } => tm_coeffs(1.0, 0.0, &shape, params)?,
        Family::Tmq { w1, shape } => tm_coeffs(w1, 0.0, &shape, params)?,
    };
    Ok(coeffs)
}

/// Shape used for the `t_m` row; its minimum MSE does not depend on it.
pub const TM_DEFAULT_SHAPE: TmShape = TmShape::new(1.0, 1.0, 1.0);

/// Every preset name, in table order.
pub const PRESET_NAMES: &[&str] = &[
    "M_y", "M_r", "M_p", "M_d", "M_1", "M_2", "M_3", "M_4", "M_5", "M_6", "M_7", "M_lr", "M_d1",
    "M_d2", "M_d3", "M_d4", "t_m", "t_m1", "t_m2", "t_m3", "t_m4", "t_m5", "t_m6", "t_m7", "t_m8",
    "t_mq1", "t_mq2", "t_mq3", "t_mq4", "t_mq5", "t_mq6", "t_mq7", "t_mq8", "t_mq9",
];

/// Resolves a case-insensitive preset name to its canonical spelling.
pub fn canonical_name(name: &str) -> Result<&'static str> {
    PRESET_NAMES
        .iter()
        .copied()
        .find(|p| p.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownEstimator {
            name: name.to_string(),
            valid: PRESET_NAMES.join(", "),
        })
}

/// `(α, η, λ)` of the nine `t_mq` presets; `λ` or `η` may be `ρ_c` or `Mx`.
pub fn tmq_shape(index: usize, params: &MedianParams) -> Option<TmShape> {
    let (rho, mx) = (params.rho_c, params.median_x);
    let shape = match index {
        1 => TmShape::new(1.0, 1.0, 1.0),
        2 => TmShape::new(1.0, 1.0, rho),
        3 => TmShape::new(1.0, 1.0, mx),
        4 => TmShape::new(1.0, 1.0, 0.0),
        5 => TmShape::new(-1.0, 1.0, 1.0),
        6 => TmShape::new(1.0, mx, rho),
        7 => TmShape::new(0.0, mx, rho),
        8 => TmShape::new(1.0, rho, mx),
        9 => TmShape::new(-1.0, rho, mx),
        _ => return None,
    };
    Some(shape)
}

fn need_nonzero_kc(params: &MedianParams, name: &str) -> Result<f64> {
    let kc = params.optimal_exponent;
    if kc == 0.0 {
        Err(Error::Domain(format!("{name} has no finite optimal shift when k_c = 0")))
    } else {
        Ok(kc)
    }
}

/// Builds a named estimator. Free scalars (weights, exponents, shifts) are
/// set to their MSE-optimal values under `params`.
pub fn preset(name: &str, params: &MedianParams) -> Result<EstimatorSpec> {
    let name = canonical_name(name)?;
    let my = params.median_y;
    let mx = params.median_x;
    let kc = params.optimal_exponent;
    let s = params.gamma * params.cv_y.powi(2) * (1.0 - params.rho_c.powi(2));
    let tm = |w1: f64, w2: f64, alpha: f64| Family::Tm { w1, w2, shape: TmShape::new(alpha, 0.0, 1.0) };
    let tmq_w = |shape: TmShape| mse::tmq_weight(&shape, params);

    let family = match name {
        "M_y" => Family::SampleMedian,
        "M_r" => Family::Ratio,
        "M_p" => Family::Product,
        "M_d" => Family::Difference { d: kc * my / mx },
        "M_1" => Family::ShiftedProduct { shift_a: mx * (1.0 + 1.0 / need_nonzero_kc(params, name)?) },
        "M_2" => Family::ShiftedRatio { shift_a: mx / need_nonzero_kc(params, name)? - mx },
        "M_3" => Family::PowerRatio { alpha: kc },
        "M_4" => Family::DampedRatio { beta: kc },
        "M_5" => Family::ComplementPower { v: -kc },
        "M_6" => Family::MixedProduct { w: 1.0 + kc },
        "M_7" => Family::MixedRatio { w: 1.0 - kc },
        "M_lr" => Family::Regression,
        "M_d1" => Family::Ss1 { d1: mse::ss1_weight(params) },
        "M_d2" => {
            let d1 = 1.0 / (1.0 + s);
            Family::Ss2 { d1, d2: d1 * kc * my / mx }
        }
        "M_d3" => {
            let q = mse::quadratic_weights(&TmShape::new(0.0, 0.0, 1.0), params)?;
            Family::Ss3 { d1: q.w1_opt, d2: q.w2_opt }
        }
        "M_d4" => {
            let (phi, delta, beta) = (1.0, 1.0, 1.0);
            let d1 = 1.0 / (1.0 + s);
            let h1 = -beta * phi * mx / (phi * mx + delta);
            Family::Ss4 { d1, d2: d1 * my * (h1 + kc) / mx, phi, delta, beta }
        }
        "t_m" => {
            let q = mse::quadratic_weights(&TM_DEFAULT_SHAPE, params)?;
            Family::Tm { w1: q.w1_opt, w2: q.w2_opt, shape: TM_DEFAULT_SHAPE }
        }
        "t_m1" => tm(1.0, 0.0, 0.0),
        "t_m2" => tm(1.0, 0.0, 1.0),
        "t_m3" => tm(1.0, 0.0, kc),
        "t_m4" => tm(1.0, 0.0, -1.0),
        "t_m5" => tm(tmq_w(TmShape::new(1.0, 0.0, 1.0))?, 0.0, 1.0),
        "t_m6" => tm(tmq_w(TmShape::new(-1.0, 0.0, 1.0))?, 0.0, -1.0),
        "t_m7" => tm(tmq_w(TmShape::new(0.0, 0.0, 1.0))?, 0.0, 0.0),
        "t_m8" => {
            let q = mse::quadratic_weights(&TmShape::new(0.0, 0.0, 1.0), params)?;
            tm(q.w1_opt, q.w2_opt, 0.0)
        }
        tmq => {
            let index: usize = tmq.trim_start_matches("t_mq").parse().expect("preset table");
            let shape = tmq_shape(index, params).expect("preset table");
            Family::Tmq { w1: tmq_w(shape)?, shape }
        }
    };
    Ok(EstimatorSpec::new(name, family))
}
