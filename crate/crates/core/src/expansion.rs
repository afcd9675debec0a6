//! First-order error expansion.
//!
//! Every estimator `T` is written in the relative errors
//! `e0 = (M̂y − My)/My` and `e1 = (M̂x − Mx)/Mx` as
//!
//! ```text
//! T − My ≈ c0 + c_e0·e0 + c_e1·e1 + c_e1sq·e1² + c_e0e1·e0·e1
//! ```
//!
//! with coefficients in units of `y`. Bias keeps the second-order terms
//! (their expectations are O(1/n)); MSE keeps only the constant and linear
//! terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::MedianParams;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpansionCoeffs {
    pub c0: f64,
    pub c_e0: f64,
    pub c_e1: f64,
    pub c_e1sq: f64,
    pub c_e0e1: f64,
}

impl ExpansionCoeffs {
    /// Coefficients of `My·(1 + e0)·g(e1)` where `g(e1) ≈ 1 + g1·e1 + g2·e1²`.
    pub fn multiplicative(median_y: f64, g1: f64, g2: f64) -> Self {
        Self {
            c0: 0.0,
            c_e0: median_y,
            c_e1: g1 * median_y,
            c_e1sq: g2 * median_y,
            c_e0e1: g1 * median_y,
        }
    }

    /// Multiplies every coefficient by `w`.
    pub fn scaled(self, w: f64) -> Self {
        Self {
            c0: w * self.c0,
            c_e0: w * self.c_e0,
            c_e1: w * self.c_e1,
            c_e1sq: w * self.c_e1sq,
            c_e0e1: w * self.c_e0e1,
        }
    }

    /// Predicted error `T − My` at the given relative errors.
    pub fn error_at(&self, e0: f64, e1: f64) -> f64 {
        self.c0 + self.c_e0 * e0 + self.c_e1 * e1 + self.c_e1sq * e1 * e1 + self.c_e0e1 * e0 * e1
    }

    pub fn is_finite(&self) -> bool {
        [self.c0, self.c_e0, self.c_e1, self.c_e1sq, self.c_e0e1]
            .iter()
            .all(|c| c.is_finite())
    }
}

/// Second moments of the relative errors of the sample medians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorMoments {
    pub var_e0: f64,
    pub var_e1: f64,
    pub cov_e0e1: f64,
}

/// `k = η·Mx / (2(η·Mx + λ))`.
pub fn k_const(eta: f64, lambda: f64, median_x: f64) -> Result<f64> {
    let denom = eta * median_x + lambda;
    if denom == 0.0 {
        return Err(Error::Singularity("eta * M_x + lambda".into()));
    }
    Ok(eta * median_x / (2.0 * denom))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionConstants {
    /// Linear slope `a = α + k`.
    pub a: f64,
    /// `b = My − Mx`.
    pub b: f64,
    /// Quadratic coefficient `d = 3k²/2 + αk + α(α+1)/2`.
    pub d: f64,
}

pub fn exp_constants(alpha: f64, k: f64, median_y: f64, median_x: f64) -> ExpansionConstants {
    ExpansionConstants {
        a: alpha + k,
        b: median_y - median_x,
        d: 1.5 * k * k + alpha * k + 0.5 * alpha * (alpha + 1.0),
    }
}

pub fn error_moments(params: &MedianParams) -> ErrorMoments {
    let g = params.gamma;
    ErrorMoments {
        var_e0: g * params.cv_y * params.cv_y,
        var_e1: g * params.cv_x * params.cv_x,
        cov_e0e1: g * params.rho_c * params.cv_y * params.cv_x,
    }
}

/// First-order bias: `E e0 = E e1 = 0`, so only the constant and the
/// second-order terms survive.
pub fn bias_from_coeffs(coeffs: &ExpansionCoeffs, moments: &ErrorMoments) -> f64 {
    coeffs.c0 + coeffs.c_e1sq * moments.var_e1 + coeffs.c_e0e1 * moments.cov_e0e1
}

/// First-order MSE; second-order coefficients do not enter.
pub fn mse_from_coeffs(coeffs: &ExpansionCoeffs, moments: &ErrorMoments) -> f64 {
    coeffs.c0 * coeffs.c0
        + coeffs.c_e0 * coeffs.c_e0 * moments.var_e0
        + coeffs.c_e1 * coeffs.c_e1 * moments.var_e1
        + 2.0 * coeffs.c_e0 * coeffs.c_e1 * moments.cov_e0e1
}
