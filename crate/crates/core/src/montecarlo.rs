//! SRSWOR replication engine.
//!
//! Replicate `k` draws its sample from a ChaCha8 stream keyed by
//! `(seed, k)`, so the set of samples does not depend on scheduling. Per
//! replicate outcomes are collected in replicate order and reduced
//! sequentially, which makes reports bit-identical across thread counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{self, evaluate, EstimatorSpec, SampleStats};
use crate::mse;
use crate::population::{
    density_at, median_in_place, proportion_matrix_of, DensityMethod, MedianParams, ParamInputs,
    PopulationFrame,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WeightPolicy {
    /// Optimal scalars computed once from population parameters.
    #[default]
    TrueParams,
    /// Optimal scalars re-estimated from every sample.
    PlugIn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n: u64,
    pub reps: u64,
    pub seed: u64,
    pub estimators: Vec<String>,
    pub weights: WeightPolicy,
}

impl SimulationConfig {
    fn validate(&self, frame: &PopulationFrame) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Domain("replication count must be at least 1".into()));
        }
        if self.n == 0 || self.n as usize > frame.len() {
            return Err(Error::Domain(format!(
                "sample size must satisfy 0 < n <= N, got n = {}, N = {}",
                self.n,
                frame.len()
            )));
        }
        if self.estimators.is_empty() {
            return Err(Error::Domain("no estimators requested".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub id: String,
    /// Replicates that produced an estimate (`K' = K − failures`).
    pub replicates: u64,
    pub failures: u64,
    pub empirical_bias: f64,
    pub empirical_mse: f64,
    /// Monte Carlo standard error of `empirical_mse`.
    pub mse_standard_error: f64,
    pub analytic_mse: f64,
    pub analytic_bias: Option<f64>,
    /// `empirical_mse / analytic_mse`.
    pub mse_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub params: MedianParams,
    /// Empirical MSE of the sample median over all replicates.
    pub baseline_empirical_mse: f64,
    pub estimators: Vec<EstimatorSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Random stream for replicate `k`.
pub fn replicate_stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// `n` distinct unit indices by partial Fisher–Yates.
pub fn srswor<R: Rng + ?Sized>(frame: &PopulationFrame, n: usize, rng: &mut R) -> Result<Vec<usize>> {
    let big_n = frame.len();
    if n == 0 || n > big_n {
        return Err(Error::Domain(format!(
            "sample size must satisfy 0 < n <= N, got n = {n}, N = {big_n}"
        )));
    }
    let mut idx: Vec<usize> = (0..big_n).collect();
    for i in 0..n {
        let j = rng.random_range(i..big_n);
        idx.swap(i, j);
    }
    idx.truncate(n);
    Ok(idx)
}

/// Fixed presets carry no free scalar and never need re-estimation.
fn has_free_scalars(id: &str) -> bool {
    !matches!(id, "M_y" | "M_r" | "M_p" | "M_lr" | "t_m1" | "t_m2" | "t_m4")
}

struct Plan<'a> {
    frame: &'a PopulationFrame,
    params: &'a MedianParams,
    config: &'a SimulationConfig,
    specs: Vec<EstimatorSpec>,
    needs_densities: bool,
}

struct Outcome {
    baseline_error: f64,
    estimates: Vec<Option<f64>>,
}

impl Plan<'_> {
    fn replicate(&self, k: u64) -> Outcome {
        let mut rng = replicate_stream(self.config.seed, k);
        let idx = srswor(self.frame, self.config.n as usize, &mut rng).expect("validated config");
        let xs: Vec<f64> = idx.iter().map(|&i| self.frame.x()[i]).collect();
        let ys: Vec<f64> = idx.iter().map(|&i| self.frame.y()[i]).collect();
        let my_hat = median_in_place(&mut ys.clone());
        let mx_hat = median_in_place(&mut xs.clone());
        let p11_hat = proportion_matrix_of(&xs, &ys, mx_hat, my_hat).p11;
        let mut stats = SampleStats::new(my_hat, mx_hat, p11_hat);
        if self.needs_densities {
            stats.fy_hat = density_at(&ys, my_hat, DensityMethod::Kernel).ok();
            stats.fx_hat = density_at(&xs, mx_hat, DensityMethod::Kernel).ok();
        }

        let plug_in = match self.config.weights {
            WeightPolicy::PlugIn => Some(self.sample_params(&stats)),
            WeightPolicy::TrueParams => None,
        };
        let estimates = self
            .specs
            .iter()
            .map(|spec| {
                let spec = match &plug_in {
                    Some(sample_params) if has_free_scalars(&spec.id) => {
                        let sample_params = sample_params.as_ref().ok()?;
                        estimators::preset(&spec.id, sample_params).ok()?
                    }
                    _ => spec.clone(),
                };
                evaluate(&spec, &stats, self.params).ok()
            })
            .collect();
        Outcome {
            baseline_error: my_hat - self.params.median_y,
            estimates,
        }
    }

    fn sample_params(&self, stats: &SampleStats) -> Result<MedianParams> {
        let (fy, fx) = stats
            .fy_hat
            .zip(stats.fx_hat)
            .ok_or_else(|| Error::DegenerateSample("sample densities unavailable".into()))?;
        MedianParams::from_inputs(&ParamInputs {
            population_size: self.params.population_size,
            sample_size: self.config.n,
            median_y: stats.my_hat,
            median_x: self.params.median_x,
            density_y: fy,
            density_x: fx,
            rho_c: (4.0 * stats.p11_hat - 1.0).clamp(-1.0, 1.0),
        })
    }
}

pub fn run_simulation(
    frame: &PopulationFrame,
    config: &SimulationConfig,
    params: &MedianParams,
) -> Result<SimulationReport> {
    run_simulation_with(frame, config, params, Execution::default())
}

pub fn run_simulation_with(
    frame: &PopulationFrame,
    config: &SimulationConfig,
    params: &MedianParams,
    execution: Execution,
) -> Result<SimulationReport> {
    config.validate(frame)?;
    let specs = config
        .estimators
        .iter()
        .map(|name| estimators::preset(name, params))
        .collect::<Result<Vec<_>>>()?;
    let needs_densities = config.weights == WeightPolicy::PlugIn || specs.iter().any(EstimatorSpec::needs_densities);
    let plan = Plan {
        frame,
        params,
        config,
        specs,
        needs_densities,
    };

    let outcomes: Vec<Outcome> = match execution {
        Execution::Sequential => (0..config.reps).map(|k| plan.replicate(k)).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..config.reps).into_par_iter().map(|k| plan.replicate(k)).collect()
        }
    };

    let baseline_empirical_mse =
        outcomes.iter().map(|o| o.baseline_error.powi(2)).sum::<f64>() / outcomes.len() as f64;

    let estimators = plan
        .specs
        .iter()
        .enumerate()
        .map(|(j, spec)| {
            let errors: Vec<f64> = outcomes
                .iter()
                .filter_map(|o| o.estimates[j])
                .map(|t| t - params.median_y)
                .collect();
            summarize(spec, &errors, config.reps, params)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SimulationReport {
        config: config.clone(),
        params: *params,
        baseline_empirical_mse,
        estimators,
    })
}

fn summarize(spec: &EstimatorSpec, errors: &[f64], reps: u64, params: &MedianParams) -> Result<EstimatorSummary> {
    let kept = errors.len() as u64;
    let analytic_mse = mse::preset_mse(&spec.id, params, 1.0)?;
    let analytic_bias = mse::analytic_bias(spec, params)?;
    let (bias, mse_hat, se) = if kept == 0 {
        (f64::NAN, f64::NAN, f64::NAN)
    } else {
        let k = kept as f64;
        let bias = errors.iter().sum::<f64>() / k;
        let mse_hat = errors.iter().map(|e| e * e).sum::<f64>() / k;
        let se = if kept > 1 {
            let var = errors.iter().map(|e| (e * e - mse_hat).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        } else {
            0.0
        };
        (bias, mse_hat, se)
    };
    Ok(EstimatorSummary {
        id: spec.id.clone(),
        replicates: kept,
        failures: reps - kept,
        empirical_bias: bias,
        empirical_mse: mse_hat,
        mse_standard_error: se,
        analytic_mse,
        analytic_bias,
        mse_ratio: (analytic_mse > 0.0 && kept > 0).then(|| mse_hat / analytic_mse),
    })
}

/// Correlated lognormal population: `(ln x, ln y)` bivariate normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub size: usize,
    pub log_mean_x: f64,
    pub log_mean_y: f64,
    pub log_sd_x: f64,
    pub log_sd_y: f64,
    pub log_corr: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::Domain(format!("synthetic size must be at least 2, got {}", self.size)));
        }
        if !(self.log_sd_x > 0.0 && self.log_sd_y > 0.0) {
            return Err(Error::Domain("log-scale standard deviations must be positive".into()));
        }
        if !(self.log_corr > -1.0 && self.log_corr < 1.0) {
            return Err(Error::Domain(format!(
                "log-scale correlation must lie in (-1, 1), got {}",
                self.log_corr
            )));
        }
        Ok(())
    }

    pub fn density_x(&self, at: f64) -> f64 {
        lognormal_pdf(at, self.log_mean_x, self.log_sd_x)
    }

    pub fn density_y(&self, at: f64) -> f64 {
        lognormal_pdf(at, self.log_mean_y, self.log_sd_y)
    }
}

fn lognormal_pdf(at: f64, mu: f64, sigma: f64) -> f64 {
    if at <= 0.0 {
        return 0.0;
    }
    let z = (at.ln() - mu) / sigma;
    (-0.5 * z * z).exp() / (at * sigma * (2.0 * std::f64::consts::PI).sqrt())
}

pub fn make_synthetic(spec: &SyntheticSpec) -> Result<PopulationFrame> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rho = spec.log_corr;
    let tail = (1.0 - rho * rho).sqrt();
    let (mut x, mut y) = (Vec::with_capacity(spec.size), Vec::with_capacity(spec.size));
    for _ in 0..spec.size {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        x.push((spec.log_mean_x + spec.log_sd_x * z1).exp());
        y.push((spec.log_mean_y + spec.log_sd_y * (rho * z1 + tail * z2)).exp());
    }
    PopulationFrame::new(x, y)
}
