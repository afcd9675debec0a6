#![allow(dead_code)]

use auxmedian::population::{load_params, ParamInputs};
use auxmedian::MedianParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn pop1() -> MedianParams {
    load_params(include_str!("../../data/pop1.json").as_bytes(), true).unwrap()
}

pub fn pop2() -> MedianParams {
    load_params(include_str!("../../data/pop2.json").as_bytes(), true).unwrap()
}

/// Valid parameters with 0 < R < 2, |ρ_c| < 1 and CVs spanning 0.2 to 5.
pub fn random_params(rng: &mut impl Rng) -> MedianParams {
    let big_n: u64 = rng.random_range(20..=2000);
    let n = rng.random_range(2..big_n);
    let my = 10f64.powf(rng.random_range(0.0..4.0));
    let ratio = rng.random_range(0.05..1.95);
    let mx = ratio * my;
    let cy = (rng.random_range(0.2f64.ln()..5f64.ln())).exp();
    let cx = (rng.random_range(0.2f64.ln()..5f64.ln())).exp();
    MedianParams::from_inputs(&ParamInputs {
        population_size: big_n,
        sample_size: n,
        median_y: my,
        median_x: mx,
        density_y: 1.0 / (my * cy),
        density_x: 1.0 / (mx * cx),
        rho_c: rng.random_range(-0.99..0.99),
    })
    .unwrap()
}

pub fn random_params_set(seed: u64, count: usize) -> Vec<MedianParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_params(&mut rng)).collect()
}

/// Golden-section minimum of a unimodal function on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    for _ in 0..200 {
        if f(c) < f(d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Grid minimum over `[lo, hi]` with `steps` intervals, refined by golden
/// section in the neighbouring cells.
pub fn grid_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> (f64, f64) {
    let h = (hi - lo) / steps as f64;
    let (best, _) = (0..=steps)
        .map(|i| (i, f(lo + i as f64 * h)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let center = lo + best as f64 * h;
    golden_min(f, center - h, center + h)
}
