//! Finite-population ground truth: paired `(x, y)` frames, medians, the
//! concordance proportion matrix, densities at the medians and the derived
//! parameter vector.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Paired auxiliary (`x`) and study (`y`) values of every population unit.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationFrame {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PopulationFrame {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Domain(format!(
                "x has {} values but y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::Domain(format!(
                "population needs at least 2 units, got {}",
                x.len()
            )));
        }
        if let Some(v) = x.iter().chain(&y).find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite population value {v}")));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Population size `N`.
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Reads a population from UTF-8 CSV with an `x,y` header. Lines starting
/// with `#` are skipped.
pub fn load_population<R: Read>(source: R) -> Result<PopulationFrame> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader.headers().map_err(csv_error)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing `{name}` column in header"),
            })
    };
    let (xi, yi) = (column("x")?, column("y")?);

    let mut x = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |idx: usize, name: &str| -> Result<f64> {
            let raw = record.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing `{name}` value"),
            })?;
            raw.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("`{raw}` is not a number"),
            })
        };
        x.push(field(xi, "x")?);
        y.push(field(yi, "y")?);
    }
    PopulationFrame::new(x, y)
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: err.to_string(),
    }
}

/// Median of a finite list; even counts average the two central order
/// statistics.
pub fn finite_median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Domain("median of an empty list".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("median of a list with non-finite values".into()));
    }
    let mut sorted = values.to_vec();
    Ok(median_in_place(&mut sorted))
}

/// Median of finite values, reordering `values`. Panics on an empty slice.
pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Linearly interpolated quantile of sorted data (Hyndman–Fan type 7).
fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Two-by-two concordance table of units around the medians.
///
/// `p11`: `x ≤ Mx, y ≤ My`; `p21`: `x ≤ Mx, y > My`; `p12`: `x > Mx, y ≤ My`;
/// `p22`: `x > Mx, y > My`. Ties count in the lower cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionMatrix {
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
}

impl ProportionMatrix {
    /// Concordance correlation `4·p11 − 1`.
    pub fn rho_c(&self) -> f64 {
        4.0 * self.p11 - 1.0
    }
}

pub fn proportion_matrix(frame: &PopulationFrame, mx: f64, my: f64) -> ProportionMatrix {
    proportion_matrix_of(frame.x(), frame.y(), mx, my)
}

pub(crate) fn proportion_matrix_of(x: &[f64], y: &[f64], mx: f64, my: f64) -> ProportionMatrix {
    let mut counts = [0usize; 4];
    for (&xi, &yi) in x.iter().zip(y) {
        let cell = match (xi <= mx, yi <= my) {
            (true, true) => 0,
            (false, true) => 1,
            (true, false) => 2,
            (false, false) => 3,
        };
        counts[cell] += 1;
    }
    let n = x.len() as f64;
    ProportionMatrix {
        p11: counts[0] as f64 / n,
        p12: counts[1] as f64 / n,
        p21: counts[2] as f64 / n,
        p22: counts[3] as f64 / n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinRule {
    Sturges,
    FreedmanDiaconis,
}

/// How to obtain a density value at a median.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DensityMethod {
    /// Gaussian kernel with Silverman's rule-of-thumb bandwidth.
    Kernel,
    Histogram(BinRule),
    /// A published or otherwise known density value.
    Known(f64),
}

/// Density of `values` at `point`.
pub fn density_at(values: &[f64], point: f64, method: DensityMethod) -> Result<f64> {
    match method {
        DensityMethod::Known(v) => Ok(v),
        DensityMethod::Kernel => kernel_density(values, point),
        DensityMethod::Histogram(rule) => histogram_density(values, point, rule),
    }
}

/// `h = 0.9 · min(sd, IQR/1.34) · n^(-1/5)`; falls back to `sd` when the
/// IQR is zero.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::DegenerateSample(format!(
            "kernel density needs at least 2 values, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = sorted_quantile(&sorted, 0.75) - sorted_quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if !spread.is_finite() || spread <= 0.0 {
        return Err(Error::DegenerateSample("values have zero spread".into()));
    }
    Ok(0.9 * spread * nf.powf(-0.2))
}

fn kernel_density(values: &[f64], point: f64) -> Result<f64> {
    let h = silverman_bandwidth(values)?;
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * h * values.len() as f64);
    let sum: f64 = values
        .iter()
        .map(|v| {
            let u = (point - v) / h;
            (-0.5 * u * u).exp()
        })
        .sum();
    Ok(norm * sum)
}

fn histogram_density(values: &[f64], point: f64, rule: BinRule) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::DegenerateSample(format!(
            "histogram density needs at least 2 values, got {n}"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::DegenerateSample("values have zero spread".into()));
    }
    let bins = match rule {
        BinRule::Sturges => ((n as f64).log2().ceil() as usize + 1).max(1),
        BinRule::FreedmanDiaconis => {
            let iqr = sorted_quantile(&sorted, 0.75) - sorted_quantile(&sorted, 0.25);
            if iqr > 0.0 {
                let width = 2.0 * iqr * (n as f64).powf(-1.0 / 3.0);
                (((hi - lo) / width).ceil() as usize).max(1)
            } else {
                ((n as f64).log2().ceil() as usize + 1).max(1)
            }
        }
    };
    let width = (hi - lo) / bins as f64;
    if point < lo || point > hi {
        return Ok(0.0);
    }
    let bin = (((point - lo) / width) as usize).min(bins - 1);
    let left = lo + bin as f64 * width;
    let right = if bin + 1 == bins { hi } else { left + width };
    let count = sorted
        .iter()
        .filter(|&&v| v >= left && (v < right || (bin + 1 == bins && v <= right)))
        .count();
    Ok(count as f64 / (n as f64 * width))
}

/// The seven primitive inputs; the params-file schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamInputs {
    #[serde(rename = "N")]
    pub population_size: u64,
    #[serde(rename = "n")]
    pub sample_size: u64,
    pub median_y: f64,
    pub median_x: f64,
    #[serde(rename = "fy_at_median")]
    pub density_y: f64,
    #[serde(rename = "fx_at_median")]
    pub density_x: f64,
    pub rho_c: f64,
}

const PARAM_KEYS: [&str; 7] = [
    "N",
    "n",
    "median_y",
    "median_x",
    "fy_at_median",
    "fx_at_median",
    "rho_c",
];

/// Full parameter vector consumed by the analytic formulas. Only the seven
/// [`ParamInputs`] are free; everything else is derived at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedianParams {
    pub population_size: u64,
    pub sample_size: u64,
    pub median_y: f64,
    pub median_x: f64,
    pub density_y: f64,
    pub density_x: f64,
    /// `C_y = 1 / (My · fy(My))`.
    pub cv_y: f64,
    /// `C_x = 1 / (Mx · fx(Mx))`.
    pub cv_x: f64,
    pub rho_c: f64,
    pub p11: f64,
    /// Design factor `γ = (1 − f) / (4n)`.
    pub gamma: f64,
    pub sampling_fraction: f64,
    /// `R = Mx / My`.
    pub ratio: f64,
    /// `b = My − Mx`.
    pub gap: f64,
    /// `k_c = ρ_c · C_y / C_x`; the optimal power of `Mx/M̂x`.
    pub optimal_exponent: f64,
}

impl MedianParams {
    pub fn from_inputs(inputs: &ParamInputs) -> Result<Self> {
        let ParamInputs {
            population_size: big_n,
            sample_size: n,
            median_y,
            median_x,
            density_y,
            density_x,
            rho_c,
        } = *inputs;
        if n == 0 || n >= big_n {
            return Err(Error::Domain(format!(
                "sample size must satisfy 0 < n < N, got n = {n}, N = {big_n}"
            )));
        }
        for (name, v) in [("median_y", median_y), ("median_x", median_x)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        for (name, v) in [("fy_at_median", density_y), ("fx_at_median", density_x)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        if !(-1.0..=1.0).contains(&rho_c) {
            return Err(Error::Domain(format!("rho_c must lie in [-1, 1], got {rho_c}")));
        }
        let f = n as f64 / big_n as f64;
        let cv_y = 1.0 / (median_y * density_y);
        let cv_x = 1.0 / (median_x * density_x);
        if !(cv_y.is_finite() && cv_x.is_finite()) {
            return Err(Error::Domain("median coefficients of variation overflow".into()));
        }
        Ok(Self {
            population_size: big_n,
            sample_size: n,
            median_y,
            median_x,
            density_y,
            density_x,
            cv_y,
            cv_x,
            rho_c,
            p11: (rho_c + 1.0) / 4.0,
            gamma: (1.0 - f) / (4.0 * n as f64),
            sampling_fraction: f,
            ratio: median_x / median_y,
            gap: median_y - median_x,
            optimal_exponent: rho_c * cv_y / cv_x,
        })
    }

    pub fn inputs(&self) -> ParamInputs {
        ParamInputs {
            population_size: self.population_size,
            sample_size: self.sample_size,
            median_y: self.median_y,
            median_x: self.median_x,
            density_y: self.density_y,
            density_x: self.density_x,
            rho_c: self.rho_c,
        }
    }

    /// `R = 1` makes the `(1 − R)²` pivot of the `t_m` and `M_d3` minima vanish.
    pub fn degenerate_pivot(&self) -> bool {
        (1.0 - self.ratio).abs() <= 1e-12
    }
}

/// Extracts [`MedianParams`] from a full population for a design with
/// sample size `n`.
pub fn compute_params(
    frame: &PopulationFrame,
    n: u64,
    y_density: DensityMethod,
    x_density: DensityMethod,
) -> Result<MedianParams> {
    let big_n = frame.len() as u64;
    if n == 0 || n >= big_n {
        return Err(Error::Domain(format!(
            "sample size must satisfy 0 < n < N, got n = {n}, N = {big_n}"
        )));
    }
    let my = finite_median(frame.y())?;
    let mx = finite_median(frame.x())?;
    let table = proportion_matrix(frame, mx, my);
    let fy = density_at(frame.y(), my, y_density)?;
    let fx = density_at(frame.x(), mx, x_density)?;
    if fy <= 0.0 || fx <= 0.0 {
        return Err(Error::Domain(format!(
            "density at the median must be positive (fy = {fy}, fx = {fx})"
        )));
    }
    MedianParams::from_inputs(&ParamInputs {
        population_size: big_n,
        sample_size: n,
        median_y: my,
        median_x: mx,
        density_y: fy,
        density_x: fx,
        // Inclusive cells can push p11 just past 1/2 on a finite population.
        rho_c: table.rho_c().clamp(-1.0, 1.0),
    })
}

/// Parses a params document (a flat JSON object with the seven primitive
/// keys). With `strict`, unknown keys are rejected; otherwise they are
/// logged and ignored.
pub fn load_params<R: Read>(source: R, strict: bool) -> Result<MedianParams> {
    let value: serde_json::Value = serde_json::from_reader(source).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Schema("params document must be an object".into()))?;

    for key in PARAM_KEYS {
        if !object.contains_key(key) {
            return Err(Error::Schema(format!("missing key `{key}`")));
        }
    }
    let unknown: Vec<&str> = object
        .keys()
        .map(String::as_str)
        .filter(|k| !PARAM_KEYS.contains(k))
        .collect();
    if !unknown.is_empty() {
        if strict {
            return Err(Error::Schema(format!("unknown keys: {}", unknown.join(", "))));
        }
        log::warn!("ignoring unknown params keys: {}", unknown.join(", "));
    }
    let mut known = object.clone();
    known.retain(|k, _| PARAM_KEYS.contains(&k.as_str()));
    let inputs: ParamInputs = serde_json::from_value(serde_json::Value::Object(known))
        .map_err(|e| Error::Schema(e.to_string()))?;
    MedianParams::from_inputs(&inputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const POP_I: &str = include_str!("../data/pop1.json");
    const POP_II: &str = include_str!("../data/pop2.json");

    #[test]
    fn parses_simple_csv() {
        let frame = load_population("x,y\n1,2\n3,4".as_bytes()).unwrap();
        assert_eq!(frame.x(), &[1.0, 3.0]);
        assert_eq!(frame.y(), &[2.0, 4.0]);
        assert_eq!(frame.len(), 2);
    }

    #[test]
    fn skips_comment_lines() {
        let frame = load_population("x,y\n1,2\n#c\n3,4".as_bytes()).unwrap();
        assert_eq!(frame.len(), 2);
    }

    #[test]
    fn reports_line_of_bad_value() {
        let err = load_population("x,y\n1,abc".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn rejects_short_row_and_tiny_population() {
        let err = load_population("x,y\n1,2\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = load_population("x,y\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn median_examples() {
        assert_eq!(finite_median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(finite_median(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5);
        assert_eq!(finite_median(&[5.0, 5.0, 5.0]).unwrap(), 5.0);
        assert!(matches!(finite_median(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn proportion_matrix_examples() {
        let concordant = PopulationFrame::new(vec![1.0, 2.0], vec![1.0, 2.0]).unwrap();
        let t = proportion_matrix(&concordant, 1.5, 1.5);
        assert_eq!((t.p11, t.p22, t.p12, t.p21), (0.5, 0.5, 0.0, 0.0));

        let discordant = PopulationFrame::new(vec![1.0, 2.0], vec![2.0, 1.0]).unwrap();
        let t = proportion_matrix(&discordant, 1.5, 1.5);
        assert_eq!((t.p11, t.p12, t.p21), (0.0, 0.5, 0.5));
    }

    #[test]
    fn ties_fall_in_lower_cell() {
        let frame = PopulationFrame::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap();
        let t = proportion_matrix(&frame, 2.0, 2.0);
        assert_relative_eq!(t.p11, 2.0 / 3.0);
    }

    #[test]
    fn known_density_passes_through() {
        assert_eq!(density_at(&[1.0], 99.0, DensityMethod::Known(0.00014)).unwrap(), 0.00014);
    }

    #[test]
    fn kernel_density_of_uniform_is_near_one() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let values: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
        let d = density_at(&values, 0.5, DensityMethod::Kernel).unwrap();
        assert!((d - 1.0).abs() < 0.1, "{d}");
        let h = density_at(&values, 0.5, DensityMethod::Histogram(BinRule::FreedmanDiaconis)).unwrap();
        assert!((h - 1.0).abs() < 0.2, "{h}");
    }

    #[test]
    fn kernel_density_rejects_zero_spread() {
        let err = density_at(&[1.0, 1.0, 1.0], 1.0, DensityMethod::Kernel).unwrap_err();
        assert!(matches!(err, Error::DegenerateSample(_)));
    }

    #[test]
    fn pop_i_derived_fields() {
        let p = load_params(POP_I.as_bytes(), true).unwrap();
        // (1 - 17/69) / 68 and 1 / (2068 * 0.00014), by hand.
        assert_relative_eq!(p.gamma, 0.011083, max_relative = 1e-4);
        assert_relative_eq!(p.cv_y, 3.4540, max_relative = 1e-4);
        assert_relative_eq!(p.ratio, 0.97244, max_relative = 1e-5);
        assert_eq!(p.gap, 57.0);
        assert_relative_eq!(p.p11, (0.1505 + 1.0) / 4.0);
        assert_relative_eq!(
            p.gamma * p.median_y.powi(2) * p.cv_y.powi(2),
            565443.57,
            max_relative = 5e-4
        );
    }

    #[test]
    fn pop_ii_ratio() {
        let p = load_params(POP_II.as_bytes(), true).unwrap();
        assert_relative_eq!(p.ratio, 1.11557, max_relative = 1e-5);
        assert_eq!(p.gap, -239.0);
    }

    #[test]
    fn params_schema_errors() {
        let missing = r#"{"N":69,"n":17,"median_y":1,"median_x":1,"fy_at_median":1,"fx_at_median":1}"#;
        assert!(matches!(load_params(missing.as_bytes(), true), Err(Error::Schema(_))));

        let extra = r#"{"N":69,"n":17,"median_y":1,"median_x":1,"fy_at_median":1,"fx_at_median":1,"rho_c":0,"R":1}"#;
        assert!(matches!(load_params(extra.as_bytes(), true), Err(Error::Schema(_))));
        assert!(load_params(extra.as_bytes(), false).is_ok());

        let bad_n = r#"{"N":10,"n":10,"median_y":1,"median_x":1,"fy_at_median":1,"fx_at_median":1,"rho_c":0}"#;
        assert!(matches!(load_params(bad_n.as_bytes(), true), Err(Error::Domain(_))));
    }

    #[test]
    fn identical_variables_are_concordant() {
        let v: Vec<f64> = (0..101).map(|i| (i * 37 % 101) as f64).collect();
        let frame = PopulationFrame::new(v.clone(), v).unwrap();
        let p = compute_params(&frame, 10, DensityMethod::Kernel, DensityMethod::Kernel).unwrap();
        assert!(p.p11 >= 0.5 - 1.0 / 101.0);
        assert!(p.rho_c > 0.95);
    }

    #[test]
    fn compute_params_rejects_bad_sample_size() {
        let frame = PopulationFrame::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap();
        let known = DensityMethod::Known(1.0);
        assert!(compute_params(&frame, 3, known, known).is_err());
        assert!(compute_params(&frame, 0, known, known).is_err());
        let zero = DensityMethod::Known(0.0);
        assert!(matches!(compute_params(&frame, 1, zero, known), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn median_is_permutation_invariant_and_equivariant(
            mut v in prop::collection::vec(-1e6f64..1e6, 1..60),
            a in 0.01f64..100.0,
            c in -1e3f64..1e3,
            seed in any::<u64>(),
        ) {
            let m = finite_median(&v).unwrap();
            let transformed: Vec<f64> = v.iter().map(|x| a * x + c).collect();
            let mt = finite_median(&transformed).unwrap();
            prop_assert!((mt - (a * m + c)).abs() <= 1e-9 * (1.0 + mt.abs()));

            use rand::{seq::SliceRandom, SeedableRng};
            v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(finite_median(&v).unwrap(), m);
        }

        #[test]
        fn proportion_cells_partition_population(
            pairs in prop::collection::vec((-100f64..100.0, -100f64..100.0), 2..80),
            mx in -100f64..100.0,
            my in -100f64..100.0,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let frame = PopulationFrame::new(x, y).unwrap();
            let t = proportion_matrix(&frame, mx, my);
            prop_assert!((t.p11 + t.p12 + t.p21 + t.p22 - 1.0).abs() <= 1e-12);
            for p in [t.p11, t.p12, t.p21, t.p22] {
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }

        #[test]
        fn rho_c_is_increasing_in_p11(p in 0f64..0.5, q in 0f64..0.5) {
            let cell = |p11| ProportionMatrix { p11, p12: 0.0, p21: 0.0, p22: 1.0 - p11 };
            if p < q {
                prop_assert!(cell(p).rho_c() < cell(q).rho_c());
            }
        }
    }

    #[test]
    fn rho_c_anchor_points() {
        let cell = |p11| ProportionMatrix { p11, p12: 0.0, p21: 0.0, p22: 1.0 - p11 };
        assert_eq!(cell(0.0).rho_c(), -1.0);
        assert_eq!(cell(0.25).rho_c(), 0.0);
        assert_eq!(cell(0.5).rho_c(), 1.0);
    }
}
