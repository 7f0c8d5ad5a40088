//! Monte Carlo logical error rates under single-qubit Pauli noise with perfect
//! syndrome extraction.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::code::{logical_basis, CssCode, LogicalBasis};
use crate::decoder::{CssDecoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::par::{map_indexed_with, Execution};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Trials per batch between stopping checks.
pub const BATCH: u64 = 1000;

pub const CSV_HEADER: &str = "code_label,n,k,p,trials,failures,ler,ci_low,ci_high,seed";

/// Each qubit suffers a Pauli with total probability `p`, split over X, Y, Z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub split: [f64; 3],
}

impl NoiseModel {
    pub fn new(p: f64, split: [f64; 3]) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!("error rate {p} outside [0, 1]")));
        }
        if split.iter().any(|&s| s.is_nan() || s < 0.0) || (split.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "Pauli split {split:?} must be nonnegative and sum to 1"
            )));
        }
        Ok(NoiseModel { p, split })
    }

    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, [1.0 / 3.0; 3])
    }

    /// Probability that a qubit carries an X component (X or Y).
    pub fn x_marginal(&self) -> f64 {
        self.p * (self.split[0] + self.split[1])
    }

    /// Probability that a qubit carries a Z component (Z or Y).
    pub fn z_marginal(&self) -> f64 {
        self.p * (self.split[2] + self.split[1])
    }
}

/// Draws `(ex, ez)` with one uniform per qubit.
pub fn sample_error<R: Rng + ?Sized>(n: usize, noise: &NoiseModel, rng: &mut R) -> (BitVec, BitVec) {
    let mut ex = BitVec::zeros(n);
    let mut ez = BitVec::zeros(n);
    let cut_x = noise.p * noise.split[0];
    let cut_y = noise.p * (noise.split[0] + noise.split[1]);
    for i in 0..n {
        let u: f64 = rng.random();
        if u < cut_x {
            ex.set(i, true);
        } else if u < cut_y {
            ex.set(i, true);
            ez.set(i, true);
        } else if u < noise.p {
            ez.set(i, true);
        }
    }
    (ex, ez)
}

/// Generator for trial `index` under `seed`, independent of execution order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Decoder plus logical basis for repeated trials on one code.
#[derive(Clone)]
pub struct TrialRunner {
    code: CssCode,
    logicals: LogicalBasis,
    noise: NoiseModel,
    decoder: CssDecoder,
}

impl TrialRunner {
    pub fn new(code: &CssCode, noise: NoiseModel, cfg: DecoderConfig) -> Result<Self> {
        Ok(TrialRunner {
            code: code.clone(),
            logicals: logical_basis(code)?,
            noise,
            decoder: CssDecoder::new(code, cfg)?,
        })
    }

    pub fn decoder_config(&self) -> &DecoderConfig {
        self.decoder.config()
    }

    /// Whether the given estimates leave a logical (or unresolved) residual.
    pub fn is_failure(&self, ex: &BitVec, ez: &BitVec, est_x: &BitVec, est_z: &BitVec) -> Result<bool> {
        let rx = ex.xor(est_x);
        let rz = ez.xor(est_z);
        if !self.code.hz().mul_vec(&rx)?.is_zero() || !self.code.hx().mul_vec(&rz)?.is_zero() {
            return Ok(true);
        }
        let flips_x = self.logicals.lz.row_iter().any(|l| l.dot(&rx));
        let flips_z = self.logicals.lx.row_iter().any(|l| l.dot(&rz));
        Ok(flips_x || flips_z)
    }

    /// Decodes a given error and classifies the outcome.
    pub fn decode_error(&mut self, ex: &BitVec, ez: &BitVec) -> Result<bool> {
        let sx = self.code.hx().mul_vec(ez)?;
        let sz = self.code.hz().mul_vec(ex)?;
        let (est_x, est_z) =
            self.decoder
                .decode_with_priors(&sx, &sz, self.noise.x_marginal(), self.noise.z_marginal())?;
        self.is_failure(ex, ez, &est_x, &est_z)
    }

    /// One sampled trial; returns `true` on logical failure.
    pub fn run<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<bool> {
        let (ex, ez) = sample_error(self.code.n(), &self.noise, rng);
        self.decode_error(&ex, &ez)
    }
}

/// Single trial with a freshly built runner.
pub fn run_trial<R: Rng + ?Sized>(code: &CssCode, noise: &NoiseModel, cfg: &DecoderConfig, rng: &mut R) -> Result<bool> {
    TrialRunner::new(code, *noise, *cfg)?.run(rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// Stop once the 95% Wilson half-width is at most `precision`.
    #[default]
    HalfWidth,
    /// Stop once `1 / trials` is at most `precision`.
    Resolution,
    /// Always run the full trial budget.
    Fixed,
}

impl std::str::FromStr for StopRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half-width" | "halfwidth" => Ok(StopRule::HalfWidth),
            "resolution" => Ok(StopRule::Resolution),
            "fixed" => Ok(StopRule::Fixed),
            other => Err(Error::Parse(format!("unknown stop rule {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub trials: u64,
    pub precision: f64,
    pub stop: StopRule,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            trials: 50_000,
            precision: 1e-3,
            stop: StopRule::HalfWidth,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct LerPoint {
    pub code_label: String,
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub ler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl LerPoint {
    /// Binomial standard error `sqrt(ler (1 - ler) / trials)`.
    pub fn std_error(&self) -> f64 {
        (self.ler * (1.0 - self.ler) / self.trials as f64).sqrt()
    }

    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.code_label,
            self.n,
            self.k,
            self.p,
            self.trials,
            self.failures,
            self.ler,
            self.ci_low,
            self.ci_high,
            self.seed
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 10 {
            return Err(Error::Parse(format!("expected 10 fields, found {}: {line:?}", f.len())));
        }
        fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
            s.trim().parse().map_err(|_| Error::Parse(format!("bad {name} value {s:?}")))
        }
        Ok(LerPoint {
            code_label: f[0].trim().to_string(),
            n: num(f[1], "n")?,
            k: num(f[2], "k")?,
            p: num(f[3], "p")?,
            trials: num(f[4], "trials")?,
            failures: num(f[5], "failures")?,
            ler: num(f[6], "ler")?,
            ci_low: num(f[7], "ci_low")?,
            ci_high: num(f[8], "ci_high")?,
            seed: num(f[9], "seed")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub point: LerPoint,
    pub decoder: DecoderConfig,
    pub stopped_early: bool,
}

/// 95% Wilson score interval for `failures / trials`.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0).min(phat), (center + half).min(1.0).max(phat))
}

fn should_stop(stop: StopRule, precision: f64, failures: u64, trials: u64) -> bool {
    match stop {
        StopRule::Fixed => false,
        StopRule::Resolution => 1.0 / trials as f64 <= precision,
        StopRule::HalfWidth => {
            let (lo, hi) = wilson_interval(failures, trials);
            (hi - lo) / 2.0 <= precision
        }
    }
}

/// Runs up to `opts.trials` trials in batches, stopping early per `opts.stop`.
/// Trial `i` always uses [`trial_rng`]`(seed, i)`, so the result does not depend
/// on the execution mode.
pub fn estimate_ler(
    code: &CssCode,
    label: &str,
    noise: &NoiseModel,
    cfg: &DecoderConfig,
    opts: &SimOptions,
) -> Result<SimReport> {
    if opts.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let runner = TrialRunner::new(code, *noise, *cfg)?;
    let mut done = 0u64;
    let mut failures = 0u64;
    let mut stopped_early = false;
    while done < opts.trials {
        let batch = BATCH.min(opts.trials - done);
        let start = done;
        let outcomes = map_indexed_with(
            opts.exec,
            batch as usize,
            || runner.clone(),
            |r, i| r.run(&mut trial_rng(opts.seed, start + i as u64)),
        );
        for o in outcomes {
            failures += u64::from(o?);
        }
        done += batch;
        if done < opts.trials && should_stop(opts.stop, opts.precision, failures, done) {
            stopped_early = true;
            break;
        }
    }
    let (ci_low, ci_high) = wilson_interval(failures, done);
    Ok(SimReport {
        point: LerPoint {
            code_label: label.to_string(),
            n: code.n(),
            k: code.k(),
            p: noise.p,
            trials: done,
            failures,
            ler: failures as f64 / done as f64,
            ci_low,
            ci_high,
            seed: opts.seed,
        },
        decoder: *runner.decoder_config(),
        stopped_early,
    })
}

/// `ell{l}-m{i}` labels for the members of a family over base size `l`.
pub fn member_labels(base_ell: usize, members: &[usize]) -> Vec<String> {
    members.iter().map(|m| format!("ell{base_ell}-m{m}")).collect()
}

/// Evenly spaced grid from `min` to `max` inclusive, rounded to 10 decimals.
pub fn p_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || max < min || min < 0.0 || max > 1.0 {
        return Err(Error::InvalidConfig(format!("bad grid {min}..{max} step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((min + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

/// Every member at every grid point, members outermost. Uniform noise split
/// unless `split` is given. An unset OSD order defaults to the ring size of
/// the first member.
pub fn sweep(
    family: &[(String, CssCode)],
    grid: &[f64],
    split: Option<[f64; 3]>,
    cfg: &DecoderConfig,
    opts: &SimOptions,
) -> Result<Vec<SimReport>> {
    let Some((_, first)) = family.first() else {
        return Err(Error::InvalidConfig("empty family".into()));
    };
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty grid".into()));
    }
    let cfg = DecoderConfig {
        osd_order: Some(cfg.order_or(first.ell())),
        ..*cfg
    };
    let split = split.unwrap_or([1.0 / 3.0; 3]);
    let mut out = Vec::with_capacity(family.len() * grid.len());
    for (label, code) in family {
        for &p in grid {
            out.push(estimate_ler(code, label, &NoiseModel::new(p, split)?, &cfg, opts)?);
        }
    }
    Ok(out)
}

pub fn to_csv<'a>(points: impl IntoIterator<Item = &'a LerPoint>) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(s, "{}", p.to_csv_line());
    }
    s
}

pub fn parse_csv(text: &str) -> Result<Vec<LerPoint>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        Some(h) => return Err(Error::Parse(format!("unexpected CSV header {h:?}"))),
        None => return Err(Error::Parse("empty CSV".into())),
    }
    lines.map(LerPoint::from_csv_line).collect()
}

/// Interpolated crossing of two LER curves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub p: f64,
    /// Standard deviation from propagating both curves' CI half-widths.
    pub sigma: f64,
}

/// Linear interpolation of the first sign change of `LER(a) - LER(b)` over
/// the grid points both curves share.
pub fn threshold_estimate(points: &[LerPoint], a: &str, b: &str) -> Result<Crossing> {
    let mut shared: Vec<(&LerPoint, &LerPoint)> = points
        .iter()
        .filter(|x| x.code_label == a)
        .filter_map(|x| {
            points
                .iter()
                .find(|y| y.code_label == b && y.p == x.p)
                .map(|y| (x, y))
        })
        .collect();
    shared.sort_by(|x, y| x.0.p.total_cmp(&y.0.p));
    shared.dedup_by(|x, y| x.0.p == y.0.p);
    let diff = |(x, y): &(&LerPoint, &LerPoint)| x.ler - y.ler;
    let var = |(x, y): &(&LerPoint, &LerPoint)| (x.half_width() / Z95).powi(2) + (y.half_width() / Z95).powi(2);
    for (i, pair) in shared.iter().enumerate() {
        let d0 = diff(pair);
        if d0 == 0.0 {
            return Ok(Crossing { p: pair.0.p, sigma: var(pair).sqrt() });
        }
        let Some(next) = shared.get(i + 1) else { break };
        let d1 = diff(next);
        if d0.signum() != d1.signum() {
            let (p0, p1) = (pair.0.p, next.0.p);
            let dp = p1 - p0;
            let den = d0 - d1;
            let p = p0 + dp * d0 / den;
            let g0 = -dp * d1 / (den * den);
            let g1 = dp * d0 / (den * den);
            let sigma = (g0 * g0 * var(pair) + g1 * g1 * var(next)).sqrt();
            return Ok(Crossing { p, sigma });
        }
    }
    Err(Error::NoCrossing(a.to_string(), b.to_string()))
}

/// Record of a sweep's inputs, written next to its CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub labels: Vec<String>,
    pub grid: Vec<f64>,
    pub split: [f64; 3],
    pub options: SimOptions,
    pub decoder: DecoderConfig,
}
