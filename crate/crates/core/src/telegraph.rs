//! Goldstein-Kac telegraph process: a particle moving at speed `c` whose
//! direction flips at the events of a Poisson process of rate `λ`.
//!
//! The law of `X(t)` has atoms of mass `e^{−λt}/2` at `±ct` and density
//!
//! `p(s, t) = (λ e^{−λt}/2c) [I₀(y) + λt I₁(y)/y]`, `y = (λ/c)√(c²t² − s²)`
//!
//! on `(−ct, ct)`. With `ct = x/2` and `λ = 2c` this is
//! `(e^{−x}/2)⟨x, x/2 + s⟩`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, Result};
use crate::quadrature::{central_diff, integrate, Derivative, QuadratureSpec};
use crate::special::{bessel_int, ScaledValue};

/// Smallest sample size accepted by [`histogram_gof`].
pub const GOF_MIN_SAMPLES: usize = 100_000;

/// Bins with fewer expected counts are merged into a neighbour.
const GOF_MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphConfig {
    pub c: f64,
    pub lambda: f64,
    pub t: f64,
    pub seed: u64,
}

impl TelegraphConfig {
    pub fn new(c: f64, lambda: f64, t: f64, seed: u64) -> Result<Self> {
        for (name, v) in [("c", c), ("lambda", lambda), ("t", t)] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} must be positive and finite (got {v})"));
            }
        }
        Ok(Self { c, lambda, t, seed })
    }

    /// Half-width `ct` of the support.
    pub fn reach(&self) -> f64 {
        self.c * self.t
    }

    /// Total atom mass `e^{−λt}`.
    pub fn atom_mass(&self) -> f64 {
        (-self.lambda * self.t).exp()
    }

    fn at_time(&self, t: f64) -> Self {
        Self { t, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleKind {
    AtomPlus,
    AtomMinus,
    Continuous,
}

impl SampleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleKind::AtomPlus => "atom_plus",
            SampleKind::AtomMinus => "atom_minus",
            SampleKind::Continuous => "continuous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphSample {
    pub kind: SampleKind,
    pub position: f64,
    pub switch_count: u64,
}

/// A sample together with the times at which the velocity flipped.
#[derive(Debug, Clone, PartialEq)]
pub struct TelegraphPath {
    pub sample: TelegraphSample,
    pub switch_times: Vec<f64>,
}

/// Runs path `index`. Each index owns the ChaCha stream `index` under the
/// config seed, so results do not depend on scheduling.
fn run_path(config: &TelegraphConfig, index: u64, mut record: Option<&mut Vec<f64>>) -> TelegraphSample {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let initial = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let mut direction = initial;
    let mut clock = 0.0;
    let mut position = 0.0;
    let mut switches = 0u64;
    loop {
        // 1 − U lies in (0, 1], so the logarithm is finite
        let wait = -(1.0 - rng.random::<f64>()).ln() / config.lambda;
        if clock + wait >= config.t {
            position += direction * config.c * (config.t - clock);
            break;
        }
        clock += wait;
        position += direction * config.c * wait;
        direction = -direction;
        switches += 1;
        if let Some(times) = record.as_deref_mut() {
            times.push(clock);
        }
    }
    let reach = config.reach();
    if switches == 0 {
        let (kind, position) = if initial > 0.0 {
            (SampleKind::AtomPlus, reach)
        } else {
            (SampleKind::AtomMinus, -reach)
        };
        return TelegraphSample {
            kind,
            position,
            switch_count: 0,
        };
    }
    TelegraphSample {
        kind: SampleKind::Continuous,
        position: position.clamp(-reach, reach),
        switch_count: switches,
    }
}

/// `count` independent positions `X(t)`, in index order.
pub fn simulate(config: &TelegraphConfig, count: usize) -> Vec<TelegraphSample> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| run_path(config, i, None))
        .collect()
}

/// Like [`simulate`], also keeping each path's switch times.
pub fn simulate_paths(config: &TelegraphConfig, count: usize) -> Vec<TelegraphPath> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut switch_times = Vec::new();
            let sample = run_path(config, i, Some(&mut switch_times));
            TelegraphPath {
                sample,
                switch_times,
            }
        })
        .collect()
}

fn density_scaled(config: &TelegraphConfig, s: f64) -> ScaledValue {
    let TelegraphConfig { c, lambda, t, .. } = *config;
    let reach = c * t;
    let gap = (reach - s.abs()) * (reach + s.abs());
    let y = lambda / c * gap.max(0.0).sqrt();
    // I₁(y)/y → 1/2 as y → 0
    let ratio = if y < 1e-150 {
        ScaledValue::from_f64(0.5)
    } else {
        bessel_int(1, y).scale(1.0 / y)
    };
    (bessel_int(0, y) + ratio.scale(lambda * t))
        .shift_exp(-lambda * t)
        .scale(lambda / (2.0 * c))
}

/// Density of the continuous part of `X(t)` at `|s| < ct`.
pub fn density(config: &TelegraphConfig, s: f64) -> Result<f64> {
    if !(s.abs() < config.reach()) {
        return domain(format!(
            "density is defined on |s| < ct = {} (got {s}); the atoms sit at ±ct",
            config.reach()
        ));
    }
    Ok(density_scaled(config, s).to_f64())
}

/// `∫_{−ct}^{ct} p(s, t) ds`, which should equal `1 − e^{−λt}`.
pub fn continuous_mass(config: &TelegraphConfig) -> Result<f64> {
    let reach = config.reach();
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-13);
    // the density is even in s
    let half = integrate(|s| density_scaled(config, s).to_f64(), 0.0, reach, spec)?;
    Ok(2.0 * half.value)
}

/// Residual of `c² ∂²p/∂s² − ∂²p/∂t² − 2λ ∂p/∂t` at `(s, t_probe)` by
/// central differences of step `h` in both variables.
pub fn pde_residual(config: &TelegraphConfig, s: f64, t_probe: f64, h: f64) -> Result<f64> {
    let c = config.c;
    if !(h > 0.0 && t_probe > 2.0 * h && s.abs() < c * t_probe - 4.0 * h * c) {
        return domain(format!(
            "probe (s = {s}, t = {t_probe}) is within 4h of the light cone for h = {h}"
        ));
    }
    let p = |s: f64, t: f64| density_scaled(&config.at_time(t), s).to_f64();
    let p_ss = central_diff(|v| p(v, t_probe), s, Derivative::Second, h);
    let p_t = central_diff(|v| p(s, v), t_probe, Derivative::First, h);
    let p_tt = central_diff(|v| p(s, v), t_probe, Derivative::Second, h);
    Ok(c * c * p_ss - p_tt - 2.0 * config.lambda * p_t)
}

/// Outcome of [`histogram_gof`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofResult {
    pub chi_square: f64,
    /// Number of bins after merging, minus one.
    pub degrees_of_freedom: usize,
    /// 0.999 quantile of χ² with `degrees_of_freedom` degrees of freedom.
    pub critical_999: f64,
    pub continuous_samples: usize,
}

impl GofResult {
    pub fn passed(&self) -> bool {
        self.chi_square < self.critical_999
    }
}

/// χ² goodness of fit of the simulated continuous part against the density.
///
/// Samples with at least one switch are binned on `(−ct, ct)`; expected
/// counts are `n·∫_bin p ds/(1 − e^{−λt})`. Adjacent bins are merged until
/// every expected count reaches 5.
pub fn histogram_gof(config: &TelegraphConfig, count: usize, bins: usize) -> Result<GofResult> {
    if count < GOF_MIN_SAMPLES {
        return domain(format!("goodness of fit needs at least {GOF_MIN_SAMPLES} samples (got {count})"));
    }
    if bins < 2 {
        return domain(format!("need at least two bins (got {bins})"));
    }
    let samples = simulate(config, count);
    histogram_gof_from(config, &samples, bins)
}

/// [`histogram_gof`] on an existing sample list.
pub fn histogram_gof_from(
    config: &TelegraphConfig,
    samples: &[TelegraphSample],
    bins: usize,
) -> Result<GofResult> {
    let reach = config.reach();
    let width = 2.0 * reach / bins as f64;
    let mut observed = vec![0.0; bins];
    let mut n = 0usize;
    for s in samples.iter().filter(|s| s.kind == SampleKind::Continuous) {
        let k = (((s.position + reach) / width) as usize).min(bins - 1);
        observed[k] += 1.0;
        n += 1;
    }
    let mass = 1.0 - config.atom_mass();
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-12);
    let mut expected = Vec::with_capacity(bins);
    for k in 0..bins {
        let lo = -reach + k as f64 * width;
        let hi = if k + 1 == bins { reach } else { lo + width };
        let part = integrate(|s| density_scaled(config, s).to_f64(), lo, hi, spec)?.value;
        expected.push(n as f64 * part / mass);
    }

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for (o, e) in observed.into_iter().zip(expected) {
        pending.0 += o;
        pending.1 += e;
        if pending.1 >= GOF_MIN_EXPECTED {
            merged.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.1 > 0.0 || pending.0 > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += pending.0;
                last.1 += pending.1;
            }
            None => merged.push(pending),
        }
    }
    if merged.len() < 2 {
        return domain("too few populated bins for a χ² test");
    }
    let chi_square = merged.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = merged.len() - 1;
    let critical_999 = ChiSquared::new(dof as f64)
        .map_err(|e| crate::Error::Config(e.to_string()))?
        .inverse_cdf(0.999);
    Ok(GofResult {
        chi_square,
        degrees_of_freedom: dof,
        critical_999,
        continuous_samples: n,
    })
}

/// Writes `kind,position,switch_count` rows with a header.
pub fn write_samples_csv<W: Write>(mut out: W, samples: &[TelegraphSample]) -> Result<()> {
    writeln!(out, "kind,position,switch_count")?;
    for s in samples {
        writeln!(out, "{},{},{}", s.kind.as_str(), s.position, s.switch_count)?;
    }
    out.flush()?;
    Ok(())
}

/// One row of switch times per path; paths without switches give empty rows.
pub fn write_switch_times_csv<W: Write>(mut out: W, paths: &[TelegraphPath]) -> Result<()> {
    for p in paths {
        let row: Vec<String> = p.switch_times.iter().map(|t| t.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Fraction of atom samples and mean position.
pub fn summarize(samples: &[TelegraphSample]) -> (f64, f64) {
    let n = samples.len().max(1) as f64;
    let atoms = samples.iter().filter(|s| s.switch_count == 0).count() as f64;
    let mean = samples.iter().map(|s| s.position).sum::<f64>() / n;
    (atoms / n, mean)
}
