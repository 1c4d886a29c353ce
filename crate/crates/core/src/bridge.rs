//! Exact discrete counterparts (Catalan numbers, binomials, the ⋆ partial
//! convolution) and the registry of numerical identity checks that ties the
//! discrete and continuous sides together.

use std::f64::consts::{E, PI};
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalan::{self, CatalanPoint, PhiFamily};
use crate::cbinom::{self, kernel_f64 as cb};
use crate::distribution::{self, DistParams};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::special::{bessel_i, bessel_int, BesselOrder};
use crate::telegraph::{self, TelegraphConfig};

/// Largest `n` accepted by [`discrete_catalan`].
pub const DISCRETE_CATALAN_MAX: u32 = 30;

/// Largest `n` accepted by [`catalan_moment_check`].
pub const MOMENT_CHECK_MAX: u32 = 12;

fn overflow(what: &str) -> Error {
    Error::Domain(format!("{what} overflows 128-bit arithmetic"))
}

/// `Cₙ = (2n)!/(n!(n+1)!)` via `C_{k+1} = C_k·2(2k+1)/(k+2)`.
pub fn discrete_catalan(n: u32) -> Result<u128> {
    if n > DISCRETE_CATALAN_MAX {
        return domain(format!("discrete_catalan: n = {n} exceeds cap {DISCRETE_CATALAN_MAX}"));
    }
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    Ok(c)
}

/// `binom(n, k)`, exact.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc·(n−k+i) is divisible by i after the previous step
        acc = acc
            .checked_mul(n - k + i)
            .ok_or_else(|| overflow("binomial"))?
            / i;
    }
    Ok(acc)
}

/// `Σ_{m=1}^{n−1} binom(m+k₁, k₁) binom(n−m+k₂, k₂)`.
pub fn star_convolve(k1: u64, k2: u64, n: u64) -> Result<u128> {
    if n == 0 {
        return domain("star_convolve needs n >= 1");
    }
    let mut total: u128 = 0;
    for m in 1..n {
        let term = binomial(m + k1, k1)?
            .checked_mul(binomial(n - m + k2, k2)?)
            .ok_or_else(|| overflow("star_convolve"))?;
        total = total.checked_add(term).ok_or_else(|| overflow("star_convolve"))?;
    }
    Ok(total)
}

/// `Σ_k binom(2k, k) binom(2n−2k, n−k)`, which equals `4ⁿ`.
pub fn central_convolution(n: u64) -> Result<u128> {
    let mut total: u128 = 0;
    for k in 0..=n {
        let term = binomial(2 * k, k)?
            .checked_mul(binomial(2 * (n - k), n - k)?)
            .ok_or_else(|| overflow("central convolution"))?;
        total = total.checked_add(term).ok_or_else(|| overflow("central convolution"))?;
    }
    Ok(total)
}

/// `(C_{n+1} − Cₙ, Σ_{k=0}^{n−1} C_k C_{n−k})`.
pub fn catalan_difference_pair(n: u32) -> Result<(u128, u128)> {
    let diff = discrete_catalan(n + 1)? - discrete_catalan(n)?;
    let mut conv: u128 = 0;
    for k in 0..n {
        conv += discrete_catalan(k)? * discrete_catalan(n - k)?;
    }
    Ok((diff, conv))
}

/// `Cₙ − (2/π)∫_{−1}^{1} (2z)^{2n} √(1 − z²) dz`.
pub fn catalan_moment_check(n: u32) -> Result<f64> {
    if n > MOMENT_CHECK_MAX {
        return domain(format!("moment check supports n <= {MOMENT_CHECK_MAX} (got {n})"));
    }
    let spec = QuadratureSpec::default()
        .with_tolerances(1e-14, 1e-12)
        .singular(true, true);
    let r = integrate(
        |z: f64| (2.0 * z).powi(2 * n as i32) * (1.0 - z * z).max(0.0).sqrt(),
        -1.0,
        1.0,
        spec,
    )?;
    Ok(discrete_catalan(n)? as f64 - 2.0 / PI * r.value)
}

/// `Σ_{n=0}^{terms} Cₙ xⁿ` in floating point.
pub fn catalan_series(x: f64, terms: u32) -> f64 {
    let mut c = 1.0;
    let mut power = 1.0;
    let mut total = 0.0;
    for k in 0..=terms {
        total += c * power;
        let k = k as f64;
        c *= 2.0 * (2.0 * k + 1.0) / (k + 2.0);
        power *= x;
    }
    total
}

/// Result of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// A registered identity: `check` returns a residual that must not exceed
/// `tolerance` in absolute value.
pub struct Identity {
    pub name: &'static str,
    pub description: &'static str,
    pub tolerance: f64,
    pub check: fn() -> Result<f64>,
}

impl Identity {
    pub fn run(&self) -> IdentityReport {
        let start = Instant::now();
        let outcome = (self.check)();
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        let (residual, error) = match outcome {
            Ok(r) => (r, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        IdentityReport {
            name: self.name.to_string(),
            residual,
            tolerance: self.tolerance,
            passed: residual.abs() <= self.tolerance,
            runtime_ms,
            error,
        }
    }
}

fn max_abs<I: IntoIterator<Item = Result<f64>>>(items: I) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for r in items {
        let r = r?;
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

fn pt(x: f64, y: f64) -> CatalanPoint {
    CatalanPoint::new(x, y).expect("registry probe points are valid")
}

fn tight() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-13)
}

fn check_total_integral() -> Result<f64> {
    max_abs([0.5, 1.0, 5.0, 20.0].map(|x: f64| {
        let v = integrate(|s| cb(x, s), 0.0, x, tight())?.value;
        Ok(v / (2.0 * x.exp_m1()) - 1.0)
    }))
}

fn check_laplace_cbinom() -> Result<f64> {
    let mut out = Vec::new();
    for s in [0.5, 1.0, 2.0] {
        for p in [1.5, 2.0, 3.0] {
            out.push(
                cbinom::cbinom_laplace_numeric(s, p, QuadratureSpec::default())
                    .and_then(|v| Ok(v - cbinom::cbinom_laplace(s, p)?)),
            );
        }
    }
    max_abs(out)
}

fn check_exp_integral() -> Result<f64> {
    max_abs([(1.0, 2.0, 0.3), (2.5, 0.4, -0.7), (4.0, 1.0, 1.2)].map(|(x, a, u): (f64, f64, f64)| {
        let q = integrate(|s| cb(x, s) * a.powf(s) * (u * s).exp(), 0.0, x, tight())?.value;
        Ok(cbinom::cbinom_exp_integral(x, a, u)? / q - 1.0)
    }))
}

fn check_cbinom_symmetry() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..=40 {
        let x = 0.37 * i as f64;
        for j in 0..=10 {
            let s = x * j as f64 / 10.0;
            let (a, b) = (cb(x, s), cb(x, x - s));
            worst = worst.max((a / b - 1.0).abs());
        }
    }
    Ok(worst)
}

fn check_mixed_pde() -> Result<f64> {
    let mut out = Vec::new();
    for u in [0.3, 0.7, 1.5] {
        for sbar in [0.4, 1.3, 2.2] {
            out.push(cbinom::mixed_pde_residual(u, sbar, 1e-3));
        }
    }
    max_abs(out)
}

fn check_chu_vandermonde() -> Result<f64> {
    max_abs(
        [(1.0, 0.5, 0.5), (0.5, 0.2, 0.8), (1.0, 0.0, 0.0)]
            .map(|(x, a, b)| cbinom::chu_vandermonde_residual(x, a, b, 1e-3)),
    )
}

fn check_chu_vandermonde_fold() -> Result<f64> {
    max_abs([
        cbinom::chu_vandermonde_fold_residual(1.0, &[0.5, 0.5]),
        cbinom::chu_vandermonde_fold_residual(0.8, &[0.2, 0.5, 0.9]),
    ])
}

fn check_rebalancing() -> Result<f64> {
    cbinom::rebalancing_residual(0.4, 1.2, 4.0, 1e-3)
}

fn check_central_convolution_grid() -> Result<f64> {
    cbinom::laguerre_convolution_check(1, 4.0, 1e-3)
}

fn check_laguerre_fold() -> Result<f64> {
    cbinom::laguerre_convolution_check(2, 4.0, 1e-3)
}

fn check_central_laplace() -> Result<f64> {
    max_abs([3.0, 4.0, 6.0].map(|p: f64| {
        let v = cbinom::central_binomial_laplace_numeric(p, QuadratureSpec::default())? + 1.0;
        Ok(v - ((p + 2.0) / (p - 2.0)).sqrt())
    }))
}

/// `½ e^{−2s} ⟨2s s⟩ √(πs)` at `s = 100`, centred on the window `[0.99, 1]`.
fn check_central_asymptotic() -> Result<f64> {
    let s = 100.0;
    let v = cbinom::central_binomial_scaled(s)?
        .shift_exp(-2.0 * s)
        .scale(0.5 * (PI * s).sqrt())
        .to_f64();
    Ok(v - 0.995)
}

fn check_catalan_series() -> Result<f64> {
    let probes = [(0.5, 0.0), (2.0, 1.0), (3.0, 0.5), (4.0, 4.0), (5.0, 2.0)];
    max_abs(probes.map(|(x, y)| {
        let p = pt(x, y);
        let series: f64 = (0..=40).map(|n| catalan::polytope_volume(n, p)).sum();
        Ok(catalan::catalan(p) - series)
    }))
}

fn check_catalan_bessel() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..=100 {
        let x = 0.5 * i as f64;
        let via_diff = (bessel_int(0, x) - bessel_int(2, x)).to_f64();
        worst = worst.max((catalan::catalan(pt(x, 0.0)) / via_diff - 1.0).abs());
    }
    Ok(worst)
}

fn check_volume_recurrence() -> Result<f64> {
    max_abs([
        catalan::volume_recurrence_residual(0, pt(2.0, 0.5)),
        catalan::volume_recurrence_residual(1, pt(1.0, 0.0)),
        catalan::volume_recurrence_residual(0, pt(1.5, 1.5)),
        catalan::volume_recurrence_residual(3, pt(2.0, 0.7)),
    ])
}

fn check_catalan_recursion() -> Result<f64> {
    max_abs([(1.0, 0.0), (2.0, 1.0), (1.5, 1.5)].map(|(x, y)| catalan::catalan_recursion_residual(pt(x, y))))
}

fn check_catalan_convolution() -> Result<f64> {
    max_abs([0.5, 1.0, 4.0].map(catalan::catalan_convolution_residual))
}

fn check_catalan_laplace() -> Result<f64> {
    max_abs([1.5, 2.0, 3.0].map(|s| {
        Ok(catalan::catalan_laplace_numeric(s, QuadratureSpec::default())? - catalan::catalan_laplace(s)?)
    }))
}

fn check_schlafli() -> Result<f64> {
    let mut out = Vec::new();
    for x in [0.4, 1.0, 2.5, 4.0, 6.0] {
        for j in 0..5 {
            let p = pt(x, x * j as f64 / 4.0);
            out.push(catalan::schlafli_catalan(p).map(|v| v - catalan::catalan(p)));
        }
    }
    max_abs(out)
}

fn check_semicircle() -> Result<f64> {
    max_abs([0.0, 2.0, 5.0].map(|x| Ok(catalan::semicircle_mgf(x)? - catalan::catalan(pt(x, 0.0)))))
}

fn check_gf_bridge() -> Result<f64> {
    max_abs([0.05, 0.1, 0.2].map(|x| Ok(catalan::catalan_gf_bridge(x)? - catalan::catalan_gf(x)?)))
}

/// Bridge integral against `Σ_{n≤25} Cₙ xⁿ` plus the exactly summed tail
/// `Σ_{n>25} Cₙ xⁿ`. The tail is about 5e−5 at `x = 0.2`, so the truncated
/// sum alone cannot meet a 1e−6 tolerance there.
fn check_gf_series() -> Result<f64> {
    max_abs([0.05, 0.1, 0.2].map(|x| {
        let head = catalan_series(x, 25);
        let tail = catalan_series(x, 400) - head;
        Ok(catalan::catalan_gf_bridge(x)? - (head + tail))
    }))
}

fn check_iphi() -> Result<f64> {
    max_abs([
        catalan::iphi_laplace_check(PhiFamily::Exp(1.0), 2.0),
        catalan::iphi_laplace_check(PhiFamily::One, 3.0),
        catalan::iphi_laplace_check(PhiFamily::Zero, 2.0),
    ])
}

fn check_normalization() -> Result<f64> {
    let mut out = Vec::new();
    for x in [0.5, 2.0, 10.0] {
        for p in [0.1, 0.5, 0.9] {
            out.push((|| {
                let q = integrate(|s| cb(x, s) * f64::powf(p, s) * (1.0 - p).powf(x - s), 0.0, x, tight())?.value;
                Ok(distribution::normalization(x, p)? / q - 1.0)
            })());
        }
    }
    max_abs(out)
}

fn check_pdf_mass() -> Result<f64> {
    let mut out = Vec::new();
    for x in [0.5, 2.0, 10.0] {
        for p in [0.1, 0.5, 0.9] {
            out.push((|| {
                let d = DistParams::new(x, p)?;
                Ok(integrate(|s| d.pdf(s), 0.0, x, tight())?.value - 1.0)
            })());
        }
    }
    max_abs(out)
}

fn check_mgf() -> Result<f64> {
    let d = DistParams::new(2.0, 0.3)?;
    max_abs([-1.0, 0.5, 2.0].map(|u: f64| {
        let q = integrate(|s| (u * s).exp() * d.pdf(s), 0.0, 2.0, tight())?.value;
        Ok(d.mgf(u) - q)
    }))
}

fn check_mgf_shift() -> Result<f64> {
    let d = DistParams::new(1.5, 0.3)?;
    let half = DistParams::new(1.5, 0.5)?;
    max_abs([-0.4, 0.2, 1.0].map(|z: f64| {
        let a = d.phi(z);
        Ok(half.phi(z + (3.0f64 / 7.0).ln()) / a - 1.0)
    }))
}

fn check_mgf_variance() -> Result<f64> {
    use crate::quadrature::{central_diff, Derivative};
    let d = DistParams::new(2.0, 0.3)?;
    let m1 = central_diff(|u| d.mgf(u), 0.0, Derivative::First, 1e-3);
    let m2 = central_diff(|u| d.mgf(u), 0.0, Derivative::Second, 1e-3);
    let mean = integrate(|s| s * d.pdf(s), 0.0, 2.0, tight())?.value;
    let var = integrate(|s| (s - mean).powi(2) * d.pdf(s), 0.0, 2.0, tight())?.value;
    Ok(m2 - m1 * m1 - var)
}

fn check_symmetric_moments() -> Result<f64> {
    let x = 2.0;
    let d = DistParams::new(x, 0.5)?;
    let mut out: Vec<Result<f64>> = [0u32, 2, 4]
        .iter()
        .map(|&k| {
            let q = integrate(|s| (s - 1.0).powi(k as i32) * d.pdf(s), 0.0, x, tight())?.value;
            Ok(distribution::moment_symmetric(x, k)? - q)
        })
        .collect();
    for k in [1u32, 3, 5] {
        out.push(distribution::moment_symmetric(x, k));
    }
    max_abs(out)
}

fn check_odd_moments() -> Result<f64> {
    let d = DistParams::new(2.0, 0.5)?;
    max_abs([1, 3].map(|k| Ok(integrate(|s| (s - 1.0).powi(k) * d.pdf(s), 0.0, 2.0, tight())?.value)))
}

fn check_quantile() -> Result<f64> {
    let mut out = Vec::new();
    for (x, p) in [(2.0, 0.5), (3.0, 0.2), (10.0, 0.9)] {
        let d = DistParams::new(x, p)?;
        for q in [0.01, 0.5, 0.99] {
            out.push(d.quantile(q).map(|s| d.cdf(s) - q));
        }
    }
    max_abs(out)
}

fn check_telegraph_conservation() -> Result<f64> {
    max_abs([(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (2.0, 1.3, 3.0)].map(|(c, l, t)| {
        let config = TelegraphConfig::new(c, l, t, 0)?;
        Ok(config.atom_mass() + telegraph::continuous_mass(&config)? - 1.0)
    }))
}

fn check_telegraph_bridge() -> Result<f64> {
    let x = 2.0;
    let config = TelegraphConfig::new(1.0, 2.0, 1.0, 0)?;
    max_abs((0..10).map(|i| {
        let s = -0.9 + 0.2 * i as f64;
        let b = 0.5 * f64::exp(-x) * cb(x, x / 2.0 + s);
        Ok(telegraph::density(&config, s)? / b - 1.0)
    }))
}

fn check_telegraph_pde() -> Result<f64> {
    let config = TelegraphConfig::new(1.0, 2.0, 1.0, 0)?;
    max_abs([0.0, 0.2, -0.5].map(|s| telegraph::pde_residual(&config, s, 1.0, 1e-3)))
}

/// Distance of the residual ratio under `h → h/2` from the ideal 4.
fn check_telegraph_pde_order() -> Result<f64> {
    let config = TelegraphConfig::new(1.0, 2.0, 1.0, 0)?;
    let r1 = telegraph::pde_residual(&config, 0.2, 1.0, 1e-3)?;
    let r2 = telegraph::pde_residual(&config, 0.2, 1.0, 5e-4)?;
    Ok(r1 / r2 - 4.0)
}

/// Atom fraction at `λt = 4` in units of its binomial standard error.
fn check_telegraph_atoms() -> Result<f64> {
    let config = TelegraphConfig::new(1.0, 2.0, 2.0, 20_240_607)?;
    let n = 1_000_000;
    let samples = telegraph::simulate(&config, n);
    let (frac, _) = telegraph::summarize(&samples);
    let q = config.atom_mass();
    Ok((frac - q) / (q * (1.0 - q) / n as f64).sqrt())
}

/// χ² statistic minus the 0.999 critical value; passes when negative.
fn check_telegraph_gof() -> Result<f64> {
    let config = TelegraphConfig::new(1.0, 2.0, 1.0, 7)?;
    let r = telegraph::histogram_gof(&config, 1_000_000, 40)?;
    Ok((r.chi_square - r.critical_999).max(0.0))
}

fn mismatches<I: IntoIterator<Item = Result<bool>>>(items: I) -> Result<f64> {
    let mut bad = 0usize;
    for ok in items {
        if !ok? {
            bad += 1;
        }
    }
    Ok(bad as f64)
}

fn check_discrete_chu_vandermonde() -> Result<f64> {
    let mut out = Vec::new();
    for k1 in 0..=6u64 {
        for k2 in 0..=6u64 {
            for n in 1..=12u64 {
                out.push((|| {
                    let lhs = star_convolve(k1, k2, n)? + binomial(n + k1, k1)? + binomial(n + k2, k2)?;
                    Ok(lhs == binomial(n + k1 + k2 + 1, k1 + k2 + 1)?)
                })());
            }
        }
    }
    mismatches(out)
}

fn check_discrete_catalan_convolution() -> Result<f64> {
    mismatches((0..=15).map(|n| catalan_difference_pair(n).map(|(a, b)| a == b)))
}

fn check_discrete_central() -> Result<f64> {
    mismatches((0..=10u64).map(|n| central_convolution(n).map(|v| v == 1u128 << (2 * n))))
}

fn check_catalan_moments() -> Result<f64> {
    max_abs((0..=MOMENT_CHECK_MAX).map(|n| Ok(catalan_moment_check(n)? / discrete_catalan(n)? as f64)))
}

fn check_bessel_recurrence() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for twice in [1, 2, 3] {
        let nu = twice as f64 / 2.0;
        for i in 0..=100 {
            let z = 0.1 + i as f64 * 0.999;
            let lo = bessel_i(BesselOrder::new(twice - 2)?, z)?;
            let mid = bessel_i(BesselOrder::new(twice)?, z)?;
            let hi = bessel_i(BesselOrder::new(twice + 2)?, z)?;
            let rhs = mid.scale(2.0 * nu / z);
            worst = worst.max(((lo - hi - rhs) / rhs).to_f64().abs());
        }
    }
    Ok(worst)
}

fn check_total_integral_one() -> Result<f64> {
    Ok(cbinom::cbinom_exp_integral(1.0, 1.0, 0.0)? - 2.0 * (E - 1.0))
}

/// Every registered identity, sorted by name.
pub static REGISTRY: &[Identity] = &[
    Identity { name: "bessel_recurrence", description: "I_{ν−1} − I_{ν+1} = (2ν/z) I_ν, relative", tolerance: 1e-10, check: check_bessel_recurrence },
    Identity { name: "catalan_bessel_reduction", description: "C(x, 0) = I₀(x) − I₂(x), relative", tolerance: 1e-12, check: check_catalan_bessel },
    Identity { name: "catalan_convolution", description: "C ∗ C = 4 C′ at z ∈ {0.5, 1, 4}", tolerance: 1e-8, check: check_catalan_convolution },
    Identity { name: "catalan_gf_bridge", description: "∫e^{−u}C(2√x u, 0)du = 2/(1+√(1−4x))", tolerance: 1e-6, check: check_gf_bridge },
    Identity { name: "catalan_gf_series", description: "bridge integral = Σ Cₙxⁿ (25 terms plus exact tail)", tolerance: 1e-6, check: check_gf_series },
    Identity { name: "catalan_laplace", description: "Laplace transform of C(·, 0) = 2/(s+√(s²−1))", tolerance: 1e-6, check: check_catalan_laplace },
    Identity { name: "catalan_moments", description: "Cₙ = semicircle moment of (2z)^{2n}, relative", tolerance: 1e-10, check: check_catalan_moments },
    Identity { name: "catalan_recursion", description: "C(x,y) = 1 + ∬C(a+2b, a)", tolerance: 1e-8, check: check_catalan_recursion },
    Identity { name: "catalan_schlafli", description: "integral representation = closed form on a 5×5 grid", tolerance: 1e-9, check: check_schlafli },
    Identity { name: "catalan_volume_recurrence", description: "vol Λⁿ⁺¹ = ∬ vol Λⁿ at four probes", tolerance: 1e-8, check: check_volume_recurrence },
    Identity { name: "catalan_volume_series", description: "C(x,y) = Σ_{n≤40} vol Λⁿ(x,y)", tolerance: 1e-10, check: check_catalan_series },
    Identity { name: "cbinom_exp_integral", description: "∫⟨x s⟩α^s e^{us}ds closed form vs quadrature, relative", tolerance: 1e-9, check: check_exp_integral },
    Identity { name: "cbinom_laplace", description: "Laplace of ⟨s+w s⟩ = e^{s/p}((p+1)/p)² − 1", tolerance: 1e-6, check: check_laplace_cbinom },
    Identity { name: "cbinom_mixed_pde", description: "∂_u∂_s̄⟨u+s̄ u⟩ = ⟨u+s̄ u⟩", tolerance: 1e-5, check: check_mixed_pde },
    Identity { name: "cbinom_symmetry", description: "⟨x s⟩ = ⟨x x−s⟩, relative", tolerance: 1e-13, check: check_cbinom_symmetry },
    Identity { name: "cbinom_total_integral", description: "∫₀ˣ⟨x s⟩ds = 2(eˣ−1), relative", tolerance: 1e-9, check: check_total_integral },
    Identity { name: "cbinom_total_integral_closed", description: "closed weighted integral at α=1, u=0, x=1 is 2(e−1)", tolerance: 1e-14, check: check_total_integral_one },
    Identity { name: "central_binomial_asymptotic", description: "½e^{−2s}⟨2s s⟩√(πs) ∈ [0.99, 1] at s=100 (centred)", tolerance: 0.005, check: check_central_asymptotic },
    Identity { name: "central_binomial_convolution", description: "(⟨2s s⟩+δ)^{∗2} = 4e^{2s}+δ, relative", tolerance: 1e-3, check: check_central_convolution_grid },
    Identity { name: "central_binomial_laplace", description: "Laplace of ⟨2s s⟩ + 1 = √((p+2)/(p−2))", tolerance: 1e-6, check: check_central_laplace },
    Identity { name: "chu_vandermonde", description: "δ-augmented convolution = (1+∂_s̄)²⟨x+s̄ s̄⟩", tolerance: 1e-5, check: check_chu_vandermonde },
    Identity { name: "chu_vandermonde_fold", description: "2- and 3-fold products with exact s̄-derivatives", tolerance: 1e-8, check: check_chu_vandermonde_fold },
    Identity { name: "chu_vandermonde_rebalancing", description: "δ-augmented convolution depends only on s₁+s₂", tolerance: 1e-5, check: check_rebalancing },
    Identity { name: "discrete_catalan_convolution", description: "C_{n+1} − Cₙ = Σ C_k C_{n−k}, n ≤ 15 (mismatch count)", tolerance: 0.0, check: check_discrete_catalan_convolution },
    Identity { name: "discrete_central_convolution", description: "Σ binom(2k,k)binom(2n−2k,n−k) = 4ⁿ, n ≤ 10 (mismatch count)", tolerance: 0.0, check: check_discrete_central },
    Identity { name: "discrete_chu_vandermonde", description: "⋆ + binomials = binom(n+k₁+k₂+1, k₁+k₂+1) (mismatch count)", tolerance: 0.0, check: check_discrete_chu_vandermonde },
    Identity { name: "dist_mgf", description: "closed-form MGF vs quadrature", tolerance: 1e-8, check: check_mgf },
    Identity { name: "dist_mgf_shift", description: "φ_{x,p}(z) = φ_{x,1/2}(z + ln(p/(1−p))), relative", tolerance: 1e-12, check: check_mgf_shift },
    Identity { name: "dist_mgf_variance", description: "M″(0) − M′(0)² = variance", tolerance: 1e-5, check: check_mgf_variance },
    Identity { name: "dist_normalization", description: "A_{x,p} closed form vs quadrature, relative", tolerance: 1e-9, check: check_normalization },
    Identity { name: "dist_odd_moments", description: "odd centred moments vanish at p = 1/2", tolerance: 1e-9, check: check_odd_moments },
    Identity { name: "dist_pdf_mass", description: "∫pdf = 1", tolerance: 1e-9, check: check_pdf_mass },
    Identity { name: "dist_quantile", description: "cdf(quantile(q)) = q", tolerance: 1e-9, check: check_quantile },
    Identity { name: "dist_symmetric_moments", description: "Bessel moment formula vs quadrature, k ≤ 5", tolerance: 1e-8, check: check_symmetric_moments },
    Identity { name: "iphi_laplace", description: "Laplace of ∫C(x,y)Φ(y)dy = 2Φ̃(q)/(p+q)", tolerance: 1e-5, check: check_iphi },
    Identity { name: "laguerre_fold", description: "(⟨2s s⟩+δ)^{∗4} = 4e^{2s}L₁^{(1)}(−4s)+δ, relative", tolerance: 5e-3, check: check_laguerre_fold },
    Identity { name: "semicircle_mgf", description: "E e^{xZ} = C(x, 0)", tolerance: 1e-9, check: check_semicircle },
    Identity { name: "telegraph_atoms", description: "simulated atom fraction vs e^{−λt}, in standard errors", tolerance: 3.0, check: check_telegraph_atoms },
    Identity { name: "telegraph_bridge", description: "p(s,t) = (e^{−x}/2)⟨x x/2+s⟩, relative", tolerance: 1e-12, check: check_telegraph_bridge },
    Identity { name: "telegraph_conservation", description: "e^{−λt} + ∫p = 1", tolerance: 1e-8, check: check_telegraph_conservation },
    Identity { name: "telegraph_gof", description: "χ² excess over the 0.999 quantile", tolerance: 0.0, check: check_telegraph_gof },
    Identity { name: "telegraph_pde", description: "c²p_ss = p_tt + 2λp_t", tolerance: 1e-4, check: check_telegraph_pde },
    Identity { name: "telegraph_pde_order", description: "residual ratio under h → h/2 minus 4", tolerance: 0.5, check: check_telegraph_pde_order },
];

pub fn registry_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|i| i.name).collect()
}

/// Runs the selected identities (all of them for an empty selection or
/// `["all"]`) in parallel and returns the reports sorted by name.
pub fn run_verification_suite(selection: &[String]) -> Result<Vec<IdentityReport>> {
    let all = selection.is_empty() || selection.iter().any(|s| s == "all");
    let chosen: Vec<&Identity> = if all {
        REGISTRY.iter().collect()
    } else {
        let mut chosen = Vec::new();
        for name in selection {
            match REGISTRY.iter().find(|i| i.name == name) {
                Some(id) => chosen.push(id),
                None => return Err(Error::Config(format!("unknown identity '{name}'"))),
            }
        }
        chosen.sort_by_key(|i| i.name);
        chosen.dedup_by_key(|i| i.name);
        chosen
    };
    let mut reports: Vec<IdentityReport> = chosen.par_iter().map(|id| id.run()).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

/// Aligned text table, one report per row.
pub fn write_text_table<W: Write>(mut out: W, reports: &[IdentityReport]) -> Result<()> {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    writeln!(
        out,
        "{:<width$}  {:>12}  {:>10}  {:>6}  {:>11}",
        "name", "residual", "tolerance", "status", "runtime_ms"
    )?;
    for r in reports {
        writeln!(
            out,
            "{:<width$}  {:>12.3e}  {:>10.1e}  {:>6}  {:>11.1}",
            r.name,
            r.residual,
            r.tolerance,
            if r.passed { "pass" } else { "FAIL" },
            r.runtime_ms
        )?;
        if let Some(e) = &r.error {
            writeln!(out, "    error: {e}")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_json_lines<W: Write>(mut out: W, reports: &[IdentityReport]) -> Result<()> {
    for r in reports {
        let line = serde_json::to_string(r).map_err(|e| Error::Config(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}
