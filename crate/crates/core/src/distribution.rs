//! The continuous binomial distribution on `[0, x]` with density
//! `f(s) = ⟨x s⟩ p^s (1−p)^{x−s} / A_{x,p}`.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cbinom::{kernel, ln_hyperbolic_kernel};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::special::{bessel_i, gamma_half, power_series, BesselOrder, ScaledValue};

/// Number of panels in the cumulative table behind [`DistParams::cdf`].
pub const CDF_PANELS: usize = 4096;

/// Largest even moment order accepted by [`moment_symmetric`].
pub const MAX_MOMENT_ORDER: u32 = 40;

#[derive(Debug)]
struct CdfTable {
    /// Cumulative mass at the panel edges, normalized so the last entry is 1.
    cumulative: Vec<f64>,
    /// Density at the panel edges.
    density: Vec<f64>,
}

/// Parameters `(x, p)` with a lazily computed normalization constant and
/// cumulative table. Both caches are written once and then shared.
#[derive(Debug, Clone)]
pub struct DistParams {
    x: f64,
    p: f64,
    ln_norm: OnceLock<f64>,
    table: OnceLock<std::sync::Arc<CdfTable>>,
}

impl PartialEq for DistParams {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.p == other.p
    }
}

impl DistParams {
    pub fn new(x: f64, p: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return domain(format!("support length x must be positive and finite (got {x})"));
        }
        check_probability(p)?;
        Ok(Self {
            x,
            p,
            ln_norm: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `ln(p/(1−p))`.
    pub fn log_odds(&self) -> f64 {
        (self.p / (1.0 - self.p)).ln()
    }

    /// `ln A_{x,p}`, cached.
    pub fn ln_normalization(&self) -> f64 {
        *self
            .ln_norm
            .get_or_init(|| ln_normalization_unchecked(self.x, self.p))
    }

    /// `A_{x,p}`; `+∞` when it exceeds the `f64` range.
    pub fn normalization(&self) -> f64 {
        self.ln_normalization().exp()
    }

    pub fn pdf(&self, s: f64) -> f64 {
        if !(0.0..=self.x).contains(&s) {
            return 0.0;
        }
        let ln = kernel(self.x, s).ln_abs() + s * self.p.ln() + (self.x - s) * (-self.p).ln_1p()
            - self.ln_normalization();
        ln.exp()
    }

    /// `φ_{x,p}(u) = cosh(x r/2) − cosh(x θ/2) + (2/r) sinh(x r/2)` with
    /// `θ = u + ln(p/(1−p))` and `r = √(4 + θ²)`.
    pub fn phi(&self, u: f64) -> f64 {
        self.ln_phi(u).exp()
    }

    pub fn ln_phi(&self, u: f64) -> f64 {
        ln_hyperbolic_kernel(self.x, MgfParams::new(self, u).theta)
    }

    /// `E e^{uX} = e^{ux/2} φ_{x,p}(u)/φ_{x,p}(0)`.
    pub fn mgf(&self, u: f64) -> f64 {
        (0.5 * u * self.x + self.ln_phi(u) - self.ln_phi(0.0)).exp()
    }

    fn table(&self) -> &CdfTable {
        self.table.get_or_init(|| std::sync::Arc::new(self.build_table()))
    }

    fn build_table(&self) -> CdfTable {
        let h = self.x / CDF_PANELS as f64;
        let spec = QuadratureSpec::default().with_tolerances(1e-14, 1e-13);
        let edge = |i: usize| if i == CDF_PANELS { self.x } else { i as f64 * h };
        let mut cumulative = Vec::with_capacity(CDF_PANELS + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..CDF_PANELS {
            let part = match integrate(|s| self.pdf(s), edge(i), edge(i + 1), spec) {
                Ok(r) => r.value,
                Err(Error::Convergence { value, .. }) => value,
                Err(e) => panic!("cdf panel {i}: {e}"),
            };
            acc += part;
            cumulative.push(acc);
        }
        let total = acc;
        for c in cumulative.iter_mut() {
            *c /= total;
        }
        let density = (0..=CDF_PANELS).map(|i| self.pdf(edge(i)) / total).collect();
        CdfTable { cumulative, density }
    }

    /// Cubic Hermite interpolation of the cumulative table inside panel `i`.
    fn panel_cdf(&self, table: &CdfTable, i: usize, s: f64) -> f64 {
        let h = self.x / CDF_PANELS as f64;
        let s0 = i as f64 * h;
        let t = ((s - s0) / h).clamp(0.0, 1.0);
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * table.cumulative[i]
            + h10 * h * table.density[i]
            + h01 * table.cumulative[i + 1]
            + h11 * h * table.density[i + 1]
    }

    pub fn cdf(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= self.x {
            return 1.0;
        }
        let table = self.table();
        let i = ((s / self.x * CDF_PANELS as f64) as usize).min(CDF_PANELS - 1);
        self.panel_cdf(table, i, s)
    }

    /// Inverse of [`DistParams::cdf`] by bisection on the interpolant.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return domain(format!("quantile level must lie in [0, 1] (got {q})"));
        }
        if q == 0.0 {
            return Ok(0.0);
        }
        if q == 1.0 {
            return Ok(self.x);
        }
        let table = self.table();
        let i = table
            .cumulative
            .partition_point(|&c| c <= q)
            .clamp(1, CDF_PANELS)
            - 1;
        let h = self.x / CDF_PANELS as f64;
        let (mut lo, mut hi) = (i as f64 * h, ((i + 1) as f64 * h).min(self.x));
        for _ in 0..200 {
            if hi - lo <= 1e-14 * self.x.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.panel_cdf(table, i, mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if !(hi - lo <= 1e-10) {
            return Err(Error::Convergence {
                value: 0.5 * (lo + hi),
                error_estimate: hi - lo,
                subdivisions: 200,
            });
        }
        Ok(0.5 * (lo + hi))
    }

    /// `count` draws by inverse transform of a seeded uniform stream.
    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.quantile(rng.random::<f64>())).collect()
    }
}

/// The shifted argument `θ = u + ln(p/(1−p))` at which `φ` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfParams {
    pub u: f64,
    pub theta: f64,
}

impl MgfParams {
    pub fn new(params: &DistParams, u: f64) -> Self {
        Self {
            u,
            theta: u + params.log_odds(),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("p must lie in (0, 1) (got {p})"));
    }
    Ok(())
}

fn ln_normalization_unchecked(x: f64, p: f64) -> f64 {
    let l = (p / (1.0 - p)).ln();
    std::f64::consts::LN_2 + 0.5 * x * (p * (1.0 - p)).ln() + ln_hyperbolic_kernel(x, l)
}

/// `A_{x,p} = ∫_0^x ⟨x s⟩ p^s (1−p)^{x−s} ds
/// = 2[p(1−p)]^{x/2} [cosh(x r/2) − cosh(x L/2) + (2/r) sinh(x r/2)]`,
/// `L = ln(p/(1−p))`, `r = √(4 + L²)`.
pub fn normalization(x: f64, p: f64) -> Result<f64> {
    Ok(ln_normalization(x, p)?.exp())
}

pub fn ln_normalization(x: f64, p: f64) -> Result<f64> {
    check_probability(p)?;
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("support length x must be positive and finite (got {x})"));
    }
    Ok(ln_normalization_unchecked(x, p))
}

/// `E Y^k` for `Y = X − x/2` at `p = 1/2`:
///
/// `[(x/2)^{(k+1)/2} Γ((k+1)/2)(I_{(k+1)/2}(x) + I_{(k−1)/2}(x)) − (x/2)^k] / (eˣ − 1)`
/// for even `k`, and 0 for odd `k`.
pub fn moment_symmetric(x: f64, k: u32) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("support length x must be positive and finite (got {x})"));
    }
    if k > MAX_MOMENT_ORDER {
        return domain(format!("moment order {k} exceeds cap {MAX_MOMENT_ORDER}"));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let twice_hi = k as i32 + 1;
    let twice_lo = k as i32 - 1;
    let half = 0.5 * x;
    let gamma = gamma_half(k + 1)?;
    let prefactor = ScaledValue::from_ln(0.5 * (k + 1) as f64 * half.ln()).scale(gamma);
    let numerator = if x <= crate::special::SERIES_SWITCH {
        // (x/2)^k is exactly the leading series term of the lower-order
        // Bessel function times the prefactor; drop both instead of
        // subtracting them.
        let hi = power_series(BesselOrder::new(twice_hi)?, x, 0);
        let lo = power_series(BesselOrder::new(twice_lo)?, x, 1);
        prefactor.scale(hi + lo)
    } else {
        let hi = bessel_i(BesselOrder::new(twice_hi)?, x)?;
        let lo = bessel_i(BesselOrder::new(twice_lo)?, x)?;
        prefactor * (hi + lo) - ScaledValue::from_ln(k as f64 * half.ln())
    };
    let denominator = ScaledValue::from_f64(-(-x).exp_m1()).shift_exp(x);
    Ok((numerator / denominator).to_f64())
}
