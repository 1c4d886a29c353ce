//! Continuous binomial coefficients `⟨x s⟩`.
//!
//! `⟨x s⟩ = 2 I₀(2√(s(x−s))) + x I₁(2√(s(x−s)))/√(s(x−s))` for `0 ≤ s ≤ x`,
//! with the boundary value `⟨x 0⟩ = ⟨x x⟩ = x + 2`. Along with the closed
//! form this module carries the Laplace and weighted-integral identities,
//! the central coefficients `⟨2s s⟩`, and the atom-plus-density algebra in
//! which the Chu-Vandermonde type identities live.

use crate::error::{domain, Error, Result};
use crate::quadrature::{central_diff, integrate, laplace_numeric, Derivative, QuadratureSpec};
use crate::special::{bessel_int, laguerre_assoc, NeumaierSum, ScaledValue};

/// Below this value of `s(x−s)` the Bessel ratio is replaced by its
/// two-term series.
const BOUNDARY_THRESHOLD: f64 = 1e-24;

/// A validated pair `0 ≤ s ≤ x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomParams {
    x: f64,
    s: f64,
}

impl BinomParams {
    pub fn new(x: f64, s: f64) -> Result<Self> {
        if !(x.is_finite() && s.is_finite()) || !(0.0 <= s && s <= x) {
            return domain(format!("continuous binomial needs 0 <= s <= x (got x = {x}, s = {s})"));
        }
        Ok(Self { x, s })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// `⟨x s⟩` as a plain float. Overflows to `+∞` beyond `x ≈ 1400`; use
/// [`cbinom_scaled`] there.
pub fn cbinom(params: BinomParams) -> f64 {
    cbinom_scaled(params).to_f64()
}

/// `⟨x s⟩` in scaled form.
pub fn cbinom_scaled(params: BinomParams) -> ScaledValue {
    kernel(params.x, params.s)
}

/// Unchecked evaluation; callers guarantee `0 ≤ s ≤ x`.
pub(crate) fn kernel(x: f64, s: f64) -> ScaledValue {
    let (lo, hi) = if s <= x - s { (s, x - s) } else { (x - s, s) };
    let u = lo.max(0.0) * hi;
    if u < BOUNDARY_THRESHOLD {
        return ScaledValue::from_f64(2.0 * (1.0 + u) + x * (1.0 + 0.5 * u));
    }
    let root = u.sqrt();
    let z = 2.0 * root;
    bessel_int(0, z).scale(2.0) + bessel_int(1, z).scale(x / root)
}

pub(crate) fn kernel_f64(x: f64, s: f64) -> f64 {
    kernel(x, s).to_f64()
}

/// `ln sinh t` for `t ≥ 0`.
fn ln_sinh(t: f64) -> f64 {
    t + (-(-2.0 * t).exp_m1() / 2.0).ln()
}

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln B(x, L)` with
/// `B = cosh(x r/2) − cosh(x L/2) + (2/r) sinh(x r/2)`, `r = √(4 + L²)`.
///
/// The cosh difference is rewritten as `2 sinh(x(r+|L|)/4) sinh(x(r−|L|)/4)`
/// with `r − |L| = 4/(r + |L|)`, so nothing cancels.
pub(crate) fn ln_hyperbolic_kernel(x: f64, l: f64) -> f64 {
    let l = l.abs();
    let r = (4.0 + l * l).sqrt();
    let a = x * (r + l) / 4.0;
    let b = x / (r + l);
    let product = std::f64::consts::LN_2 + ln_sinh(a) + ln_sinh(b);
    let single = (2.0 / r).ln() + ln_sinh(0.5 * x * r);
    log_add(product, single)
}

/// `ln ∫_0^x ⟨x s⟩ α^s e^{us} ds`; `−∞` at `x = 0`.
pub fn cbinom_exp_integral_ln(x: f64, alpha: f64, u: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return domain(format!("x must be finite and >= 0 (got {x})"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) || !u.is_finite() {
        return domain(format!("need α > 0 and finite u (got α = {alpha}, u = {u})"));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let l = u + alpha.ln();
    Ok(std::f64::consts::LN_2 + 0.5 * x * l + ln_hyperbolic_kernel(x, l))
}

/// `∫_0^x ⟨x s⟩ α^s e^{us} ds`
/// `= 2 α^{x/2} e^{ux/2} [cosh(x r/2) − cosh(x ℓ/2) + (2/r) sinh(x r/2)]`
/// with `ℓ = u + ln α` and `r = √(4 + ℓ²)`.
pub fn cbinom_exp_integral(x: f64, alpha: f64, u: f64) -> Result<f64> {
    Ok(cbinom_exp_integral_ln(x, alpha, u)?.exp())
}

/// Central coefficient `⟨2s s⟩ = 2 I₀(2s) + 2 I₁(2s)`.
pub fn central_binomial(s: f64) -> Result<f64> {
    Ok(central_binomial_scaled(s)?.to_f64())
}

pub fn central_binomial_scaled(s: f64) -> Result<ScaledValue> {
    if !(s >= 0.0 && s.is_finite()) {
        return domain(format!("central binomial needs finite s >= 0 (got {s})"));
    }
    Ok((bessel_int(0, 2.0 * s) + bessel_int(1, 2.0 * s)).scale(2.0))
}

/// Closed form of `∫_0^∞ e^{−pw} ⟨s+w s⟩ dw = e^{s/p}((p+1)/p)² − 1`.
pub fn cbinom_laplace(s: f64, p: f64) -> Result<f64> {
    if !(s >= 0.0) || !(p > 0.0) {
        return domain(format!("need s >= 0 and p > 0 (got s = {s}, p = {p})"));
    }
    let q = (p + 1.0) / p;
    Ok((s / p).exp() * q * q - 1.0)
}

/// Numerical Laplace transform of `w ↦ ⟨s+w s⟩`.
///
/// Growth bound: `⟨s+w s⟩ ≤ (2+s+w) e^{2√(sw)} ≤ (2+s+w) e^{εw + s/ε}` for
/// any `ε > 0`. With `ε = p/2` and `q = p − ε` the neglected tail past `T`
/// is below `e^{s/ε}[(2+s+T)/q + 1/q²] e^{−qT}`, which fixes `T`.
pub fn cbinom_laplace_numeric(s: f64, p: f64, spec: QuadratureSpec) -> Result<f64> {
    if !(s >= 0.0) {
        return domain(format!("need s >= 0 (got {s})"));
    }
    if !(p > 0.0) {
        return Err(Error::Divergence(format!("Laplace transform needs p > 0 (got {p})")));
    }
    let eps = 0.5 * p;
    let q = p - eps;
    let tol = 0.01 * spec.abs_tol;
    let mut cut = 1.0;
    for _ in 0..50 {
        let next = (s / eps + (((2.0 + s + cut) / q + 1.0 / (q * q)) / tol).ln()) / q;
        if (next - cut).abs() < 1e-6 {
            cut = next;
            break;
        }
        cut = next;
    }
    laplace_numeric(|w| kernel_f64(s + w, s), p, eps, cut, spec)
}

/// Numerical Laplace transform of `s ↦ ⟨2s s⟩`, using `⟨2s s⟩ ≤ 4e^{2s}`.
pub fn central_binomial_laplace_numeric(p: f64, spec: QuadratureSpec) -> Result<f64> {
    let cut = crate::quadrature::exponential_tail_cut(4.0, 2.0, p, 0.01 * spec.abs_tol)?;
    laplace_numeric(|s| kernel_f64(2.0 * s, s), p, 2.0, cut, spec)
}

/// Mixed-difference residual of `∂_u ∂_s̄ ⟨u+s̄ u⟩ = ⟨u+s̄ u⟩`.
pub fn mixed_pde_residual(u: f64, sbar: f64, h: f64) -> Result<f64> {
    if !(u - h >= 0.0 && sbar - h >= 0.0 && h > 0.0) {
        return domain(format!("probe ({u}, {sbar}) too close to the boundary for h = {h}"));
    }
    let f = |a: f64, b: f64| kernel_f64(a + b, a);
    let mixed = (f(u + h, sbar + h) - f(u + h, sbar - h) - f(u - h, sbar + h) + f(u - h, sbar - h))
        / (4.0 * h * h);
    Ok(mixed - f(u, sbar))
}

/// `G_m(w) = Σ_k w^k/(k!(k+m)!) = w^{−m/2} I_m(2√w)`.
fn g_series(m: u32, w: f64) -> f64 {
    if w <= 300.0 {
        let mut term = 1.0 / (1..=m).fold(1.0, |acc, j| acc * j as f64);
        let mut sum = NeumaierSum::new();
        for k in 0..400 {
            sum.add(term);
            let k1 = (k + 1) as f64;
            term *= w / (k1 * (k1 + m as f64));
            if term < 1e-18 * sum.value() {
                break;
            }
        }
        sum.value()
    } else {
        bessel_int(m, 2.0 * w.sqrt())
            .shift_exp(-0.5 * m as f64 * w.ln())
            .to_f64()
    }
}

/// `∂^j/∂s̄^j ⟨x+s̄ s̄⟩`, exact.
///
/// Writing `⟨x+s̄ s̄⟩ = 2G₀(s̄x) + (x+s̄)G₁(s̄x)` and using `G_m′ = G_{m+1}`,
/// the `j`-th derivative is `2x^j G_j + (x+s̄)x^j G_{j+1} + j x^{j−1} G_j`.
pub fn cbinom_sbar_derivative(x: f64, sbar: f64, j: u32) -> f64 {
    let w = sbar * x;
    let gj = g_series(j, w);
    let gj1 = g_series(j + 1, w);
    let xj = x.powi(j as i32);
    let lower = if j == 0 { 0.0 } else { j as f64 * x.powi(j as i32 - 1) * gj };
    2.0 * xj * gj + (x + sbar) * xj * gj1 + lower
}

/// `(1 + ∂/∂s̄)^k ⟨x+s̄ s̄⟩` by the binomial expansion of the operator.
pub fn shifted_operator(x: f64, sbar: f64, k: u32) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for j in 0..=k {
        total += binom * cbinom_sbar_derivative(x, sbar, j);
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    total
}

/// Residual of
/// `⟨x+s₁ s₁⟩∗⟨x+s₂ s₂⟩ + ⟨x+s₁ s₁⟩ + ⟨x+s₂ s₂⟩ = (1+∂/∂s̄)²⟨x+s̄ s̄⟩`
/// at `s̄ = s₁ + s₂`, with the `s̄`-derivatives taken by central
/// differences of step `h`. When `s̄ < 2h` the differences become one-sided
/// (second order) so that no negative `s̄` is evaluated.
pub fn chu_vandermonde_residual(x: f64, s1: f64, s2: f64, h: f64) -> Result<f64> {
    if !(x > 0.0 && s1 >= 0.0 && s2 >= 0.0 && h > 0.0) {
        return domain(format!("need x > 0, s₁, s₂ >= 0, h > 0 (got {x}, {s1}, {s2}, {h})"));
    }
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-12);
    let a = |u: f64| kernel_f64(u + s1, s1);
    let b = |u: f64| kernel_f64(u + s2, s2);
    let conv = integrate(|u| a(u) * b(x - u), 0.0, x, spec)?.value;
    let lhs = conv + a(x) + b(x);

    let sbar = s1 + s2;
    let f = |t: f64| kernel_f64(x + t, t);
    let (d1, d2) = if sbar >= 2.0 * h {
        (
            central_diff(f, sbar, Derivative::First, h),
            central_diff(f, sbar, Derivative::Second, h),
        )
    } else {
        let v: Vec<f64> = (0..4).map(|i| f(sbar + i as f64 * h)).collect();
        (
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h),
            (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h),
        )
    };
    let rhs = f(sbar) + 2.0 * d1 + d2;
    Ok(lhs - rhs)
}

/// Residual of the `P`-fold identity
/// `∗_i (⟨x+s_i s_i⟩ + δ) = (1 + ∂/∂s̄)^{2P−2} ⟨x+s̄ s̄⟩ + δ`, `s̄ = Σ s_i`,
/// for `P ∈ {2, 3}`. The left side is expanded over subsets and computed by
/// nested quadrature; the right side uses exact `s̄`-derivatives.
pub fn chu_vandermonde_fold_residual(x: f64, s: &[f64]) -> Result<f64> {
    if !(x > 0.0) || s.iter().any(|&v| !(v >= 0.0)) {
        return domain(format!("need x > 0 and s_i >= 0 (got x = {x}, s = {s:?})"));
    }
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-12);
    let f = |i: usize, u: f64| kernel_f64(u + s[i], s[i]);
    let pair = |i: usize, j: usize, z: f64| -> Result<f64> {
        Ok(integrate(|u| f(i, u) * f(j, z - u), 0.0, z, spec)?.value)
    };
    let lhs = match s.len() {
        2 => pair(0, 1, x)? + f(0, x) + f(1, x),
        3 => {
            let inner_spec = spec.with_tolerances(1e-13, 1e-13);
            let triple = integrate(
                |u| {
                    let inner = integrate(|v| f(0, v) * f(1, u - v), 0.0, u, inner_spec)
                        .map(|r| r.value)
                        .unwrap_or(f64::NAN);
                    inner * f(2, x - u)
                },
                0.0,
                x,
                spec,
            )?
            .value;
            triple
                + pair(0, 1, x)?
                + pair(0, 2, x)?
                + pair(1, 2, x)?
                + f(0, x)
                + f(1, x)
                + f(2, x)
        }
        n => return domain(format!("fold identity checked for 2 or 3 factors, got {n}")),
    };
    let sbar: f64 = s.iter().sum();
    let k = 2 * s.len() as u32 - 2;
    Ok(lhs - shifted_operator(x, sbar, k))
}

/// A point mass at 0 plus a continuous part sampled on a uniform grid
/// `k·grid_step`, `k = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDensity {
    atom: f64,
    grid_step: f64,
    samples: Vec<f64>,
}

impl AtomDensity {
    pub fn new(atom: f64, grid_step: f64, samples: Vec<f64>) -> Result<Self> {
        if !(atom >= 0.0 && atom.is_finite()) {
            return domain(format!("atom weight must be finite and >= 0 (got {atom})"));
        }
        if !(grid_step > 0.0 && grid_step.is_finite()) {
            return domain(format!("grid step must be positive (got {grid_step})"));
        }
        if samples.len() < 2 {
            return domain("at least two grid samples are needed");
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return domain(format!("non-finite sample {bad}"));
        }
        Ok(Self {
            atom,
            grid_step,
            samples,
        })
    }

    /// Samples `f` on `[0, support]`; `support/step` is rounded to the
    /// nearest whole number of panels.
    pub fn from_fn<F: Fn(f64) -> f64>(atom: f64, grid_step: f64, support: f64, f: F) -> Result<Self> {
        if !(support > 0.0 && grid_step > 0.0) {
            return domain(format!("support and step must be positive (got {support}, {grid_step})"));
        }
        let n = (support / grid_step).round() as usize;
        let samples = (0..=n).map(|k| f(k as f64 * grid_step)).collect();
        Self::new(atom, grid_step, samples)
    }

    /// `δ + ⟨2s s⟩` on `[0, support]`.
    pub fn central_binomial(grid_step: f64, support: f64) -> Result<Self> {
        Self::from_fn(1.0, grid_step, support, |s| kernel_f64(2.0 * s, s))
    }

    pub fn atom(&self) -> f64 {
        self.atom
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn support(&self) -> f64 {
        self.grid_step * (self.samples.len() - 1) as f64
    }

    pub fn grid_point(&self, k: usize) -> f64 {
        k as f64 * self.grid_step
    }

    /// Continuous part at `s`, linearly interpolated; `None` off the grid.
    pub fn value_at(&self, s: f64) -> Option<f64> {
        if !(s >= 0.0 && s <= self.support()) {
            return None;
        }
        let pos = s / self.grid_step;
        let k = (pos.floor() as usize).min(self.samples.len() - 2);
        let t = pos - k as f64;
        Some(self.samples[k] * (1.0 - t) + self.samples[k + 1] * t)
    }
}

/// `(a·δ + f) ∗ (b·δ + g) = ab·δ + a g + b f + f ∗ g`, with `f ∗ g` by the
/// trapezoid rule on the shared grid.
pub fn convolve_atom_density(f: &AtomDensity, g: &AtomDensity) -> Result<AtomDensity> {
    let step = f.grid_step;
    if (g.grid_step - step).abs() > 1e-12 * step || f.samples.len() != g.samples.len() {
        return Err(Error::Config(format!(
            "atom-density grids differ: step {} vs {}, {} vs {} samples",
            f.grid_step,
            g.grid_step,
            f.samples.len(),
            g.samples.len()
        )));
    }
    let (fs, gs) = (&f.samples, &g.samples);
    let samples = (0..fs.len())
        .map(|k| {
            let mut acc = 0.0;
            if k > 0 {
                let mut sum = 0.0;
                for j in 0..=k {
                    sum += fs[j] * gs[k - j];
                }
                acc = step * (sum - 0.5 * (fs[0] * gs[k] + fs[k] * gs[0]));
            }
            f.atom * gs[k] + g.atom * fs[k] + acc
        })
        .collect();
    AtomDensity::new(f.atom * g.atom, step, samples)
}

/// Largest relative deviation between `(δ + ⟨2s s⟩)^{∗2n}` and
/// `δ + 4e^{2s} L_{n−1}^{(1)}(−4s)` on `[0, support/2]`.
pub fn laguerre_convolution_check(n: u32, support: f64, step: f64) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return domain(format!("Laguerre convolution check supports n in 1..=3 (got {n})"));
    }
    let base = AtomDensity::central_binomial(step, support)?;
    let mut acc = base.clone();
    for _ in 1..2 * n {
        acc = convolve_atom_density(&acc, &base)?;
    }
    let mut worst = (acc.atom - 1.0).abs();
    let half = 0.5 * acc.support();
    for (k, &v) in acc.samples.iter().enumerate() {
        let s = acc.grid_point(k);
        if s > half + 0.5 * step {
            break;
        }
        let want = 4.0 * (2.0 * s).exp() * laguerre_assoc(n - 1, 1, -4.0 * s)?;
        worst = worst.max(((v - want) / want).abs());
    }
    Ok(worst)
}

/// Largest relative difference between
/// `(δ + ⟨x+s₁ s₁⟩) ∗ (δ + ⟨x+s₂ s₂⟩)` and the same convolution with both
/// parameters replaced by `(s₁+s₂)/2`, over the grid on `[0, support]`.
pub fn rebalancing_residual(s1: f64, s2: f64, support: f64, step: f64) -> Result<f64> {
    if !(s1 >= 0.0 && s2 >= 0.0) {
        return domain(format!("need s₁, s₂ >= 0 (got {s1}, {s2})"));
    }
    let build = |s: f64| AtomDensity::from_fn(1.0, step, support, move |x| kernel_f64(x + s, s));
    let uneven = convolve_atom_density(&build(s1)?, &build(s2)?)?;
    let mid = 0.5 * (s1 + s2);
    let even = convolve_atom_density(&build(mid)?, &build(mid)?)?;
    let worst = uneven
        .samples
        .iter()
        .zip(&even.samples)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold((uneven.atom - even.atom).abs(), f64::max);
    Ok(worst)
}
