//! Continuous Catalan numbers
//! `C(x, y) = Σ_n vol Λⁿ(x, y) = I₀(r) − ((x−y)/(x+y)) I₂(r)`, `r = √(x² − y²)`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{exponential_tail_cut, integrate, laplace_numeric, QuadratureSpec};
use crate::special::{bessel_int, ScaledValue};

/// A validated pair `0 ≤ y ≤ x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalanPoint {
    x: f64,
    y: f64,
}

impl CatalanPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || !(0.0 <= y && y <= x) {
            return domain(format!("continuous Catalan needs 0 <= y <= x (got x = {x}, y = {y})"));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// `C(x, y)`; `C(0, 0) = 1`.
pub fn catalan(pt: CatalanPoint) -> f64 {
    catalan_scaled(pt).to_f64()
}

/// `C(x, y)` in scaled form.
///
/// Evaluated as `2I₁(r)/r + (2y/(x+y)) I₂(r)`, which equals the closed form
/// through `I₀ − I₂ = 2I₁/r` and has no cancellation.
pub fn catalan_scaled(pt: CatalanPoint) -> ScaledValue {
    kernel(pt.x, pt.y)
}

pub(crate) fn kernel(x: f64, y: f64) -> ScaledValue {
    let r = ((x - y) * (x + y)).max(0.0).sqrt();
    if r < 1e-150 {
        return ScaledValue::ONE;
    }
    let head = bessel_int(1, r).scale(2.0 / r);
    if y == 0.0 {
        return head;
    }
    head + bessel_int(2, r).scale(2.0 * y / (x + y))
}

pub(crate) fn kernel_f64(x: f64, y: f64) -> f64 {
    kernel(x, y).to_f64()
}

/// `C(x, 0) = 2 I₁(x)/x`.
fn c0(x: f64) -> f64 {
    kernel_f64(x, 0.0)
}

/// `vol Λⁿ(x, y) = (x−y)ⁿ(x+y)^{n−1}(x+(2n+1)y) / (4ⁿ n! (n+1)!)`.
pub fn polytope_volume(n: u32, pt: CatalanPoint) -> f64 {
    let CatalanPoint { x, y } = pt;
    if n == 0 {
        return 1.0;
    }
    if x + y == 0.0 {
        return 0.0;
    }
    let q = (x - y) * (x + y) / 4.0;
    let mut v = 1.0;
    for k in 1..=n {
        v *= q / (k as f64 * (k + 1) as f64);
    }
    v * (x + (2 * n + 1) as f64 * y) / (x + y)
}

fn inner_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tolerances(1e-13, 1e-13)
}

/// `∬ f(a + 2b, a) da db` over `0 ≤ b ≤ (x−y)/2`, `0 ≤ a ≤ (x+y)/2 − b`.
fn simplex_integral<F: Fn(f64, f64) -> f64>(f: F, pt: CatalanPoint) -> Result<f64> {
    let CatalanPoint { x, y } = pt;
    let b_max = 0.5 * (x - y);
    if b_max <= 0.0 {
        return Ok(0.0);
    }
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-12);
    let outer = integrate(
        |b| {
            let a_max = 0.5 * (x + y) - b;
            integrate(|a| f(a + 2.0 * b, a), 0.0, a_max.max(0.0), inner_spec())
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        },
        0.0,
        b_max,
        spec,
    )?;
    if !outer.value.is_finite() {
        return Err(Error::Convergence {
            value: outer.value,
            error_estimate: outer.error_estimate,
            subdivisions: outer.subdivisions,
        });
    }
    Ok(outer.value)
}

/// `vol Λ^{n+1}(x, y) − ∬ vol Λⁿ(a+2b, a)`.
pub fn volume_recurrence_residual(n: u32, pt: CatalanPoint) -> Result<f64> {
    if n > 5 {
        return domain(format!("volume recurrence is checked for n <= 5 (got {n})"));
    }
    let rhs = simplex_integral(|u, v| polytope_volume(n, CatalanPoint { x: u, y: v }), pt)?;
    Ok(polytope_volume(n + 1, pt) - rhs)
}

/// `C(x, y) − 1 − ∬ C(a+2b, a)`.
pub fn catalan_recursion_residual(pt: CatalanPoint) -> Result<f64> {
    let rhs = simplex_integral(kernel_f64, pt)?;
    Ok(catalan(pt) - 1.0 - rhs)
}

/// `(C ∗ C)(z) − 4 C′(z)` with `C = C(·, 0)` and `C′(z) = 2 I₂(z)/z`.
pub fn catalan_convolution_residual(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return domain(format!("convolution point must be positive (got {z})"));
    }
    let spec = QuadratureSpec::default().with_tolerances(1e-13, 1e-12);
    let conv = crate::quadrature::convolve_at(c0, c0, z, spec)?;
    Ok(conv - 4.0 * catalan_derivative(z))
}

/// `d/dx C(x, 0) = 2 I₂(x)/x`.
pub fn catalan_derivative(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    bessel_int(2, x).scale(2.0 / x).to_f64()
}

/// `∫_0^∞ e^{−sx} C(x, 0) dx = 2/(s + √(s² − 1))`.
pub fn catalan_laplace(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Divergence(format!(
            "Laplace transform of C(·, 0) needs s > 1 (got {s})"
        )));
    }
    Ok(2.0 / (s + (s * s - 1.0).sqrt()))
}

/// Numerical Laplace transform of `C(·, 0)`, using `C(x, 0) ≤ eˣ`.
pub fn catalan_laplace_numeric(s: f64, spec: QuadratureSpec) -> Result<f64> {
    let cut = exponential_tail_cut(1.0, 1.0, s, 0.01 * spec.abs_tol)?;
    laplace_numeric(c0, s, 1.0, cut, spec)
}

/// `(1/π) ∫_0^π e^{x cos t}[cos(y sin t) − ρ² cos(y sin t − 2t)] dt`,
/// `ρ = (x−y)/(x+y)`.
pub fn schlafli_catalan(pt: CatalanPoint) -> Result<f64> {
    let CatalanPoint { x, y } = pt;
    if x + y == 0.0 {
        return domain("integral representation is undefined at x = y = 0");
    }
    let rho = (x - y) / (x + y);
    let rho2 = rho * rho;
    // the integrand reaches e^x while the integral stays O(C), so the
    // attainable relative accuracy degrades like e^x/C(x, y)
    let spec = QuadratureSpec::default().with_tolerances(1e-11, 1e-11);
    let r = integrate(
        |t: f64| {
            let phase = y * t.sin();
            (x * t.cos()).exp() * (phase.cos() - rho2 * (phase - 2.0 * t).cos())
        },
        0.0,
        PI,
        spec,
    )?;
    Ok(r.value / PI)
}

/// `E e^{xZ}` for `Z` with density `(2/π)√(1 − z²)` on `[−1, 1]`.
pub fn semicircle_mgf(x: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return domain(format!("semicircle MGF needs finite x >= 0 (got {x})"));
    }
    let spec = QuadratureSpec::default()
        .with_tolerances(1e-13, 1e-13)
        .singular(true, true);
    let r = integrate(
        |z: f64| (x * z).exp() * (1.0 - z * z).max(0.0).sqrt(),
        -1.0,
        1.0,
        spec,
    )?;
    Ok(2.0 / PI * r.value)
}

/// `2/(1 + √(1 − 4x)) = Σ Cₙ xⁿ`.
pub fn catalan_gf(x: f64) -> Result<f64> {
    if !(x < 0.25) {
        return Err(Error::Divergence(format!("Catalan generating function needs x < 1/4 (got {x})")));
    }
    Ok(2.0 / (1.0 + (1.0 - 4.0 * x).sqrt()))
}

/// `∫_0^∞ e^{−u} C(2√x u, 0) du`, which equals [`catalan_gf`] for
/// `0 < x < 1/4`. Tail bound from `C(v, 0) ≤ eᵛ`.
pub fn catalan_gf_bridge(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("bridge integral needs x > 0 (got {x})"));
    }
    if !(x < 0.25) {
        return Err(Error::Divergence(format!("bridge integral diverges for x >= 1/4 (got {x})")));
    }
    let sigma = 2.0 * x.sqrt();
    let spec = QuadratureSpec::default().with_tolerances(1e-12, 1e-12);
    let cut = exponential_tail_cut(1.0, sigma, 1.0, 1e-14)?;
    laplace_numeric(|u| c0(sigma * u), 1.0, sigma, cut, spec)
}

/// Test functions `Φ` with known Laplace transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiFamily {
    /// `Φ(y) = e^{−a y}`.
    Exp(f64),
    /// `Φ(y) = 1`.
    One,
    /// `Φ(y) = 0`.
    Zero,
}

impl PhiFamily {
    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            PhiFamily::Exp(a) => (-a * y).exp(),
            PhiFamily::One => 1.0,
            PhiFamily::Zero => 0.0,
        }
    }

    /// `Φ̃(q) = ∫_0^∞ e^{−qy} Φ(y) dy`.
    pub fn laplace(&self, q: f64) -> f64 {
        match *self {
            PhiFamily::Exp(a) => 1.0 / (q + a),
            PhiFamily::One => 1.0 / q,
            PhiFamily::Zero => 0.0,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "exp" => Ok(PhiFamily::Exp(1.0)),
            "one" | "indicator" => Ok(PhiFamily::One),
            "zero" => Ok(PhiFamily::Zero),
            _ => Err(Error::Config(format!("unknown Φ family '{name}' (use exp, one, zero)"))),
        }
    }
}

/// Laplace transform of `I_Φ(x) = ∫_0^x C(x, y) Φ(y) dy` in closed form:
/// `2 Φ̃(q)/(p + q)` with `q = √(p² − 1)`.
pub fn iphi_laplace(phi: PhiFamily, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Divergence(format!("needs p > 1 (got {p})")));
    }
    let q = (p * p - 1.0).sqrt();
    Ok(2.0 * phi.laplace(q) / (p + q))
}

/// Numerical Laplace transform of `I_Φ`.
///
/// `C(x, y) ≤ 2eˣ` and `|Φ| ≤ 1` give `|I_Φ(x)| ≤ 2x eˣ`; the tail past `T`
/// is below `2e^{−(p−1)T}(T/(p−1) + 1/(p−1)²)`.
pub fn iphi_laplace_numeric(phi: PhiFamily, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Divergence(format!("needs p > 1 (got {p})")));
    }
    if phi == PhiFamily::Zero {
        return Ok(0.0);
    }
    let gap = p - 1.0;
    let tol = 1e-13;
    let mut cut = 1.0;
    for _ in 0..50 {
        cut = ((2.0 * (cut / gap + 1.0 / (gap * gap))) / tol).ln() / gap;
    }
    let spec = QuadratureSpec::default().with_tolerances(1e-11, 1e-11);
    let inner = inner_spec();
    laplace_numeric(
        |x| {
            integrate(|y| kernel_f64(x, y) * phi.eval(y), 0.0, x, inner)
                .map(|r| r.value)
                .unwrap_or(f64::NAN)
        },
        p,
        1.0,
        cut,
        spec,
    )
}

/// Numerical minus closed-form Laplace transform of `I_Φ`.
pub fn iphi_laplace_check(phi: PhiFamily, p: f64) -> Result<f64> {
    Ok(iphi_laplace_numeric(phi, p)? - iphi_laplace(phi, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> CatalanPoint {
        CatalanPoint::new(x, y).unwrap()
    }

    fn volume_series(p: CatalanPoint) -> f64 {
        (0..=40).map(|n| polytope_volume(n, p)).sum()
    }

    #[test]
    fn diagonal_is_one() {
        for x in [0.0, 0.3, 2.0, 17.0] {
            assert_eq!(catalan(pt(x, x)), 1.0);
        }
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(CatalanPoint::new(1.0, 2.0).is_err());
        assert!(CatalanPoint::new(1.0, -0.5).is_err());
    }

    #[test]
    fn spot_values() {
        // I₁(2) from the 40-digit reference e^{-2} I₁(2)
        let i1 = 0.21526928924893765916 * 2f64.exp();
        assert!((catalan(pt(2.0, 0.0)) / i1 - 1.0).abs() < 1e-14);
        assert!((catalan(pt(2.0, 0.0)) - 1.590637).abs() < 1e-6);
        assert!((catalan(pt(2.0, 1.0)) - 1.74357904538324365).abs() < 1e-14);
        let direct = {
            let r = 3f64.sqrt();
            bessel_int(0, r).to_f64() - bessel_int(2, r).to_f64() / 3.0
        };
        assert!((catalan(pt(2.0, 1.0)) - direct).abs() < 1e-14);
        assert!((catalan(pt(2.0, 1.0)) - volume_series(pt(2.0, 1.0))).abs() < 1e-14);
    }

    #[test]
    fn volumes() {
        assert_eq!(polytope_volume(0, pt(3.0, 1.0)), 1.0);
        assert_eq!(polytope_volume(0, pt(0.0, 0.0)), 1.0);
        assert!((polytope_volume(1, pt(2.0, 0.0)) - 0.5).abs() < 1e-15);
        assert_eq!(polytope_volume(2, pt(1.0, 1.0)), 0.0);
        assert_eq!(polytope_volume(3, pt(0.0, 0.0)), 0.0);
    }

    #[test]
    fn volume_recurrence() {
        for (n, x, y) in [(0, 2.0, 0.5), (1, 1.0, 0.0), (2, 1.5, 0.3), (0, 1.2, 1.2)] {
            let r = volume_recurrence_residual(n, pt(x, y)).unwrap();
            assert!(r.abs() < 1e-9, "n={n} ({x}, {y}): {r}");
        }
        assert!(volume_recurrence_residual(6, pt(1.0, 0.0)).is_err());
    }

    #[test]
    fn catalan_recursion() {
        for (x, y) in [(1.0, 0.0), (2.0, 1.0), (1.3, 1.3), (3.0, 0.4)] {
            let r = catalan_recursion_residual(pt(x, y)).unwrap();
            assert!(r.abs() < 1e-8, "({x}, {y}): {r}");
        }
    }

    #[test]
    fn convolution_identity() {
        for z in [1e-3, 0.5, 1.0, 4.0] {
            let r = catalan_convolution_residual(z).unwrap();
            assert!(r.abs() < 1e-8, "z={z}: {r}");
        }
    }

    #[test]
    fn laplace_transform() {
        assert!((catalan_laplace(2.0).unwrap() - 0.535898).abs() < 1e-6);
        // 2/(1.5 + √1.25) = 3 − √5
        assert!((catalan_laplace(1.5).unwrap() - 0.76393202250021030).abs() < 1e-15);
        let big = catalan_laplace(1e6).unwrap();
        assert!((big * 1e6 - 1.0).abs() < 1e-6);
        assert!(catalan_laplace(1.0).is_err());
        for s in [1.5, 2.0, 3.0] {
            let num = catalan_laplace_numeric(s, QuadratureSpec::default()).unwrap();
            assert!((num - catalan_laplace(s).unwrap()).abs() < 1e-6, "s={s}");
        }
    }

    #[test]
    fn schlafli_representation() {
        for (x, y) in [(2.0, 0.0), (2.0, 1.0), (3.0, 3.0)] {
            let v = schlafli_catalan(pt(x, y)).unwrap();
            assert!((v - catalan(pt(x, y))).abs() < 1e-9, "({x}, {y})");
        }
        assert!((schlafli_catalan(pt(3.0, 3.0)).unwrap() - 1.0).abs() < 1e-9);
        assert!(schlafli_catalan(pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn schlafli_grid() {
        let xs = [0.4, 1.0, 2.5, 4.0, 6.0];
        for &x in &xs {
            for j in 0..5 {
                let y = x * j as f64 / 4.0;
                let v = schlafli_catalan(pt(x, y)).unwrap();
                let c = catalan(pt(x, y));
                assert!((v - c).abs() < 1e-9, "({x}, {y}): {v} vs {c}");
            }
        }
    }

    #[test]
    fn semicircle() {
        assert!((semicircle_mgf(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((semicircle_mgf(2.0).unwrap() - 1.590637).abs() < 1e-6);
        assert!((semicircle_mgf(2.0).unwrap() - catalan(pt(2.0, 0.0))).abs() < 1e-9);
        // 2 I₁(5)/5 by its ascending series
        let series: f64 = (0..60i32)
            .map(|k| {
                let lf = |n: i32| (1..=n).map(|j| (j as f64).ln()).sum::<f64>();
                (((2 * k + 1) as f64) * 2.5f64.ln() - lf(k) - lf(k + 1)).exp()
            })
            .sum::<f64>()
            * 2.0
            / 5.0;
        assert!((semicircle_mgf(5.0).unwrap() - series).abs() < 1e-9);
        assert!((series - 9.7342568569802109).abs() < 1e-12);
    }

    #[test]
    fn generating_function_bridge() {
        assert!((catalan_gf_bridge(0.1).unwrap() - 1.127017).abs() < 1e-6);
        assert!((catalan_gf_bridge(0.1).unwrap() - 1.12701665379258312).abs() < 1e-10);
        assert!((catalan_gf_bridge(0.2).unwrap() - 1.381966).abs() < 1e-6);
        let tiny = catalan_gf_bridge(1e-6).unwrap();
        assert!((tiny - 1.0).abs() < 2e-6);
        for x in [0.05, 0.1, 0.2] {
            assert!((catalan_gf_bridge(x).unwrap() - catalan_gf(x).unwrap()).abs() < 1e-6);
        }
        assert!(matches!(catalan_gf_bridge(0.25), Err(Error::Divergence(_))));
    }

    #[test]
    fn iphi_transform() {
        assert!((iphi_laplace(PhiFamily::Exp(1.0), 2.0).unwrap() - 0.196152422706631880).abs() < 1e-15);
        assert!((iphi_laplace(PhiFamily::One, 3.0).unwrap() - 0.121320343559642573).abs() < 1e-15);
        let r = iphi_laplace_check(PhiFamily::Exp(1.0), 2.0).unwrap();
        assert!(r.abs() < 1e-5, "{r}");
        let r = iphi_laplace_check(PhiFamily::One, 3.0).unwrap();
        assert!(r.abs() < 1e-5, "{r}");
        assert_eq!(iphi_laplace_check(PhiFamily::Zero, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn iphi_kernel_is_catalan_transform() {
        // with Φ̃ ≡ 1 the closed form collapses to L_C(p)
        let p = 2.5;
        let q = (p * p - 1.0f64).sqrt();
        assert!((2.0 / (p + q) - catalan_laplace(p).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn alternative_bracket_sign_does_not_match() {
        // (2p/(p+q))·Φ̃(q)/q is not the transform of I_Φ
        let p = 2.0;
        let q = (p * p - 1.0f64).sqrt();
        let other = 2.0 * p / (p + q) * PhiFamily::Exp(1.0).laplace(q) / q;
        let num = iphi_laplace_numeric(PhiFamily::Exp(1.0), p).unwrap();
        assert!((num - other).abs() > 1e-2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn bessel_reduction_on_axis(x in 1e-6f64..50.0) {
            let c = catalan(pt(x, 0.0));
            let want = (bessel_int(0, x) - bessel_int(2, x)).to_f64();
            prop_assert!((c / want - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn series_matches_closed_form(x in 0.0f64..5.0, t in 0.0f64..=1.0) {
            let p = pt(x, t * x);
            prop_assert!((catalan(p) - volume_series(p)).abs() <= 1e-10 * catalan(p).max(1.0));
        }

        #[test]
        fn nondecreasing_in_x(y in 0.0f64..5.0, d in 0.0f64..3.0, e in 0.0f64..3.0) {
            let (lo, hi) = (y + d, y + d + e);
            prop_assert!(catalan(pt(hi, y)) >= catalan(pt(lo, y)) * (1.0 - 1e-14));
        }
    }
}
