//! Adaptive Gauss-Kronrod integration and the numerical helpers built on it:
//! finite-interval convolution, truncated Laplace transforms and central
//! finite differences.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::special::NeumaierSum;

/// Kronrod nodes on `[0, 1]`; odd indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// 7-point Gauss weights; the last entry belongs to the centre.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Hard cap on the number of bisections in one adaptive run.
const MAX_SUBDIVISIONS: usize = 50_000;

/// Tolerances and endpoint hints for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// The integrand behaves like `1/√(u − a)` near the left endpoint.
    pub singular_left: bool,
    /// The integrand behaves like `1/√(b − u)` near the right endpoint.
    pub singular_right: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 30,
            singular_left: false,
            singular_right: false,
        }
    }
}

impl QuadratureSpec {
    pub const MIN_TOL: f64 = 1e-14;
    pub const MAX_DEPTH: u32 = 60;

    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_depth,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..self
        }
    }

    pub fn singular(self, left: bool, right: bool) -> Self {
        Self {
            singular_left: left,
            singular_right: right,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        // written so that NaN tolerances are rejected too
        if !(self.abs_tol >= Self::MIN_TOL && self.rel_tol >= Self::MIN_TOL) {
            return Err(Error::Config(format!(
                "tolerances must be >= {:e} (got abs {}, rel {})",
                Self::MIN_TOL,
                self.abs_tol,
                self.rel_tol
            )));
        }
        if self.max_depth == 0 || self.max_depth > Self::MAX_DEPTH {
            return Err(Error::Config(format!(
                "max_depth must lie in [1, {}] (got {})",
                Self::MAX_DEPTH,
                self.max_depth
            )));
        }
        Ok(())
    }

    #[cfg(test)]
    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

struct Panel {
    value: f64,
    error: f64,
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut left = [0.0; 7];
    let mut right = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(centre - dx), f(centre + dx));
        left[j] = f1;
        right[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((left[j] - mean).abs() + (right[j] - mean).abs());
    }
    let scale = half.abs();
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel {
        value: res_k * half,
        error,
    }
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection: always refine the panel with the largest
/// error estimate.
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<IntegralResult> {
    if a == b {
        return Ok(IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    let first = kronrod15(f, a, b);
    if !first.value.is_finite() {
        return domain(format!("integrand is not finite on [{a}, {b}]"));
    }
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Interval> = Vec::new();
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(Interval {
        a,
        b,
        value: first.value,
        error: first.error,
        depth: 0,
    });
    let mut subdivisions = 0;
    let target = |v: f64| abs_tol.max(rel_tol * v.abs());
    while total_err > target(total) {
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a || mid >= worst.b;
        if worst.depth >= max_depth || too_narrow || subdivisions >= MAX_SUBDIVISIONS {
            frozen.push(worst);
            continue;
        }
        let l = kronrod15(f, worst.a, mid);
        let r = kronrod15(f, mid, worst.b);
        if !(l.value.is_finite() && r.value.is_finite()) {
            return domain(format!("integrand is not finite on [{}, {}]", worst.a, worst.b));
        }
        subdivisions += 1;
        total += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        for (lo, hi, p) in [(worst.a, mid, l), (mid, worst.b, r)] {
            heap.push(Interval {
                a: lo,
                b: hi,
                value: p.value,
                error: p.error,
                depth: worst.depth + 1,
            });
        }
    }
    // re-sum to shed the drift from the incremental updates
    let mut value = NeumaierSum::new();
    let mut error = 0.0;
    for iv in heap.iter().chain(frozen.iter()) {
        value.add(iv.value);
        error += iv.error;
    }
    let value = value.value();
    if error > target(value) {
        return Err(Error::Convergence {
            value,
            error_estimate: error,
            subdivisions,
        });
    }
    Ok(IntegralResult {
        value,
        error_estimate: error,
        subdivisions,
    })
}

/// `∫_a^b f(u) du`.
///
/// When a singular flag is set the endpoint is removed by `u = a + v²`
/// (or `u = b − v²`), which turns a `1/√·` endpoint into a smooth integrand.
/// With both flags set the interval is split at its midpoint first.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return domain(format!("integration limits must be finite (got [{a}, {b}])"));
    }
    if a > b {
        return domain(format!("integration limits out of order: {a} > {b}"));
    }
    let QuadratureSpec {
        abs_tol,
        rel_tol,
        max_depth,
        singular_left,
        singular_right,
    } = spec;
    let left_sub = |lo: f64, hi: f64, tol: f64| {
        let g = |v: f64| {
            if v == 0.0 {
                0.0
            } else {
                2.0 * v * f(lo + v * v)
            }
        };
        adaptive(&g, 0.0, (hi - lo).sqrt(), tol, rel_tol, max_depth)
    };
    let right_sub = |lo: f64, hi: f64, tol: f64| {
        let g = |v: f64| {
            if v == 0.0 {
                0.0
            } else {
                2.0 * v * f(hi - v * v)
            }
        };
        adaptive(&g, 0.0, (hi - lo).sqrt(), tol, rel_tol, max_depth)
    };
    match (singular_left, singular_right) {
        (false, false) => adaptive(&f, a, b, abs_tol, rel_tol, max_depth),
        (true, false) => left_sub(a, b, abs_tol),
        (false, true) => right_sub(a, b, abs_tol),
        (true, true) => {
            let mid = 0.5 * (a + b);
            let l = left_sub(a, mid, 0.5 * abs_tol)?;
            let r = right_sub(mid, b, 0.5 * abs_tol)?;
            Ok(IntegralResult {
                value: l.value + r.value,
                error_estimate: l.error_estimate + r.error_estimate,
                subdivisions: l.subdivisions + r.subdivisions,
            })
        }
    }
}

/// `(f ∗ g)(z) = ∫_0^z f(u) g(z − u) du`.
pub fn convolve_at<F, G>(f: F, g: G, z: f64, spec: QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(z >= 0.0) {
        return domain(format!("convolution point must be >= 0 (got {z})"));
    }
    Ok(integrate(|u| f(u) * g(z - u), 0.0, z, spec)?.value)
}

/// `∫_0^{tail_cut} e^{−pw} f(w) dw`.
///
/// `sigma` is the caller's growth rate, `|f(w)| ≤ K e^{σw}`. The neglected
/// tail is then at most `K e^{(σ−p)·tail_cut}/(p − σ)`; callers size
/// `tail_cut` with [`exponential_tail_cut`] or an equivalent bound.
pub fn laplace_numeric<F>(f: F, p: f64, sigma: f64, tail_cut: f64, spec: QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(p > sigma) {
        return Err(Error::Divergence(format!(
            "Laplace transform needs p > σ (p = {p}, σ = {sigma})"
        )));
    }
    if !(tail_cut > 0.0) {
        return domain(format!("tail cut must be positive (got {tail_cut})"));
    }
    Ok(integrate(|w| (-p * w).exp() * f(w), 0.0, tail_cut, spec)?.value)
}

/// Smallest `T` with `K e^{(σ−p)T}/(p − σ) ≤ tol`.
pub fn exponential_tail_cut(k: f64, sigma: f64, p: f64, tol: f64) -> Result<f64> {
    if !(p > sigma) {
        return Err(Error::Divergence(format!(
            "no finite tail cut for p = {p} <= σ = {sigma}"
        )));
    }
    let gap = p - sigma;
    Ok((k / (gap * tol)).ln().max(0.0) / gap)
}

/// Derivative order for [`central_diff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    First,
    Second,
}

/// Second-order accurate central difference.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, order: Derivative, h: f64) -> f64 {
    match order {
        Derivative::First => (f(x + h) - f(x - h)) / (2.0 * h),
        Derivative::Second => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
    }
}
