use std::f64::consts::PI;

use super::gamma::{gamma_half, ln_gamma_half};
use super::scaled::ScaledValue;
use super::sum::NeumaierSum;
use crate::error::{domain, Result};

/// Argument above which integer orders switch from the ascending power
/// series to the large-argument expansion. Both branches agree to better
/// than `1e-12` relative on `[30, 40]`.
pub const SERIES_SWITCH: f64 = 35.0;

const MAX_SERIES_TERMS: usize = 2000;

/// Order `ν = twice_nu / 2` of a modified Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BesselOrder {
    twice_nu: i32,
}

impl BesselOrder {
    /// Largest supported `2ν`.
    pub const MAX_TWICE_NU: i32 = 41;

    pub const ZERO: BesselOrder = BesselOrder { twice_nu: 0 };
    pub const ONE: BesselOrder = BesselOrder { twice_nu: 2 };
    pub const TWO: BesselOrder = BesselOrder { twice_nu: 4 };

    pub fn new(twice_nu: i32) -> Result<Self> {
        if !(-1..=Self::MAX_TWICE_NU).contains(&twice_nu) {
            return domain(format!(
                "Bessel order 2ν = {twice_nu} outside [-1, {}]",
                Self::MAX_TWICE_NU
            ));
        }
        Ok(Self { twice_nu })
    }

    /// Integer order `n`.
    pub fn integer(n: u32) -> Result<Self> {
        match i32::try_from(n).ok().and_then(|n| n.checked_mul(2)) {
            Some(t) => Self::new(t),
            None => domain(format!("Bessel order {n} too large")),
        }
    }

    pub fn twice_nu(&self) -> i32 {
        self.twice_nu
    }

    pub fn nu(&self) -> f64 {
        self.twice_nu as f64 / 2.0
    }

    pub fn is_half_integer(&self) -> bool {
        self.twice_nu % 2 != 0
    }

    /// Switch point between the power series and the large-argument form.
    /// High orders need `z ≳ ν²` before the expansion behaves.
    fn series_switch(&self) -> f64 {
        let nu = self.nu();
        SERIES_SWITCH.max(nu * nu)
    }
}

/// Modified Bessel function of the first kind `I_ν(z)` for `z ≥ 0`.
///
/// Integer orders use the ascending series up to the switch point and the
/// Hankel expansion of `e^{-z} I_ν(z)` beyond. `ν = ±1/2` use the closed
/// `sinh`/`cosh` forms; other half-integer orders use the series for small
/// `z` and the terminating elementary form for large `z`.
pub fn bessel_i(order: BesselOrder, z: f64) -> Result<ScaledValue> {
    if !z.is_finite() || z < 0.0 {
        return domain(format!("bessel_i: argument {z} must be finite and >= 0"));
    }
    if order.twice_nu.abs() == 1 {
        return half_order(order.twice_nu > 0, z);
    }
    if z == 0.0 {
        return Ok(if order.twice_nu == 0 {
            ScaledValue::ONE
        } else {
            ScaledValue::ZERO
        });
    }
    if z <= order.series_switch() {
        Ok(ScaledValue::from_f64(power_series(order, z, 0)))
    } else if order.is_half_integer() {
        Ok(terminating(order, z))
    } else {
        Ok(hankel(order.nu(), z))
    }
}

/// Integer-order shortcut for internal callers that have already validated
/// the argument.
pub(crate) fn bessel_int(n: u32, z: f64) -> ScaledValue {
    let order = BesselOrder::integer(n).expect("internal Bessel order within cap");
    bessel_i(order, z).unwrap_or_else(|e| panic!("I_{n}({z}): {e}"))
}

/// `Σ_{k ≥ skip} (z/2)^{2k+ν} / (k! Γ(k+ν+1))`.
///
/// `skip = 1` drops the leading term, which lets callers form
/// `I_ν(z) − (z/2)^ν/Γ(ν+1)` without cancellation.
pub(crate) fn power_series(order: BesselOrder, z: f64, skip: usize) -> f64 {
    let nu = order.nu();
    let half = 0.5 * z;
    let q = half * half;
    let mut term = leading_term(order, half);
    let mut sum = NeumaierSum::new();
    for k in 0..MAX_SERIES_TERMS {
        if k >= skip {
            sum.add(term);
        }
        let k1 = (k + 1) as f64;
        term *= q / (k1 * (k1 + nu));
        if term == 0.0 || (k1 > half && term <= 1e-18 * sum.value().abs()) {
            break;
        }
    }
    sum.value()
}

/// `(z/2)^ν / Γ(ν+1)`.
fn leading_term(order: BesselOrder, half: f64) -> f64 {
    let twice_gamma_arg = (order.twice_nu + 2) as u32;
    let nu = order.nu();
    let direct = half.powf(nu) / gamma_half(twice_gamma_arg).expect("ν + 1 > 0");
    if direct.is_finite() && direct != 0.0 {
        direct
    } else {
        let lg = ln_gamma_half(twice_gamma_arg).expect("ν + 1 > 0");
        (nu * half.ln() - lg).exp()
    }
}

/// Large-argument expansion
/// `I_ν(z) ≈ e^z/√(2πz) · Σ_k (−1)^k a_k(ν) / z^k`.
fn hankel(nu: f64, z: f64) -> ScaledValue {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = NeumaierSum::new();
    sum.add(term);
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (8.0 * k as f64 * z);
        if next.abs() > term.abs() {
            // past the optimal truncation point
            break;
        }
        term = next;
        if term == 0.0 {
            break;
        }
        sum.add(term);
        if term.abs() < 1e-18 * sum.value().abs() {
            break;
        }
    }
    ScaledValue::new(sum.value(), z - 0.5 * (2.0 * PI * z).ln())
}

/// Exact elementary form for `ν = n + 1/2`, `n ≥ 1`:
///
/// `I_ν(z) = [e^z Σ_k (−1)^k c_k/(2z)^k + (−1)^{n+1} e^{−z} Σ_k c_k/(2z)^k] / √(2πz)`
/// with `c_k = (n+k)!/(k!(n−k)!)`.
fn terminating(order: BesselOrder, z: f64) -> ScaledValue {
    let n = ((order.twice_nu - 1) / 2) as usize;
    let mut coeff = 1.0_f64;
    let mut alternating = NeumaierSum::new();
    let mut plain = NeumaierSum::new();
    let inv = 1.0 / (2.0 * z);
    let mut power = 1.0_f64;
    for k in 0..=n {
        let t = coeff * power;
        plain.add(t);
        alternating.add(if k % 2 == 0 { t } else { -t });
        coeff *= ((n + k + 1) * (n - k)) as f64 / (k + 1) as f64;
        power *= inv;
    }
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let mantissa = alternating.value() + sign * (-2.0 * z).exp() * plain.value();
    ScaledValue::new(mantissa, z - 0.5 * (2.0 * PI * z).ln())
}

/// `I_{1/2}(z) = √(2/(πz)) sinh z`, `I_{-1/2}(z) = √(2/(πz)) cosh z`.
fn half_order(positive: bool, z: f64) -> Result<ScaledValue> {
    if z == 0.0 {
        return if positive {
            Ok(ScaledValue::ZERO)
        } else {
            domain("I_{-1/2}(0) is infinite")
        };
    }
    if z < 20.0 {
        let hyperbolic = if positive { z.sinh() } else { z.cosh() };
        return Ok(ScaledValue::from_f64((2.0 / (PI * z)).sqrt() * hyperbolic));
    }
    let damped = if positive {
        -(-2.0 * z).exp_m1()
    } else {
        1.0 + (-2.0 * z).exp()
    };
    Ok(ScaledValue::new(damped, z - 0.5 * (2.0 * PI * z).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `e^{-z} I_ν(z)` from a 40-digit reference evaluation, as (2ν, z, value).
    const SCALED_REFERENCE: &[(i32, f64, f64)] = &[
        (0, 0.001, 0.9990007495835155594),
        (0, 0.5, 0.64503527044915006811),
        (0, 1.0, 0.4657596075936404365),
        (0, 2.0, 0.30850832255367103953),
        (0, 10.0, 0.12783333716342860732),
        (0, 30.0, 0.073145946482237293929),
        (0, 35.0, 0.067678378350413625728),
        (0, 36.0, 0.066724965863578480934),
        (0, 40.0, 0.063278279875235330262),
        (0, 50.0, 0.05656162664745419253),
        (0, 100.0, 0.039944379299096682648),
        (0, 500.0, 0.017845706500153167237),
        (2, 0.001, 0.00049950031235422133698),
        (2, 0.5, 0.15642080318487169714),
        (2, 1.0, 0.20791041534970844887),
        (2, 2.0, 0.21526928924893765916),
        (2, 10.0, 0.12126268138445551872),
        (2, 30.0, 0.071916330598647554706),
        (2, 35.0, 0.066704431729491439079),
        (2, 36.0, 0.065791607551475560463),
        (2, 40.0, 0.062482229074442060748),
        (2, 50.0, 0.055993123892895399644),
        (2, 100.0, 0.039744153025130252674),
        (2, 500.0, 0.017827851852898056461),
        (4, 0.001, 1.2487507288542740575e-7),
        (4, 0.5, 0.019352057709663279537),
        (4, 1.0, 0.049938776894223538763),
        (4, 2.0, 0.093239033304733380375),
        (4, 10.0, 0.10358080088653750358),
        (4, 30.0, 0.068351524442327456949),
        (4, 35.0, 0.063866696537299829209),
        (4, 36.0, 0.063069876555163172019),
        (4, 40.0, 0.060154168421513227225),
        (4, 50.0, 0.054321901691738376544),
        (4, 100.0, 0.039149496238594077594),
        (4, 500.0, 0.017774395092741575011),
        (1, 0.001, 0.025206110707457800332),
        (1, 1.0, 0.34495131388824462599),
        (1, 36.0, 0.066490380066905446323),
        (1, 500.0, 0.017841241161527711145),
        (-1, 0.001, 25.206119109494142682),
        (-1, 0.5, 0.77174333225805363862),
        (-1, 10.0, 0.1261566263610361893),
        (-1, 100.0, 0.039894228040143267794),
        (3, 0.001, 8.4020363423501932912e-6),
        (3, 0.5, 0.058471662583135768062),
        (3, 2.0, 0.14879751539472359193),
        (3, 35.0, 0.065506880187774299924),
        (3, 36.0, 0.064643425065046961703),
        (3, 100.0, 0.039495285759741835116),
        (5, 0.001, 1.6804072204584045501e-9),
        (5, 1.0, 0.021005514809116314286),
        (5, 40.0, 0.058465711408685896118),
        (5, 500.0, 0.017734407809452483211),
        (11, 0.001, 2.4248299640120721721e-21),
        (11, 2.0, 0.00054744044248587455018),
        (11, 30.0, 0.043865010193138202772),
        (11, 36.0, 0.043610827135495079079),
        (11, 100.0, 0.034312600883216851325),
        (11, 500.0, 0.017313437570619465946),
    ];

    fn scaled(order: BesselOrder, z: f64) -> f64 {
        bessel_i(order, z).unwrap().shift_exp(-z).to_f64()
    }

    #[test]
    fn matches_reference_table() {
        for &(twice, z, want) in SCALED_REFERENCE {
            let got = scaled(BesselOrder::new(twice).unwrap(), z);
            let rel = (got / want - 1.0).abs();
            assert!(rel <= 1e-13, "2ν={twice} z={z}: got {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i(BesselOrder::ZERO, 0.0).unwrap().to_f64(), 1.0);
        assert_eq!(bessel_i(BesselOrder::ONE, 0.0).unwrap().to_f64(), 0.0);
        assert_eq!(bessel_i(BesselOrder::new(1).unwrap(), 0.0).unwrap().to_f64(), 0.0);
        assert!(bessel_i(BesselOrder::new(-1).unwrap(), 0.0).is_err());
    }

    #[test]
    fn half_order_against_power_series() {
        // 30-term ascending series, independent of the sinh form.
        let series = |z: f64| -> f64 {
            let mut total = 0.0;
            let mut term = (z / 2.0).sqrt() / gamma_half(3).unwrap();
            for k in 0..30 {
                total += term;
                let k1 = (k + 1) as f64;
                term *= (z * z / 4.0) / (k1 * (k1 + 0.5));
            }
            total
        };
        let got = bessel_i(BesselOrder::new(1).unwrap(), 1.0).unwrap().to_f64();
        let closed = (2.0 / PI).sqrt() * 1.0f64.sinh();
        assert!((got - closed).abs() < 1e-15);
        assert!((got - series(1.0)).abs() < 1e-15);
        assert!((got - 0.937674).abs() < 1e-6);
    }

    #[test]
    fn order_two_at_fifty_against_long_series() {
        // 200-term compensated ascending series evaluated directly at z = 50,
        // well past the switch point where the implementation uses the
        // large-argument expansion.
        let z = 50.0_f64;
        let mut sum = NeumaierSum::new();
        let mut term = (z / 2.0).powi(2) / 2.0;
        for k in 0..200 {
            sum.add(term);
            let k1 = (k + 1) as f64;
            term *= (z * z / 4.0) / (k1 * (k1 + 2.0));
        }
        let got = bessel_i(BesselOrder::TWO, z).unwrap().to_f64();
        assert!((got / sum.value() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn branches_agree_across_switch() {
        for n in 0..=2u32 {
            let order = BesselOrder::integer(n).unwrap();
            for i in 0..=40 {
                let z = 30.0 + i as f64 * 0.25;
                let s = ScaledValue::from_f64(power_series(order, z, 0));
                let h = hankel(order.nu(), z);
                let rel = (s / h).to_f64() - 1.0;
                assert!(rel.abs() <= 1e-12, "n={n} z={z} rel={rel:e}");
            }
        }
    }

    #[test]
    fn recurrence_holds() {
        // I_{ν−1} − I_{ν+1} = (2ν/z) I_ν
        for twice in [1, 2, 3] {
            let nu = twice as f64 / 2.0;
            for i in 0..=100 {
                let z = 0.1 + i as f64 * (99.9 / 100.0);
                let lo = bessel_i(BesselOrder::new(twice - 2).unwrap(), z).unwrap();
                let mid = bessel_i(BesselOrder::new(twice).unwrap(), z).unwrap();
                let hi = bessel_i(BesselOrder::new(twice + 2).unwrap(), z).unwrap();
                let lhs = lo - hi;
                let rhs = mid.scale(2.0 * nu / z);
                let rel = ((lhs - rhs) / rhs).to_f64().abs();
                assert!(rel <= 1e-10, "ν={nu} z={z} rel={rel:e}");
            }
        }
    }

    #[test]
    fn catalan_identity_zero_minus_two() {
        // I_0 − I_2 = 2 I_1 / z
        for i in 1..=400 {
            let z = i as f64 * 0.5;
            let lhs = bessel_int(0, z) - bessel_int(2, z);
            let rhs = bessel_int(1, z).scale(2.0 / z);
            let rel = ((lhs - rhs) / rhs).to_f64().abs();
            assert!(rel <= 1e-12, "z={z} rel={rel:e}");
        }
    }

    #[test]
    fn increasing_in_argument() {
        for twice in [0, 1, 2, 3, 4] {
            let order = BesselOrder::new(twice).unwrap();
            let mut prev = bessel_i(order, 0.01).unwrap();
            for i in 1..=300 {
                let z = 0.01 + i as f64 * 0.5;
                let cur = bessel_i(order, z).unwrap();
                assert!(cur > prev, "2ν={twice} z={z}");
                prev = cur;
            }
        }
    }

    #[test]
    fn leading_asymptotic_at_ten_thousand() {
        let z = 1e4;
        for n in 0..=2 {
            let v = bessel_int(n, z).scale((2.0 * PI * z).sqrt()).shift_exp(-z);
            assert!((v.to_f64() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_i(BesselOrder::ZERO, -1.0).is_err());
        assert!(bessel_i(BesselOrder::ZERO, f64::NAN).is_err());
        assert!(BesselOrder::new(-2).is_err());
        assert!(BesselOrder::new(BesselOrder::MAX_TWICE_NU + 1).is_err());
    }

    #[test]
    fn large_half_orders_use_extended_series_range() {
        // ν = 20.5 at z = 60 sits below ν² and must still be accurate.
        let order = BesselOrder::new(41).unwrap();
        let via_series = ScaledValue::from_f64(power_series(order, 60.0, 0));
        let via_terminating = terminating(order, 60.0);
        let rel = ((via_series - via_terminating) / via_series).to_f64().abs();
        assert!(rel < 1e-6, "rel {rel:e}");
        let z = 500.0;
        let a = bessel_i(order, z).unwrap();
        let b = terminating(order, z);
        assert!(((a - b) / a).to_f64().abs() < 1e-14);
    }
}
