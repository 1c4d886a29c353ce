use crate::error::{domain, Result};

/// `Γ(a)` for `a = twice_a / 2`, exact up to rounding.
///
/// Integer `a` is a factorial; half-integer `a = m + 1/2` reduces to
/// `√π·(2m)!/(4^m m!)`, evaluated as `√π·∏(j − 1/2)` to stay in range.
pub fn gamma_half(twice_a: u32) -> Result<f64> {
    if twice_a == 0 {
        return domain("gamma_half: argument must be positive");
    }
    if twice_a.is_multiple_of(2) {
        let a = twice_a / 2;
        Ok((1..a).fold(1.0, |acc, j| acc * j as f64))
    } else {
        let m = (twice_a - 1) / 2;
        Ok((1..=m).fold(std::f64::consts::PI.sqrt(), |acc, j| {
            acc * (j as f64 - 0.5)
        }))
    }
}

/// `ln Γ(a)` for `a = twice_a / 2`, summed term by term so it never overflows.
pub fn ln_gamma_half(twice_a: u32) -> Result<f64> {
    if twice_a == 0 {
        return domain("ln_gamma_half: argument must be positive");
    }
    if twice_a.is_multiple_of(2) {
        let a = twice_a / 2;
        Ok((1..a).map(|j| (j as f64).ln()).sum())
    } else {
        let m = (twice_a - 1) / 2;
        let base = 0.5 * std::f64::consts::PI.ln();
        Ok(base + (1..=m).map(|j| (j as f64 - 0.5).ln()).sum::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn standard_values() {
        assert_eq!(gamma_half(1).unwrap(), PI.sqrt());
        assert_eq!(gamma_half(2).unwrap(), 1.0);
        assert_eq!(gamma_half(10).unwrap(), 24.0);
        // Γ(5/2) = (3/2)(1/2)√π
        let g = gamma_half(5).unwrap();
        assert!((g - 0.75 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn satisfies_shift_recurrence() {
        for twice in 1..60u32 {
            let a = twice as f64 / 2.0;
            let lhs = gamma_half(twice + 2).unwrap();
            let rhs = a * gamma_half(twice).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-14, "a = {a}");
        }
    }

    #[test]
    fn log_form_matches() {
        for twice in 1..80u32 {
            let g = gamma_half(twice).unwrap();
            let lg = ln_gamma_half(twice).unwrap();
            assert!((g.ln() - lg).abs() < 1e-12 * lg.abs().max(1.0));
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert!(gamma_half(0).is_err());
        assert!(ln_gamma_half(0).is_err());
    }
}
