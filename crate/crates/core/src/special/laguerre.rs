use crate::error::{domain, Result};

/// Highest degree accepted by [`laguerre_assoc`].
pub const LAGUERRE_MAX_DEGREE: u32 = 60;

/// Associated Laguerre polynomial `L_n^{(k)}(x)` by the three-term recurrence
///
/// `(m+1) L_{m+1} = (2m + 1 + k − x) L_m − (m + k) L_{m−1}`.
pub fn laguerre_assoc(n: u32, k: u32, x: f64) -> Result<f64> {
    if n > LAGUERRE_MAX_DEGREE {
        return domain(format!(
            "laguerre_assoc: degree {n} exceeds cap {LAGUERRE_MAX_DEGREE}"
        ));
    }
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut curr = 1.0 + k - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + k - x) * curr - (m + k) * prev) / (m + 1.0);
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit sum obtained from the Rodrigues formula by Leibniz' rule:
    /// `L_n^{(k)}(x) = Σ_i (−1)^i C(n+k, n−i) x^i / i!`.
    fn rodrigues_sum(n: u32, k: u32, x: f64) -> f64 {
        let binom = |a: u32, b: u32| -> f64 {
            (0..b).fold(1.0, |acc, j| acc * (a - j) as f64 / (j + 1) as f64)
        };
        let mut fact = 1.0;
        let mut total = 0.0;
        for i in 0..=n {
            if i > 0 {
                fact *= i as f64;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom(n + k, n - i) * x.powi(i as i32) / fact;
        }
        total
    }

    #[test]
    fn low_degrees() {
        assert_eq!(laguerre_assoc(0, 1, 7.3).unwrap(), 1.0);
        assert_eq!(laguerre_assoc(1, 1, 1.0).unwrap(), 1.0);
        assert!((laguerre_assoc(1, 1, -4.0 * 0.3).unwrap() - (2.0 + 1.2)).abs() < 1e-15);
        // L_2^{(1)}(x) = 3 − 3x + x²/2; at x = −4: 3 + 12 + 8 = 23
        assert!((laguerre_assoc(2, 1, -4.0).unwrap() - 23.0).abs() < 1e-13);
    }

    #[test]
    fn agrees_with_rodrigues_expansion() {
        for n in 0..12 {
            for k in 0..4 {
                for &x in &[-4.0, -1.5, 0.0, 0.7, 3.2] {
                    let a = laguerre_assoc(n, k, x).unwrap();
                    let b = rodrigues_sum(n, k, x);
                    assert!(
                        (a - b).abs() <= 1e-11 * b.abs().max(1.0),
                        "n={n} k={k} x={x}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn degree_cap() {
        assert!(laguerre_assoc(60, 1, 0.5).is_ok());
        assert!(laguerre_assoc(61, 1, 0.5).is_err());
    }
}
