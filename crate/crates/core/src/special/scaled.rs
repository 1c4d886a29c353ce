use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as `mantissa · e^{log_scale}`.
///
/// The mantissa is kept in `[1, e)` in absolute value (or is exactly zero),
/// so every finite value, no matter how large, has a representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    mantissa: f64,
    log_scale: f64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        mantissa: 0.0,
        log_scale: 0.0,
    };
    pub const ONE: ScaledValue = ScaledValue {
        mantissa: 1.0,
        log_scale: 0.0,
    };

    /// Builds `mantissa · e^{log_scale}` and normalizes it.
    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        debug_assert!(mantissa.is_finite(), "mantissa must be finite");
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        let shift = mantissa.abs().ln().floor();
        let mut m = mantissa * (-shift).exp();
        let mut ls = log_scale + shift;
        // rounding in the two steps above can land just outside [1, e)
        if m.abs() < 1.0 {
            m *= std::f64::consts::E;
            ls -= 1.0;
        } else if m.abs() >= std::f64::consts::E {
            m /= std::f64::consts::E;
            ls += 1.0;
        }
        Self {
            mantissa: m,
            log_scale: ls,
        }
    }

    pub fn from_f64(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    /// The positive number `e^{ln_abs}`.
    pub fn from_ln(ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let shift = ln_abs.floor();
        Self::new((ln_abs - shift).exp(), shift)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// `ln |v|`; `-∞` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.log_scale
        }
    }

    /// Plain value; overflows to `±∞` or underflows to 0 outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.mantissa * self.log_scale.exp()
    }

    /// Multiplies by `e^{delta}` without touching the mantissa.
    pub fn shift_exp(self, delta: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        Self {
            mantissa: self.mantissa,
            log_scale: self.log_scale + delta,
        }
    }

    /// Multiplies by a plain factor.
    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.mantissa * factor, self.log_scale)
    }
}

impl From<f64> for ScaledValue {
    fn from(value: f64) -> Self {
        Self::from_f64(value)
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;

    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * rhs.mantissa, self.log_scale + rhs.log_scale)
    }
}

impl Div for ScaledValue {
    type Output = ScaledValue;

    fn div(self, rhs: ScaledValue) -> ScaledValue {
        assert!(!rhs.is_zero(), "ScaledValue division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa / rhs.mantissa, self.log_scale - rhs.log_scale)
    }
}

impl Add for ScaledValue {
    type Output = ScaledValue;

    fn add(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_scale >= rhs.log_scale {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let m = big.mantissa + small.mantissa * (small.log_scale - big.log_scale).exp();
        Self::new(m, big.log_scale)
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;

    fn neg(self) -> ScaledValue {
        Self {
            mantissa: -self.mantissa,
            log_scale: self.log_scale,
        }
    }
}

impl Sub for ScaledValue {
    type Output = ScaledValue;

    fn sub(self, rhs: ScaledValue) -> ScaledValue {
        self + (-rhs)
    }
}

impl PartialOrd for ScaledValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = (self.signum(), other.signum());
        if a != b {
            return a.partial_cmp(&b);
        }
        if a == 0.0 {
            return Some(Ordering::Equal);
        }
        let by_magnitude = self.ln_abs().partial_cmp(&other.ln_abs())?;
        Some(if a > 0.0 {
            by_magnitude
        } else {
            by_magnitude.reverse()
        })
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() && (v != 0.0 || self.is_zero()) {
            write!(f, "{v}")
        } else {
            write!(f, "{}·e^{}", self.mantissa, self.log_scale)
        }
    }
}
