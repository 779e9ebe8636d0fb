//! Scalar abstraction for the pointwise formulas.
//!
//! The residual of the field equation and the multiplier expansions are
//! written once, generically over [`Real`]. Evaluated on `f64` they are the
//! production formulas; evaluated on [`Tracked`] they additionally carry a
//! running magnitude, which bounds the rounding error of the computed value
//! by a small multiple of `f64::EPSILON * magnitude`. The identity oracles
//! normalize their defects by that magnitude.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(x: f64) -> Self;
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn square(self) -> Self {
        self * self
    }
}

impl Real for f64 {
    #[inline]
    fn lift(x: f64) -> Self {
        x
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// A value paired with the magnitude of the terms that produced it.
///
/// Sums add magnitudes, products multiply them. A result whose value is
/// tiny compared to its magnitude was obtained through cancellation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tracked {
    pub value: f64,
    pub magnitude: f64,
}

impl Tracked {
    pub fn exact(x: f64) -> Self {
        Tracked {
            value: x,
            magnitude: x.abs(),
        }
    }
}

impl Add for Tracked {
    type Output = Tracked;
    fn add(self, rhs: Tracked) -> Tracked {
        Tracked {
            value: self.value + rhs.value,
            magnitude: self.magnitude + rhs.magnitude,
        }
    }
}

impl Sub for Tracked {
    type Output = Tracked;
    fn sub(self, rhs: Tracked) -> Tracked {
        Tracked {
            value: self.value - rhs.value,
            magnitude: self.magnitude + rhs.magnitude,
        }
    }
}

impl Mul for Tracked {
    type Output = Tracked;
    fn mul(self, rhs: Tracked) -> Tracked {
        Tracked {
            value: self.value * rhs.value,
            magnitude: self.magnitude * rhs.magnitude,
        }
    }
}

impl Div for Tracked {
    type Output = Tracked;
    fn div(self, rhs: Tracked) -> Tracked {
        // denominators are r, r² and w >= 1; a cancelled denominator inflates
        // the bound by magnitude/|value|
        let d = rhs.value.abs();
        Tracked {
            value: self.value / rhs.value,
            magnitude: self.magnitude / d * (rhs.magnitude / d).max(1.0),
        }
    }
}

impl Neg for Tracked {
    type Output = Tracked;
    fn neg(self) -> Tracked {
        Tracked {
            value: -self.value,
            magnitude: self.magnitude,
        }
    }
}

impl Real for Tracked {
    fn lift(x: f64) -> Self {
        Tracked::exact(x)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn sin(self) -> Self {
        let s = self.value.sin();
        Tracked {
            value: s,
            magnitude: s.abs() + self.magnitude,
        }
    }
    fn cos(self) -> Self {
        let c = self.value.cos();
        Tracked {
            value: c,
            magnitude: c.abs() + self.magnitude,
        }
    }
}
