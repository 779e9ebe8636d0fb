use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::real::Real;

/// Polynomial `Σ c · t^i · r^k` with exact partials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly2 {
    terms: Vec<(u32, u32, f64)>,
}

/// Value and first partials of a multiplier coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Partials<T> {
    pub value: T,
    pub dt: T,
    pub dr: T,
}

fn powi<T: Real>(x: T, k: u32) -> T {
    (0..k).fold(T::lift(1.0), |acc, _| acc * x)
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: f64) -> Self {
        Poly2::from_terms([(0, 0, c)])
    }

    /// `(t power, r power, coefficient)` triples.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        Poly2 {
            terms: terms.into_iter().filter(|t| t.2 != 0.0).collect(),
        }
    }

    pub fn terms(&self) -> &[(u32, u32, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval<T: Real>(&self, t: T, r: T) -> Partials<T> {
        let zero = T::lift(0.0);
        let mut out = Partials { value: zero, dt: zero, dr: zero };
        for &(i, k, c) in &self.terms {
            let c = T::lift(c);
            out.value = out.value + c * powi(t, i) * powi(r, k);
            if i > 0 {
                out.dt = out.dt + c * T::lift(f64::from(i)) * powi(t, i - 1) * powi(r, k);
            }
            if k > 0 {
                out.dr = out.dr + c * T::lift(f64::from(k)) * powi(t, i) * powi(r, k - 1);
            }
        }
        out
    }
}

/// The function `h(u)` paired with the coefficient `c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HFunction {
    #[default]
    Zero,
    Sin,
    Identity,
}

impl HFunction {
    /// `(h(u), h'(u))`.
    pub fn eval<T: Real>(self, u: T) -> (T, T) {
        match self {
            HFunction::Zero => (T::lift(0.0), T::lift(0.0)),
            HFunction::Sin => (u.sin(), u.cos()),
            HFunction::Identity => (u, T::lift(1.0)),
        }
    }
}

/// Multiplier fields `(a, b, c)` of `(t, r)` and `h(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplier {
    pub a: Poly2,
    pub b: Poly2,
    pub c: Poly2,
    pub h: HFunction,
}

/// The multipliers used in the non-concentration argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    /// `(1, 0, 0)`: the energy identity.
    Energy,
    /// `(0, 1, 0)`: the null quantity `D`.
    Momentum,
    /// `(t, 0, 0)`: cone average of `e`.
    DilationT,
    /// `(0, r, 0)`: the `u_t²` and `α² sin²u u_r² / r²` densities.
    RadialR,
    /// `(0, 0, 1)` with `h = sin`: the `α² sin²u u_t² / r²` density.
    Sine,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Energy,
        Preset::Momentum,
        Preset::DilationT,
        Preset::RadialR,
        Preset::Sine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Energy => "energy",
            Preset::Momentum => "momentum",
            Preset::DilationT => "dilation_t",
            Preset::RadialR => "radial_r",
            Preset::Sine => "sine",
        }
    }

    pub fn multiplier(self) -> Multiplier {
        let zero = Poly2::zero;
        match self {
            Preset::Energy => Multiplier { a: Poly2::constant(1.0), b: zero(), c: zero(), h: HFunction::Zero },
            Preset::Momentum => Multiplier { a: zero(), b: Poly2::constant(1.0), c: zero(), h: HFunction::Zero },
            Preset::DilationT => Multiplier {
                a: Poly2::from_terms([(1, 0, 1.0)]),
                b: zero(),
                c: zero(),
                h: HFunction::Zero,
            },
            Preset::RadialR => Multiplier {
                a: zero(),
                b: Poly2::from_terms([(0, 1, 1.0)]),
                c: zero(),
                h: HFunction::Zero,
            },
            Preset::Sine => Multiplier { a: zero(), b: zero(), c: Poly2::constant(1.0), h: HFunction::Sin },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_owned()))
    }
}

pub fn preset(name: &str) -> Result<Multiplier, Error> {
    name.parse::<Preset>().map(Preset::multiplier)
}
