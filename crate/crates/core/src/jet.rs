use crate::error::{Error, Result};

/// Second-order jet of a field at a point `(t, r)`, `r > 0`.
///
/// Everything the pointwise identities need: the value, both first partials
/// and all three second partials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T = f64> {
    pub t: T,
    pub r: T,
    pub u: T,
    pub ut: T,
    pub ur: T,
    pub utt: T,
    pub utr: T,
    pub urr: T,
}

impl Jet<f64> {
    /// `derivs = [u, u_t, u_r, u_tt, u_tr, u_rr]`.
    pub fn new(t: f64, r: f64, derivs: [f64; 6]) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("jet radius must be positive, got {r}")));
        }
        let [u, ut, ur, utt, utr, urr] = derivs;
        Ok(Jet { t, r, u, ut, ur, utt, utr, urr })
    }

    /// Constant field `u ≡ value`.
    pub fn constant(t: f64, r: f64, value: f64) -> Result<Self> {
        Self::new(t, r, [value, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn map<T>(&self, f: impl Fn(f64) -> T) -> Jet<T> {
        Jet {
            t: f(self.t),
            r: f(self.r),
            u: f(self.u),
            ut: f(self.ut),
            ur: f(self.ur),
            utt: f(self.utt),
            utr: f(self.utr),
            urr: f(self.urr),
        }
    }
}
