//! Exact pointwise checks of the multiplier identities on jets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::residual_generic;
use crate::jet::Jet;
use crate::params::Params;
use crate::real::{Real, Tracked};

use super::multiplier::{HFunction, Multiplier, Poly2, Preset};

/// First-order part of the multiplier expansion: the fluxes, the bulk
/// term and the coefficients `A`, `B`.
pub(crate) struct FirstOrder<T> {
    pub p: T,
    pub q: T,
    pub bulk: T,
    pub big_a: T,
    pub big_b: T,
}

/// Fluxes and bulk from `(t, r, u, u_t, u_r)` alone.
pub(crate) fn first_order<T: Real>(t: T, r: T, u: T, ut: T, ur: T, mult: &Multiplier, alpha: f64) -> FirstOrder<T> {
    let one = T::lift(1.0);
    let two = T::lift(2.0);
    let half = T::lift(0.5);
    let a2 = T::lift(alpha * alpha);
    let s = u.sin();
    let sin2u = (two * u).sin();
    let r2 = r * r;
    let beta = a2 * s * s / r2;
    let w = one + beta;
    let q_sin = s * s / (two * r2);
    let e = w * (ut * ut + ur * ur) * half + q_sin;
    let m = w * ut * ur;
    let (h, hp) = mult.h.eval(u);
    let a = mult.a.eval(t, r);
    let b = mult.b.eval(t, r);
    let c = mult.c.eval(t, r);

    let p = r * (a.value * e + b.value * m + c.value * w * h * ut);
    let q = r * (a.value * m + b.value * (e - two * q_sin) + c.value * w * h * ur);
    let big_a = w * (a.dt - b.dr);
    let big_b = -(one - beta) * b.value / r + c.value * (two * w * hp + a2 * h * sin2u / r2);
    let bulk = r
        * ((big_a + big_b) * ut * ut * half + (big_a - big_b) * ur * ur * half
            + (b.dt - a.dr) * m
            + (a.dt + b.dr - b.value / r) * q_sin
            - c.value * h * sin2u / (two * r2)
            + w * h * (c.dt * ut - c.dr * ur));
    FirstOrder { p, q, bulk, big_a, big_b }
}

/// `∂_t P - ∂_r Q` expanded by the chain rule on the jet.
fn divergence<T: Real>(jet: &Jet<T>, mult: &Multiplier, alpha: f64) -> T {
    let Jet { t, r, u, ut, ur, utt, utr, urr } = *jet;
    let one = T::lift(1.0);
    let two = T::lift(2.0);
    let half = T::lift(0.5);
    let a2 = T::lift(alpha * alpha);
    let s = u.sin();
    let sin2u = (two * u).sin();
    let r2 = r * r;
    let r3 = r2 * r;

    let beta = a2 * s * s / r2;
    let beta_t = a2 * sin2u * ut / r2;
    let beta_r = a2 * sin2u * ur / r2 - two * a2 * s * s / r3;
    let w = one + beta;

    let q_sin = s * s / (two * r2);
    let q_sin_t = sin2u * ut / (two * r2);
    let q_sin_r = sin2u * ur / (two * r2) - s * s / r3;

    let kin = (ut * ut + ur * ur) * half;
    let kin_t = ut * utt + ur * utr;
    let kin_r = ut * utr + ur * urr;

    let e = w * kin + q_sin;
    let e_t = beta_t * kin + w * kin_t + q_sin_t;
    let e_r = beta_r * kin + w * kin_r + q_sin_r;

    let m = w * ut * ur;
    let m_t = beta_t * ut * ur + w * (utt * ur + ut * utr);
    let m_r = beta_r * ut * ur + w * (utr * ur + ut * urr);

    let (h, hp) = mult.h.eval(u);
    let h_t = hp * ut;
    let h_r = hp * ur;

    let a = mult.a.eval(t, r);
    let b = mult.b.eval(t, r);
    let c = mult.c.eval(t, r);

    // P = r [a e + b m + c w h u_t]; r does not depend on t
    let p_t = r
        * (a.dt * e + a.value * e_t + b.dt * m + b.value * m_t + c.dt * w * h * ut
            + c.value * (beta_t * h * ut + w * h_t * ut + w * h * utt));

    // Q = r [a m + b (e - 2 q_sin) + c w h u_r]
    let q_in = a.value * m + b.value * (e - two * q_sin) + c.value * w * h * ur;
    let q_in_r = a.dr * m + a.value * m_r + b.dr * (e - two * q_sin) + b.value * (e_r - two * q_sin_r)
        + c.dr * w * h * ur
        + c.value * (beta_r * h * ur + w * h_r * ur + w * h * urr);
    let q_r = q_in + r * q_in_r;

    p_t - q_r
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbcTerms {
    /// `∂_t P - ∂_r Q`.
    pub div: f64,
    pub bulk: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub p: f64,
    pub q: f64,
}

pub fn abc_terms(jet: &Jet, mult: &Multiplier, params: &Params) -> AbcTerms {
    let alpha = params.alpha();
    let fo = first_order(jet.t, jet.r, jet.u, jet.ut, jet.ur, mult, alpha);
    AbcTerms {
        div: divergence(jet, mult, alpha),
        bulk: fo.bulk,
        big_a: fo.big_a,
        big_b: fo.big_b,
        p: fo.p,
        q: fo.q,
    }
}

/// A defect together with the magnitude of the terms it was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Defect {
    pub value: f64,
    pub magnitude: f64,
}

impl Defect {
    fn from_tracked(x: Tracked) -> Self {
        Defect { value: x.value, magnitude: x.magnitude }
    }

    /// `|defect| / magnitude`; a defect of pure round-off is a few ulps.
    pub fn normalized(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.value.abs() / self.magnitude.max(f64::MIN_POSITIVE)
        }
    }
}

/// `(∂_t P - ∂_r Q - bulk) - r (a u_t + b u_r + c h(u)) R[u]`, identically
/// zero for every jet and every multiplier.
pub fn abc_oracle_defect(jet: &Jet, mult: &Multiplier, params: &Params) -> Defect {
    let free = params.without_potential();
    let alpha = free.alpha();
    let tj = jet.map(Tracked::exact);
    let div = divergence(&tj, mult, alpha);
    let fo = first_order(tj.t, tj.r, tj.u, tj.ut, tj.ur, mult, alpha);
    let residual = residual_generic(&tj, &free);
    let (h, _) = mult.h.eval(tj.u);
    let a = mult.a.eval(tj.t, tj.r).value;
    let b = mult.b.eval(tj.t, tj.r).value;
    let c = mult.c.eval(tj.t, tj.r).value;
    let factor = tj.r * (a * tj.ut + b * tj.ur + c * h);
    Defect::from_tracked(div - fo.bulk - factor * residual)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuTerms {
    /// `∂_t(r u u_t) - ∂_r(r u u_r)`.
    pub div: f64,
    pub bulk: f64,
}

fn ru_generic<T: Real>(jet: &Jet<T>, alpha: f64) -> (T, T) {
    let Jet { r, u, ut, ur, utt, urr, .. } = *jet;
    let one = T::lift(1.0);
    let two = T::lift(2.0);
    let a2 = T::lift(alpha * alpha);
    let s = u.sin();
    let sin2u = (two * u).sin();
    let r2 = r * r;
    let beta = a2 * s * s / r2;
    let w = one + beta;
    let div = r * (ut * ut + u * utt) - (u * ur + r * (ur * ur + u * urr));
    let bulk = r
        * ((one - a2 * u * sin2u / (two * r2) / w) * (ut * ut - ur * ur)
            + ((one - beta) / w - one) * u * ur / r
            - u * sin2u / (two * r2) / w);
    (div, bulk)
}

pub fn ru_terms(jet: &Jet, params: &Params) -> RuTerms {
    let (div, bulk) = ru_generic(jet, params.alpha());
    RuTerms { div, bulk }
}

/// `(div - bulk) - r u R[u] / w`, identically zero.
pub fn ru_oracle_defect(jet: &Jet, params: &Params) -> Defect {
    let free = params.without_potential();
    let tj = jet.map(Tracked::exact);
    let (div, bulk) = ru_generic(&tj, free.alpha());
    let a2 = Tracked::exact(free.alpha() * free.alpha());
    let s = tj.u.sin();
    let w = Tracked::exact(1.0) + a2 * s * s / (tj.r * tj.r);
    let residual = residual_generic(&tj, &free);
    Defect::from_tracked(div - bulk - tj.r * tj.u * residual / w)
}

/// Random jet with derivative components in `[-5, 5]`, `r ∈ (0.01, 10]`,
/// `t ∈ [0, 5]`.
pub fn random_jet(rng: &mut impl Rng) -> Jet {
    let mut c = || rng.gen_range(-5.0..=5.0);
    let derivs = [c(), c(), c(), c(), c(), c()];
    let t = rng.gen_range(0.0..=5.0);
    let r = 10.0 - rng.gen_range(0.0..9.99);
    Jet::new(t, r, derivs).expect("positive radius")
}

fn random_poly(rng: &mut impl Rng) -> Poly2 {
    let mut terms = Vec::new();
    for i in 0..3u32 {
        for k in 0..=2 - i {
            terms.push((i, k, rng.gen_range(-1.0..=1.0)));
        }
    }
    Poly2::from_terms(terms)
}

/// Multiplier with random polynomial `a, b, c` of degree at most 2 in each
/// of `t`, `r` and a random `h`.
pub fn random_multiplier(rng: &mut impl Rng) -> Multiplier {
    let a = random_poly(rng);
    let b = random_poly(rng);
    let c = random_poly(rng);
    let h = match rng.gen_range(0..3) {
        0 => HFunction::Zero,
        1 => HFunction::Sin,
        _ => HFunction::Identity,
    };
    Multiplier { a, b, c, h }
}

/// Worst normalized defects for one preset and coupling.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleStat {
    pub preset: String,
    pub alpha: f64,
    pub samples: usize,
    pub max_abc_defect: f64,
    pub max_ru_defect: f64,
}

/// Runs both oracles on `samples` random jets per (preset, α) pair, plus one
/// random polynomial multiplier per jet under the preset name `random`.
/// Batches are seeded per pair, so the result does not depend on threads.
pub fn oracle_battery(samples: usize, seed: u64, presets: &[Preset], alphas: &[f64]) -> Vec<OracleStat> {
    let mut cases: Vec<(Option<Preset>, f64)> = Vec::new();
    for &alpha in alphas {
        for &p in presets {
            cases.push((Some(p), alpha));
        }
        cases.push((None, alpha));
    }
    cases
        .par_iter()
        .enumerate()
        .map(|(k, &(preset, alpha))| {
            let params = Params::skyrme(alpha).expect("positive alpha");
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let fixed = preset.map(Preset::multiplier);
            let mut stat = OracleStat {
                preset: preset.map_or("random", Preset::name).to_owned(),
                alpha,
                samples,
                max_abc_defect: 0.0,
                max_ru_defect: 0.0,
            };
            for _ in 0..samples {
                let jet = random_jet(&mut rng);
                let mult = match &fixed {
                    Some(m) => m.clone(),
                    None => random_multiplier(&mut rng),
                };
                let d = abc_oracle_defect(&jet, &mult, &params).normalized();
                stat.max_abc_defect = stat.max_abc_defect.max(d);
                let d = ru_oracle_defect(&jet, &params).normalized();
                stat.max_ru_defect = stat.max_ru_defect.max(d);
            }
            stat
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::dynamics::pde_residual;
    use crate::identities::preset;

    fn skyrme() -> Params {
        Params::skyrme(1.0).unwrap()
    }

    /// Jet of `u = r e^{-t}`.
    fn decaying_linear(t: f64, r: f64) -> Jet {
        let e = (-t).exp();
        Jet::new(t, r, [r * e, -r * e, e, r * e, -e, 0.0]).unwrap()
    }

    #[test]
    fn zero_jet() {
        let jet = Jet::constant(0.3, 0.5, 0.0).unwrap();
        for p in Preset::ALL {
            let terms = abc_terms(&jet, &p.multiplier(), &skyrme());
            assert_eq!((terms.div, terms.bulk), (0.0, 0.0));
            assert_eq!(abc_oracle_defect(&jet, &p.multiplier(), &skyrme()).value, 0.0);
        }
        assert_eq!(ru_oracle_defect(&jet, &skyrme()).value, 0.0);
    }

    #[test]
    fn energy_identity_on_constant_pi() {
        let jet = Jet::constant(0.3, 0.5, PI).unwrap();
        let terms = abc_terms(&jet, &preset("energy").unwrap(), &skyrme());
        assert!(terms.div.abs() < 1e-15 && terms.bulk.abs() < 1e-15);
        let ru = ru_terms(&jet, &skyrme());
        assert!(ru.div.abs() < 1e-15 && ru.bulk.abs() < 1e-13);
    }

    #[test]
    fn energy_preset_has_no_bulk() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = preset("energy").unwrap();
        for _ in 0..100 {
            let jet = random_jet(&mut rng);
            let terms = abc_terms(&jet, &m, &skyrme());
            assert_eq!((terms.big_a, terms.big_b, terms.bulk), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn sine_preset_matches_residual() {
        // div - bulk = r sin(u) R[u]
        let jet = decaying_linear(0.3, 0.5);
        let p = skyrme();
        let terms = abc_terms(&jet, &preset("sine").unwrap(), &p);
        let expected = jet.r * jet.u.sin() * pde_residual(&jet, &p);
        assert!((terms.div - terms.bulk - expected).abs() < 1e-13);
    }

    #[test]
    fn momentum_preset_gives_null_quantity() {
        // ∂_t(r m) - ∂_r(r e) = D + r u_r R[u]; the expansion uses e - sin²u/r²
        let jet = decaying_linear(0.3, 0.5);
        let p = skyrme();
        let terms = abc_terms(&jet, &preset("momentum").unwrap(), &p);
        let np = crate::diagnostics::null_point(jet.u, jet.ut, jet.ur, jet.r, 1.0);
        let s = jet.u.sin();
        let d_sin_over_r = (2.0 * s * jet.u.cos() * jet.ur) / jet.r - s * s / (jet.r * jet.r);
        // ∂_r(sin²u / r) = sin 2u u_r / r - sin²u / r²
        let expected = np.d + d_sin_over_r + jet.r * jet.ur * pde_residual(&jet, &p);
        assert!((terms.div - expected).abs() < 1e-13, "{} vs {expected}", terms.div);
    }

    #[test]
    fn random_batteries_are_exact() {
        let stats = oracle_battery(500, 11, &Preset::ALL, &[0.5, 1.0, 2.0]);
        assert_eq!(stats.len(), 18);
        for s in stats {
            assert!(s.max_abc_defect <= 1e-10, "{s:?}");
            assert!(s.max_ru_defect <= 1e-10, "{s:?}");
        }
    }
}
