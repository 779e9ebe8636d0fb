//! Multiplier identities.
//!
//! Multiplying the field equation by `r (a u_t + b u_r + c h(u))` gives the
//! divergence identity
//!
//! ```text
//! ∂_t P - ∂_r Q = bulk,
//! P = r [a e + b m + c w h(u) u_t],
//! Q = r [a m + b (e - sin²u/r²) + c w h(u) u_r],
//! bulk = r { (A+B) u_t²/2 + (A-B) u_r²/2 + (b_t - a_r) m + (a_t + b_r - b/r) sin²u/(2r²)
//!            - c h(u) sin 2u/(2r²) + w h(u) (c_t u_t - c_r u_r) },
//! A = w (a_t - b_r),  B = -(1 - β) b/r + c (2 w h'(u) + α² h(u) sin 2u / r²),
//! ```
//!
//! and rewriting `u_tt - u_rr` through the equation gives the `u u_t`
//! identity for `∂_t(r u u_t) - ∂_r(r u u_r)`.
//!
//! [`oracle`] checks both on arbitrary jets, where `∂_t P - ∂_r Q` is
//! expanded by the chain rule and must equal `bulk + r (a u_t + b u_r + c h) R[u]`
//! exactly. [`discrete`] evaluates the same balance with finite differences
//! on numerical trajectories. The oracles use the potential-free equation;
//! the discrete residuals subtract the potential forcing.

pub mod discrete;
pub mod multiplier;
pub mod oracle;

pub use discrete::{
    capture_window, convergence_order, discrete_identity_residual, residual_study, ResidualSample,
    ResidualStudy, StudyConfig,
};
pub use multiplier::{preset, HFunction, Multiplier, Poly2, Preset};
pub use oracle::{
    abc_oracle_defect, abc_terms, oracle_battery, random_jet, random_multiplier, ru_oracle_defect,
    ru_terms, AbcTerms, Defect, OracleStat, RuTerms,
};
