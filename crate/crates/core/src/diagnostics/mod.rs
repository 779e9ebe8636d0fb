//! Scalar densities and the integrals built from them.
//!
//! Energy density and momentum density:
//!
//! ```text
//! e = w (u_t² + u_r²)/2 + sin²u/(2r²) [+ V(u)],   m = w u_t u_r,
//! ```
//!
//! integrated against `r dr`. Monitoring cones are backward light cones
//! `{ r <= t_apex - t }` with apex `(t_apex, 0)`.

mod cone;
mod decay;
mod densities;
mod monitor;
mod null;

pub use cone::{
    annulus_energy, cone_average, disk_integral, mantle_flux_step, mantle_sample, slice_energy,
    slice_integral, Annulus, ConeSpec, FluxLedger, LedgerRow, MantleSample,
};
pub use decay::{decay_report, i_functional, DecayReport};
pub use densities::{densities, DensityKind, Densities, PointDensities};
pub use monitor::{Monitor, PointwiseCheck, SliceRecord};
pub use null::{null_quantity_d, null_point, NullPoint, NullReport, C_BOUND};
