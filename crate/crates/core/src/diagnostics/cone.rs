//! Slices, annuli and mantles of backward light cones, and the per-cone
//! flux ledger.
//!
//! For the cone `{ r <= T(t) }`, `T(t) = t_apex - t`, the energy identity
//! `∂_t(r e) - ∂_r(r m) = 0` integrates to
//!
//! ```text
//! E(t₂) - E(t₁) + F(t₁, t₂) = 0,   F(t₁, t₂) = ∫ T (e - m)|_{r = T} dt >= 0.
//! ```
//!
//! The mantle integrand is therefore `e + m̃` with `m̃ = -m`: the energy
//! crossing the inward-moving mantle is `w (u_t - u_r)²/2 + sin²u/(2r²)`.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::sum::pairwise_sum_by;

use super::densities::{DensityKind, Densities};

/// Backward monitoring cone with apex `(t_apex, 0)` and annulus fraction
/// `λ` of `Σ_λ = { λT <= r <= T }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeSpec {
    t_apex: f64,
    lambda_frac: f64,
}

impl ConeSpec {
    pub fn new(t_apex: f64, lambda_frac: f64) -> Result<Self> {
        if !(lambda_frac > 0.0 && lambda_frac < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "annulus fraction must lie in (0, 1), got {lambda_frac}"
            )));
        }
        if !(t_apex > 0.0 && t_apex.is_finite()) {
            return Err(Error::InvalidParameter(format!("cone apex must be positive, got {t_apex}")));
        }
        Ok(ConeSpec { t_apex, lambda_frac })
    }

    pub fn t_apex(&self) -> f64 {
        self.t_apex
    }

    pub fn lambda_frac(&self) -> f64 {
        self.lambda_frac
    }

    /// Mantle radius `T = t_apex - t`.
    pub fn time_to_apex(&self, t: f64) -> f64 {
        self.t_apex - t
    }
}

/// Linear reconstruction `g_j + s_j (r - r_j)` of `g = f r` on cell `j`, with
/// the centered slope `s_j`; `g` is odd in `r`, and the last cell uses the
/// one-sided slope.
fn reconstruct(grid: &RadialGrid, j: usize, g: impl Fn(usize) -> f64) -> (f64, f64) {
    let n = grid.cells();
    let dr = grid.dr();
    let slope = if j == 0 {
        (g(1) + g(0)) / (2.0 * dr)
    } else if j + 1 == n {
        (g(j) - g(j - 1)) / dr
    } else {
        (g(j + 1) - g(j - 1)) / (2.0 * dr)
    };
    (g(j), slope)
}

/// Cell containing `ρ`, the face `ρ = R` belonging to the last cell.
fn cell_of(grid: &RadialGrid, rho: f64) -> usize {
    ((rho / grid.dr()).floor() as usize).min(grid.cells() - 1)
}

/// `∫_0^{r_max} f r dr`: the midpoint rule on the cells below `r_max`, and
/// the integral of the reconstruction over the cut cell. The mantle sample
/// evaluates the same reconstruction, so `d/dr_max` of the disk integral
/// equals it away from cell faces.
pub fn disk_integral(grid: &RadialGrid, r_max: f64, f: impl Fn(usize) -> f64 + Copy) -> Result<f64> {
    let outer = grid.radius();
    if !(r_max >= 0.0 && r_max <= outer * (1.0 + 1e-12)) {
        return Err(Error::OutsideGrid { radius: r_max, outer });
    }
    let r_max = r_max.min(outer);
    let dr = grid.dr();
    let g = |j: usize| f(j) * grid.center(j);
    let k = cell_of(grid, r_max);
    let full = pairwise_sum_by(k, |j| g(j) * dr);
    let (gk, sk) = reconstruct(grid, k, g);
    let (a, b) = (k as f64 * dr - grid.center(k), r_max - grid.center(k));
    Ok(full + gk * (b - a) + 0.5 * sk * (b * b - a * a))
}

pub fn slice_integral(dens: &Densities, kind: DensityKind, grid: &RadialGrid, r_max: f64) -> Result<f64> {
    disk_integral(grid, r_max, |j| dens.cells[j].get(kind))
}

/// Energy of the disk `{ r <= r_max }`.
pub fn slice_energy(dens: &Densities, grid: &RadialGrid, r_max: f64) -> Result<f64> {
    slice_integral(dens, DensityKind::Energy, grid, r_max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub energy: f64,
    /// Set when the annulus is thinner than one cell (`T <= dr`); the
    /// energy is then reported as zero.
    pub empty: bool,
}

/// Energy of `Σ_λ(T) = { λT <= r <= T }` at time `t`, as the difference of
/// two disks.
pub fn annulus_energy(dens: &Densities, grid: &RadialGrid, cone: &ConeSpec, t: f64) -> Result<Annulus> {
    let big = cone.time_to_apex(t);
    if !(big > 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} is past the apex {}", cone.t_apex)));
    }
    if big <= grid.dr() {
        return Ok(Annulus { energy: 0.0, empty: true });
    }
    let outer = slice_energy(dens, grid, big)?;
    let inner = slice_energy(dens, grid, cone.lambda_frac * big)?;
    Ok(Annulus { energy: outer - inner, empty: false })
}

/// Mantle integrand `ρ (e - m)(ρ)` at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MantleSample {
    pub t: f64,
    pub radius: f64,
    pub value: f64,
}

/// Samples `r (e - m)` at the mantle radius with the cell reconstruction of
/// [`disk_integral`].
pub fn mantle_sample(dens: &Densities, grid: &RadialGrid, cone: &ConeSpec, t: f64) -> Result<MantleSample> {
    let rho = cone.time_to_apex(t);
    let outer = grid.radius();
    if !(rho >= 0.0 && rho <= outer * (1.0 + 1e-12)) {
        return Err(Error::OutsideGrid { radius: rho, outer });
    }
    let rho_in = rho.min(outer);
    let j = cell_of(grid, rho_in);
    let (g, slope) = reconstruct(grid, j, |k| grid.center(k) * dens.cells[k].e_minus_m);
    let value = g + slope * (rho_in - grid.center(j));
    Ok(MantleSample { t, radius: rho, value })
}

/// Trapezoid increment of the mantle flux between two samples.
pub fn mantle_flux_step(earlier: &MantleSample, later: &MantleSample) -> f64 {
    0.5 * (earlier.value + later.value) * (later.t - earlier.t)
}

/// One observation of a monitoring cone.
#[derive(Clone, Debug, PartialEq)]
pub struct LedgerRow {
    pub t: f64,
    /// `T = t_apex - t`.
    pub time_to_apex: f64,
    /// Energy of the disk `{ r <= T }`.
    pub energy: f64,
    pub annulus: Annulus,
    /// Mantle flux accumulated since the first row.
    pub flux: f64,
    /// Disk integrals `∫_0^T d r dr`, indexed by [`DensityKind`].
    pub slices: [f64; 8],
}

impl LedgerRow {
    pub fn slice(&self, kind: DensityKind) -> f64 {
        self.slices[kind.index()]
    }
}

/// Accumulated slice, mantle and bulk integrals for one cone.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxLedger {
    pub cone: ConeSpec,
    pub rows: Vec<LedgerRow>,
    last_mantle: Option<MantleSample>,
}

impl FluxLedger {
    pub fn new(cone: ConeSpec) -> Self {
        FluxLedger { cone, rows: Vec::new(), last_mantle: None }
    }

    /// Builds a ledger from precomputed rows.
    pub fn from_rows(cone: ConeSpec, rows: Vec<LedgerRow>) -> Self {
        FluxLedger { cone, rows, last_mantle: None }
    }

    /// Records one observation. States whose mantle lies outside the grid
    /// or past the apex are skipped; returns whether a row was added.
    pub fn record(&mut self, dens: &Densities, grid: &RadialGrid) -> Result<bool> {
        let t = dens.t;
        let big = self.cone.time_to_apex(t);
        if big < 0.0 || big > grid.radius() * (1.0 + 1e-12) {
            return Ok(false);
        }
        let sample = mantle_sample(dens, grid, &self.cone, t)?;
        let flux = match (&self.last_mantle, self.rows.last()) {
            (Some(prev), Some(row)) => row.flux + mantle_flux_step(prev, &sample),
            _ => 0.0,
        };
        let mut slices = [0.0; 8];
        for kind in DensityKind::ALL {
            slices[kind.index()] = slice_integral(dens, kind, grid, big)?;
        }
        let annulus = if big > 0.0 {
            annulus_energy(dens, grid, &self.cone, t)?
        } else {
            Annulus { energy: 0.0, empty: true }
        };
        self.rows.push(LedgerRow {
            t,
            time_to_apex: big,
            energy: slices[DensityKind::Energy.index()],
            annulus,
            flux,
            slices,
        });
        self.last_mantle = Some(sample);
        Ok(true)
    }

    /// `E(t_j) - E(t_i) + F(t_i, t_j)`.
    pub fn imbalance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.rows[i], &self.rows[j]);
        b.energy - a.energy + (b.flux - a.flux)
    }

    /// Largest `|E(t) - E(t_0) + F(t_0, t)|` over the recorded rows.
    pub fn max_imbalance(&self) -> f64 {
        (0..self.rows.len()).map(|j| self.imbalance(0, j).abs()).fold(0.0, f64::max)
    }

    /// Largest spacing between consecutive observations.
    pub fn spacing(&self) -> f64 {
        self.rows.windows(2).map(|w| w[1].t - w[0].t).fold(0.0, f64::max)
    }

    /// `(T, ∫_0^T slice dτ)` pairs ordered by increasing `T`, starting at
    /// the apex `(0, 0)`; trapezoid rule in `τ`.
    fn bulk_profile(&self, kind: DensityKind) -> Vec<(f64, f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self.rows.iter().map(|r| (r.time_to_apex, r.slice(kind))).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.first().is_none_or(|p| p.0 > 0.0) {
            pts.insert(0, (0.0, 0.0));
        }
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(pts.len());
        out.push((pts[0].0, pts[0].1, 0.0));
        for w in pts.windows(2) {
            acc += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
            out.push((w[1].0, w[1].1, acc));
        }
        out
    }

    /// `(T, cone average)` for every recorded `T >= 2 · spacing`.
    pub fn cone_average_series(&self, kind: DensityKind) -> Vec<(f64, f64)> {
        let min = 2.0 * self.spacing();
        self.bulk_profile(kind)
            .into_iter()
            .filter(|&(big, _, _)| big > 0.0 && big >= min * (1.0 - 1e-9))
            .map(|(big, _, bulk)| (big, bulk / big))
            .collect()
    }
}

/// `(1/T) ∫_{K} d r dr dt` over the part of the cone within time `T` of the
/// apex. Requires the ledger to reach the apex and `T` to span at least two
/// observation intervals.
pub fn cone_average(ledger: &FluxLedger, kind: DensityKind, big: f64) -> Result<f64> {
    let spacing = ledger.spacing();
    if ledger.rows.len() < 3 || big < 2.0 * spacing * (1.0 - 1e-9) {
        return Err(Error::WindowTooShort { window: big, spacing });
    }
    let profile = ledger.bulk_profile(kind);
    let last = profile.last().expect("non-empty");
    if big > last.0 * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "T = {big} exceeds the monitored window {}",
            last.0
        )));
    }
    let k = profile.partition_point(|p| p.0 < big).max(1).min(profile.len() - 1);
    let (t0, s0, b0) = profile[k - 1];
    let (t1, s1, _) = profile[k];
    let h = big - t0;
    let slope = if t1 > t0 { (s1 - s0) / (t1 - t0) } else { 0.0 };
    let bulk = b0 + h * (s0 + 0.5 * slope * h);
    Ok(bulk / big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::densities::PointDensities;
    use crate::grid::make_grid;

    fn constant(grid: &RadialGrid, e: f64) -> Densities {
        let c = PointDensities { e, e_minus_m: e, ..Default::default() };
        Densities { t: 0.0, cells: vec![c; grid.cells()] }
    }

    #[test]
    fn zero_energy() {
        let g = make_grid(1.0, 64).unwrap();
        assert_eq!(slice_energy(&constant(&g, 0.0), &g, 1.0).unwrap(), 0.0);
        let cone = ConeSpec::new(1.0, 0.5).unwrap();
        assert_eq!(annulus_energy(&constant(&g, 0.0), &g, &cone, 0.0).unwrap().energy, 0.0);
    }

    #[test]
    fn unit_density_disk() {
        // the reconstruction of g = r is exact on every cell
        let g = make_grid(1.0, 64).unwrap();
        let e = slice_energy(&constant(&g, 1.0), &g, 1.0).unwrap();
        assert!((e - 0.5).abs() < 1e-14);
        for r in [0.001, 0.3, 0.5, 0.99] {
            let partial = slice_energy(&constant(&g, 1.0), &g, r).unwrap();
            assert!((partial - r * r / 2.0).abs() < 1e-14, "{r}: {partial}");
        }
    }

    #[test]
    fn disk_energy_grows_with_radius() {
        let g = make_grid(1.0, 50).unwrap();
        let d = constant(&g, 0.7);
        let mut prev = 0.0;
        for k in 0..=100 {
            let e = slice_energy(&d, &g, k as f64 / 100.0).unwrap();
            assert!(e >= prev);
            prev = e;
        }
        assert!(slice_energy(&d, &g, 1.5).is_err());
        assert!(slice_energy(&d, &g, -0.1).is_err());
    }

    #[test]
    fn disk_derivative_is_the_mantle_sample() {
        let g = make_grid(1.0, 40).unwrap();
        let mut d = constant(&g, 0.0);
        for (j, c) in d.cells.iter_mut().enumerate() {
            c.e = 1.0 + (j as f64 * 0.5).sin();
            c.e_minus_m = c.e;
        }
        let h = 1e-7;
        // away from faces at multiples of 0.025
        for rho in [0.004, 0.1111, 0.333, 0.7123, 0.99] {
            let de = (slice_energy(&d, &g, rho + h).unwrap() - slice_energy(&d, &g, rho - h).unwrap()) / (2.0 * h);
            let cone = ConeSpec::new(rho, 0.5).unwrap();
            let s = mantle_sample(&d, &g, &cone, 0.0).unwrap();
            assert!((de - s.value).abs() < 1e-6, "{rho}: {de} vs {}", s.value);
        }
    }

    #[test]
    fn unit_density_annulus() {
        let g = make_grid(2.0, 128).unwrap();
        let cone = ConeSpec::new(1.5, 0.5).unwrap();
        let a = annulus_energy(&constant(&g, 1.0), &g, &cone, 0.5).unwrap();
        assert!(!a.empty);
        assert!((a.energy - 0.375).abs() < 1e-12);
    }

    #[test]
    fn annulus_partitions_the_disk() {
        let g = make_grid(1.0, 97).unwrap();
        let mut d = constant(&g, 0.0);
        for (j, c) in d.cells.iter_mut().enumerate() {
            c.e = (j as f64 * 0.37).sin().abs() + 0.1;
        }
        let cone = ConeSpec::new(0.9, 0.3).unwrap();
        let t = 0.123;
        let big = cone.time_to_apex(t);
        let a = annulus_energy(&d, &g, &cone, t).unwrap().energy;
        let disk = slice_energy(&d, &g, big).unwrap();
        let inner = slice_energy(&d, &g, 0.3 * big).unwrap();
        assert!((a + inner - disk).abs() <= 1e-15 * disk);
    }

    #[test]
    fn thin_annulus_is_flagged() {
        let g = make_grid(1.0, 10).unwrap();
        let cone = ConeSpec::new(0.5, 0.5).unwrap();
        let a = annulus_energy(&constant(&g, 1.0), &g, &cone, 0.45).unwrap();
        assert!(a.empty);
        assert_eq!(a.energy, 0.0);
        assert!(annulus_energy(&constant(&g, 1.0), &g, &cone, 0.6).is_err());
    }

    #[test]
    fn cone_spec_validation() {
        assert!(ConeSpec::new(1.0, 0.0).is_err());
        assert!(ConeSpec::new(1.0, 1.0).is_err());
        assert!(ConeSpec::new(0.0, 0.5).is_err());
    }

    #[test]
    fn mantle_of_zero_field() {
        let g = make_grid(1.0, 32).unwrap();
        let cone = ConeSpec::new(1.0, 0.5).unwrap();
        let d = constant(&g, 0.0);
        let a = mantle_sample(&d, &g, &cone, 0.0).unwrap();
        let b = mantle_sample(&d, &g, &cone, 0.1).unwrap();
        assert_eq!(mantle_flux_step(&a, &b), 0.0);
        assert!(mantle_sample(&d, &g, &ConeSpec::new(2.0, 0.5).unwrap(), 0.0).is_err());
    }

    #[test]
    fn mantle_interpolation_is_exact_for_linear_integrand() {
        // e - m ≡ 1 gives g(r) = r, reproduced everywhere
        let g = make_grid(1.0, 16).unwrap();
        let d = constant(&g, 1.0);
        for rho in [0.0, 0.01, 0.2, 0.5, 0.97, 1.0] {
            let cone = ConeSpec::new(rho + 0.25, 0.5).unwrap();
            let s = mantle_sample(&d, &g, &cone, 0.25).unwrap();
            assert!((s.value - rho).abs() < 1e-14, "rho {rho}: {}", s.value);
        }
    }

    fn unit_density_ledger(apex: f64, dt: f64) -> FluxLedger {
        let cone = ConeSpec::new(apex, 0.5).unwrap();
        let steps = (apex / dt).round() as usize;
        let rows = (0..=steps)
            .map(|k| {
                let t = k as f64 * dt;
                let big = apex - t;
                let mut slices = [0.0; 8];
                slices[DensityKind::Energy.index()] = 0.5 * big * big;
                LedgerRow {
                    t,
                    time_to_apex: big,
                    energy: 0.5 * big * big,
                    annulus: Annulus { energy: 0.375 * big * big, empty: false },
                    flux: 0.0,
                    slices,
                }
            })
            .collect();
        FluxLedger::from_rows(cone, rows)
    }

    #[test]
    fn unit_density_cone_average() {
        // (1/T) ∫_0^T τ²/2 dτ = T²/6; trapezoid error is O(dt²)
        let dt = 1e-3;
        let ledger = unit_density_ledger(1.0, dt);
        for big in [0.1, 0.25, 0.5, 1.0] {
            let avg = cone_average(&ledger, DensityKind::Energy, big).unwrap();
            assert!((avg - big * big / 6.0).abs() < dt * dt, "T = {big}: {avg}");
        }
        let off_grid = cone_average(&ledger, DensityKind::Energy, 0.3333).unwrap();
        assert!((off_grid - 0.3333f64.powi(2) / 6.0).abs() < dt * dt);
    }

    #[test]
    fn cone_average_window_checks() {
        let ledger = unit_density_ledger(1.0, 0.01);
        assert!(matches!(
            cone_average(&ledger, DensityKind::Energy, 0.015),
            Err(Error::WindowTooShort { .. })
        ));
        assert!(cone_average(&ledger, DensityKind::Energy, 1.5).is_err());
        assert_eq!(cone_average(&ledger, DensityKind::Ut2, 0.5).unwrap(), 0.0);
        let series = ledger.cone_average_series(DensityKind::Energy);
        assert!(series.iter().all(|&(big, _)| big >= 0.02 - 1e-12));
    }
}
