//! Finite-difference residuals of the multiplier identity on trajectories.

use serde::Serialize;

use crate::diagnostics::ConeSpec;
use crate::dynamics::potential_force;
use crate::error::{Error, Result};
use crate::grid::{make_grid, RadialGrid};
use crate::initdata::{build_initial, ProfileSpec};
use crate::integrator::{advance, cfl_dt, evolve, RunConfig, RunStatus};
use crate::params::Params;
use crate::state::{derivs_at, FieldState};
use crate::sum::pairwise_sum_by;

use super::multiplier::Multiplier;
use super::oracle::first_order;

/// Discrete residual of one three-level window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualSample {
    pub cells: usize,
    pub dr: f64,
    pub t_mid: f64,
    /// `sqrt(Σ res_j² r_j dr)` over the masked cells.
    pub norm: f64,
    pub max_abs: f64,
    pub masked_cells: usize,
}

/// Evaluates
///
/// ```text
/// res_j = (P_j(t+Δ) - P_j(t-Δ)) / 2Δ - (Q_{j+1}(t) - Q_{j-1}(t)) / 2dr
///         - bulk_j(t) + r_j (a u_t + b u_r + c h) V'(u_j)
/// ```
///
/// on cells with `j >= 1`, `j + 1 < N` and `r_{j+1} <= t_apex - t`.
pub fn discrete_identity_residual(
    window: [&FieldState; 3],
    mult: &Multiplier,
    grid: &RadialGrid,
    params: &Params,
    cone: &ConeSpec,
) -> Result<ResidualSample> {
    let n = grid.cells();
    if window.iter().any(|s| s.len() != n) {
        return Err(Error::InvalidParameter("state and grid sizes differ".into()));
    }
    let first = window[1].t - window[0].t;
    let second = window[2].t - window[1].t;
    if !(first > 0.0) || (first - second).abs() > 1e-9 * first {
        return Err(Error::NonUniformSpacing { first, second });
    }
    let spacing = 0.5 * (window[2].t - window[0].t);
    let dr = grid.dr();
    let alpha = params.alpha();
    let t_mid = window[1].t;

    let point = |state: &FieldState, j: usize| {
        let (ur, _) = derivs_at(&state.u, state.outer, j, dr);
        first_order(state.t, grid.center(j), state.u[j], state.v[j], ur, mult, alpha)
    };
    let reach = cone.time_to_apex(t_mid);
    let masked: Vec<usize> = (1..n.saturating_sub(1)).filter(|&j| grid.center(j + 1) <= reach).collect();

    let residuals: Vec<f64> = masked
        .iter()
        .map(|&j| {
            let mid = window[1];
            let r = grid.center(j);
            let dp = (point(window[2], j).p - point(window[0], j).p) / (2.0 * spacing);
            let dq = (point(mid, j + 1).q - point(mid, j - 1).q) / (2.0 * dr);
            let here = point(mid, j);
            let mut res = dp - dq - here.bulk;
            if params.has_potential() {
                let (ur, _) = derivs_at(&mid.u, mid.outer, j, dr);
                let (t, u, ut) = (mid.t, mid.u[j], mid.v[j]);
                let (h, _) = mult.h.eval(u);
                let factor = mult.a.eval(t, r).value * ut + mult.b.eval(t, r).value * ur + mult.c.eval(t, r).value * h;
                res += r * factor * potential_force(u, params);
            }
            res
        })
        .collect();

    let sq = pairwise_sum_by(masked.len(), |k| residuals[k] * residuals[k] * grid.center(masked[k]) * dr);
    let max_abs = residuals.iter().fold(0.0_f64, |m, &x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) });
    Ok(ResidualSample { cells: n, dr, t_mid, norm: sq.sqrt(), max_abs, masked_cells: masked.len() })
}

/// Least-squares slope of `ln norm` against `ln dr`.
pub fn convergence_order(drs: &[f64], norms: &[f64]) -> Option<f64> {
    if drs.len() != norms.len() || drs.len() < 2 {
        return None;
    }
    if drs.iter().chain(norms).any(|&x| !(x > 0.0 && x.is_finite())) {
        return None;
    }
    let xs: Vec<f64> = drs.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|d| d.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Evolves `initial` and returns the three states at `t_center - Δ`,
/// `t_center`, `t_center + Δ`, where `Δ = stride · cfl · dr`.
pub fn capture_window(
    mut state: FieldState,
    grid: &RadialGrid,
    params: &Params,
    t_center: f64,
    stride: usize,
    cfl: f64,
) -> Result<[FieldState; 3]> {
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    let dt = cfl_dt(grid, cfl)?;
    let spacing = stride as f64 * dt;
    let t_start = t_center - spacing;
    if t_start < state.t {
        return Err(Error::InvalidParameter(format!(
            "window start {t_start} precedes the initial time {}",
            state.t
        )));
    }
    if t_start > state.t {
        let config = RunConfig { t_end: t_start, cfl, observe_every: usize::MAX, ..RunConfig::default() };
        let summary = evolve(&mut state, grid, params, &config, &mut [])?;
        if summary.status != RunStatus::Completed {
            return Err(Error::NonFinite { t: summary.t_final });
        }
    }
    let s0 = state.clone();
    advance(&mut state, grid, params, dt, stride)?;
    let s1 = state.clone();
    advance(&mut state, grid, params, dt, stride)?;
    Ok([s0, s1, state])
}

/// A resolution study of the discrete residual.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub radius: f64,
    pub resolutions: Vec<usize>,
    pub initial: ProfileSpec,
    pub cfl: f64,
    pub t_center: f64,
    pub stride: usize,
    pub cone: ConeSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualStudy {
    pub samples: Vec<ResidualSample>,
    pub order: Option<f64>,
}

/// One trajectory per resolution, shared by all multipliers. Returns one
/// study per multiplier, in order.
pub fn residual_study(config: &StudyConfig, mults: &[Multiplier], params: &Params) -> Result<Vec<ResidualStudy>> {
    let mut studies: Vec<ResidualStudy> =
        mults.iter().map(|_| ResidualStudy { samples: Vec::new(), order: None }).collect();
    for &cells in &config.resolutions {
        let grid = make_grid(config.radius, cells)?;
        let initial = build_initial(&config.initial, &grid)?;
        let window = capture_window(initial, &grid, params, config.t_center, config.stride, config.cfl)?;
        let refs = [&window[0], &window[1], &window[2]];
        for (study, mult) in studies.iter_mut().zip(mults) {
            study.samples.push(discrete_identity_residual(refs, mult, &grid, params, &config.cone)?);
        }
    }
    for study in &mut studies {
        let drs: Vec<f64> = study.samples.iter().map(|s| s.dr).collect();
        let norms: Vec<f64> = study.samples.iter().map(|s| s.norm).collect();
        study.order = convergence_order(&drs, &norms);
    }
    Ok(studies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::Preset;
    use crate::initdata::Profile;

    fn skyrme() -> Params {
        Params::skyrme(1.0).unwrap()
    }

    #[test]
    fn static_zero_has_no_residual() {
        let grid = make_grid(1.0, 64).unwrap();
        let cone = ConeSpec::new(1.0, 0.5).unwrap();
        let w = capture_window(FieldState::zero(&grid), &grid, &skyrme(), 0.1, 2, 0.5).unwrap();
        for p in Preset::ALL {
            let s = discrete_identity_residual([&w[0], &w[1], &w[2]], &p.multiplier(), &grid, &skyrme(), &cone).unwrap();
            assert_eq!(s.norm, 0.0);
            assert!(s.masked_cells > 0);
        }
    }

    #[test]
    fn window_lands_on_its_times() {
        let grid = make_grid(1.0, 64).unwrap();
        let w = capture_window(FieldState::zero(&grid), &grid, &skyrme(), 0.25, 3, 0.5).unwrap();
        let d = 3.0 * 0.5 / 64.0;
        assert!((w[0].t - (0.25 - d)).abs() < 1e-14);
        assert!((w[1].t - 0.25).abs() < 1e-14);
        assert!((w[2].t - (0.25 + d)).abs() < 1e-14);
    }

    #[test]
    fn uneven_window_is_rejected() {
        let grid = make_grid(1.0, 16).unwrap();
        let cone = ConeSpec::new(1.0, 0.5).unwrap();
        let a = FieldState::zero(&grid);
        let mut b = a.clone();
        b.t = 0.1;
        let mut c = a.clone();
        c.t = 0.3;
        let err = discrete_identity_residual([&a, &b, &c], &Preset::Energy.multiplier(), &grid, &skyrme(), &cone);
        assert!(matches!(err, Err(Error::NonUniformSpacing { .. })));
    }

    #[test]
    fn order_of_exact_power_law() {
        let drs = [0.1, 0.05, 0.025];
        let norms: Vec<f64> = drs.iter().map(|d: &f64| 3.0 * d.powi(2)).collect();
        assert!((convergence_order(&drs, &norms).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(convergence_order(&drs, &[1.0, 0.0, 1.0]), None);
        assert_eq!(convergence_order(&[0.1], &[1.0]), None);
    }

    #[test]
    fn pulse_residual_is_second_order() {
        let config = StudyConfig {
            radius: 2.0,
            resolutions: vec![64, 128, 256],
            initial: ProfileSpec::at_rest(Profile::Bump { amplitude: 0.5, scale: 0.4 }),
            cfl: 0.5,
            t_center: 0.5,
            stride: 2,
            cone: ConeSpec::new(1.5, 0.5).unwrap(),
        };
        let mults: Vec<Multiplier> = Preset::ALL.iter().map(|p| p.multiplier()).collect();
        for (study, p) in residual_study(&config, &mults, &skyrme()).unwrap().iter().zip(Preset::ALL) {
            let order = study.order.unwrap();
            assert!((1.7..=2.3).contains(&order), "{p}: {order} {:?}", study.samples);
        }
    }
}
