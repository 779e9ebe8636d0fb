//! Method-of-lines time stepping with classical RK4.
//!
//! `(u, v)' = (v, F(u, v))` where `F` is the explicit form of the field
//! equation. The step is sequential in time; each stage's spatial sweep is
//! parallel over cells.

use serde::Serialize;

use crate::dynamics::accel_into;
use crate::error::{Error, Result};
use crate::grid::{make_grid, RadialGrid};
use crate::initdata::{build_initial, ProfileSpec};
use crate::params::Params;
use crate::state::{derivs_at, FieldState};
use crate::sum::{argmax_by, pairwise_sum_by};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    /// Absolute end time.
    pub t_end: f64,
    pub cfl: f64,
    /// Observers run on the initial state and every `observe_every` steps.
    pub observe_every: usize,
    pub blowup_grad_threshold: f64,
    pub blowup_value_threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t_end: 1.0,
            cfl: 0.5,
            observe_every: 1,
            blowup_grad_threshold: 1e6,
            blowup_value_threshold: 1e3,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if self.observe_every == 0 {
            return Err(Error::InvalidParameter("observe_every must be at least 1".into()));
        }
        if !(self.blowup_grad_threshold > 0.0 && self.blowup_value_threshold > 0.0) {
            return Err(Error::InvalidParameter("blow-up thresholds must be positive".into()));
        }
        if !self.t_end.is_finite() {
            return Err(Error::InvalidParameter("t_end must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BlowupSuspected,
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub status: RunStatus,
    pub t_final: f64,
    pub steps: usize,
    pub dt: f64,
    /// Largest `|u_r|` seen over the run.
    pub peak_grad: f64,
    /// Largest `|u_t|` seen over the run.
    pub peak_velocity: f64,
    /// Where the flag was raised, if it was.
    pub flag: Option<BlowupCheck>,
}

/// Receives read-only snapshots during [`evolve`].
pub trait Observer {
    fn observe(&mut self, state: &FieldState, grid: &RadialGrid, params: &Params);
}

impl<F: FnMut(&FieldState)> Observer for F {
    fn observe(&mut self, state: &FieldState, _grid: &RadialGrid, _params: &Params) {
        self(state)
    }
}

/// `dt = cfl · dr` (unit characteristic speed).
pub fn cfl_dt(grid: &RadialGrid, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    Ok(cfl * grid.dr())
}

/// Scratch buffers for one RK4 step.
struct Stages {
    ku: [Vec<f64>; 4],
    kv: [Vec<f64>; 4],
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Stages {
    fn new(n: usize) -> Self {
        let z = || vec![0.0; n];
        Stages {
            ku: [z(), z(), z(), z()],
            kv: [z(), z(), z(), z()],
            u: z(),
            v: z(),
        }
    }

    fn step(&mut self, state: &mut FieldState, grid: &RadialGrid, params: &Params, dt: f64) {
        let n = state.len();
        let outer = state.outer;
        for s in 0..4 {
            let (src_u, src_v): (&[f64], &[f64]) = if s == 0 {
                (&state.u, &state.v)
            } else {
                let h = if s == 3 { dt } else { 0.5 * dt };
                for j in 0..n {
                    self.u[j] = state.u[j] + h * self.ku[s - 1][j];
                    self.v[j] = state.v[j] + h * self.kv[s - 1][j];
                }
                (&self.u, &self.v)
            };
            self.ku[s].copy_from_slice(src_v);
            accel_into(src_u, src_v, outer, grid, params, &mut self.kv[s]);
        }
        let w = dt / 6.0;
        for j in 0..n {
            state.u[j] += w * (self.ku[0][j] + 2.0 * self.ku[1][j] + 2.0 * self.ku[2][j] + self.ku[3][j]);
            state.v[j] += w * (self.kv[0][j] + 2.0 * self.kv[1][j] + 2.0 * self.kv[2][j] + self.kv[3][j]);
        }
    }
}

/// One classical RK4 step of size `dt`.
pub fn rk4_step(state: &FieldState, grid: &RadialGrid, params: &Params, dt: f64) -> Result<FieldState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let mut next = state.clone();
    Stages::new(state.len()).step(&mut next, grid, params, dt);
    next.t = state.t + dt;
    if !next.is_finite() {
        return Err(Error::NonFinite { t: next.t });
    }
    Ok(next)
}

/// Takes `steps` RK4 steps of exactly `dt` in place.
pub fn advance(state: &mut FieldState, grid: &RadialGrid, params: &Params, dt: f64, steps: usize) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let t0 = state.t;
    let mut stages = Stages::new(state.len());
    for k in 1..=steps {
        stages.step(state, grid, params, dt);
        state.t = t0 + k as f64 * dt;
        if !state.is_finite() {
            return Err(Error::NonFinite { t: state.t });
        }
    }
    Ok(())
}

/// Result of a blow-up scan of one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlowupCheck {
    pub status: RunStatus,
    pub t: f64,
    pub max_grad: f64,
    pub grad_radius: f64,
    pub max_velocity: f64,
    pub velocity_radius: f64,
}

impl BlowupCheck {
    /// Radius of the offending maximizer (gradient first).
    pub fn location(&self, config: &RunConfig) -> f64 {
        if self.max_grad > config.blowup_grad_threshold || !self.max_grad.is_finite() {
            self.grad_radius
        } else {
            self.velocity_radius
        }
    }
}

/// Flags a state whose `max |u_r|` or `max |u_t|` exceeds the configured
/// thresholds, or which holds a non-finite value.
pub fn detect_blowup(state: &FieldState, grid: &RadialGrid, config: &RunConfig) -> BlowupCheck {
    let dr = grid.dr();
    let n = state.len();
    let (jg, max_grad) =
        argmax_by(n, |j| derivs_at(&state.u, state.outer, j, dr).0.abs()).unwrap_or((0, 0.0));
    let (jv, max_velocity) = argmax_by(n, |j| state.v[j].abs()).unwrap_or((0, 0.0));
    let status = if !state.is_finite() || max_grad.is_nan() || max_velocity.is_nan() {
        RunStatus::NonFinite
    } else if max_grad > config.blowup_grad_threshold || max_velocity > config.blowup_value_threshold {
        RunStatus::BlowupSuspected
    } else {
        RunStatus::Completed
    };
    BlowupCheck {
        status,
        t: state.t,
        max_grad,
        grad_radius: grid.center(jg),
        max_velocity,
        velocity_radius: grid.center(jv),
    }
}

/// Steps `state` up to `config.t_end` with uniform steps no larger than
/// `cfl · dr`, or until a blow-up flag is raised.
///
/// The number of steps is `ceil((t_end - t0) / (cfl · dr))` so the last step
/// lands on `t_end` exactly. Observers see the initial state, every
/// `observe_every`-th state and the final state.
pub fn evolve(
    state: &mut FieldState,
    grid: &RadialGrid,
    params: &Params,
    config: &RunConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<RunSummary> {
    config.validate()?;
    if state.len() != grid.cells() {
        return Err(Error::InvalidParameter("state and grid sizes differ".into()));
    }
    let dt_max = cfl_dt(grid, config.cfl)?;
    let t0 = state.t;
    let span = config.t_end - t0;
    let steps = if span > 0.0 {
        (span / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize
    } else {
        0
    };
    let dt = if steps > 0 { span / steps as f64 } else { 0.0 };

    let mut summary = RunSummary {
        status: RunStatus::Completed,
        t_final: t0,
        steps: 0,
        dt,
        peak_grad: 0.0,
        peak_velocity: 0.0,
        flag: None,
    };
    let notify = |s: &FieldState, observers: &mut [&mut dyn Observer]| {
        for o in observers.iter_mut() {
            o.observe(s, grid, params);
        }
    };

    let check = detect_blowup(state, grid, config);
    summary.peak_grad = check.max_grad;
    summary.peak_velocity = check.max_velocity;
    if check.status != RunStatus::Completed {
        summary.status = check.status;
        summary.flag = Some(check);
        return Ok(summary);
    }
    notify(state, observers);

    let mut stages = Stages::new(state.len());
    for k in 1..=steps {
        stages.step(state, grid, params, dt);
        state.t = if k == steps { config.t_end } else { t0 + k as f64 * dt };
        summary.steps = k;
        summary.t_final = state.t;

        let check = detect_blowup(state, grid, config);
        summary.peak_grad = summary.peak_grad.max(check.max_grad);
        summary.peak_velocity = summary.peak_velocity.max(check.max_velocity);
        if check.status != RunStatus::Completed {
            summary.status = check.status;
            summary.flag = Some(check);
            return Ok(summary);
        }
        if k % config.observe_every == 0 || k == steps {
            notify(state, observers);
        }
    }
    Ok(summary)
}

/// Transfers a fine-grid field to the grid with half as many cells. Coarse
/// centers sit on fine cell faces, so the value is the cubic interpolant
/// `(-u_{k-1} + 9 u_k + 9 u_{k+1} - u_{k+2}) / 16`, using ghosts at both ends.
pub fn restrict_to_coarse(fine: &FieldState) -> Vec<f64> {
    (0..fine.len() / 2)
        .map(|j| {
            let k = 2 * j as isize;
            (-fine.u_at(k - 1) + 9.0 * fine.u_at(k) + 9.0 * fine.u_at(k + 1) - fine.u_at(k + 2)) / 16.0
        })
        .collect()
}

/// Self-convergence estimate from runs at `N`, `2N` and `4N` cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfConvergence {
    pub cells: [usize; 3],
    pub t_end: f64,
    /// `‖u_N - u_2N‖` on the coarse grid.
    pub coarse_diff: f64,
    /// `‖u_2N - u_4N‖` on the coarse grid.
    pub fine_diff: f64,
    /// `log2(coarse_diff / fine_diff)`.
    pub order: f64,
}

/// Runs the same data at `N`, `2N`, `4N` to `t_end`; see [`self_convergence_series`].
pub fn self_convergence(
    radius: f64,
    cells: usize,
    initial: &ProfileSpec,
    params: &Params,
    t_end: f64,
    cfl: f64,
) -> Result<SelfConvergence> {
    let series = self_convergence_series(radius, &[cells, cells * 2, cells * 4], initial, params, t_end, cfl)?;
    Ok(series[0])
}

/// Runs the data once per resolution and returns one estimate per
/// consecutive triple. Resolutions must double from one to the next.
///
/// Differences are measured on the coarsest grid of each triple in the norm
/// `sqrt(Σ (Δu)² r_j dr)` over cells with `r_j <= R - t_end`, which the outer
/// boundary cannot reach. Identical solutions give `order = NaN`.
pub fn self_convergence_series(
    radius: f64,
    resolutions: &[usize],
    initial: &ProfileSpec,
    params: &Params,
    t_end: f64,
    cfl: f64,
) -> Result<Vec<SelfConvergence>> {
    if resolutions.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "self-convergence needs at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    if let Some(w) = resolutions.windows(2).find(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidParameter(format!("resolutions must double, got {} then {}", w[0], w[1])));
    }
    if !(t_end > 0.0 && t_end < radius) {
        return Err(Error::InvalidParameter(format!("t_end must lie in (0, R), got {t_end}")));
    }
    let mut finals = Vec::with_capacity(resolutions.len());
    for &cells in resolutions {
        let grid = make_grid(radius, cells)?;
        let mut state = build_initial(initial, &grid)?;
        let config = RunConfig { t_end, cfl, observe_every: usize::MAX, ..RunConfig::default() };
        let summary = evolve(&mut state, &grid, params, &config, &mut [])?;
        if summary.status != RunStatus::Completed {
            return Err(Error::NonFinite { t: summary.t_final });
        }
        finals.push(state);
    }
    let mut out = Vec::with_capacity(resolutions.len() - 2);
    for k in 0..resolutions.len() - 2 {
        let cells = resolutions[k];
        let coarse = make_grid(radius, cells)?;
        let mid = restrict_to_coarse(&finals[k + 1]);
        let u = restrict_to_coarse(&finals[k + 2]);
        let n = u.len();
        // outer ghosts only feed cells outside the norm's mask
        let outer = [2.0 * u[n - 1] - u[n - 2], 3.0 * u[n - 1] - 2.0 * u[n - 2]];
        let half = FieldState { t: t_end, v: vec![0.0; n], u, outer };
        let finest = restrict_to_coarse(&half);
        let dr = coarse.dr();
        let mask: Vec<usize> = (0..cells).filter(|&j| coarse.center(j) <= radius - t_end).collect();
        let norm = |a: &[f64], b: &[f64]| {
            pairwise_sum_by(mask.len(), |i| {
                let j = mask[i];
                (a[j] - b[j]).powi(2) * coarse.center(j) * dr
            })
            .sqrt()
        };
        let coarse_diff = norm(&finals[k].u, &mid);
        let fine_diff = norm(&mid, &finest);
        out.push(SelfConvergence {
            cells: [cells, cells * 2, cells * 4],
            t_end,
            coarse_diff,
            fine_diff,
            order: (coarse_diff / fine_diff).log2(),
        });
    }
    Ok(out)
}
