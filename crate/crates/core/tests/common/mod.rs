#![allow(dead_code)]

use skyrme_core::diagnostics::{ConeSpec, FluxLedger, Monitor};
use skyrme_core::initdata::{build_initial, ProfileSpec};
use skyrme_core::integrator::{evolve, RunConfig, RunStatus, RunSummary};
use skyrme_core::{make_grid, FieldState, Params, RadialGrid};

pub struct Run {
    pub grid: RadialGrid,
    pub state: FieldState,
    pub initial: FieldState,
    pub summary: RunSummary,
    pub monitor: Monitor,
}

/// Evolves `spec` to `t_end`, observing every step.
pub fn monitored_run(radius: f64, cells: usize, spec: &ProfileSpec, params: &Params, t_end: f64, cones: &[ConeSpec]) -> Run {
    let grid = make_grid(radius, cells).unwrap();
    let initial = build_initial(spec, &grid).unwrap();
    let mut state = initial.clone();
    let mut monitor = Monitor::new(cones);
    let config = RunConfig { t_end, cfl: 0.5, observe_every: 1, ..RunConfig::default() };
    let summary = evolve(&mut state, &grid, params, &config, &mut [&mut monitor]).unwrap();
    assert_eq!(summary.status, RunStatus::Completed);
    assert!(monitor.errors().is_empty(), "{:?}", monitor.errors());
    Run { grid, state, initial, summary, monitor }
}

/// Largest `max_{t1 < t2} |E(t2) - E(t1) + F(t1, t2)| / ((dr² + dt²)(t2 - t1))`.
pub fn balance_constant(ledger: &FluxLedger, dr: f64, dt: f64) -> f64 {
    let rows = &ledger.rows;
    let h = dr * dr + dt * dt;
    let mut k = 0.0f64;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let span = rows[j].t - rows[i].t;
            k = k.max(ledger.imbalance(i, j).abs() / (h * span));
        }
    }
    k
}

/// Largest rise `v_j - min_{i <= j} v_i` of a series meant to be non-increasing.
pub fn worst_rise(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut low = f64::INFINITY;
    let mut rise = 0.0f64;
    for v in values {
        low = low.min(v);
        rise = rise.max(v - low);
    }
    rise
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    refine(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}
