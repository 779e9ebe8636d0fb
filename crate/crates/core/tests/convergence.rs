mod common;

use skyrme_core::dynamics::{pde_residual, semilinear_accel};
use skyrme_core::initdata::{Profile, ProfileSpec};
use skyrme_core::integrator::self_convergence;
use skyrme_core::{make_grid, spatial_derivs, FieldState, Jet, Params};

fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

#[test]
fn spatial_derivatives_of_sine_are_second_order() {
    let k = 3.0;
    let errors: Vec<(f64, f64)> = [128, 256, 512]
        .iter()
        .map(|&n| {
            let g = make_grid(1.0, n).unwrap();
            let u = g.centers().iter().map(|&r| (k * r).sin()).collect();
            let outer = [(k * g.center(n)).sin(), (k * g.center(n + 1)).sin()];
            let s = FieldState::new(0.0, u, vec![0.0; n], outer, &g).unwrap();
            let d = spatial_derivs(&s, &g);
            let mut e_ur = 0.0f64;
            let mut e_urr = 0.0f64;
            for (j, r) in g.centers().into_iter().enumerate() {
                e_ur = e_ur.max((d.ur[j] - k * (k * r).cos()).abs());
                e_urr = e_urr.max((d.urr[j] + k * k * (k * r).sin()).abs());
            }
            (e_ur, e_urr)
        })
        .collect();
    for w in errors.windows(2) {
        let p = order(w[0].0, w[1].0);
        let q = order(w[0].1, w[1].1);
        assert!((1.9..=2.1).contains(&p), "u_r order {p}");
        assert!((1.9..=2.1).contains(&q), "u_rr order {q}");
    }
}

/// `u = A sin(k r) cos(t)` and its jet.
fn standing(t: f64, r: f64) -> (f64, Jet) {
    let (a, k) = (0.4, 2.0);
    let (s, c) = ((k * r).sin(), (k * r).cos());
    let jet = Jet::new(
        t,
        r,
        [
            a * s * t.cos(),
            -a * s * t.sin(),
            a * k * c * t.cos(),
            -a * s * t.cos(),
            -a * k * c * t.sin(),
            -a * k * k * s * t.cos(),
        ],
    )
    .unwrap();
    (jet.u, jet)
}

/// `w (accel - u_tt) + R[u]` per cell for the standing wave at time `t`.
fn consistency_defects(n: usize, t: f64, params: &Params) -> (skyrme_core::RadialGrid, Vec<f64>) {
    let g = make_grid(1.0, n).unwrap();
    let u = g.centers().iter().map(|&r| standing(t, r).0).collect();
    let v = g.centers().iter().map(|&r| standing(t, r).1.ut).collect();
    let outer = [standing(t, g.center(n)).0, standing(t, g.center(n + 1)).0];
    let s = FieldState::new(t, u, v, outer, &g).unwrap();
    let accel = semilinear_accel(&s, &g, params).unwrap();
    let defects = g
        .centers()
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let jet = standing(t, r).1;
            let w = 1.0 + (jet.u.sin() / r).powi(2);
            w * (accel[j] - jet.utt) + pde_residual(&jet, params)
        })
        .collect();
    (g, defects)
}

// The centered u_r carries an O(dr²) error that the u_r / r term turns into
// O(dr) on the first few cells, so the pointwise check stays away from the
// origin; the r-weighted norm sees the whole grid.
#[test]
fn accel_and_residual_agree_to_second_order() {
    let params = Params::skyrme(1.0).unwrap();
    let mut weighted = Vec::new();
    let mut away = Vec::new();
    for n in [64, 128, 256] {
        let (g, d) = consistency_defects(n, 0.3, &params);
        let dr = g.dr();
        weighted.push(d.iter().zip(g.centers()).map(|(x, r)| x * x * r * dr).sum::<f64>().sqrt());
        away.push(d.iter().zip(g.centers()).filter(|(_, r)| *r >= 0.25).map(|(x, _)| x.abs()).fold(0.0, f64::max));
    }
    for k in 0..2 {
        let p = order(weighted[k], weighted[k + 1]);
        assert!((1.8..=2.2).contains(&p), "weighted order {p} from {weighted:?}");
        let p = order(away[k], away[k + 1]);
        assert!((1.9..=2.1).contains(&p), "pointwise order {p} from {away:?}");
    }
}

#[test]
fn solver_self_convergence_is_second_order() {
    let params = Params::skyrme(1.0).unwrap();
    let spec = ProfileSpec::at_rest(Profile::Bump { amplitude: 1.0, scale: 0.3 });
    let sc = self_convergence(2.0, 128, &spec, &params, 0.5, 0.5).unwrap();
    assert!((1.9..=2.1).contains(&sc.order), "{sc:?}");
}

#[test]
fn self_convergence_with_potential() {
    let params = Params::new(1.0, skyrme_core::Potential::V1, 1.0).unwrap();
    let spec = ProfileSpec::at_rest(Profile::Arctan { amplitude: 0.5, scale: 0.5 });
    let sc = self_convergence(2.0, 128, &spec, &params, 0.5, 0.5).unwrap();
    assert!((1.9..=2.1).contains(&sc.order), "{sc:?}");
}
