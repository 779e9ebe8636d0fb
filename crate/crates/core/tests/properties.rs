use proptest::prelude::*;
use skyrme_core::diagnostics::{i_functional, null_point, PointDensities, C_BOUND};
use skyrme_core::identities::{abc_oracle_defect, ru_oracle_defect, Preset};
use skyrme_core::initdata::{build_initial, read_initial_csv, write_initial_csv, Profile, ProfileSpec};
use skyrme_core::{make_grid, Jet, Params, Potential};

fn potential() -> impl Strategy<Value = Potential> {
    prop_oneof![Just(Potential::None), Just(Potential::V1), Just(Potential::V2)]
}

proptest! {
    #[test]
    fn densities_respect_pointwise_bounds(
        u in -10.0..10.0f64, ut in -50.0..50.0f64, ur in -50.0..50.0f64,
        r in 1e-3..10.0f64, alpha in 0.1..3.0f64, pot in potential(), lambda in 0.0..3.0f64,
    ) {
        let params = Params::new(alpha, pot, lambda).unwrap();
        let d = PointDensities::at(u, ut, ur, r, &params);
        prop_assert!(d.e >= 0.0);
        prop_assert!(d.m.abs() <= d.e * (1.0 + 4.0 * f64::EPSILON));
        prop_assert!(d.pot <= params.potential_bound() + 1e-14);
        prop_assert!(d.e_minus_m >= 0.0 && d.e_plus_m >= 0.0);
    }

    #[test]
    fn null_quantity_is_bounded(
        u in -10.0..10.0f64, ut in -50.0..50.0f64, ur in -50.0..50.0f64,
        r in 1e-3..10.0f64, alpha in 0.1..3.0f64,
    ) {
        let p = null_point(u, ut, ur, r, alpha);
        prop_assert!(p.slack(C_BOUND) >= -1e-12 * C_BOUND * p.e_plus_m * p.e_minus_m, "{:?}", p);
    }

    #[test]
    fn i_functional_is_odd_and_monotone(z in -20.0..20.0f64, dz in 0.0..1.0f64) {
        prop_assert_eq!(i_functional(-z), -i_functional(z));
        prop_assert!(i_functional(z + dz) >= i_functional(z) - 1e-12);
        prop_assert!((i_functional(z + std::f64::consts::PI) - i_functional(z) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oracles_vanish_on_jets(
        t in 0.0..5.0f64, r in 0.01..10.0f64,
        d in prop::array::uniform6(-5.0..5.0f64), alpha in 0.2..3.0f64,
    ) {
        let jet = Jet::new(t, r, d).unwrap();
        let params = Params::skyrme(alpha).unwrap();
        for p in Preset::ALL {
            prop_assert!(abc_oracle_defect(&jet, &p.multiplier(), &params).normalized() <= 1e-10);
        }
        prop_assert!(ru_oracle_defect(&jet, &params).normalized() <= 1e-10);
    }

    #[test]
    fn csv_round_trip_is_exact(amp in -3.0..3.0f64, scale in 0.05..2.0f64, cells in 8usize..200) {
        let grid = make_grid(1.5, cells).unwrap();
        let spec = ProfileSpec::Analytic {
            displacement: Profile::Arctan { amplitude: amp, scale },
            velocity: Profile::Bump { amplitude: amp, scale },
        };
        let state = build_initial(&spec, &grid).unwrap();
        let mut first = Vec::new();
        write_initial_csv(&state, &grid, &mut first).unwrap();
        let back = read_initial_csv(first.as_slice(), &grid).unwrap();
        prop_assert_eq!(&back.u, &state.u);
        prop_assert_eq!(&back.v, &state.v);
        let mut second = Vec::new();
        write_initial_csv(&back, &grid, &mut second).unwrap();
        prop_assert_eq!(first, second);
    }
}
