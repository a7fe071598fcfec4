use proptest::prelude::*;
use shearwave_core::analysis::{construct_temple_flux, g4_residual, temple_eigen};
use shearwave_core::exact::{
    eval_asymptotic_linear, hodograph_forward, hodograph_invert, CarrollWave, GeneralizedCarroll,
    HodographData, Sign,
};
use shearwave_core::simulate::{
    evolve_asymptotic, evolve_full, Scheme, SimulationConfig, FULL_FIELDS, STRAIN_FIELDS,
};
use shearwave_core::verify::{commutator_residual, HydrodynamicSymmetry, Jet};
use shearwave_core::*;

fn modulus() -> impl Strategy<Value = ShearModulus> {
    prop_oneof![
        (0.5..3.0f64, 0.5..2.0f64).prop_map(|(mu, r)| ShearModulus::mooney_rivlin(mu, r).unwrap()),
        (0.5..3.0f64, -0.2..1.0f64, 0.5..2.0f64)
            .prop_map(|(a, b, r)| ShearModulus::cubic(a, b, r).unwrap()),
        (0.5..3.0f64, 0.5..2.5f64, 0.5..2.0f64)
            .prop_map(|(mu, n, r)| ShearModulus::power(mu, n, r).unwrap()),
    ]
}

fn flux_family() -> impl Strategy<Value = BivariateFn> {
    prop_oneof![
        (0.1..3.0f64).prop_map(BivariateFn::Const),
        (0.1..3.0f64).prop_map(|scale| BivariateFn::SumSquares { scale }),
        Just(BivariateFn::Product),
        Just(BivariateFn::Ratio),
        (0.1..2.0f64, 0.1..1.0f64)
            .prop_map(|(a, b)| BivariateFn::ProductForm(ProfileFunction::Poly(vec![a, b, 0.1]))),
        (0.1..2.0f64, 0.1..1.0f64)
            .prop_map(|(a, b)| BivariateFn::RatioForm(ProfileFunction::Poly(vec![a, b]))),
        (0.1..2.0f64, 0.1..1.0f64)
            .prop_map(|(a, b)| BivariateFn::RadialForm(ProfileFunction::Poly(vec![a, b]))),
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, c)| BivariateFn::ExpDifference { a, c }),
    ]
}

fn profile() -> impl Strategy<Value = ProfileFunction> {
    prop_oneof![
        (-2.0..2.0f64).prop_map(ProfileFunction::Const),
        (0.1..1.5f64, 0.2..2.0f64, -1.0..1.0f64)
            .prop_map(|(amp, freq, offset)| ProfileFunction::Sine { amp, freq, offset }),
        prop::collection::vec(-1.0..1.0f64, 1..5).prop_map(ProfileFunction::Poly),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn modulus_derivative_is_consistent(m in modulus(), s in 0.05..3.0f64) {
        let errs: Vec<f64> = [1e-3, 1e-4]
            .iter()
            .map(|h| {
                let q = m.law();
                (m.dq(s) - (q.value(s + h) - q.value(s - h)) / (2.0 * h)).abs()
            })
            .collect();
        let bound = 1e-4 * (1.0 + m.dq(s).abs() + m.law().d2(s).abs());
        prop_assert!(errs[0] <= bound.max(1e-12), "{errs:?}");
        prop_assert!(errs[1] <= (1e-2 * bound).max(1e-9), "{errs:?}");
    }

    #[test]
    fn linear_coefficient_gives_zero_beta(mu0 in 0.01..10.0f64, rho in 0.01..10.0f64) {
        for conv in [SpeedConvention::Speed, SpeedConvention::Literal] {
            prop_assert_eq!(beta_from_moduli(mu0, 0.0, rho, conv).unwrap(), 0.0);
        }
    }

    #[test]
    fn level_set_round_trip(c in 0.2..2.0f64, u in 0.2..2.0f64, v in 0.2..2.0f64) {
        let flux = TempleFlux::new(BivariateFn::ProductForm(ProfileFunction::Poly(vec![c, 1.0])));
        let a = flux.eval_p(u, v).unwrap();
        let w = flux.solve_level_set(a, u, (0.0, 10.0)).unwrap();
        prop_assert!((flux.eval_p(u, w).unwrap() - a).abs() <= 1e-12 * a.max(1.0));
        prop_assert!((w - v).abs() <= 1e-10 * v.max(1.0));
    }

    #[test]
    fn linear_profile_reproduces_carroll(
        m in modulus(),
        amp in 0.0..1.5f64,
        k in 0.2..3.0f64,
        x in -5.0..5.0f64,
        t in 0.0..5.0f64,
    ) {
        let pol = Sign::Plus;
        let wave = CarrollWave::new(&m, amp, k, pol).unwrap();
        let g = GeneralizedCarroll::new(&m, amp, ProfileFunction::Linear { k }, Sign::Minus, pol).unwrap();
        let (a, b) = (wave.eval(x, t), g.eval(x, t));
        prop_assert!((a.u - b.u).abs() <= 1e-14 * (1.0 + (k * x).abs()) && (a.v - b.v).abs() <= 1e-14 * (1.0 + (k * x).abs()));
        let (a, b) = (wave.eval_full(x, t), g.eval_full(x, t));
        prop_assert!((a.m - b.m).abs() <= 1e-13 && (a.n - b.n).abs() <= 1e-13);
    }

    #[test]
    fn hodograph_round_trip(
        theta in 0.5..2.0f64,
        rho in 0.6..1.5f64,
        beta in 0.3..2.0f64,
        c3 in 0.5..1.5f64,
        c4 in 0.5..1.5f64,
    ) {
        let h = HodographData::new(
            ProfileFunction::Linear { k: c3 },
            ProfileFunction::Poly(vec![0.0, 0.0, 0.0, c4]),
        );
        let (x, tau) = hodograph_forward(&h, beta, theta, rho).unwrap();
        let seed = PolarState { rho: rho * 1.02, theta: theta * 0.98 };
        let p = hodograph_invert(&h, beta, x, tau, seed).unwrap();
        prop_assert!((p.theta - theta).abs() <= 1e-10 * theta.max(1.0));
        prop_assert!((p.rho - rho).abs() <= 1e-10 * rho.max(1.0));
    }

    #[test]
    fn constant_modulus_fields_keep_their_amplitude(
        beta in -2.0..2.0f64,
        amp in 0.0..3.0f64,
        th in profile(),
        x in -5.0..5.0f64,
        tau in -5.0..5.0f64,
    ) {
        let s = eval_asymptotic_linear(beta, amp, &th, x, tau);
        prop_assert!((s.u * s.u + s.v * s.v - amp * amp).abs() <= 1e-14 * amp.max(1.0).powi(2));
    }

    #[test]
    fn second_family_is_exceptional(p in flux_family(), u in 0.2..3.0f64, v in 0.2..3.0f64) {
        let flux = TempleFlux::new(p);
        if let Ok(r) = temple_eigen(&flux, u, v) {
            let g = r.grad_lambda2;
            let norm = (g[0].hypot(g[1]) * r.d2[0].hypot(r.d2[1])).max(1.0);
            prop_assert!(r.ld2.abs() <= 1e-10 * norm, "{r:?}");
        }
    }

    #[test]
    fn ratio_fluxes_have_equal_eigenvalues(a in 0.1..2.0f64, b in 0.1..1.0f64, u in 0.2..3.0f64, v in 0.2..3.0f64) {
        for p in [BivariateFn::Ratio, BivariateFn::RatioForm(ProfileFunction::Poly(vec![a, b]))] {
            let r = temple_eigen(&TempleFlux::new(p), u, v).unwrap();
            prop_assert!((r.lambda1 - r.lambda2).abs() <= 1e-10 * r.lambda1.abs().max(1.0));
        }
    }

    #[test]
    fn constructed_fluxes_are_compatible(
        h in profile(),
        big_phi in profile(),
        psi in profile(),
        u in 0.2..2.0f64,
        v in 0.2..2.0f64,
    ) {
        let f = construct_temple_flux(h, big_phi, psi, BivariateFn::Product);
        let (a, b) = (f.a(), f.b());
        let g4 = g4_residual(&a, &b, &BivariateFn::Product, u, v).unwrap();
        prop_assert!(g4.abs() <= 1e-10 * (1.0 + a.value(u, v).abs() + b.value(u, v).abs()).powi(2));
    }

    #[test]
    fn hydrodynamic_brackets_vanish(
        s3 in profile(),
        s4 in profile(),
        beta in -2.0..2.0f64,
        jet in (-3.0..3.0f64, 0.2..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
    ) {
        let j = Jet { theta: jet.0, rho: jet.1, theta_t: jet.2, rho_t: jet.3, theta_tt: jet.4, rho_tt: jet.5 };
        let r = commutator_residual(&HydrodynamicSymmetry::new(s3, s4), beta, &[j]);
        prop_assert!(r.max_abs <= 1e-10 * r.scale.max(1.0), "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn periodic_runs_conserve_cell_averages(
        m in modulus(),
        amp in 0.1..0.8f64,
        muscl in any::<bool>(),
    ) {
        let scheme = if muscl { Scheme::MusclMinmod } else { Scheme::LaxFriedrichs };
        let grid = Grid1D::periodic(64, 0.0, 2.0 * std::f64::consts::PI).unwrap();
        let init = StateGrid::from_fn(grid, FULL_FIELDS, |x| {
            [amp * x.cos() + 0.1, 0.3 * x.sin(), amp * (2.0 * x).sin(), 0.05]
        });
        let tr = evolve_full(&m, &init, &SimulationConfig::new(scheme, 0.5, 0.5)).unwrap();
        for (a, b) in init.means().iter().zip(tr.last().state.means()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
        let init = StateGrid::from_fn(grid, STRAIN_FIELDS, |x| [amp * x.cos(), amp * x.sin() + 0.2]);
        let tr = evolve_asymptotic(0.5, &init, &SimulationConfig::new(scheme, 0.5, 0.3)).unwrap();
        for (a, b) in init.means().iter().zip(tr.last().state.means()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
}
