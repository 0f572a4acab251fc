use num_complex::Complex64;
use proptest::prelude::*;

use scs_core::algebra::{
    anticommutator, apply_discrete_symmetry, gamma_mu, lorentz_matrix, metric, squared_bilinear,
    squared_bilinear_expansion, BilinearFamily, ComplexMatrix2, DiscreteSymmetry, GammaRepresentation, Spinor,
};
use scs_core::gauge::{classify_regime, field_strength, ChemPotentials, PhasePair, RegimeInputs};
use scs_core::grid::SpaceTimeGrid;
use scs_core::kinematics::{
    dirac_operator, parametrize, plane_wave_amplitude, reconstruct, KinematicState, OperatorForm,
    ParametrizationKind,
};
use scs_core::meanfield::{
    condensates_from_parameters, determinant4, dispersion_solve, dressed_boost, dressed_amplitude, fourier_matrix,
    invert_condensates, modified_dirac_operator, EPair,
};
use scs_core::output::CsvTable;
use scs_core::pairdyn::{evolve, traveling_integrate, Evolver, FieldGrid, SolverConfig, TravelingParams};
use scs_core::quasi::{first_order_phases, weak_limit_fields, QuasiParams};
use scs_core::scsfactor::{charge_field, compose, direct_dressed_boost, factorize, spin_field, spin_field_with_phase};

const REPS: [GammaRepresentation; 2] = GammaRepresentation::ALL;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spinor() -> impl Strategy<Value = Spinor> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|a| Spinor::new(c(a[0], a[1]), c(a[2], a[3])))
}

/// (m, p, μ) with a positive-energy on-shell state.
fn on_shell() -> impl Strategy<Value = KinematicState> {
    (0.1..5.0f64, -10.0..10.0f64, -2.0..2.0f64).prop_map(|(m, p, mu)| KinematicState::on_shell(p, m, mu))
}

proptest! {
    #[test]
    fn clifford_relation_is_exact(rep in prop::sample::select(REPS.to_vec())) {
        for mu in 0..2 {
            for nu in 0..2 {
                let want = ComplexMatrix2::identity().scale((2.0 * metric(mu, nu)).into());
                prop_assert_eq!(anticommutator(gamma_mu(rep, mu), gamma_mu(rep, nu)), want);
            }
        }
    }

    #[test]
    fn boost_group_law(a in -3.0..3.0f64, b in -3.0..3.0f64) {
        for rep in REPS {
            let lhs = lorentz_matrix(rep, a) * lorentz_matrix(rep, b);
            let rhs = lorentz_matrix(rep, a + b);
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * rhs.max_abs());
        }
    }

    #[test]
    fn squared_bilinears_expand(psi in spinor()) {
        prop_assume!(psi.norm() > 1e-3);
        for family in BilinearFamily::ALL {
            let direct = squared_bilinear(GammaRepresentation::Hyperbolic, family, psi);
            let expanded = squared_bilinear_expansion(family, psi);
            prop_assert!((direct - expanded).norm() <= 1e-12 * psi.norm().powi(4));
        }
    }

    #[test]
    fn parity_g1_has_order_four(psi in spinor(), x in -2.0..2.0f64, t in -2.0..2.0f64) {
        for rep in REPS {
            let field = move |x: f64, t: f64| psi.scale(Complex64::from_polar(1.0 + x * x, x - 2.0 * t));
            let mut f = apply_discrete_symmetry(rep, DiscreteSymmetry::ParityG1, field);
            for _ in 0..3 {
                f = apply_discrete_symmetry(rep, DiscreteSymmetry::ParityG1, f);
            }
            prop_assert!(f(x, t).dist(&field(x, t)) <= 1e-15 * field(x, t).norm());
        }
    }

    #[test]
    fn plane_wave_in_operator_kernel(st in on_shell()) {
        let amp = plane_wave_amplitude(&st, GammaRepresentation::Hyperbolic).unwrap();
        let d = dirac_operator(&st, OperatorForm::Linear).unwrap();
        prop_assert!(d.apply(amp).norm() <= 1e-12 * d.max_abs() * amp.norm());
    }

    #[test]
    fn operator_forms_agree(st in on_shell()) {
        let lin = dirac_operator(&st, OperatorForm::Linear).unwrap();
        let hyp = dirac_operator(&st, OperatorForm::Hyperbolic).unwrap();
        let tri = dirac_operator(&st, OperatorForm::Trigonometric).unwrap();
        let by_m = lin.scale((1.0 / st.mass).into());
        let by_w = lin.scale((1.0 / (st.energy + st.mu)).into());
        prop_assert!(by_m.max_abs_diff(&hyp) <= 1e-12 * by_m.max_abs());
        prop_assert!(by_w.max_abs_diff(&tri) <= 1e-12 * by_w.max_abs());
    }

    #[test]
    fn rapidity_round_trip(st in on_shell()) {
        let eta = parametrize(&st, ParametrizationKind::Rapidity).unwrap().value();
        let back = reconstruct(eta, st.mass, st.mu);
        let scale = (st.energy.abs() + st.mu.abs()).max(st.momentum.abs()).max(st.mass);
        prop_assert!((back.energy - st.energy).abs() <= 1e-12 * scale);
        prop_assert!((back.momentum - st.momentum).abs() <= 1e-12 * scale);
    }

    #[test]
    fn boost_moves_along_the_shell(eta in -3.0..3.0f64, d in -1.0..1.0f64, m in 0.1..3.0f64, mu in -1.0..1.0f64) {
        let amp = |e| plane_wave_amplitude(&KinematicState::from_rapidity(e, m, mu), GammaRepresentation::Hyperbolic).unwrap();
        let boosted = lorentz_matrix(GammaRepresentation::Hyperbolic, -d / 2.0).apply(amp(eta));
        prop_assert!(boosted.projective_dist(&amp(eta + d)) <= 1e-12);
    }

    #[test]
    fn free_determinant_is_a_square(e in -3.0..3.0f64, p in -3.0..3.0f64, mu in -1.0..1.0f64,
                                    sigma in -1.0..1.0f64, m in 0.0..2.0f64) {
        let det = determinant4(&fourier_matrix(e, p, mu, sigma, m, c(0.0, 0.0)));
        let ep = EPair::new(e, p, mu);
        let want = ((sigma - m).powi(2) - ep.e_plus * ep.e_minus).powi(2);
        let scale = ((sigma - m).powi(2) + ep.e_plus.abs() * ep.e_minus.abs()).powi(2).max(1e-300);
        prop_assert!((det - want).abs() <= 1e-12 * scale);
    }

    #[test]
    fn roots_are_parity_symmetric(p in -3.0..3.0f64, mu in -1.0..1.0f64, sigma in -0.5..0.5f64,
                                  m in 0.2..2.0f64, re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let a = dispersion_solve(p, mu, sigma, m, c(re, im));
        let b = dispersion_solve(-p, mu, sigma, m, c(-re, im));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn dressed_wave_solves_modified_equation(p in -3.0..3.0f64, db in -1.0..1.0f64, mu in -1.0..1.0f64,
                                             m in 0.5..2.0f64, sigma in -0.4..0.4f64) {
        let w = (p + db).hypot(m - sigma);
        let st = KinematicState::new(w - mu, p, m, mu);
        let boost = dressed_boost(&st, db);
        prop_assume!(boost.is_ok());
        let amp = dressed_amplitude(boost.unwrap().eta_prime);
        let op = modified_dirac_operator(&st, sigma, db);
        prop_assert!(op.apply(amp).norm() <= 1e-10 * op.max_abs() * amp.norm());
    }

    #[test]
    fn condensate_round_trip(phi in 0.1..3.0f64, zeta in -3.0..3.0f64, flip in any::<bool>()) {
        let phi = if flip { -phi } else { phi };
        let set = condensates_from_parameters(c(phi, 0.0), zeta);
        let inv = invert_condensates(&set).unwrap();
        prop_assert!((inv.phi_magnitude - phi.abs()).abs() <= 1e-12 * phi.abs());
        prop_assert!((inv.zeta_prime - zeta).abs() <= 1e-12 * zeta.abs().max(1.0));
        prop_assert!(inv.phi_branches.contains(&phi.abs()) && inv.phi_branches.contains(&-phi.abs()));
    }

    #[test]
    fn factors_reconstruct_principal_root(ep in 0.1..10.0f64, em in 0.1..10.0f64, t in 0.02..0.98f64, im in -5.0..5.0f64) {
        let re = -ep + t * (ep + em);
        let d = c(re, im);
        let f = factorize(ep, em, d).unwrap();
        let direct = direct_dressed_boost(ep, em, d);
        prop_assert!((f.product() - direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn real_delta_bar_has_no_phase(ep in 0.1..10.0f64, em in 0.1..10.0f64, t in 0.02..0.98f64) {
        let f = factorize(ep, em, c(-ep + t * (ep + em), 0.0)).unwrap();
        prop_assert_eq!(f.phi_mag, 1.0);
        prop_assert_eq!(f.beta, 0.0);
    }

    #[test]
    fn number_phase_rides_on_the_charge_field(theta in -3.0..3.0f64, delta in -3.0..3.0f64, eta in -2.0..2.0f64,
                                              phi in 0.2..3.0f64, beta in -1.5..1.5f64, zeta in -2.0..2.0f64) {
        let a = charge_field(theta, eta, phi, beta).unwrap();
        let b = charge_field(theta + delta, eta, phi, beta).unwrap();
        let u = Complex64::from_polar(1.0, delta);
        prop_assert!((a.phi1 * u - b.phi1).norm() <= 1e-14 * a.phi1.norm().max(1.0));
        prop_assert!((a.phi2 * u - b.phi2).norm() <= 1e-14 * a.phi2.norm().max(1.0));
        let spin = spin_field(zeta);
        let (pa, pb) = (compose(&spin, &a), compose(&spin, &b));
        prop_assert!(pa.scale(u).dist(&pb) <= 1e-13 * pa.norm());
    }

    #[test]
    fn internal_phase_can_move_between_factors(theta in -3.0..3.0f64, eta in -2.0..2.0f64, phi in 0.2..3.0f64,
                                               beta in -1.5..1.5f64, zeta in -2.0..2.0f64, frac in 0.0..1.0f64) {
        let whole = compose(&spin_field(zeta), &charge_field(theta, eta, phi, beta).unwrap());
        let moved = frac * beta;
        let split = compose(&spin_field_with_phase(zeta, moved), &charge_field(theta, eta, phi, beta - moved).unwrap());
        prop_assert!(whole.dist(&split) <= 1e-13 * whole.norm());
    }

    #[test]
    fn field_strength_ignores_number_phase(seed in any::<u64>(), nt in 3usize..12, nx in 3usize..12) {
        let gen = |s: u64| SpaceTimeGrid::from_fn(nt, nx, 0.1, 0.2, 0.0, 0.0, move |t, x| {
            ((s as f64 * 1e-3 + 7.0 * x + 3.0 * t).sin() * 1e3).fract()
        });
        let beta = gen(seed);
        let a = PhasePair::new(gen(seed.wrapping_add(1)), beta.clone()).unwrap();
        let b = PhasePair::new(gen(seed.wrapping_add(2)), beta).unwrap();
        prop_assert_eq!(field_strength(&a.beta_delta).unwrap(), field_strength(&b.beta_delta).unwrap());
    }

    #[test]
    fn chemical_potential_involution(a in -(1i64 << 30)..(1i64 << 30), b in -(1i64 << 30)..(1i64 << 30)) {
        let (a, b) = (a as f64 / 4096.0, b as f64 / 4096.0);
        let ch = ChemPotentials::from_chiral(a, b);
        prop_assert_eq!(ChemPotentials::from_components(ch.mu1, ch.mu2), ch);
        let co = ChemPotentials::from_components(a, b);
        prop_assert_eq!(ChemPotentials::from_chiral(co.mu5, co.mu_bar), co);
    }

    #[test]
    fn regime_classifier_is_total(v in prop::array::uniform7(prop_oneof![
        4 => 0.0..100.0f64, 1 => Just(0.0), 1 => Just(f64::INFINITY), 1 => Just(f64::NAN)])) {
        let inputs = RegimeInputs { rho0: v[0], condensate_fraction: v[1], p: v[2], q_beta: v[3], q_delta: v[4], mu: v[5], m: v[6] };
        prop_assert_eq!(classify_regime(&inputs), classify_regime(&inputs));
    }

    #[test]
    fn first_order_field_vanishes(k1 in -2.0..2.0f64, k2 in -2.0..2.0f64, a in -1.0..1.0f64, cb in -3.0..3.0f64) {
        let p = QuasiParams::new(1.0, 1.0, k1, k2, a, 0.1, 1.5, 2.0, cb, 1.0, 1.0, 1.0).unwrap();
        prop_assert_eq!(first_order_phases(&p).efield, 0.0);
    }

    #[test]
    fn csv_tables_are_exact(rows in prop::collection::vec(prop::array::uniform3(any::<f64>().prop_filter("finite", |v| v.is_finite())), 1..20)) {
        let mut t = CsvTable::new(&["a", "b", "c"]);
        for r in &rows {
            t.push(r);
        }
        let s = t.to_csv_string().unwrap();
        prop_assert!(s.starts_with("a,b,c\n") && s.ends_with('\n'));
        for (line, r) in s.lines().skip(1).zip(&rows) {
            for (field, v) in line.split(',').zip(r) {
                prop_assert_eq!(field.parse::<f64>().unwrap(), *v);
                let mantissa = field.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
                prop_assert_eq!(mantissa.len(), 17);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn charge_and_energy_conserved(a in 0.05..0.8f64, b in -0.3..0.3f64, w in -1.0..1.0f64, n in 1u32..4) {
        let nx = 512;
        let dx = 0.025;
        let k = 2.0 * std::f64::consts::PI * n as f64 / (nx as f64 * dx);
        let f = FieldGrid::from_fn(nx, dx, 0.0, |x| {
            let u = Complex64::from_polar(a, k * x) + b * (2.0 * k * x).cos();
            (u, c(0.0, w) * u)
        }).unwrap();
        let mut ev = Evolver::new(f, SolverConfig::new(dx, 0.25 * dx, 2000, 1.0, 2.0)).unwrap();
        let d0 = ev.diagnostics();
        for _ in 0..2000 {
            ev.step().unwrap();
        }
        let d = ev.diagnostics();
        prop_assert!((d.energy - d0.energy).abs() <= 1e-4 * d0.energy.abs());
        prop_assert!((d.charge - d0.charge).abs() <= 1e-10 * d0.charge.abs().max(1e-3));
    }

    #[test]
    fn weak_limit_solves_traveling_pair(omega_rho in 0.3..1.2f64, k_rho in 0.0..0.25f64, cc in 0.1..1.0f64, u0 in 0.5..3.0f64) {
        let (omega_beta, k_beta) = (2.0, 1.0);
        let w = weak_limit_fields(omega_rho, k_rho, omega_beta, k_beta, cc, &[u0]);
        prop_assume!(w.is_ok());
        let w = w.unwrap();
        let params = TravelingParams { omega_rho, k_rho, omega_beta, k_beta, c: cc, rho_init: w.rho[0], m_delta: 0.0 };
        let du = 1e-3;
        let sol = traveling_integrate(&params, 2.0, du).unwrap();
        prop_assert!(sol.halted_at.is_none());
        let us: Vec<f64> = sol.u.iter().map(|u| u0 + u).collect();
        let exact = weak_limit_fields(omega_rho, k_rho, omega_beta, k_beta, cc, &us).unwrap();
        for i in 0..us.len() {
            prop_assert!((sol.rho[i] - exact.rho[i]).abs() <= 1e-8 * exact.rho[i]);
            prop_assert!((sol.beta[i] - (exact.beta[i] - w.beta[0])).abs() <= 1e-8 * (1.0 + exact.beta[i].abs()));
        }
    }
}

#[test]
fn field_strength_second_order() {
    let (k, w) = (1.0, 2.0);
    let err = |n: usize| {
        let h = 1.0 / n as f64;
        let b = SpaceTimeGrid::from_fn(n + 1, n + 1, h, h, 0.0, 0.0, |t, x| (k * x).cos() * (w * t).cos());
        let e = field_strength(&b).unwrap();
        let mut worst = 0.0f64;
        for i in 1..n {
            for j in 1..n {
                worst = worst.max((e.get(i, j) - (k * k - w * w) * b.get(i, j)).abs());
            }
        }
        worst
    };
    let ratio = err(20) / err(40);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn evolution_independent_of_thread_count() {
    let nx = 8192;
    let dx = 0.01;
    let f = FieldGrid::from_fn(nx, dx, 0.0, |x| (Complex64::from_polar(1.0 + 0.1 * (3.0 * x).sin(), 0.5 * x), c(0.0, 0.1))).unwrap();
    let cfg = SolverConfig::new(dx, 0.25 * dx, 50, 1.0, 2.0);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| evolve(f.clone(), cfg).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a, b);
}
