#![allow(clippy::needless_range_loop)]

use dqd_core::linalg::{self, SymMatrix2, SymMatrix4};
use dqd_core::model::{self, ModelParams, Subsystem};
use dqd_core::quantifiers::{self, l1_coherence};
use dqd_core::sweep::{self, SweepSpec, SweepVariable};
use proptest::prelude::*;

fn sym_matrix(range: f64) -> impl Strategy<Value = SymMatrix4> {
    prop::array::uniform10(-range..range).prop_map(|u| {
        let mut m = [[0.0; 4]; 4];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                m[i][j] = u[k];
                k += 1;
            }
        }
        SymMatrix4::from_upper(m).unwrap()
    })
}

/// `G Gᵀ / tr(G Gᵀ)` for a random real `G`.
fn density_matrix() -> impl Strategy<Value = SymMatrix4> {
    prop::array::uniform16(-1.0f64..1.0).prop_filter_map("degenerate draw", |g| {
        let g: [[f64; 4]; 4] = [
            [g[0], g[1], g[2], g[3]],
            [g[4], g[5], g[6], g[7]],
            [g[8], g[9], g[10], g[11]],
            [g[12], g[13], g[14], g[15]],
        ];
        let ggt = linalg::matmul(&g, &linalg::transpose(&g));
        let tr: f64 = (0..4).map(|i| ggt[i][i]).sum();
        if tr < 1e-3 {
            return None;
        }
        let mut m = ggt;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = 0.5 * (ggt[i][j] + ggt[j][i]) / tr;
            }
        }
        SymMatrix4::new(m).ok()
    })
}

fn qubit_state() -> impl Strategy<Value = SymMatrix2> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, phi)| {
        // Bloch vector in the x–z plane with length r ≤ 1
        let (x, z) = (r * phi.cos(), r * phi.sin());
        SymMatrix2::new([[0.5 * (1.0 + z), 0.5 * x], [0.5 * x, 0.5 * (1.0 - z)]]).unwrap()
    })
}

fn model_params() -> impl Strategy<Value = ModelParams> {
    (
        0.0f64..50.0,
        0.0f64..50.0,
        0.0f64..50.0,
        0.0f64..50.0,
        0.05f64..100.0,
    )
        .prop_map(|(w, da, db, v, t)| ModelParams::new(w, da, db, v, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jacobi_reconstructs_random_matrices(m in sym_matrix(100.0)) {
        let e = linalg::eigen_sym4(&m).unwrap();
        let norm = m.frobenius_norm();
        let err = linalg::frobenius((e.reconstruct() - m).rows());
        prop_assert!(err <= 1e-11 * norm.max(1e-300), "reconstruction {err} for norm {norm}");
        let vtv = linalg::matmul(&linalg::transpose(&e.vectors), &e.vectors);
        let mut ortho = 0.0f64;
        for (i, row) in vtv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                ortho = ortho.max((x - f64::from(u8::from(i == j))).abs());
            }
        }
        prop_assert!(ortho <= 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));

        let tr = m.trace();
        prop_assert!((e.values.iter().sum::<f64>() - tr).abs() <= 1e-9 * tr.abs().max(norm));
        // a near-singular determinant is only known to about ε‖M‖⁴ absolutely
        let det = m.determinant();
        let prod: f64 = e.values.iter().product();
        prop_assert!((prod - det).abs() <= 1e-9 * det.abs().max(1e-6 * norm.powi(4)));
    }

    #[test]
    fn sqrt_psd_squares_back(rho in density_matrix(), scale in 0.01f64..100.0) {
        let m = rho * scale;
        let s = linalg::sqrt_psd4(&m).unwrap();
        let sq = SymMatrix4::from_upper(s.matmul(&s)).unwrap();
        prop_assert!(linalg::frobenius((sq - m).rows()) <= 1e-10 * m.frobenius_norm().max(1.0));
        prop_assert!(linalg::eigvals_sym4(&s).unwrap()[0] >= -1e-12);
    }

    #[test]
    fn concurrence_is_bounded_and_coherence_splits(rho in density_matrix()) {
        let c = quantifiers::concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        let d = quantifiers::coherence_decomposition(&rho);
        prop_assert!(d.correlated >= -1e-15);
        prop_assert!((d.total - d.local - d.correlated).abs() <= 1e-12);
        prop_assert!(d.total <= 3.0 + 1e-12);
    }

    #[test]
    fn spin_flip_is_an_involution(rho in density_matrix()) {
        prop_assert_eq!(quantifiers::spin_flipped(&quantifiers::spin_flipped(&rho)), rho);
    }

    #[test]
    fn product_states_carry_only_product_coherence(a in qubit_state(), b in qubit_state()) {
        let rho = a.kron(&b);
        let d = quantifiers::coherence_decomposition(&rho);
        let (ca, cb) = (l1_coherence(a.rows()), l1_coherence(b.rows()));
        prop_assert!((d.correlated - ca * cb).abs() <= 1e-12);
        prop_assert!((d.local - ca - cb).abs() <= 1e-12);
        prop_assert!(quantifiers::concurrence(&rho).unwrap() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn thermal_states_are_valid_and_match_taylor_route(p in model_params()) {
        let s = model::thermal_state(&p).unwrap();
        prop_assert!((s.rho.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(linalg::eigvals_sym4(&s.rho).unwrap()[0] >= -1e-12);
        prop_assert!(s.populations.windows(2).all(|w| w[0] >= w[1]));
        let h = model::build_hamiltonian(&p).unwrap();
        let oracle = model::gibbs_state_taylor(&h, p.beta());
        prop_assert!(linalg::frobenius((oracle - s.rho).rows()) <= 1e-10);
    }

    #[test]
    fn pauli_round_trip(p in model_params()) {
        let rho = model::thermal_state(&p).unwrap().rho;
        let c = model::pauli_coefficients(&rho);
        prop_assert!(c.as_array().iter().all(|x| x.abs() <= 1.0 + 1e-12));
        prop_assert!(model::reconstruct_from_pauli(&c).max_abs_diff(&rho) <= 1e-12);

        let ra = model::reduce_subsystem(&rho, Subsystem::A);
        let rb = model::reduce_subsystem(&rho, Subsystem::B);
        prop_assert!((2.0 * ra.get(0, 1) - c.a1).abs() <= 1e-12);
        prop_assert!((ra.get(0, 0) - ra.get(1, 1) - c.a2).abs() <= 1e-12);
        prop_assert!((2.0 * rb.get(0, 1) - c.b1).abs() <= 1e-12);
        prop_assert!((rb.get(0, 0) - rb.get(1, 1) - c.b2).abs() <= 1e-12);
        for r in [ra, rb] {
            prop_assert!((r.trace() - 1.0).abs() <= 1e-12);
            prop_assert!(r.eigenvalues()[0] >= -1e-12);
        }
    }

    #[test]
    fn swapping_dots_leaves_populations(p in model_params()) {
        let a = model::populations(&p).unwrap();
        let b = model::populations(&p.swapped()).unwrap();
        for k in 0..4 {
            prop_assert!((a.probabilities[k] - b.probabilities[k]).abs() <= 1e-12);
            prop_assert!((a.energies[k] - b.energies[k]).abs() <= 1e-11 * (1.0 + a.energies[k].abs()));
        }
    }

    #[test]
    fn no_entanglement_without_coulomb(w in 0.0f64..50.0, da in 0.0f64..50.0, db in 0.0f64..50.0, t in 0.05f64..100.0) {
        let r = quantifiers::evaluate_point(&ModelParams::new(w, da, db, 0.0, t).unwrap()).unwrap();
        prop_assert!(r.concurrence <= 1e-10);
        let rho = model::thermal_state(&r.params).unwrap().rho;
        let ca = l1_coherence(model::reduce_subsystem(&rho, Subsystem::A).rows());
        let cb = l1_coherence(model::reduce_subsystem(&rho, Subsystem::B).rows());
        prop_assert!((r.c_correlated - ca * cb).abs() <= 1e-10);
    }

    #[test]
    fn ground_state_concurrence_matches_pure_formula(w in 0.0f64..50.0, da in 0.01f64..50.0, db in 0.01f64..50.0, v in 0.0f64..50.0) {
        let p = ModelParams::new(w, da, db, v, 1.0).unwrap();
        let h = model::build_hamiltonian(&p).unwrap();
        let e = linalg::eigen_sym4(&h).unwrap();
        prop_assume!(e.values[1] - e.values[0] > 1e-6);
        let psi = e.vector(0);
        let rho = model::ground_space_state(&h).unwrap();
        let c = quantifiers::concurrence(&rho).unwrap();
        prop_assert!((c - 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).abs()).abs() <= 1e-10);
    }

    #[test]
    fn boltzmann_populations_are_normalized(e in prop::array::uniform4(-1e3f64..1e3), beta in 1e-3f64..1e4) {
        let p = linalg::boltzmann_weights(&e, beta).unwrap().populations();
        prop_assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn boltzmann_shift_invariance(e in prop::array::uniform4(-1000i32..1000), c in -1000i32..1000, beta in 1e-3f64..10.0) {
        // integer energies make the shifted differences exact
        let base = e.map(f64::from);
        let shifted = base.map(|x| x + f64::from(c));
        let a = linalg::boltzmann_weights(&base, beta).unwrap().populations();
        let b = linalg::boltzmann_weights(&shifted, beta).unwrap().populations();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn crossing_is_symmetric_in_the_dots(w in 5.0f64..30.0, da in 0.0f64..1.0, db in 0.0f64..1.0) {
        let p = ModelParams::new(w, da, db, 1.0, 1.0).unwrap();
        let a = sweep::find_level_crossing(&p, 0.5, 60.0, 1e-7);
        let b = sweep::find_level_crossing(&p.swapped(), 0.5, 60.0, 1e-7);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a.coulomb - b.coulomb).abs() <= 1e-6),
            (a, b) => prop_assert!(a.is_err() && b.is_err()),
        }
    }
}

#[test]
fn concurrence_never_exceeds_one_over_many_points() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x0dd_5eed);
    for _ in 0..10_000 {
        let p = ModelParams::new(
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.0..50.0),
            rng.gen_range(0.05..100.0),
        )
        .unwrap();
        let r = quantifiers::evaluate_point(&p).unwrap();
        assert!((0.0..=1.0).contains(&r.concurrence), "{p:?}");
        assert!((r.c_total - r.c_local - r.c_correlated).abs() <= 1e-12);
    }
    let mixed = SymMatrix4::identity() * 0.25;
    assert_eq!(quantifiers::concurrence(&mixed).unwrap(), 0.0);
}

#[test]
fn parallel_sweep_matches_serial_and_reruns_identically() {
    let spec = SweepSpec {
        variable: SweepVariable::Temperature,
        start: 0.05,
        stop: 20.0,
        steps: 201,
        base: ModelParams::new(15.0, 2.0, 2.0, 30.0, 1.0).unwrap(),
        tie_deltas: true,
    };
    let par = sweep::run_sweep(&spec).unwrap();
    let ser = sweep::run_sweep_serial(&spec).unwrap();
    assert_eq!(par, ser);
    assert_eq!(par, sweep::run_sweep(&spec).unwrap());
    let grid: Vec<f64> = par.records.iter().map(|r| r.params.temperature).collect();
    assert!(grid.windows(2).all(|w| w[0] < w[1]));
    assert_eq!((grid[0], grid[200]), (0.05, 20.0));
}

#[test]
fn sudden_death_stays_inside_bracket() {
    for (w, d) in [(0.0, 2.0), (15.0, 2.0), (5.0, 1.0)] {
        let base = ModelParams::new(w, d, d, 30.0, 1.0).unwrap();
        let tol = 1e-3;
        let tc = sweep::find_sudden_death(&base, 0.1, 60.0, tol).unwrap();
        assert!(tc > 0.1 && tc < 60.0);
        let at = |t: f64| {
            quantifiers::evaluate_point(&ModelParams {
                temperature: t,
                ..base
            })
            .unwrap()
            .concurrence
        };
        assert!(at(tc - tol) > sweep::ENTANGLEMENT_THRESHOLD);
        assert!(at(tc + tol) <= sweep::ENTANGLEMENT_THRESHOLD);
    }
}
