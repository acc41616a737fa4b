use num_complex::Complex64;
use proptest::prelude::*;

use e3atlas::invariants::invariant_polynomials;
use e3atlas::qstate::derive_seed;
use e3atlas::*;

fn state() -> impl Strategy<Value = PureState3> {
    any::<u64>().prop_map(haar_random_state3)
}

fn perm3() -> impl Strategy<Value = Permutation> {
    (0usize..6).prop_map(|k| Permutation::all(3)[k].clone())
}

fn standard() -> impl Strategy<Value = StandardState> {
    (
        prop::array::uniform5(0.01f64..1.0),
        0.0f64..std::f64::consts::TAU,
    )
        .prop_map(|(l, phi)| {
            StandardState {
                lam0: l[0],
                c1: Complex64::from_polar(l[1], phi),
                lam2: l[2],
                lam3: l[3],
                lam4: l[4],
            }
            .normalized()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lu_invariance(psi in state(), seed in any::<u64>()) {
        let u = random_local_unitary(seed);
        let d = invariants_j(&apply_local_unitary(&u, &psi)).max_abs_diff(&invariants_j(&psi));
        prop_assert!(d < 1e-10);
    }

    #[test]
    fn permutation_covariance(psi in state(), p in perm3()) {
        let a = invariants_j(&psi);
        let b = invariants_j(&apply_qubit_permutation(&p, &psi));
        for q in 0..3 {
            prop_assert!((b.0[p.apply(q)] - a.0[q]).abs() < 1e-10);
        }
        for k in 3..6 {
            prop_assert!((b.0[k] - a.0[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn permutation_composition(psi in state(), p in perm3(), q in perm3()) {
        let two_steps = apply_qubit_permutation(&p, &apply_qubit_permutation(&q, &psi));
        let composed = apply_qubit_permutation(&p.compose(&q), &psi);
        prop_assert_eq!(two_steps, composed);
        prop_assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn permutation_text_round_trip(k in 0usize..720) {
        let p = Permutation::all(6)[k].clone();
        prop_assert_eq!(Permutation::parse(&p.to_string(), 6).unwrap(), p);
    }

    #[test]
    fn standard_form_identity(chi in standard()) {
        let b = j_of_standard(&chi).unwrap();
        let lhs = b.b1() * b.b2() * b.b3() - b.b5() * b.b5() / 4.0;
        let rhs = chi.lam0.powi(4) * (chi.lam2 * chi.lam3 * chi.lam4 * chi.c1.im).powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-12);
        prop_assert!(invariants_j(&chi.to_state()).max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn real_states_have_zero_beta6(a in prop::array::uniform8(-1.0f64..1.0)) {
        prop_assume!(a.iter().any(|x| x.abs() > 1e-3));
        let psi = PureState3::from_real(a).unwrap();
        prop_assert!(invariants_i(&psi).i6.abs() < 1e-14);
    }

    #[test]
    fn evaluation_paths_agree(psi in state()) {
        for (n, s, t) in invariant_polynomials().iter().take(4) {
            let a = eval_p_with(EvalPath::Literal, *n, s, t, &psi).unwrap();
            let b = eval_p_with(EvalPath::Contraction, *n, s, t, &psi).unwrap();
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn synthesis_round_trip(psi in state()) {
        let b = invariants_j(&psi);
        let r = synthesize(&b, DEFAULT_TOL).unwrap();
        prop_assert!(invariants_j(&r.state.to_state()).max_abs_diff(&b) < 1e-8);
        prop_assert_eq!(r.case_label, SynthesisCase::C2b5);
    }

    #[test]
    fn zero_tangle_slice(chi in standard()) {
        let flat = StandardState { lam4: 0.0, ..chi }.normalized();
        let b = invariants_j(&flat.to_state());
        prop_assert!(b.b4().abs() < 1e-12);
        prop_assert!((b.b5() - 2.0 * (b.b1() * b.b2() * b.b3()).max(0.0).sqrt()).abs() < 1e-9);
        prop_assert!(b.b6().abs() < 1e-12);
    }

    #[test]
    fn every_member_classifies(psi in state(), p in perm3(), seed in any::<u64>()) {
        // Haar states plus states pushed onto lower-dimensional strata.
        let generic = invariants_j(&psi);
        prop_assert!(classify(&generic, DEFAULT_TOL).is_ok());
        let mut a = *psi.amplitudes();
        for (k, z) in a.iter_mut().enumerate() {
            if (seed >> k) & 1 == 1 {
                *z = Complex64::ZERO;
            }
        }
        if let Ok(s) = PureState3::new(a) {
            let b = invariants_j(&apply_qubit_permutation(&p, &s));
            prop_assert!(classify(&b, DEFAULT_TOL).is_ok(), "{}", b);
        }
    }

    #[test]
    fn exclusion(psi in state(), k in 0usize..4, bump in 0.01f64..1.0) {
        let mut b = invariants_j(&psi);
        b.0[k] = 0.25 + bump;
        prop_assert!(!membership(&b, DEFAULT_TOL).in_x);
        prop_assert!(classify(&b, DEFAULT_TOL).is_err());
        prop_assert!(synthesize(&b, DEFAULT_TOL).is_err());
    }

    #[test]
    fn csv_round_trip(points in prop::collection::vec(prop::array::uniform3(-1e3f64..1e3), 1..40)) {
        let cloud = PointCloud3 { points: points.clone(), faces: vec![], meta: GeomMeta::default() };
        let text = String::from_utf8(emit_mesh(&cloud, MeshFormat::Csv).unwrap()).unwrap();
        let (_, rows) = parse_csv(&text).unwrap();
        prop_assert_eq!(rows.len(), points.len());
        for (r, p) in rows.iter().zip(&points) {
            for k in 0..3 {
                prop_assert!((r[k] - p[k]).abs() <= 1e-15 * p[k].abs());
            }
        }
    }

    #[test]
    fn two_qubit_concurrence_range(seed in any::<u64>()) {
        let c = concurrence(&haar_random_state2(seed));
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
    }
}

#[test]
fn haar_amplitude_moments() {
    let n = 10_000u64;
    let samples: Vec<f64> = (0..n)
        .map(|s| haar_random_state3(derive_seed(5, s)).amplitudes()[3].norm_sqr())
        .collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - 0.125).abs() < 5.0 * se, "{mean} ± {se}");
}

#[test]
fn haar_unitary_moments() {
    let n = 10_000u64;
    let samples: Vec<f64> = (0..n)
        .map(|s| random_local_unitary(derive_seed(6, s)).factor(1)[0][0].norm_sqr())
        .collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - 0.5).abs() < 5.0 * se, "{mean} ± {se}");
}
