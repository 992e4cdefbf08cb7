use proptest::prelude::*;

use super::*;
use crate::bell::{singlet, werner_state};
use crate::linalg::{c, gates, ComplexMatrix, ONE, ZERO};

fn approx(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

/// Reference partial trace: loops over every pair of global basis indices.
fn brute_partial_trace(rho: &ComplexMatrix, n: usize, keep: &[usize]) -> ComplexMatrix {
    let k = keep.len();
    let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
    let local = |idx: usize| keep.iter().fold(0, |acc, &q| (acc << 1) | bit(idx, q));
    let traced_equal = |x: usize, y: usize| (0..n).filter(|q| !keep.contains(q)).all(|q| bit(x, q) == bit(y, q));
    let mut out = ComplexMatrix::zeros(1 << k, 1 << k);
    for x in 0..1usize << n {
        for y in 0..1usize << n {
            if traced_equal(x, y) {
                out[(local(x), local(y))] += rho[(x, y)];
            }
        }
    }
    out
}

fn two_party_layout(n_a: usize, n_b: usize) -> PartyLayout {
    let mut l = PartyLayout::default();
    for i in 0..n_a {
        l = l.with(format!("a{i}"), Party::Alice, Role::S).unwrap();
    }
    for i in 0..n_b {
        l = l.with(format!("b{i}"), Party::Bob, Role::S).unwrap();
    }
    l
}

#[test]
fn cnot_measurement_of_singlet_half() {
    // |0>_{M_A} ⊗ singlet_{S_A S_B}
    let layout = PartyLayout::default()
        .with("m_a", Party::Alice, Role::M)
        .unwrap()
        .with("s_a", Party::Alice, Role::S)
        .unwrap()
        .with("s_b", Party::Bob, Role::S)
        .unwrap();
    let psi = LabeledState::pure(layout, crate::linalg::kron_vec(&gates::ket0(), singlet().amplitudes().unwrap())).unwrap();
    let out = psi.apply_unitary(&gates::cnot(), &["s_a", "m_a"]).unwrap();
    // CNOT with control S_A copies its value into M_A: (|0,0,1> - |1,1,0>)/√2
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut expected = vec![ZERO; 8];
    expected[0b001] = c(h, 0.0);
    expected[0b110] = c(-h, 0.0);
    let got = out.amplitudes().unwrap();
    for (g, e) in got.iter().zip(&expected) {
        assert!((g - e).norm() < 1e-15);
    }
}

#[test]
fn identity_leaves_state_unchanged() {
    let s = random_pure_state(3, 7);
    let out = s.apply_unitary(&ComplexMatrix::identity(4), &["q0", "q2"]).unwrap();
    assert_eq!(out, s);
}

#[test]
fn apply_unitary_rejects_bad_input() {
    let s = random_pure_state(2, 1);
    assert!(matches!(
        s.apply_unitary(&gates::cnot(), &["q0"]),
        Err(crate::Error::DimensionMismatch(_))
    ));
    let not_unitary = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    assert!(matches!(
        s.apply_unitary(&not_unitary, &["q0"]),
        Err(crate::Error::NotUnitary(_))
    ));
    assert!(matches!(
        s.apply_unitary(&gates::pauli_x(), &["zz"]),
        Err(crate::Error::UnknownLabel(_))
    ));
}

#[test]
fn local_unitary_on_alice_leaves_bob_entropy_alone() {
    for seed in 0..20 {
        let s = random_pure_state_on(two_party_layout(2, 2), seed);
        let before = s.party_entropy(Party::Bob).unwrap();
        let u = random_unitary(2, seed + 1000);
        let after = s.apply_unitary(&u, &["a0", "a1"]).unwrap().party_entropy(Party::Bob).unwrap();
        approx(before, after, 1e-9);
    }
}

#[test]
fn density_evolution_matches_vector_evolution() {
    let s = random_pure_state(3, 11);
    let mixed = LabeledState::density(s.layout().clone(), s.density_matrix()).unwrap();
    let u = random_unitary(2, 12);
    let a = s.apply_unitary(&u, &["q2", "q0"]).unwrap();
    let b = mixed.apply_unitary(&u, &["q2", "q0"]).unwrap();
    assert!(a.density_matrix().max_abs_diff(&b.density_matrix()) < 1e-12);
}

#[test]
fn trace_out_product_factor() {
    let l = default_layout(2);
    let s = LabeledState::product(l, &[gates::ket0(), gates::ket_plus()]).unwrap();
    let r = s.partial_trace(&["q1"]).unwrap().density_matrix();
    let plus = ComplexMatrix::outer(&gates::ket_plus());
    assert!(r.max_abs_diff(&plus) < 1e-15);
}

#[test]
fn singlet_marginals_are_maximally_mixed() {
    let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
    for side in ["a", "b"] {
        let r = singlet().partial_trace(&[side]).unwrap();
        assert!(r.density_matrix().max_abs_diff(&half) < 1e-15);
    }
}

#[test]
fn partial_trace_keeps_original_order_and_validates() {
    let s = random_pure_state(3, 5);
    let r = s.partial_trace(&["q2", "q0"]).unwrap();
    assert_eq!(r.layout().labels(), vec!["q0", "q2"]);
    approx(r.density_matrix().trace().re, 1.0, 1e-12);
    assert!(matches!(s.partial_trace::<&str>(&[]), Err(crate::Error::EmptySelection)));
    assert!(matches!(s.partial_trace(&["x"]), Err(crate::Error::UnknownLabel(_))));
}

#[test]
fn nested_partial_traces_agree_with_brute_force() {
    for seed in 0..10 {
        let s = random_pure_state(3, seed);
        let rho = s.density_matrix();
        let ab = s.partial_trace(&["q0", "q1"]).unwrap();
        let a_via_ab = ab.partial_trace(&["q0"]).unwrap();
        let a = s.partial_trace(&["q0"]).unwrap();
        assert!(a_via_ab.density_matrix().max_abs_diff(&a.density_matrix()) < 1e-12);
        assert!(a.density_matrix().max_abs_diff(&brute_partial_trace(&rho, 3, &[0])) < 1e-12);
        assert!(ab.density_matrix().max_abs_diff(&brute_partial_trace(&rho, 3, &[0, 1])) < 1e-12);
        let mixed = LabeledState::density(s.layout().clone(), rho.clone()).unwrap();
        let r = mixed.partial_trace(&["q0", "q2"]).unwrap();
        assert!(r.density_matrix().max_abs_diff(&brute_partial_trace(&rho, 3, &[0, 2])) < 1e-12);
    }
}

#[test]
fn entropy_reference_values() {
    approx(random_pure_state(3, 2).von_neumann_entropy().unwrap(), 0.0, 1e-15);
    let half = LabeledState::density(default_layout(1), ComplexMatrix::identity(2).scale(c(0.5, 0.0))).unwrap();
    approx(half.von_neumann_entropy().unwrap(), 1.0, 1e-12);
    // spectrum {0.8, 1/15, 1/15, 1/15}; value from an independent numpy evaluation
    approx(werner_state(0.8).unwrap().von_neumann_entropy().unwrap(), 1.038_920_595_031_593_8, 1e-12);
}

#[test]
fn purify_rank_one_adds_nothing() {
    let s = random_pure_state(2, 4);
    let d = LabeledState::density(s.layout().clone(), s.density_matrix()).unwrap();
    let p = d.purify().unwrap();
    assert_eq!(p.n_qubits(), 2);
    approx(fidelity(&p, &s).unwrap(), 1.0, 1e-12);
}

#[test]
fn purify_maximally_mixed_qubit() {
    let half = LabeledState::density(default_layout(1), ComplexMatrix::identity(2).scale(c(0.5, 0.0))).unwrap();
    let p = half.purify().unwrap();
    assert_eq!(p.n_qubits(), 2);
    assert!(p.is_pure_form());
    approx(p.subsystem_entropy(&["q0"]).unwrap(), 1.0, 1e-12);
    let anc = p.layout().qubit(&p.layout().labels()[1]).unwrap();
    assert_eq!((anc.party, anc.role), (Party::Alice, Role::R));
}

#[test]
fn purify_werner_round_trip() {
    let w = werner_state(0.8).unwrap();
    let p = w.purify_with(Party::Bob).unwrap();
    assert_eq!(p.n_qubits(), 4);
    let back = p.partial_trace(&["a", "b"]).unwrap();
    assert!(back.density_matrix().max_abs_diff(&w.density_matrix()) < 1e-8);
    approx(p.subsystem_entropy(&["a", "b"]).unwrap(), w.von_neumann_entropy().unwrap(), 1e-8);
}

#[test]
fn fidelity_reference_values() {
    let s = random_pure_state(2, 9);
    approx(fidelity(&s, &s).unwrap(), 1.0, 1e-12);
    let l = default_layout(1);
    let zero = LabeledState::basis(l.clone(), 0).unwrap();
    let one = LabeledState::basis(l, 1).unwrap();
    approx(fidelity(&zero, &one).unwrap(), 0.0, 1e-15);
    for f in [0.5, 0.7, 0.9] {
        let w = werner_state(f).unwrap();
        approx(fidelity(&singlet(), &w).unwrap(), f, 1e-12);
        approx(fidelity(&w, &singlet()).unwrap(), f, 1e-12);
        // mixed-mixed path with one side rank one
        let sd = LabeledState::density(singlet().layout().clone(), singlet().density_matrix()).unwrap();
        approx(fidelity(&sd, &w).unwrap(), f, 1e-9);
    }
    assert!(matches!(
        fidelity(&zero, &s),
        Err(crate::Error::DimensionMismatch(_))
    ));
}

#[test]
fn random_generators_are_normalised_and_deterministic() {
    let s = random_pure_state(4, 3);
    let norm: f64 = s.amplitudes().unwrap().iter().map(|z| z.norm_sqr()).sum();
    approx(norm, 1.0, 1e-10);
    assert_eq!(s, random_pure_state(4, 3));
    let u = random_unitary(3, 3);
    assert!(u.unitary_deviation() < 1e-9);
    assert_eq!(u, random_unitary(3, 3));
}

#[test]
fn haar_single_qubit_first_moment() {
    let mut rng = seeded_rng(2024);
    let n = 10_000;
    let mean: f64 = (0..n).map(|_| haar_vector(2, &mut rng)[0].norm_sqr()).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
}

#[test]
fn density_validation() {
    let l = default_layout(1);
    let bad_trace = ComplexMatrix::identity(2);
    assert!(LabeledState::density(l.clone(), bad_trace).is_err());
    let negative = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]);
    assert!(LabeledState::density(l.clone(), negative).is_err());
    let skew = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, 0.1)], vec![c(0.0, 0.1), c(0.5, 0.0)]]);
    assert!(LabeledState::density(l, skew).is_err());
}

#[test]
fn reorder_and_tensor_are_consistent() {
    let a = random_pure_state_on(two_party_layout(1, 0), 1);
    let b = random_pure_state_on(two_party_layout(0, 2), 2);
    let ab = a.tensor(&b).unwrap();
    let ba = b.tensor(&a).unwrap().reorder(&["a0", "b0", "b1"]).unwrap();
    approx(fidelity(&ab, &ba).unwrap(), 1.0, 1e-12);
}

#[test]
fn fresh_qubits_are_zero() {
    let s = random_pure_state(1, 1);
    let t = s.with_fresh_qubits(&[Qubit::new("r", Party::Alice, Role::R)]).unwrap();
    let r = t.partial_trace(&["r"]).unwrap().density_matrix();
    assert!((r[(0, 0)] - ONE).norm() < 1e-15);
}

#[test]
fn json_rejects_both_or_neither_forms() {
    let bad = r#"{"layout":[{"label":"x","party":"alice","role":"S"}]}"#;
    assert!(LabeledState::from_json(bad).is_err());
    let extra = r#"{"layout":[{"label":"x","party":"alice","role":"S"}],"amplitudes":[[1,0],[0,0]],"junk":1}"#;
    assert!(LabeledState::from_json(extra).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..4, env in 1usize..3) {
        let rho = random_mixed_state_on(default_layout(n), env, seed).unwrap();
        let u = random_unitary(n, seed ^ 0x5eed);
        let labels = rho.layout().labels();
        let before = rho.von_neumann_entropy().unwrap();
        let after = rho.apply_unitary(&u, &labels).unwrap().von_neumann_entropy().unwrap();
        prop_assert!((before - after).abs() < 1e-9);
        prop_assert!(before >= -1e-9 && before <= n as f64 + 1e-9);
    }

    #[test]
    fn pure_states_have_symmetric_cuts(seed in any::<u64>(), n_a in 1usize..4, n_b in 1usize..4) {
        let s = random_pure_state_on(two_party_layout(n_a, n_b), seed);
        let a = s.party_entropy(Party::Alice).unwrap();
        let b = s.party_entropy(Party::Bob).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_subadditive(seed in any::<u64>(), env in 1usize..4) {
        let rho = random_mixed_state_on(two_party_layout(2, 1), env, seed).unwrap();
        let ab = rho.von_neumann_entropy().unwrap();
        let a = rho.party_entropy(Party::Alice).unwrap();
        let b = rho.party_entropy(Party::Bob).unwrap();
        prop_assert!(ab <= a + b + 1e-9);
    }

    #[test]
    fn json_round_trip_preserves_values(seed in any::<u64>(), n in 1usize..4, mixed in any::<bool>()) {
        let s = if mixed {
            random_mixed_state_on(default_layout(n), 1, seed).unwrap()
        } else {
            random_pure_state(n, seed)
        };
        let back = LabeledState::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.layout(), s.layout());
        prop_assert!(back.density_matrix().max_abs_diff(&s.density_matrix()) <= 1e-12);
    }
}
