use nalgebra::Matrix4;
use proptest::prelude::*;

use super::*;
use crate::bell::{pair_layout, singlet, werner_matrix, werner_state};
use crate::linalg::{c, ComplexMatrix, ZERO};
use crate::qstate::{random_mixed_state_on, random_pure_state_on, random_unitary};

fn approx(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

/// Spin-flip spectrum straight from the non-Hermitian product ρ ρ̃ (real input only).
fn concurrence_via_real_product(rho: &ComplexMatrix) -> f64 {
    let m = Matrix4::from_fn(|i, j| rho[(i, j)].re);
    // σy ⊗ σy is real: anti-diagonal [-1, 1, 1, -1] pattern
    let yy = Matrix4::new(
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    );
    let prod = m * (yy * m * yy);
    let mut lam: Vec<f64> = prod.complex_eigenvalues().iter().map(|z| z.re.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    (lam[0] - lam[1] - lam[2] - lam[3]).max(0.0)
}

/// For a pure two-qubit state a|00> + b|01> + c|10> + d|11>, C = 2|ad − bc|.
fn pure_concurrence(amps: &[crate::Complex64]) -> f64 {
    2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm()
}

fn local_unitary(state: &LabeledState, seed: u64) -> LabeledState {
    state
        .apply_unitary(&random_unitary(1, seed), &["a"])
        .and_then(|s| s.apply_unitary(&random_unitary(1, seed + 1), &["b"]))
        .unwrap()
}

#[test]
fn entropy_of_entanglement_reference_values() {
    let product = LabeledState::basis(pair_layout(), 1).unwrap();
    approx(entropy_of_entanglement(&product).unwrap(), 0.0, 1e-12);
    approx(entropy_of_entanglement(&singlet()).unwrap(), 1.0, 1e-12);
    let psi = LabeledState::pure(pair_layout(), vec![c(0.9f64.sqrt(), 0.0), ZERO, ZERO, c(0.1f64.sqrt(), 0.0)]).unwrap();
    let e = entropy_of_entanglement(&psi).unwrap();
    approx(e, 0.468_995_593_589_281_1, 1e-12);
    let reduced = psi.partial_trace(&["a"]).unwrap().density_matrix();
    let spectrum = crate::linalg::hermitian_eigenvalues(&reduced).unwrap();
    approx(e, binary_entropy(spectrum[0]), 1e-12);
    assert!(entropy_of_entanglement(&werner_state(0.8).unwrap()).is_err());
}

#[test]
fn concurrence_reference_values() {
    approx(concurrence(&singlet()).unwrap(), 1.0, 1e-12);
    approx(entanglement_of_formation(&singlet()).unwrap(), 1.0, 1e-12);
    let mixed = LabeledState::density(pair_layout(), ComplexMatrix::identity(4).scale(c(0.25, 0.0))).unwrap();
    approx(concurrence(&mixed).unwrap(), 0.0, 1e-12);
    approx(entanglement_of_formation(&mixed).unwrap(), 0.0, 1e-12);
}

#[test]
fn werner_concurrence_matches_non_hermitian_oracle() {
    let w = werner_state(0.8).unwrap();
    let oracle = concurrence_via_real_product(&werner_matrix(0.8));
    approx(oracle, 0.6, 1e-9);
    approx(concurrence(&w).unwrap(), oracle, 1e-9);
    // h(0.9), evaluated independently in numpy
    approx(entanglement_of_formation(&w).unwrap(), 0.468_995_593_589_281_45, 1e-9);
    for f in [0.3, 0.55, 0.7, 0.95] {
        approx(
            concurrence(&werner_state(f).unwrap()).unwrap(),
            concurrence_via_real_product(&werner_matrix(f)),
            1e-8,
        );
    }
}

#[test]
fn concurrence_requires_two_qubits() {
    let three = crate::qstate::random_pure_state(3, 1);
    assert!(matches!(concurrence(&three), Err(Error::DimensionMismatch(_))));
}

#[test]
fn negativity_reference_values() {
    let product = LabeledState::basis(pair_layout(), 2).unwrap();
    approx(negativity(&product, Party::Alice).unwrap(), 0.0, 1e-12);
    assert!(is_ppt(&product, Party::Alice).unwrap());
    approx(min_partial_transpose_eigenvalue(&singlet(), Party::Alice).unwrap(), -0.5, 1e-12);
    approx(negativity(&singlet(), Party::Bob).unwrap(), 0.5, 1e-12);
    assert!(matches!(
        negativity(&crate::qstate::random_pure_state(2, 0), Party::Bob),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn werner_is_ppt_exactly_up_to_one_half() {
    for k in 0..=40 {
        let f = k as f64 / 40.0;
        let w = werner_state(f).unwrap();
        assert_eq!(is_ppt(&w, Party::Alice).unwrap(), f <= 0.5, "F = {f}");
    }
}

#[test]
fn hashing_reference_values() {
    approx(hashing_lower_bound(&singlet()).unwrap(), 1.0, 1e-12);
    approx(hashing_lower_bound(&werner_state(0.8).unwrap()).unwrap(), 0.0, 0.0);
    // 1 − S with spectrum {0.95, 1/60 ×3}, numpy
    approx(hashing_lower_bound(&werner_state(0.95).unwrap()).unwrap(), 0.634_354_917_847_985_4, 1e-12);
    approx(werner_hashing(0.95), 0.634_354_917_847_985_4, 1e-12);
    // a product pure state has nothing to distil
    let product = LabeledState::basis(pair_layout(), 0).unwrap();
    approx(hashing_lower_bound(&product).unwrap(), 0.0, 1e-12);
}

#[test]
fn recurrence_lifts_werner_above_zero_hashing() {
    let est = recurrence_hashing_estimate(&werner_state(0.8).unwrap(), DEFAULT_MAX_ROUNDS).unwrap();
    assert!(est.rounds >= 1);
    assert!(est.value > 0.0 && est.value < 0.4690);
    assert!(est.yield_fraction > 0.0 && est.yield_fraction < 1.0);
}

#[test]
fn gibbs_helmholtz_pure_states_have_no_bound_part() {
    for seed in 0..20 {
        let psi = random_pure_state_on(pair_layout(), seed);
        let r = gibbs_helmholtz(&psi, Party::Alice).unwrap();
        assert_eq!(r.e_bound_lower, 0.0);
        assert_eq!(r.e_bound_upper, 0.0);
        approx(r.e_d_lower, r.e_f, 1e-12);
        assert_eq!(r.classification, Classification::Pure);
    }
}

#[test]
fn gibbs_helmholtz_larger_pure_states() {
    let layout = crate::qstate::PartyLayout::default()
        .with("a0", Party::Alice, crate::qstate::Role::S)
        .and_then(|l| l.with("a1", Party::Alice, crate::qstate::Role::S))
        .and_then(|l| l.with("b0", Party::Bob, crate::qstate::Role::S))
        .unwrap();
    let psi = random_pure_state_on(layout, 3);
    let r = gibbs_helmholtz(&psi, Party::Bob).unwrap();
    approx(r.e_f, psi.party_entropy(Party::Bob).unwrap(), 1e-12);
    let mixed = random_mixed_state_on(psi.layout().clone(), 1, 3).unwrap();
    assert!(matches!(gibbs_helmholtz(&mixed, Party::Alice), Err(Error::Unsupported(_))));
}

#[test]
fn gibbs_helmholtz_separable_states_are_zero() {
    let quarter = LabeledState::density(pair_layout(), ComplexMatrix::identity(4).scale(c(0.25, 0.0))).unwrap();
    for s in [quarter, werner_state(0.4).unwrap(), werner_state(0.5).unwrap()] {
        let r = gibbs_helmholtz(&s, Party::Alice).unwrap();
        for v in [r.e_f, r.e_d_lower, r.e_d_upper, r.e_bound_lower, r.e_bound_upper] {
            approx(v, 0.0, 1e-9);
        }
        assert_eq!(r.classification, Classification::Separable);
    }
}

#[test]
fn gibbs_helmholtz_werner_bracket() {
    let r = gibbs_helmholtz(&werner_state(0.8).unwrap(), Party::Alice).unwrap();
    approx(r.e_f, 0.4690, 1e-4);
    assert!(r.e_d_lower > 0.0 && r.e_d_lower <= r.e_d_upper + 1e-9);
    assert!(r.e_bound_lower >= 0.0);
    assert!(r.e_bound_upper > 0.0);
    assert_eq!(r.classification, Classification::FreeMixed);
}

#[test]
fn werner_formation_is_monotone_above_one_half() {
    let values: Vec<f64> = (0..=50)
        .map(|k| entanglement_of_formation(&werner_state(0.5 + k as f64 / 100.0).unwrap()).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>(), env in 1usize..3) {
        let rho = random_mixed_state_on(pair_layout(), env, seed).unwrap();
        let moved = local_unitary(&rho, seed.wrapping_add(17));
        prop_assert!((concurrence(&rho).unwrap() - concurrence(&moved).unwrap()).abs() < 1e-8);
        prop_assert!((entanglement_of_formation(&rho).unwrap() - entanglement_of_formation(&moved).unwrap()).abs() < 1e-8);
        prop_assert!((negativity(&rho, Party::Alice).unwrap() - negativity(&moved, Party::Alice).unwrap()).abs() < 1e-8);
        let psi = random_pure_state_on(pair_layout(), seed);
        let psi_moved = local_unitary(&psi, seed.wrapping_add(3));
        prop_assert!((entropy_of_entanglement(&psi).unwrap() - entropy_of_entanglement(&psi_moved).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn formation_equals_entropy_on_pure_states(seed in any::<u64>()) {
        let psi = random_pure_state_on(pair_layout(), seed);
        let as_density = LabeledState::density(pair_layout(), psi.density_matrix()).unwrap();
        let c_closed = pure_concurrence(psi.amplitudes().unwrap());
        prop_assert!((concurrence(&as_density).unwrap() - c_closed).abs() < 1e-7);
        prop_assert!((entanglement_of_formation(&as_density).unwrap() - entropy_of_entanglement(&psi).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn ppt_states_claim_no_distillable_entanglement(seed in any::<u64>(), env in 1usize..3) {
        let rho = random_mixed_state_on(pair_layout(), env, seed).unwrap();
        let r = gibbs_helmholtz(&rho, Party::Alice).unwrap();
        if is_ppt(&rho, Party::Alice).unwrap() {
            prop_assert_eq!(r.e_d_lower, 0.0);
        }
        prop_assert!(r.e_d_lower <= r.e_d_upper + 1e-9);
        prop_assert!(r.e_bound_lower >= 0.0 && r.e_bound_upper >= r.e_bound_lower);
    }
}
