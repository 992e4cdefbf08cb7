use proptest::prelude::*;

use qbalance_core::bell::{singlet, werner_state};
use qbalance_core::ledger::{check_balance, cut_entanglement, informational_content, BALANCE_TOL};
use qbalance_core::protocols::{measure_as_entanglement, random_transcript, teleport, Step};
use qbalance_core::qstate::{random_pure_state_on, random_unitary};
use qbalance_core::{LabeledState, Party, PartyLayout, Qubit, Role};

fn layout(n_a: usize, n_b: usize) -> PartyLayout {
    let mut l = PartyLayout::default();
    for i in 0..n_a {
        l = l.with(format!("a{i}"), Party::Alice, Role::S).unwrap();
    }
    for i in 0..n_b {
        l = l.with(format!("b{i}"), Party::Bob, Role::S).unwrap();
    }
    l
}

fn conserved(s: &LabeledState) -> f64 {
    informational_content(s, Party::Alice).unwrap()
        + informational_content(s, Party::Bob).unwrap()
        + 2.0 * cut_entanglement(s, Party::Alice).unwrap()
}

#[test]
fn measurement_spreads_but_keeps_singlet_entanglement() {
    let s = singlet()
        .with_fresh_qubits(&[Qubit::new("m_a", Party::Alice, Role::M)])
        .unwrap();
    let measured = measure_as_entanglement(&s, &["a"], &["m_a"]).unwrap();
    assert!((cut_entanglement(&measured, Party::Alice).unwrap() - 1.0).abs() < 1e-9);
    assert!((cut_entanglement(&measured, Party::Bob).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn purification_surplus_equals_the_mixed_state_entropy() {
    let w = werner_state(0.8).unwrap();
    let p = w.purify().unwrap();
    let ancillas = p.layout().labels_with(Party::Alice, Role::R);
    assert_eq!(ancillas.len(), 2);
    let originals: Vec<String> = p.layout().labels().into_iter().filter(|l| !ancillas.contains(l)).collect();
    let back = p.partial_trace(&originals).unwrap();
    assert!(back.density_matrix().max_abs_diff(&w.density_matrix()) < 1e-8);
    let delta = p.subsystem_entropy(&ancillas).unwrap();
    assert!((delta - w.von_neumann_entropy().unwrap()).abs() < 1e-8);
}

#[test]
fn teleport_transcript_replays_and_keeps_ownership() {
    let t = teleport(&[qbalance_core::Complex64::new(0.6, 0.0), qbalance_core::Complex64::new(0.0, 0.8)]).unwrap();
    let replayed = t.replay(t.initial()).unwrap();
    let diff = replayed
        .amplitudes()
        .unwrap()
        .iter()
        .zip(t.final_state().amplitudes().unwrap())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-9);
    let mut state = t.initial().clone();
    for step in t.steps() {
        let next = step.apply(&state).unwrap();
        if let Step::Transmit { labels, from, to } = step {
            for l in labels {
                assert_eq!(state.layout().qubit(l).unwrap().party, *from);
                assert_eq!(next.layout().qubit(l).unwrap().party, *to);
            }
        }
        state = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_unitaries_conserve_the_total(seed in any::<u64>(), n_a in 1usize..=4, n_b in 1usize..=4, k in 1usize..=4, bob in any::<bool>()) {
        let s = random_pure_state_on(layout(n_a, n_b), seed);
        let (party, n) = if bob { (Party::Bob, n_b) } else { (Party::Alice, n_a) };
        let targets: Vec<String> = s.layout().labels_of(party).into_iter().take(k.min(n)).collect();
        let u = random_unitary(targets.len(), seed ^ 0x5a5a);
        let t = s.apply_unitary(&u, &targets).unwrap();
        prop_assert!((conserved(&s) - conserved(&t)).abs() < BALANCE_TOL);
        prop_assert!((conserved(&s) - (n_a + n_b) as f64).abs() < 1e-8);
    }

    #[test]
    fn random_transcripts_obey_balance_and_second_principle(seed in any::<u64>()) {
        let t = random_transcript(seed, 4).unwrap();
        let l = check_balance(&t).unwrap();
        prop_assert!(l.balance_residual.abs() < 1e-8);
        prop_assert!(l.e_out - l.e_in <= l.w_p + 1e-8);
        prop_assert!(l.conservation_drift < 1e-8);
    }
}
