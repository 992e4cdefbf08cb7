//! Fixtures shared by the criterion benches.

use qbalance_core::qstate::{haar_vector, random_pure_state_on, seeded_rng};
use qbalance_core::{Complex64, ComplexMatrix, LabeledState, Party, PartyLayout, Role};

/// A Haar-random single-qubit input for teleportation.
pub fn unknown_qubit(seed: u64) -> Vec<Complex64> {
    haar_vector(2, &mut seeded_rng(seed))
}

/// Random pure state on `n_a` Alice qubits followed by `n_b` Bob qubits.
pub fn bipartite_state(n_a: usize, n_b: usize, seed: u64) -> LabeledState {
    let mut layout = PartyLayout::default();
    for i in 0..n_a {
        layout = layout.with(format!("a{i}"), Party::Alice, Role::S).expect("fresh label");
    }
    for i in 0..n_b {
        layout = layout.with(format!("b{i}"), Party::Bob, Role::S).expect("fresh label");
    }
    random_pure_state_on(layout, seed)
}

/// Reduced density matrix of Alice's side, a Hermitian input for eigensolver benches.
pub fn hermitian_input(n_qubits: usize, seed: u64) -> ComplexMatrix {
    let s = bipartite_state(n_qubits, n_qubits, seed);
    s.partial_trace(&s.layout().labels_of(Party::Alice))
        .expect("non-empty side")
        .density_matrix()
}
