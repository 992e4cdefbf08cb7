//! Party-labelled qubit registers and the states that live on them.

pub(crate) mod kernel;
mod layout;
mod random;
mod state;

pub use layout::{Party, PartyLayout, Qubit, Role};
pub use random::{
    default_layout, haar_unitary, haar_vector, random_mixed_state_on, random_pure_state,
    random_pure_state_on, random_unitary, seeded_rng,
};
pub use state::{fidelity, shannon_bits, LabeledState, StateForm, StateRecord, NEGATIVE_EIGEN_TOL, NORM_TOL, UNITARY_TOL};

#[cfg(test)]
mod tests;
