//! Seeded Haar-random states and unitaries for property sweeps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::layout::{Party, PartyLayout, Role};
use super::state::LabeledState;
use crate::error::Result;
use crate::linalg::{c, ComplexMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector of length `dim`.
pub fn haar_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Haar-random `dim x dim` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal folded back into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let (mut q, r) = g.qr();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Layout `q0..q{n-1}`, all held by Alice with role S.
pub fn default_layout(n_qubits: usize) -> PartyLayout {
    (0..n_qubits)
        .try_fold(PartyLayout::default(), |l, i| l.with(format!("q{i}"), Party::Alice, Role::S))
        .expect("generated labels are unique")
}

pub fn random_pure_state(n_qubits: usize, seed: u64) -> LabeledState {
    random_pure_state_on(default_layout(n_qubits.max(1)), seed)
}

pub fn random_pure_state_on(layout: PartyLayout, seed: u64) -> LabeledState {
    let mut rng = seeded_rng(seed);
    let amps = haar_vector(layout.dim(), &mut rng);
    LabeledState::pure_normalized(layout, amps).expect("Haar vector is normalisable")
}

pub fn random_unitary(n_qubits: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(1 << n_qubits, &mut seeded_rng(seed))
}

/// Random mixed state on `layout` with rank up to `2^env_qubits`, drawn as the
/// marginal of a Haar-random pure state on a larger register.
pub fn random_mixed_state_on(layout: PartyLayout, env_qubits: usize, seed: u64) -> Result<LabeledState> {
    let labels = layout.labels();
    let mut full = layout;
    for i in 0..env_qubits {
        let l = full.fresh_label(&format!("env{i}"));
        full = full.with(l, Party::Alice, Role::R)?;
    }
    random_pure_state_on(full, seed).partial_trace(&labels)
}
