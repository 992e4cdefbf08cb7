use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{gates, ComplexMatrix};
use crate::protocols::circuit_unitary;
use crate::protocols::transcript::{ProtocolTranscript, TranscriptBuilder};
use crate::qstate::{LabeledState, Party, PartyLayout, Role};

pub const UNKNOWN: &str = "s1_a";
pub const ALICE_HALF: &str = "s2_a";
pub const BOB_HALF: &str = "s_b";
pub const POINTERS: [&str; 2] = ["m1_a", "m2_a"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TeleportConfig {
    /// Environment qubits each pointer is copied into before transmission.
    pub env_per_pointer: usize,
}

impl Default for TeleportConfig {
    fn default() -> Self {
        Self { env_per_pointer: 1 }
    }
}

fn env_label(pointer: usize, k: usize) -> String {
    format!("r{}_a{k}", pointer + 1)
}

/// Register `s1_a, s2_a, s_b, m1_a, m2_a` followed by the environment qubits.
pub fn teleport_layout(cfg: &TeleportConfig) -> Result<PartyLayout> {
    let mut l = PartyLayout::default()
        .with(UNKNOWN, Party::Alice, Role::S)?
        .with(ALICE_HALF, Party::Alice, Role::S)?
        .with(BOB_HALF, Party::Bob, Role::S)?
        .with(POINTERS[0], Party::Alice, Role::M)?
        .with(POINTERS[1], Party::Alice, Role::M)?;
    for p in 0..2 {
        for k in 0..cfg.env_per_pointer {
            l = l.with(env_label(p, k), Party::Alice, Role::R)?;
        }
    }
    Ok(l)
}

/// Alice's "measurement": rotate the Bell basis of `s1 s2` to the computational
/// one, copy both bits into the pointers, rotate back. Acts on `[s1, s2, m1, m2]`.
pub fn bell_measurement_unitary() -> ComplexMatrix {
    let cnot = gates::cnot();
    let h = gates::hadamard();
    circuit_unitary(
        4,
        &[
            (&cnot, &[0, 1]),
            (&h, &[0]),
            (&cnot, &[0, 2]),
            (&cnot, &[1, 3]),
            (&h, &[0]),
            (&cnot, &[0, 1]),
        ],
    )
}

/// Bob's correction on `[m1, m2, s_b]`: for pointer bits `(a, b)` apply `Z^a X^b Z X`.
pub fn correction_unitary() -> ComplexMatrix {
    let x = gates::pauli_x();
    let z = gates::pauli_z();
    let id = ComplexMatrix::identity(2);
    let zx = &z * &x;
    let blocks: Vec<ComplexMatrix> = (0..4)
        .map(|k| {
            let za = if k & 2 != 0 { &z } else { &id };
            let xb = if k & 1 != 0 { &x } else { &id };
            &(za * xb) * &zx
        })
        .collect();
    gates::multiplexed(&blocks)
}

pub fn teleport(unknown: &[Complex64]) -> Result<ProtocolTranscript> {
    teleport_with(unknown, &TeleportConfig::default())
}

/// Teleports `unknown` through a singlet. Steps: Bell-basis measurement as a
/// local unitary, decoherence of the pointers, transmission of both pointers
/// to Bob, and Bob's pointer-controlled correction.
pub fn teleport_with(unknown: &[Complex64], cfg: &TeleportConfig) -> Result<ProtocolTranscript> {
    if unknown.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "the unknown state must be one qubit, got {} amplitudes",
            unknown.len()
        )));
    }
    let layout = teleport_layout(cfg)?;
    let psi = LabeledState::pure(layout.select(&[UNKNOWN])?, unknown.to_vec())?;
    let pair = LabeledState::pure(layout.select(&[ALICE_HALF, BOB_HALF])?, crate::bell::Bell::PsiMinus.vector())?;
    let rest: Vec<String> = layout.labels().into_iter().skip(3).collect();
    let blank = LabeledState::basis(layout.select(&rest)?, 0)?;
    let initial = psi.tensor(&pair)?.tensor(&blank)?;

    let mut b = TranscriptBuilder::new("teleport", initial)?.unitary(
        "bell_measurement",
        bell_measurement_unitary(),
        &[UNKNOWN, ALICE_HALF, POINTERS[0], POINTERS[1]],
    )?;
    if cfg.env_per_pointer > 0 {
        let pairs = (0..2)
            .flat_map(|p| (0..cfg.env_per_pointer).map(move |k| (POINTERS[p].to_string(), env_label(p, k))))
            .collect();
        b = b.decohere(pairs)?;
    }
    Ok(b.transmit(&POINTERS, Party::Alice, Party::Bob)?
        .unitary("correction", correction_unitary(), &[POINTERS[0], POINTERS[1], BOB_HALF])?
        .channel(&[UNKNOWN], &[BOB_HALF])
        .finish())
}
