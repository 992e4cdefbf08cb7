//! Two-copy recurrence (BBPSSW) in closed-system form.
//!
//! Each copy of `rho` is purified with an ancilla on Alice's side. Both copies
//! are rotated so the singlet becomes Φ+, the source pair XORs into the target
//! pair on each side, and the target qubits are measured into pointer and
//! environment qubits. The kept pair is read off the agreeing-pointer block.

use serde::Serialize;

use crate::bell::{self, pair_layout, singlet_fidelity};
use crate::error::{Error, Result};
use crate::linalg::{c, gates, kron, ComplexMatrix};
use crate::protocols::measurement::measure_as_entanglement;
use crate::qstate::{LabeledState, Party, PartyLayout, Qubit, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BbpsswOptions {
    /// Twirl the input onto the Werner family first (exact 12-rotation average).
    pub twirl: bool,
}

impl Default for BbpsswOptions {
    fn default() -> Self {
        Self { twirl: true }
    }
}

#[derive(Debug, Clone)]
pub struct BbpsswStep {
    /// Weight of the pointers-agree block.
    pub p_keep: f64,
    /// Source pair conditioned on agreement, on the `(a, b)` pair layout.
    pub rho_next: LabeledState,
    /// The whole unprojected pure state after measurement.
    pub branch_state: LabeledState,
    /// Singlet fidelity of `rho_next`.
    pub fidelity_next: f64,
}

/// One point of an iterated recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub round: usize,
    pub fidelity: f64,
    pub p_keep: f64,
    /// Expected kept pairs per input pair; two pairs are consumed per attempt.
    pub surviving_fraction: f64,
}

pub fn bbpssw_step(rho: &LabeledState) -> Result<BbpsswStep> {
    bbpssw_step_with(rho, &BbpsswOptions::default())
}

fn copy_of(purified: &LabeledState, k: usize) -> Result<LabeledState> {
    let qubits = purified
        .layout()
        .qubits()
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let label = match i {
                0 => format!("a{k}"),
                1 => format!("b{k}"),
                j => format!("x{k}_{}", j - 2),
            };
            Qubit::new(label, q.party, q.role)
        })
        .collect();
    purified.with_layout(PartyLayout::new(qubits)?)
}

pub fn bbpssw_step_with(rho: &LabeledState, opts: &BbpsswOptions) -> Result<BbpsswStep> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "recurrence acts on two-qubit pairs, got {} qubits",
            rho.n_qubits()
        )));
    }
    let pair = LabeledState::density(pair_layout(), rho.density_matrix())?;
    let pair = if opts.twirl { bell::twirl(&pair)? } else { pair };
    let purified = pair.purify_with(Party::Alice)?;
    let two = copy_of(&purified, 1)?.tensor(&copy_of(&purified, 2)?)?;

    let y = gates::pauli_y();
    let cnot = gates::cnot();
    let s = two
        .apply_unitary(&y, &["b1"])?
        .apply_unitary(&y, &["b2"])?
        .apply_unitary(&cnot, &["a1", "a2"])?
        .apply_unitary(&cnot, &["b1", "b2"])?
        .with_fresh_qubits(&[
            Qubit::new("p_a", Party::Alice, Role::M),
            Qubit::new("p_b", Party::Bob, Role::M),
        ])?;
    let branch_state = measure_as_entanglement(&s, &["a2", "b2"], &["p_a", "p_b"])?;

    // index (x << 2) | p with x the source pair and p the two pointers
    let view = branch_state.partial_trace(&["a1", "b1", "p_a", "p_b"])?.density_matrix();
    let mut kept = ComplexMatrix::zeros(4, 4);
    for x in 0..4 {
        for z in 0..4 {
            kept[(x, z)] = view[((x << 2), (z << 2))] + view[((x << 2) | 3, (z << 2) | 3)];
        }
    }
    let p_keep = kept.trace().re;
    if p_keep <= 0.0 {
        return Err(Error::InvalidState("the agreeing branch has zero weight".into()));
    }
    let yb = kron(&ComplexMatrix::identity(2), &y)?;
    let next = (&(&yb * &kept) * &yb.dagger()).scale(c(1.0 / p_keep, 0.0)).symmetrized();
    let rho_next = LabeledState::density(pair_layout(), next)?;
    let fidelity_next = singlet_fidelity(&rho_next)?;
    Ok(BbpsswStep {
        p_keep,
        rho_next,
        branch_state,
        fidelity_next,
    })
}

/// Iterates the closed-form Werner recurrence from singlet fidelity `f0`.
pub fn bbpssw_iterate(f0: f64, rounds: usize) -> Result<Vec<TrajectoryPoint>> {
    if !(f0 > 0.25 && f0 <= 1.0) {
        return Err(Error::InvalidParameter(format!("initial fidelity {f0} outside (0.25, 1]")));
    }
    if rounds == 0 {
        return Err(Error::InvalidParameter("at least one round is required".into()));
    }
    let mut f = f0;
    let mut surviving = 1.0;
    Ok((1..=rounds)
        .map(|round| {
            let (p_keep, next) = bell::recurrence_map(f);
            f = next;
            surviving *= p_keep / 2.0;
            TrajectoryPoint {
                round,
                fidelity: f,
                p_keep,
                surviving_fraction: surviving,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{singlet, werner_state};
    use crate::ledger::cut_entanglement;

    // (F, p_keep, F') from an independent numpy evaluation of the 8-qubit density circuit
    const TABLE: [(f64, f64, f64); 6] = [
        (0.5, 0.555_555_555_555_555_6, 0.5),
        (0.6, 0.608_888_888_888_888_9, 0.620_437_956_204_379_5),
        (0.7, 0.68, 0.735_294_117_647_058_8),
        (0.8, 0.768_888_888_888_889, 0.838_150_289_017_341),
        (0.9, 0.875_555_555_555_555_5, 0.926_395_939_086_294_5),
        (1.0, 1.0, 1.0),
    ];

    #[test]
    fn singlet_is_a_fixed_point() {
        let s = bbpssw_step(&singlet()).unwrap();
        assert!((s.p_keep - 1.0).abs() < 1e-12);
        assert!((s.fidelity_next - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_matches_reference_table() {
        for (f, p, f_next) in TABLE {
            let s = bbpssw_step(&werner_state(f).unwrap()).unwrap();
            assert!((s.p_keep - p).abs() < 1e-9, "F = {f}: p_keep {}", s.p_keep);
            assert!((s.fidelity_next - f_next).abs() < 1e-9, "F = {f}: F' {}", s.fidelity_next);
            let (p_fast, f_fast) = bell::recurrence_map(f);
            assert!((p_fast - p).abs() < 1e-12 && (f_fast - f_next).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_input_needs_no_twirl() {
        let w = werner_state(0.7).unwrap();
        let a = bbpssw_step_with(&w, &BbpsswOptions { twirl: false }).unwrap();
        let b = bbpssw_step(&w).unwrap();
        assert!((a.p_keep - b.p_keep).abs() < 1e-12);
        assert!(a.rho_next.density_matrix().max_abs_diff(&b.rho_next.density_matrix()) < 1e-12);
    }

    #[test]
    fn branch_state_is_pure_and_keeps_its_entanglement() {
        let s = bbpssw_step(&werner_state(0.8).unwrap()).unwrap();
        assert!(s.branch_state.is_pure(1e-9));
        // each purified copy carries S(rho_b) = 1 ebit across the cut
        let e = cut_entanglement(&s.branch_state, Party::Alice).unwrap();
        assert!((e - 2.0).abs() < 1e-9, "{e}");
    }

    #[test]
    fn iterate_matches_composed_steps() {
        let traj = bbpssw_iterate(0.8, 3).unwrap();
        let mut rho = werner_state(0.8).unwrap();
        let mut surviving = 1.0;
        for pt in &traj {
            let s = bbpssw_step(&rho).unwrap();
            surviving *= s.p_keep / 2.0;
            assert!((pt.fidelity - s.fidelity_next).abs() < 1e-9);
            assert!((pt.p_keep - s.p_keep).abs() < 1e-9);
            assert!((pt.surviving_fraction - surviving).abs() < 1e-9);
            rho = s.rho_next;
        }
        let expected = [0.838_150_289_017_341, 0.873_584_515_298_498_8, 0.904_540_216_762_13];
        for (pt, f) in traj.iter().zip(expected) {
            assert!((pt.fidelity - f).abs() < 1e-12);
        }
        assert!((traj[2].surviving_fraction - 0.065_629_548_805_427_5).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_trajectories_are_flat() {
        for f0 in [0.5, 1.0] {
            for pt in bbpssw_iterate(f0, 5).unwrap() {
                assert!((pt.fidelity - f0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn recurrence_increases_fidelity_strictly_between_the_fixed_points() {
        for k in 1..=50 {
            let f = 0.5 + 0.5 * k as f64 / 51.0;
            let (_, next) = bell::recurrence_map(f);
            assert!(next > f, "F = {f}");
        }
    }

    #[test]
    fn iterate_validates_inputs() {
        assert!(bbpssw_iterate(0.25, 1).is_err());
        assert!(bbpssw_iterate(1.01, 1).is_err());
        assert!(bbpssw_iterate(f64::NAN, 1).is_err());
        assert!(bbpssw_iterate(0.8, 0).is_err());
        assert!(bbpssw_step(&crate::qstate::random_pure_state(3, 0)).is_err());
    }
}
