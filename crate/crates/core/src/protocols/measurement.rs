use crate::error::{Error, Result};
use crate::linalg::gates;
use crate::qstate::{LabeledState, Qubit, Role};

/// Largest tolerated `1 − <0|ρ_pointer|0>` before measuring.
pub const POINTER_TOL: f64 = 1e-9;

/// C-NOT from each measured qubit onto its pointer, then from each pointer onto
/// one fresh environment qubit. The global state stays pure if it was.
pub fn measure_as_entanglement<S: AsRef<str>>(s: &LabeledState, measured: &[S], pointer: &[S]) -> Result<LabeledState> {
    measure_with_environment(s, measured, pointer, 1)
}

/// As [`measure_as_entanglement`] with `env_per_pointer` environment qubits per
/// pointer. They are appended with role R, owned by the pointer's party.
pub fn measure_with_environment<S: AsRef<str>>(
    s: &LabeledState,
    measured: &[S],
    pointer: &[S],
    env_per_pointer: usize,
) -> Result<LabeledState> {
    if measured.len() != pointer.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} measured qubits but {} pointers",
            measured.len(),
            pointer.len()
        )));
    }
    if measured.is_empty() {
        return Err(Error::EmptySelection);
    }
    let layout = s.layout();
    let all: Vec<&str> = measured.iter().chain(pointer).map(|l| l.as_ref()).collect();
    layout.positions(&all)?;
    for (m, p) in measured.iter().zip(pointer) {
        let mq = layout.qubit(m.as_ref())?;
        let pq = layout.qubit(p.as_ref())?;
        if pq.role != Role::M {
            return Err(Error::InvalidParameter(format!("pointer `{}` is not an M qubit", pq.label)));
        }
        if pq.party != mq.party {
            return Err(Error::InvalidParameter(format!(
                "pointer `{}` and measured `{}` belong to different parties",
                pq.label, mq.label
            )));
        }
        let weight0 = s.partial_trace(&[p.as_ref()])?.density_matrix()[(0, 0)].re;
        if weight0 < 1.0 - POINTER_TOL {
            return Err(Error::InvalidState(format!("pointer `{}` is not in |0>", pq.label)));
        }
    }

    let cnot = gates::cnot();
    let mut out = s.clone();
    for (m, p) in measured.iter().zip(pointer) {
        out = out.apply_unitary(&cnot, &[m.as_ref(), p.as_ref()])?;
    }
    for p in pointer {
        let party = layout.qubit(p.as_ref())?.party;
        for _ in 0..env_per_pointer {
            let label = out.layout().fresh_label(&format!("r_{}", p.as_ref()));
            out = out.with_fresh_qubits(&[Qubit::new(label.clone(), party, Role::R)])?;
            out = out.apply_unitary(&cnot, &[p.as_ref(), label.as_str()])?;
        }
    }
    Ok(out)
}
