//! Protocols run as closed-system unitary circuits. Measurements are C-NOT
//! couplings to pointer and environment qubits; nothing is ever projected.

pub mod bbpssw;
pub mod distill;
pub mod measurement;
pub mod random;
pub mod send;
pub mod teleport;
pub mod transcript;

pub use bbpssw::{bbpssw_iterate, bbpssw_step, bbpssw_step_with, BbpsswOptions, BbpsswStep, TrajectoryPoint};
pub use distill::{distillation_report, DistillationConfig, DistillationLedger, LedgerShape};
pub use measurement::{measure_as_entanglement, measure_with_environment};
pub use random::random_transcript;
pub use send::{send_qubit, SendMode};
pub use teleport::{teleport, teleport_with, TeleportConfig};
pub use transcript::{Channel, ProtocolTranscript, Snapshot, Step, TranscriptBuilder, TranscriptExport};

use crate::linalg::{ComplexMatrix, ZERO};
use crate::qstate::kernel;

/// Composes a gate sequence on an `n`-qubit register into a single matrix.
/// Each entry is a gate and the register positions it acts on, first applied first.
pub fn circuit_unitary(n: usize, gates: &[(&ComplexMatrix, &[usize])]) -> ComplexMatrix {
    let d = 1usize << n;
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let mut col = vec![ZERO; d];
        col[j] = crate::linalg::ONE;
        for (g, pos) in gates {
            kernel::apply_to_vector(&mut col, n, g, pos);
        }
        for (i, v) in col.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    m
}
