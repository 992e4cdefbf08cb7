//! Closed-system simulation and information accounting for bipartite quantum
//! communication.
//!
//! Protocols run as purely unitary evolutions on party-labelled qubit
//! registers. Measurements are modelled as C-NOT couplings to pointer and
//! environment qubits, so the global state stays pure and the ledger can
//! account for informational content, physical and logical work, and
//! entanglement across the Alice | Bob cut at every step.
//!
//! Modules, bottom up:
//!
//! * [`linalg`]: dense complex matrices and a Hermitian eigensolver.
//! * [`qstate`]: labelled registers, partial traces, entropies, purification.
//! * [`bell`]: Bell basis, Werner family, exact bilateral twirl.
//! * [`ledger`]: informational content, work, cut entanglement, balance checks.
//! * [`protocols`]: measurement-as-entanglement, qubit sending, teleportation,
//!   BBPSSW recurrence and distillation reports.
//! * [`measures`]: concurrence, entanglement of formation, negativity,
//!   hashing bound and the E_F = E_D + E_bound bracket.

pub mod bell;
pub mod error;
pub mod ledger;
pub mod linalg;
pub mod measures;
pub mod protocols;
pub mod qstate;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Eigen};
pub use qstate::{fidelity, LabeledState, Party, PartyLayout, Qubit, Role};
pub use num_complex::Complex64;
