use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger;
use crate::linalg::{gates, ComplexMatrix};
use crate::qstate::{LabeledState, Party, Role};

/// Tolerance for "the closed system is still pure".
pub const PURITY_TOL: f64 = 1e-9;

/// One step of a closed-system protocol.
#[derive(Debug, Clone)]
pub enum Step {
    /// A local unitary on `targets` (all owned by one party).
    Unitary {
        name: String,
        targets: Vec<String>,
        matrix: ComplexMatrix,
    },
    /// Particles change hands. The amplitudes are not touched.
    Transmit {
        labels: Vec<String>,
        from: Party,
        to: Party,
    },
    /// Pointer qubits (role M) copied into environment qubits (role R) by C-NOT.
    Decohere { pairs: Vec<(String, String)> },
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Unitary { .. } => "unitary",
            Step::Transmit { .. } => "transmit",
            Step::Decohere { .. } => "decohere",
        }
    }

    pub fn apply(&self, state: &LabeledState) -> Result<LabeledState> {
        match self {
            Step::Unitary { targets, matrix, .. } => {
                let layout = state.layout();
                let owners: Vec<Party> = targets
                    .iter()
                    .map(|t| layout.qubit(t).map(|q| q.party))
                    .collect::<Result<_>>()?;
                if owners.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::Unsupported(format!(
                        "unitary on {targets:?} spans both parties"
                    )));
                }
                state.apply_unitary(matrix, targets)
            }
            Step::Transmit { labels, from, to } => {
                if from == to {
                    return Err(Error::InvalidParameter("sender and receiver coincide".into()));
                }
                state.transfer(labels, *from, *to)
            }
            Step::Decohere { pairs } => {
                let cnot = gates::cnot();
                let mut s = state.clone();
                for (pointer, env) in pairs {
                    let p = state.layout().qubit(pointer)?;
                    let e = state.layout().qubit(env)?;
                    if p.role != Role::M || e.role != Role::R || p.party != e.party {
                        return Err(Error::InvalidParameter(format!(
                            "decoherence pairs an M qubit with an R qubit of the same party; got `{pointer}`/`{env}`"
                        )));
                    }
                    s = s.apply_unitary(&cnot, &[pointer, env])?;
                }
                Ok(s)
            }
        }
    }
}

/// Ledger inputs recorded after each step (index 0 is the initial state).
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub kind: String,
    pub qubits_alice: usize,
    pub qubits_bob: usize,
    pub i_alice: f64,
    pub i_bob: f64,
    pub entanglement: f64,
    /// Qubits sent in this step.
    pub w_p: f64,
    /// Receiver's gain in informational content in this step.
    pub w_l: f64,
}

impl Snapshot {
    fn of(step: usize, kind: &str, s: &LabeledState) -> Result<Self> {
        Ok(Self {
            step,
            kind: kind.to_string(),
            qubits_alice: s.layout().count(Party::Alice),
            qubits_bob: s.layout().count(Party::Bob),
            i_alice: ledger::informational_content(s, Party::Alice)?,
            i_bob: ledger::informational_content(s, Party::Bob)?,
            entanglement: ledger::cut_entanglement(s, Party::Alice)?,
            w_p: 0.0,
            w_l: 0.0,
        })
    }

    /// `I_A + I_B + 2E`.
    pub fn conserved_total(&self) -> f64 {
        self.i_alice + self.i_bob + 2.0 * self.entanglement
    }
}

/// Designates which qubits carry the message in and out, for useful-work checks.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Channel {
    pub input: Vec<String>,
    pub output: Vec<String>,
}

/// A finished protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolTranscript {
    name: String,
    initial: LabeledState,
    steps: Vec<Step>,
    final_state: LabeledState,
    snapshots: Vec<Snapshot>,
    channel: Option<Channel>,
}

impl ProtocolTranscript {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn initial(&self) -> &LabeledState {
        &self.initial
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn final_state(&self) -> &LabeledState {
        &self.final_state
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn channel(&self) -> Option<&Channel> {
        self.channel.as_ref()
    }

    /// Runs the recorded steps on another initial state with the same layout.
    pub fn replay(&self, initial: &LabeledState) -> Result<LabeledState> {
        if initial.layout() != self.initial.layout() {
            return Err(Error::DimensionMismatch("replay needs the transcript's initial layout".into()));
        }
        self.steps.iter().try_fold(initial.clone(), |s, step| step.apply(&s))
    }

    pub fn export(&self) -> TranscriptExport {
        TranscriptExport {
            protocol: self.name.clone(),
            steps: self
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| StepExport::from_step(i + 1, s))
                .collect(),
            snapshots: self.snapshots.clone(),
            channel: self.channel.clone(),
        }
    }
}

/// Records steps against a running pure state.
#[derive(Debug, Clone)]
pub struct TranscriptBuilder {
    name: String,
    initial: LabeledState,
    current: LabeledState,
    steps: Vec<Step>,
    snapshots: Vec<Snapshot>,
    channel: Option<Channel>,
}

impl TranscriptBuilder {
    pub fn new(name: impl Into<String>, initial: LabeledState) -> Result<Self> {
        if !initial.is_pure(PURITY_TOL) {
            return Err(Error::Unsupported(
                "transcripts start from a pure closed-system state".into(),
            ));
        }
        let snap = Snapshot::of(0, "initial", &initial)?;
        Ok(Self {
            name: name.into(),
            current: initial.clone(),
            initial,
            steps: Vec::new(),
            snapshots: vec![snap],
            channel: None,
        })
    }

    pub fn current(&self) -> &LabeledState {
        &self.current
    }

    pub fn step(mut self, step: Step) -> Result<Self> {
        let next = step.apply(&self.current)?;
        let mut snap = Snapshot::of(self.steps.len() + 1, step.kind(), &next)?;
        if let Step::Transmit { labels, from, to } = &step {
            snap.w_p = ledger::physical_work(&self.current, labels, *from)?;
            snap.w_l = ledger::logical_work(&self.current, &next, *to)?;
        }
        self.current = next;
        self.steps.push(step);
        self.snapshots.push(snap);
        Ok(self)
    }

    pub fn unitary<S: AsRef<str>>(self, name: &str, matrix: ComplexMatrix, targets: &[S]) -> Result<Self> {
        self.step(Step::Unitary {
            name: name.to_string(),
            targets: targets.iter().map(|t| t.as_ref().to_string()).collect(),
            matrix,
        })
    }

    pub fn transmit<S: AsRef<str>>(self, labels: &[S], from: Party, to: Party) -> Result<Self> {
        self.step(Step::Transmit {
            labels: labels.iter().map(|t| t.as_ref().to_string()).collect(),
            from,
            to,
        })
    }

    pub fn decohere(self, pairs: Vec<(String, String)>) -> Result<Self> {
        self.step(Step::Decohere { pairs })
    }

    pub fn channel<S: AsRef<str>>(mut self, input: &[S], output: &[S]) -> Self {
        self.channel = Some(Channel {
            input: input.iter().map(|t| t.as_ref().to_string()).collect(),
            output: output.iter().map(|t| t.as_ref().to_string()).collect(),
        });
        self
    }

    pub fn finish(self) -> ProtocolTranscript {
        ProtocolTranscript {
            name: self.name,
            initial: self.initial,
            steps: self.steps,
            final_state: self.current,
            snapshots: self.snapshots,
            channel: self.channel,
        }
    }
}

/// JSON view of a transcript: step list plus per-step ledger snapshots.
#[derive(Debug, Clone, Serialize)]
pub struct TranscriptExport {
    pub protocol: String,
    pub steps: Vec<StepExport>,
    pub snapshots: Vec<Snapshot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<Channel>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepExport {
    Unitary { index: usize, name: String, targets: Vec<String> },
    Transmit { index: usize, labels: Vec<String>, from: Party, to: Party },
    Decohere { index: usize, pairs: Vec<(String, String)> },
}

impl StepExport {
    fn from_step(index: usize, s: &Step) -> Self {
        match s {
            Step::Unitary { name, targets, .. } => StepExport::Unitary {
                index,
                name: name.clone(),
                targets: targets.clone(),
            },
            Step::Transmit { labels, from, to } => StepExport::Transmit {
                index,
                labels: labels.clone(),
                from: *from,
                to: *to,
            },
            Step::Decohere { pairs } => StepExport::Decohere {
                index,
                pairs: pairs.clone(),
            },
        }
    }
}
