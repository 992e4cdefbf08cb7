use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One side of the bipartite cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        })
    }
}

/// What a qubit is for: controlled system, measuring apparatus or environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    S,
    M,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qubit {
    pub label: String,
    pub party: Party,
    pub role: Role,
}

impl Qubit {
    pub fn new(label: impl Into<String>, party: Party, role: Role) -> Self {
        Self {
            label: label.into(),
            party,
            role,
        }
    }
}

/// Ordered register of labelled qubits. Position in the list is the tensor
/// position in the global state, with position 0 the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartyLayout {
    qubits: Vec<Qubit>,
}

impl PartyLayout {
    pub fn new(qubits: Vec<Qubit>) -> Result<Self> {
        let mut seen = HashSet::new();
        for q in &qubits {
            if !seen.insert(q.label.as_str()) {
                return Err(Error::DuplicateLabel(q.label.clone()));
            }
        }
        Ok(Self { qubits })
    }

    /// Appends a qubit, builder style.
    pub fn with(mut self, label: impl Into<String>, party: Party, role: Role) -> Result<Self> {
        let q = Qubit::new(label, party, role);
        if self.contains(&q.label) {
            return Err(Error::DuplicateLabel(q.label));
        }
        self.qubits.push(q);
        Ok(self)
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn dim(&self) -> usize {
        1usize << self.qubits.len()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.qubits.iter().any(|q| q.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.qubits
            .iter()
            .position(|q| q.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Positions of `labels` in the order given; rejects unknown or repeated labels.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l.as_ref())?;
            if out.contains(&p) {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn qubit(&self, label: &str) -> Result<&Qubit> {
        Ok(&self.qubits[self.position(label)?])
    }

    pub fn labels(&self) -> Vec<String> {
        self.qubits.iter().map(|q| q.label.clone()).collect()
    }

    pub fn labels_of(&self, party: Party) -> Vec<String> {
        self.qubits
            .iter()
            .filter(|q| q.party == party)
            .map(|q| q.label.clone())
            .collect()
    }

    pub fn labels_with(&self, party: Party, role: Role) -> Vec<String> {
        self.qubits
            .iter()
            .filter(|q| q.party == party && q.role == role)
            .map(|q| q.label.clone())
            .collect()
    }

    pub fn count(&self, party: Party) -> usize {
        self.qubits.iter().filter(|q| q.party == party).count()
    }

    /// Number of measuring-apparatus qubits held by `party` (`m_A` / `m_B`).
    pub fn m_count(&self, party: Party) -> usize {
        self.qubits
            .iter()
            .filter(|q| q.party == party && q.role == Role::M)
            .count()
    }

    /// Sub-layout of `labels` in the order given.
    pub fn select<S: AsRef<str>>(&self, labels: &[S]) -> Result<PartyLayout> {
        let pos = self.positions(labels)?;
        Ok(PartyLayout {
            qubits: pos.iter().map(|&p| self.qubits[p].clone()).collect(),
        })
    }

    pub fn concat(&self, other: &PartyLayout) -> Result<PartyLayout> {
        let mut qubits = self.qubits.clone();
        qubits.extend(other.qubits.iter().cloned());
        PartyLayout::new(qubits)
    }

    /// Hands `labels` from `from` to `to`. Amplitudes are untouched; only ownership changes.
    pub fn transfer<S: AsRef<str>>(&self, labels: &[S], from: Party, to: Party) -> Result<PartyLayout> {
        let pos = self.positions(labels)?;
        let mut qubits = self.qubits.clone();
        for p in pos {
            if qubits[p].party != from {
                return Err(Error::NotOwned {
                    label: qubits[p].label.clone(),
                    party: from.to_string(),
                });
            }
            qubits[p].party = to;
        }
        Ok(PartyLayout { qubits })
    }

    /// A label not yet present, derived from `stem`.
    pub fn fresh_label(&self, stem: &str) -> String {
        if !self.contains(stem) {
            return stem.to_string();
        }
        (1..)
            .map(|i| format!("{stem}_{i}"))
            .find(|l| !self.contains(l))
            .expect("unbounded search")
    }
}
