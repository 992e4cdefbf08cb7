use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bell::Bell;
use crate::error::{Error, Result};
use crate::linalg::gates::ket0;
use crate::protocols::transcript::{ProtocolTranscript, TranscriptBuilder};
use crate::qstate::{LabeledState, Party, PartyLayout, Role};

/// What Alice sends to Bob over an ideal quantum channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SendMode {
    /// A pure qubit `s_a`.
    Unentangled,
    /// `s_a`, one half of a Φ+ pair `(s_a, t_a)` held wholly by Alice.
    EntangledHalf,
    /// Both halves of that pair, one after the other.
    EntangledPair,
}

impl SendMode {
    pub const ALL: [SendMode; 3] = [SendMode::Unentangled, SendMode::EntangledHalf, SendMode::EntangledPair];

    pub fn as_str(self) -> &'static str {
        match self {
            SendMode::Unentangled => "unentangled",
            SendMode::EntangledHalf => "entangled_half",
            SendMode::EntangledPair => "entangled_pair",
        }
    }
}

impl fmt::Display for SendMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SendMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SendMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown send mode `{s}`")))
    }
}

/// Transmission from Alice to Bob, who starts with his own qubit `s_b` in `|0>`.
/// The transcript's channel is the sent qubits, so useful work is certified too.
pub fn send_qubit(mode: SendMode) -> Result<ProtocolTranscript> {
    match mode {
        SendMode::Unentangled => {
            let layout = PartyLayout::default()
                .with("s_a", Party::Alice, Role::S)?
                .with("s_b", Party::Bob, Role::S)?;
            let initial = LabeledState::product(layout, &[ket0(), ket0()])?;
            Ok(TranscriptBuilder::new("send_unentangled", initial)?
                .transmit(&["s_a"], Party::Alice, Party::Bob)?
                .channel(&["s_a"], &["s_a"])
                .finish())
        }
        SendMode::EntangledHalf | SendMode::EntangledPair => {
            let pair = LabeledState::pure(
                PartyLayout::default()
                    .with("s_a", Party::Alice, Role::S)?
                    .with("t_a", Party::Alice, Role::S)?,
                Bell::PhiPlus.vector(),
            )?;
            let bob = LabeledState::pure(PartyLayout::default().with("s_b", Party::Bob, Role::S)?, ket0())?;
            let initial = pair.tensor(&bob)?;
            let b = TranscriptBuilder::new(format!("send_{mode}"), initial)?.transmit(&["s_a"], Party::Alice, Party::Bob)?;
            Ok(if mode == SendMode::EntangledHalf {
                b.channel(&["s_a"], &["s_a"]).finish()
            } else {
                b.transmit(&["t_a"], Party::Alice, Party::Bob)?
                    .channel(&["s_a", "t_a"], &["s_a", "t_a"])
                    .finish()
            })
        }
    }
}
