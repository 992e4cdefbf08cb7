use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qbalance_core::protocols::SendMode;
use qbalance_core::Party;

#[derive(Parser, Debug)]
#[command(name = "qbalance", version, about = "Information-balance ledgers for bipartite quantum protocols")]
pub struct Cli {
    /// Seed for every random choice (Haar inputs, useful-work trials, random transcripts).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Run a JSON scenario file instead of a subcommand.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Teleport one qubit through a singlet and print the balance.
    Teleport(TeleportParams),
    /// Send a qubit from Alice to Bob.
    Send(SendParams),
    /// Iterate the recurrence distillation step on a Werner pair.
    Bbpssw(BbpsswParams),
    /// Distillation balance for a Werner pair or a state file.
    Distill(DistillParams),
    /// Entanglement measures and the formation/distillable/bound split.
    Measures(MeasuresParams),
    /// CSV over a grid of one numeric parameter.
    Sweep(SweepArgs),
}

fn parse_mode(s: &str) -> Result<SendMode, String> {
    s.parse().map_err(|e: qbalance_core::Error| e.to_string())
}

fn parse_party(s: &str) -> Result<Party, String> {
    match s {
        "alice" => Ok(Party::Alice),
        "bob" => Ok(Party::Bob),
        _ => Err(format!("unknown party `{s}` (expected alice or bob)")),
    }
}

#[derive(Args, Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TeleportParams {
    /// Polar angle of the unknown qubit; drawn from the seed when omitted.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, requires = "theta")]
    pub phi: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub env_per_pointer: usize,
    /// Dimension of the certified subspace (whole channel when omitted).
    #[arg(long)]
    pub subspace_dim: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
}

impl Default for TeleportParams {
    fn default() -> Self {
        Self {
            theta: None,
            phi: None,
            env_per_pointer: 1,
            subspace_dim: None,
            epsilon: 1e-6,
            trials: 64,
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SendParams {
    #[arg(long, value_parser = parse_mode, default_value = "unentangled")]
    pub mode: SendMode,
    /// Dimension of the certified subspace (whole channel when omitted).
    #[arg(long)]
    pub subspace_dim: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
}

impl Default for SendParams {
    fn default() -> Self {
        Self {
            mode: SendMode::Unentangled,
            subspace_dim: None,
            epsilon: 1e-6,
            trials: 64,
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BbpsswParams {
    /// Singlet fidelity of the input Werner pairs.
    #[arg(long, default_value_t = 0.8)]
    pub fidelity: f64,
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    /// Skip the twirl; the trajectory then comes from the full circuit only.
    #[arg(long = "no-twirl", action = ArgAction::SetFalse)]
    pub twirl: bool,
}

impl Default for BbpsswParams {
    fn default() -> Self {
        Self {
            fidelity: 0.8,
            rounds: 1,
            twirl: true,
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistillParams {
    /// Werner input fidelity (used when no state file is given).
    #[arg(long, default_value_t = 0.8)]
    pub fidelity: f64,
    /// JSON state file with `layout` and `amplitudes` or `density`.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub max_rounds: usize,
    /// Qubits of communication charged to the protocol.
    #[arg(long, default_value_t = 0.0)]
    pub w_p: f64,
}

impl Default for DistillParams {
    fn default() -> Self {
        Self {
            fidelity: 0.8,
            state: None,
            max_rounds: 10,
            w_p: 0.0,
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasuresParams {
    #[arg(long, default_value_t = 0.8)]
    pub fidelity: f64,
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Side whose qubits are partially transposed.
    #[arg(long, value_parser = parse_party, default_value = "alice")]
    pub cut: Party,
    #[arg(long, default_value_t = 10)]
    pub max_rounds: usize,
}

impl Default for MeasuresParams {
    fn default() -> Self {
        Self {
            fidelity: 0.8,
            state: None,
            cut: Party::Alice,
            max_rounds: 10,
        }
    }
}

/// Scenario-only: random transcripts checked against the balance laws.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BalanceSweepParams {
    pub count: usize,
    pub max_per_side: usize,
}

impl Default for BalanceSweepParams {
    fn default() -> Self {
        Self {
            count: 100,
            max_per_side: 4,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
#[value(rename_all = "snake_case")]
pub enum SweepProtocol {
    Bbpssw,
    DistillReport,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub protocol: SweepProtocol,
    /// Parameter to vary (bbpssw: fidelity, rounds; distill_report: fidelity, max_rounds, w_p).
    #[arg(long, default_value = "fidelity")]
    pub param: String,
    /// Comma-separated grid values; an empty string gives a header-only CSV.
    #[arg(long, conflicts_with_all = ["start", "stop", "step"])]
    pub grid: Option<String>,
    #[arg(long, requires_all = ["stop", "step"])]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 0.8)]
    pub fidelity: f64,
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    #[arg(long, default_value_t = 10)]
    pub max_rounds: usize,
    #[arg(long, default_value_t = 0.0)]
    pub w_p: f64,
}
