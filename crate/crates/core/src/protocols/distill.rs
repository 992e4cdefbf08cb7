//! Distillation balance: what a deterministic protocol would leave behind.
//!
//! The input pair has formation entanglement `E_F`; purifying it adds the
//! surplus `Δ = S(rho)` held by an ancilla. Out comes `E_D` (useful work) in
//! distilled singlets and `E_bound = E_F − E_D` in the rejected part. `E_D`
//! is only estimated, so both outputs are brackets around a best estimate.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{self, DEFAULT_MAX_ROUNDS};
use crate::protocols::transcript::PURITY_TOL;
use crate::qstate::{LabeledState, Party};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistillationConfig {
    /// Recurrence rounds tried before hashing.
    pub max_rounds: usize,
    /// Qubits of communication charged to the protocol.
    pub w_p: f64,
}

impl Default for DistillationConfig {
    fn default() -> Self {
        Self {
            max_rounds: DEFAULT_MAX_ROUNDS,
            w_p: 0.0,
        }
    }
}

/// Which of the three balance pictures a report falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerShape {
    /// Pure input: everything is distillable.
    Reversible,
    /// Some entanglement distils and some stays bound.
    Irreversible,
    /// Entangled but nothing distils.
    BoundOnly,
    /// No entanglement at all.
    Separable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillationLedger {
    #[serde(rename = "e_f_single_copy")]
    pub e_f: f64,
    /// Purification surplus `S(rho)`.
    pub delta: f64,
    /// Best lower estimate of `E_D`, reported as useful work.
    pub e_d_estimate: f64,
    pub e_d_upper: f64,
    /// `e_f − e_d_estimate`.
    pub e_bound_estimate: f64,
    pub e_bound_lower: f64,
    pub e_bound_upper: f64,
    pub w_p: f64,
    pub rounds: usize,
    #[serde(rename = "yield")]
    pub yield_fraction: f64,
    pub shape: LedgerShape,
}

impl DistillationLedger {
    pub fn w_u(&self) -> f64 {
        self.e_d_estimate
    }
}

pub fn distillation_report(rho: &LabeledState, cfg: &DistillationConfig) -> Result<DistillationLedger> {
    if rho.is_pure(PURITY_TOL) {
        let e = measures::entropy_of_entanglement(rho)?;
        return Ok(DistillationLedger {
            e_f: e,
            delta: 0.0,
            e_d_estimate: e,
            e_d_upper: e,
            e_bound_estimate: 0.0,
            e_bound_lower: 0.0,
            e_bound_upper: 0.0,
            w_p: cfg.w_p,
            rounds: 0,
            yield_fraction: 1.0,
            shape: if e > 1e-9 {
                LedgerShape::Reversible
            } else {
                LedgerShape::Separable
            },
        });
    }
    let gh = measures::gibbs_helmholtz_with(rho, Party::Alice, cfg.max_rounds)?;
    let (e_d, rounds, yield_fraction) = if gh.e_d_lower > 0.0 {
        let est = measures::recurrence_hashing_estimate(rho, cfg.max_rounds)?;
        (est.value, est.rounds, est.yield_fraction)
    } else {
        (0.0, 0, 1.0)
    };
    let shape = if gh.e_f <= 1e-9 {
        LedgerShape::Separable
    } else if e_d <= 0.0 {
        LedgerShape::BoundOnly
    } else {
        LedgerShape::Irreversible
    };
    Ok(DistillationLedger {
        e_f: gh.e_f,
        delta: rho.von_neumann_entropy()?,
        e_d_estimate: e_d,
        e_d_upper: gh.e_d_upper,
        e_bound_estimate: gh.e_f - e_d,
        e_bound_lower: gh.e_bound_lower,
        e_bound_upper: gh.e_bound_upper,
        w_p: cfg.w_p,
        rounds,
        yield_fraction,
        shape,
    })
}
