//! Information accounting for closed bipartite systems.
//!
//! All quantities are in qubits / ebits (base-2 logarithms):
//!
//! * informational content `I_X = log2 dim H_X − S(ρ_X)`,
//! * physical work `W_p` = number of qubits sent,
//! * logical work `W_l` = receiver's gain in informational content,
//! * cut entanglement `E` = entropy of either side of a pure global state,
//! * useful work `W_u` = qubits of message certified to arrive undisturbed.
//!
//! For every transmission `E_in + W_p = E_out + W_l`, and under local
//! unitaries `I_A + I_B + 2E` is constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::protocols::transcript::{ProtocolTranscript, PURITY_TOL};
use crate::qstate::{fidelity, haar_vector, seeded_rng, LabeledState, Party};

/// Tolerance on `|E_in + W_p − E_out − W_l|` and on conservation drift.
pub const BALANCE_TOL: f64 = 1e-8;

pub fn informational_content(s: &LabeledState, party: Party) -> Result<f64> {
    let n = s.layout().count(party);
    if n == 0 {
        return Ok(0.0);
    }
    Ok(n as f64 - s.party_entropy(party)?)
}

/// Qubits carried by a transmission of `labels`, all of which must belong to `sender`.
pub fn physical_work<S: AsRef<str>>(before: &LabeledState, labels: &[S], sender: Party) -> Result<f64> {
    for l in labels {
        let q = before.layout().qubit(l.as_ref())?;
        if q.party != sender {
            return Err(Error::NotOwned {
                label: q.label.clone(),
                party: sender.to_string(),
            });
        }
    }
    Ok(labels.len() as f64)
}

pub fn logical_work(before: &LabeledState, after: &LabeledState, receiver: Party) -> Result<f64> {
    Ok(informational_content(after, receiver)? - informational_content(before, receiver)?)
}

/// Entropy of the `cut` side of a pure global state, checked against the other side.
pub fn cut_entanglement(s: &LabeledState, cut: Party) -> Result<f64> {
    if !s.is_pure(PURITY_TOL) {
        return Err(Error::Unsupported(
            "cut entanglement is defined here for pure global states only".into(),
        ));
    }
    let this = s.layout().labels_of(cut);
    let that = s.layout().labels_of(cut.other());
    if this.is_empty() || that.is_empty() {
        return Ok(0.0);
    }
    if s.is_pure_form() {
        return s.party_entropy(cut);
    }
    let e_this = s.partial_trace(&this)?.von_neumann_entropy()?;
    // density input: the two sides must agree, checked while cheap
    if that.len() <= 4 {
        let e_that = s.partial_trace(&that)?.von_neumann_entropy()?;
        if (e_this - e_that).abs() > BALANCE_TOL {
            return Err(Error::InvalidState(format!(
                "cut entropies disagree: {e_this} vs {e_that}"
            )));
        }
    }
    Ok(e_this)
}

/// Accounting record for one transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceLedger {
    pub i_a_in: f64,
    pub i_a_out: f64,
    pub i_b_in: f64,
    pub i_b_out: f64,
    pub e_in: f64,
    pub e_out: f64,
    pub w_p: f64,
    pub w_l: f64,
    pub w_u: f64,
    pub conservation_in: f64,
    pub conservation_out: f64,
    /// `E_in + W_p − E_out − W_l`.
    pub balance_residual: f64,
    /// Largest change of `I_A + I_B + 2E` across a step without transmission.
    pub conservation_drift: f64,
    /// `W_p − (E_out − E_in)`; negative means more entanglement appeared than qubits were sent.
    pub second_principle_margin: f64,
}

impl BalanceLedger {
    pub fn balance_holds(&self) -> bool {
        self.balance_residual.abs() <= BALANCE_TOL
    }

    pub fn conservation_holds(&self) -> bool {
        self.conservation_drift <= BALANCE_TOL
    }

    pub fn second_principle_holds(&self) -> bool {
        self.second_principle_margin >= -BALANCE_TOL
    }

    /// Human-readable list of failed invariants; empty when the run is consistent.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.balance_holds() {
            v.push(format!("balance residual {:e}", self.balance_residual));
        }
        if !self.conservation_holds() {
            v.push(format!("conservation drift {:e}", self.conservation_drift));
        }
        if !self.second_principle_holds() {
            v.push(format!(
                "entanglement grew by {} with only {} qubits sent",
                self.e_out - self.e_in,
                self.w_p
            ));
        }
        if self.e_in < -1e-9 || self.e_out < -1e-9 || self.w_p < 0.0 {
            v.push("negative entanglement or work".into());
        }
        if self.w_u < 0.0 || self.w_u > self.w_p + 1e-9 {
            v.push(format!("useful work {} outside [0, W_p = {}]", self.w_u, self.w_p));
        }
        v
    }
}

/// Fills a [`BalanceLedger`] from a transcript's snapshots. Useful work is
/// certified with [`UsefulWorkConfig::default`] when the transcript names a channel.
pub fn check_balance(t: &ProtocolTranscript) -> Result<BalanceLedger> {
    check_balance_with(t, &UsefulWorkConfig::default())
}

pub fn check_balance_with(t: &ProtocolTranscript, cfg: &UsefulWorkConfig) -> Result<BalanceLedger> {
    let snaps = t.snapshots();
    if snaps.len() != t.steps().len() + 1 {
        return Err(Error::IncompleteTranscript(format!(
            "{} snapshots for {} steps",
            snaps.len(),
            t.steps().len()
        )));
    }
    let first = &snaps[0];
    let last = snaps.last().expect("at least the initial snapshot");
    let w_p: f64 = snaps.iter().map(|s| s.w_p).sum();
    let w_l: f64 = snaps.iter().map(|s| s.w_l).sum();
    let conservation_drift = snaps
        .windows(2)
        .filter(|w| w[1].kind != "transmit")
        .map(|w| (w[1].conserved_total() - w[0].conserved_total()).abs())
        .fold(0.0, f64::max);
    let w_u = if t.channel().is_some() { useful_work(t, cfg)? } else { 0.0 };
    Ok(BalanceLedger {
        i_a_in: first.i_alice,
        i_a_out: last.i_alice,
        i_b_in: first.i_bob,
        i_b_out: last.i_bob,
        e_in: first.entanglement,
        e_out: last.entanglement,
        w_p,
        w_l,
        w_u,
        conservation_in: first.conserved_total(),
        conservation_out: last.conserved_total(),
        balance_residual: first.entanglement + w_p - last.entanglement - w_l,
        conservation_drift,
        second_principle_margin: w_p - (last.entanglement - first.entanglement),
    })
}

/// Parameters for certifying a faithfully transmitted subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsefulWorkConfig {
    /// Dimension of the tested subspace; `None` means the whole input register.
    pub subspace_dim: Option<usize>,
    /// Haar-random superpositions tested on top of the basis states.
    pub trials: usize,
    /// Required fidelity is `1 − epsilon`.
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for UsefulWorkConfig {
    fn default() -> Self {
        Self {
            subspace_dim: None,
            trials: 64,
            epsilon: 1e-6,
            seed: 0,
        }
    }
}

/// `log2(subspace_dim)` if every basis state of the subspace spanned by the
/// first `subspace_dim` computational states of the channel input, and
/// `trials` random superpositions within it, come out of the channel output
/// with fidelity at least `1 − epsilon`; zero otherwise.
///
/// The rest of the register keeps whatever state it had in the transcript's
/// initial state; if that marginal is mixed the replay runs on density matrices.
pub fn useful_work(t: &ProtocolTranscript, cfg: &UsefulWorkConfig) -> Result<f64> {
    let channel = t
        .channel()
        .ok_or_else(|| Error::IncompleteTranscript("transcript names no channel".into()))?;
    let initial = t.initial();
    let input_layout = initial.layout().select(&channel.input)?;
    let output_layout = t.final_state().layout().select(&channel.output)?;
    if input_layout.is_empty() || input_layout.len() != output_layout.len() {
        return Err(Error::InvalidParameter(
            "channel input and output must be non-empty and of equal size".into(),
        ));
    }
    let full = input_layout.dim();
    let d = cfg.subspace_dim.unwrap_or(full);
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("subspace dimension {d} is not a power of two")));
    }
    if d > full {
        return Err(Error::InvalidParameter(format!(
            "subspace of dimension {d} exceeds the {full}-dimensional input"
        )));
    }

    let rest_labels: Vec<String> = initial
        .layout()
        .labels()
        .into_iter()
        .filter(|l| !channel.input.contains(l))
        .collect();
    let rest = if rest_labels.is_empty() {
        None
    } else {
        let r = initial.partial_trace(&rest_labels)?;
        Some(if r.is_pure(1e-12) { r.to_pure(1e-12)? } else { r })
    };
    let order = initial.layout().labels();

    let mut rng = seeded_rng(cfg.seed);
    let embed = |v: Vec<crate::Complex64>| {
        let mut a = vec![ZERO; full];
        a[..v.len()].copy_from_slice(&v);
        a
    };
    let basis = (0..d).map(|j| {
        let mut v = vec![ZERO; d];
        v[j] = crate::linalg::ONE;
        v
    });
    let randoms: Vec<Vec<crate::Complex64>> = (0..cfg.trials).map(|_| haar_vector(d, &mut rng)).collect();

    for v in basis.chain(randoms) {
        let amps = embed(v);
        let message = LabeledState::pure(input_layout.clone(), amps.clone())?;
        let start = match &rest {
            None => message.reorder(&order)?,
            Some(r) => message.tensor(r)?.reorder(&order)?,
        };
        let start = start.with_layout(initial.layout().clone())?;
        let end = t.replay(&start)?;
        let received = end.partial_trace(&channel.output)?.reorder(&channel.output)?;
        let expected = LabeledState::pure(output_layout.clone(), amps)?;
        if fidelity(&expected, &received)? < 1.0 - cfg.epsilon {
            return Ok(0.0);
        }
    }
    Ok((d as f64).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{singlet, werner_state};
    use crate::qstate::{random_pure_state_on, random_unitary, PartyLayout, Role};

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn content_of_pure_and_maximally_mixed_qubits() {
        let l = PartyLayout::default().with("x", Party::Alice, Role::S).unwrap();
        let pure = LabeledState::basis(l, 0).unwrap();
        approx(informational_content(&pure, Party::Alice).unwrap(), 1.0, 1e-12);
        approx(informational_content(&pure, Party::Bob).unwrap(), 0.0, 0.0);
        approx(informational_content(&singlet(), Party::Alice).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn content_of_werner_pair_held_by_bob() {
        let w = werner_state(0.8).unwrap();
        let bob = w.transfer(&["a"], Party::Alice, Party::Bob).unwrap();
        // 2 − S(Werner 0.8), S from an independent numpy evaluation
        approx(informational_content(&bob, Party::Bob).unwrap(), 0.961_079_404_968_406_2, 1e-12);
    }

    #[test]
    fn physical_work_counts_and_checks_ownership() {
        let s = singlet();
        approx(physical_work(&s, &["a"], Party::Alice).unwrap(), 1.0, 0.0);
        approx(physical_work::<&str>(&s, &[], Party::Alice).unwrap(), 0.0, 0.0);
        assert!(matches!(
            physical_work(&s, &["b"], Party::Alice),
            Err(Error::NotOwned { .. })
        ));
    }

    #[test]
    fn cut_entanglement_values() {
        approx(cut_entanglement(&singlet(), Party::Alice).unwrap(), 1.0, 1e-12);
        approx(cut_entanglement(&singlet(), Party::Bob).unwrap(), 1.0, 1e-12);
        let l = crate::bell::pair_layout();
        let product = LabeledState::basis(l, 2).unwrap();
        approx(cut_entanglement(&product, Party::Alice).unwrap(), 0.0, 1e-12);
        assert!(matches!(
            cut_entanglement(&werner_state(0.8).unwrap(), Party::Alice),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn local_unitaries_do_no_logical_work() {
        let l = PartyLayout::default()
            .with("a0", Party::Alice, Role::S)
            .and_then(|l| l.with("a1", Party::Alice, Role::S))
            .and_then(|l| l.with("b0", Party::Bob, Role::S))
            .unwrap();
        let s = random_pure_state_on(l, 3);
        let t = s.apply_unitary(&random_unitary(2, 4), &["a0", "a1"]).unwrap();
        approx(logical_work(&s, &t, Party::Bob).unwrap(), 0.0, 1e-9);
        approx(informational_content(&t, Party::Bob).unwrap(), informational_content(&s, Party::Bob).unwrap(), 1e-9);
    }
}
