//! Entanglement measures and the `E_F = E_D + E_bound` decomposition.
//!
//! Exact `E_D` is unknown for mixed states, so it is carried as a bracket:
//! the lower end comes from hashing (optionally after recurrence rounds), the
//! upper end from `min(E_F, log-negativity)`.

use serde::{Deserialize, Serialize};

use crate::bell::{self, Bell};
use crate::error::{Error, Result};
use crate::ledger;
use crate::linalg::{self, gates, kron, ComplexMatrix, EIGEN_ZERO};
use crate::protocols::transcript::PURITY_TOL;
use crate::qstate::{shannon_bits, LabeledState, Party};

/// Minimum partial-transpose eigenvalue still counted as PPT.
pub const PPT_TOL: f64 = 1e-9;

/// Recurrence rounds tried before hashing when estimating `E_D`.
pub const DEFAULT_MAX_ROUNDS: usize = 10;

pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

/// Entropy of either side of a pure bipartite state.
pub fn entropy_of_entanglement(psi: &LabeledState) -> Result<f64> {
    ledger::cut_entanglement(psi, Party::Alice)
}

fn pair_matrix(rho: &LabeledState) -> Result<ComplexMatrix> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit state required, got {} qubits",
            rho.n_qubits()
        )));
    }
    Ok(rho.density_matrix())
}

/// Wootters concurrence. With `ρ = W W†` (columns of `W` are the eigenvectors
/// scaled by `√λ`), the spin-flip values are the singular values of
/// `τ = Wᵀ (σy ⊗ σy) W`. Eigenvalues below `EIGEN_ZERO` are dropped from `W`.
pub fn concurrence(rho: &LabeledState) -> Result<f64> {
    let m = pair_matrix(rho)?;
    let yy = kron(&gates::pauli_y(), &gates::pauli_y())?;
    let eig = linalg::hermitian_eig(&m)?;
    let kept: Vec<usize> = (0..4).filter(|&i| eig.values[i] > EIGEN_ZERO).collect();
    let w = ComplexMatrix::from_fn(4, kept.len(), |r, k| eig.vectors[(r, kept[k])] * eig.values[kept[k]].sqrt());
    let tau = &(&w.transpose() * &yy) * &w;
    let mut lam = if kept.is_empty() { Vec::new() } else { tau.singular_values() };
    lam.resize(4, 0.0);
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0))
}

/// Single-copy entanglement of formation, `h((1 + sqrt(1 − C²)) / 2)`.
pub fn entanglement_of_formation(rho: &LabeledState) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

pub fn eof_from_concurrence(c: f64) -> f64 {
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// Partial transpose over every qubit held by `party`.
pub fn partial_transpose(rho: &LabeledState, party: Party) -> Result<ComplexMatrix> {
    let layout = rho.layout();
    let side = layout.labels_of(party);
    if side.is_empty() || side.len() == layout.len() {
        return Err(Error::InvalidParameter(format!(
            "{party} must hold some but not all qubits to define a cut"
        )));
    }
    let n = layout.len();
    let mask: usize = layout
        .positions(&side)?
        .iter()
        .map(|&p| 1usize << (n - 1 - p))
        .sum();
    let m = rho.density_matrix();
    let d = m.rows();
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        let swapped_i = (i & !mask) | (j & mask);
        let swapped_j = (j & !mask) | (i & mask);
        m[(swapped_i, swapped_j)]
    }))
}

/// Sum of the moduli of the negative partial-transpose eigenvalues.
pub fn negativity(rho: &LabeledState, cut: Party) -> Result<f64> {
    let ev = linalg::hermitian_eigenvalues(&partial_transpose(rho, cut)?)?;
    Ok(ev.iter().filter(|&&v| v < 0.0).map(|v| -v).sum())
}

pub fn min_partial_transpose_eigenvalue(rho: &LabeledState, cut: Party) -> Result<f64> {
    Ok(*linalg::hermitian_eigenvalues(&partial_transpose(rho, cut)?)?
        .last()
        .expect("non-empty spectrum"))
}

pub fn is_ppt(rho: &LabeledState, cut: Party) -> Result<bool> {
    Ok(min_partial_transpose_eigenvalue(rho, cut)? >= -PPT_TOL)
}

/// `log2(2N + 1)`, an upper bound on distillable entanglement.
pub fn log_negativity(rho: &LabeledState, cut: Party) -> Result<f64> {
    Ok((2.0 * negativity(rho, cut)? + 1.0).log2())
}

/// One-way hashing rate `max(0, S(B) − S(AB), S(A) − S(AB))` per pair. For
/// Bell-diagonal states both marginals are maximally mixed and this is `1 − S(ρ)`.
pub fn hashing_lower_bound(rho: &LabeledState) -> Result<f64> {
    let s_ab = rho.von_neumann_entropy()?;
    let s_a = rho.party_entropy(Party::Alice)?;
    let s_b = rho.party_entropy(Party::Bob)?;
    Ok((s_b - s_ab).max(s_a - s_ab).max(0.0))
}

/// Hashing rate of the Werner state with singlet fidelity `f`.
pub fn werner_hashing(f: f64) -> f64 {
    let q = (1.0 - f) / 3.0;
    (1.0 - shannon_bits(&[f, q, q, q])).max(0.0)
}

/// Best lower estimate of `E_D` from hashing, with or without recurrence preprocessing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistillableEstimate {
    /// Ebits per input pair.
    pub value: f64,
    /// Recurrence rounds preceding hashing at the optimum.
    pub rounds: usize,
    /// Expected fraction of input pairs surviving those rounds.
    pub yield_fraction: f64,
    /// Largest Bell-state fidelity of the input; the recurrence runs in that frame.
    pub aligned_fidelity: f64,
}

/// Hashing directly, or after `r ≤ max_rounds` twirled recurrence rounds run in
/// the frame of the input's dominant Bell state.
pub fn recurrence_hashing_estimate(rho: &LabeledState, max_rounds: usize) -> Result<DistillableEstimate> {
    let fids = bell::bell_fidelities(rho)?;
    let f0 = fids.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut best = DistillableEstimate {
        value: hashing_lower_bound(rho)?,
        rounds: 0,
        yield_fraction: 1.0,
        aligned_fidelity: f0,
    };
    if f0 <= 0.5 {
        return Ok(best);
    }
    let (mut f, mut yield_fraction) = (f0, 1.0);
    for r in 0..=max_rounds {
        if r > 0 {
            let (p, next) = bell::recurrence_map(f);
            f = next;
            yield_fraction *= p / 2.0;
        }
        let v = yield_fraction * werner_hashing(f);
        if v > best.value {
            best = DistillableEstimate {
                value: v,
                rounds: r,
                yield_fraction,
                aligned_fidelity: f0,
            };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Pure,
    FreeMixed,
    PptSeparableOrBound,
    Separable,
}

/// `E_F = E_D + E_bound` with `E_D` (and hence `E_bound`) as brackets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsHelmholtzRecord {
    /// Single-copy entanglement of formation (the asymptotic value is not computed).
    #[serde(rename = "e_f_single_copy")]
    pub e_f: f64,
    pub e_d_lower: f64,
    pub e_d_upper: f64,
    pub e_bound_lower: f64,
    pub e_bound_upper: f64,
    pub classification: Classification,
}

impl GibbsHelmholtzRecord {
    /// True when `E_F − E_D` is certainly positive.
    pub fn irreversible(&self) -> bool {
        self.e_bound_lower > 1e-9
    }
}

pub fn gibbs_helmholtz(rho: &LabeledState, cut: Party) -> Result<GibbsHelmholtzRecord> {
    gibbs_helmholtz_with(rho, cut, DEFAULT_MAX_ROUNDS)
}

pub fn gibbs_helmholtz_with(rho: &LabeledState, cut: Party, max_rounds: usize) -> Result<GibbsHelmholtzRecord> {
    if rho.is_pure(PURITY_TOL) {
        let e = ledger::cut_entanglement(rho, cut)?;
        return Ok(GibbsHelmholtzRecord {
            e_f: e,
            e_d_lower: e,
            e_d_upper: e,
            e_bound_lower: 0.0,
            e_bound_upper: 0.0,
            classification: if e > 1e-9 {
                Classification::Pure
            } else {
                Classification::Separable
            },
        });
    }
    let layout = rho.layout();
    if layout.len() != 2 || layout.count(Party::Alice) != 1 {
        return Err(Error::Unsupported(
            "mixed-state decomposition is available for one qubit per party only".into(),
        ));
    }
    let c = concurrence(rho)?;
    let e_f = eof_from_concurrence(c);
    let ppt = is_ppt(rho, cut)?;
    let (e_d_lower, e_d_upper) = if ppt {
        (0.0, 0.0)
    } else {
        let lower = recurrence_hashing_estimate(rho, max_rounds)?.value;
        let upper = e_f.min(log_negativity(rho, cut)?);
        (lower, upper)
    };
    let classification = if c <= 1e-12 {
        Classification::Separable
    } else if ppt {
        Classification::PptSeparableOrBound
    } else {
        Classification::FreeMixed
    };
    Ok(GibbsHelmholtzRecord {
        e_f,
        e_d_lower,
        e_d_upper,
        e_bound_lower: (e_f - e_d_upper).max(0.0),
        e_bound_upper: (e_f - e_d_lower).max(0.0),
        classification,
    })
}

/// Fidelity of `rho` with the Bell state it is closest to.
pub fn max_bell_fidelity(rho: &LabeledState) -> Result<(Bell, f64)> {
    let f = bell::bell_fidelities(rho)?;
    let (i, v) = f
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    Ok((Bell::ALL[i], v))
}

#[cfg(test)]
mod tests;
