use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel;
use super::layout::{Party, PartyLayout, Qubit, Role};
use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, EIGEN_ZERO, ZERO};

/// Normalisation tolerance for state vectors and density traces.
pub const NORM_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry before it is rejected.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-9;
/// Tolerance used for the unitarity check on applied gates.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum StateForm {
    Pure(Vec<Complex64>),
    Density(ComplexMatrix),
}

/// A quantum state over a party-labelled register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct LabeledState {
    layout: PartyLayout,
    form: StateForm,
}

fn expect_dim(layout: &PartyLayout, got: usize) -> Result<()> {
    if got != layout.dim() {
        return Err(Error::DimensionMismatch(format!(
            "layout of {} qubits needs dimension {}, got {got}",
            layout.len(),
            layout.dim()
        )));
    }
    Ok(())
}

/// `-sum p log2 p` over a spectrum, with eigenvalues clamped to `[0, 1]`.
pub fn shannon_bits(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > EIGEN_ZERO)
        .map(|p| -p * p.log2())
        .sum();
    s.max(0.0)
}

impl LabeledState {
    pub fn pure(layout: PartyLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        expect_dim(&layout, amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state vector has norm^2 {norm}")));
        }
        Ok(Self {
            layout,
            form: StateForm::Pure(amplitudes),
        })
    }

    /// Normalises `amplitudes` before building the state.
    pub fn pure_normalized(layout: PartyLayout, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::pure(layout, amplitudes)
    }

    pub fn density(layout: PartyLayout, rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        expect_dim(&layout, rho.rows())?;
        let dev = rho.hermitian_deviation();
        if dev > NORM_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({dev:e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("density matrix has trace {tr}")));
        }
        let min = *linalg::hermitian_eigenvalues(&rho)?.last().expect("non-empty");
        if min < -NEGATIVE_EIGEN_TOL {
            return Err(Error::InvalidState(format!("density matrix has eigenvalue {min}")));
        }
        Ok(Self {
            layout,
            form: StateForm::Density(rho.symmetrized()),
        })
    }

    /// Skips validation; callers guarantee the matrix is a density operator.
    pub(crate) fn density_unchecked(layout: PartyLayout, rho: ComplexMatrix) -> Self {
        debug_assert_eq!(rho.rows(), layout.dim());
        Self {
            layout,
            form: StateForm::Density(rho),
        }
    }

    pub(crate) fn pure_unchecked(layout: PartyLayout, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.dim());
        Self {
            layout,
            form: StateForm::Pure(amplitudes),
        }
    }

    /// Computational basis state `|index>`.
    pub fn basis(layout: PartyLayout, index: usize) -> Result<Self> {
        let mut amps = vec![ZERO; layout.dim()];
        *amps
            .get_mut(index)
            .ok_or_else(|| Error::InvalidParameter(format!("basis index {index} out of range")))? = c(1.0, 0.0);
        Self::pure(layout, amps)
    }

    /// Product of single-qubit pure states, one per layout entry.
    pub fn product(layout: PartyLayout, factors: &[Vec<Complex64>]) -> Result<Self> {
        if factors.len() != layout.len() || factors.iter().any(|f| f.len() != 2) {
            return Err(Error::DimensionMismatch(
                "product state needs one 2-vector per qubit".into(),
            ));
        }
        let amps = factors
            .iter()
            .fold(vec![c(1.0, 0.0)], |acc, f| linalg::kron_vec(&acc, f));
        Self::pure_normalized(layout, amps)
    }

    pub fn layout(&self) -> &PartyLayout {
        &self.layout
    }

    pub fn form(&self) -> &StateForm {
        &self.form
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.len()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.form {
            StateForm::Pure(a) => Some(a),
            StateForm::Density(_) => None,
        }
    }

    pub fn is_pure_form(&self) -> bool {
        matches!(self.form, StateForm::Pure(_))
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match &self.form {
            StateForm::Pure(a) => ComplexMatrix::outer(a),
            StateForm::Density(r) => r.clone(),
        }
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        match &self.form {
            StateForm::Pure(_) => 1.0,
            StateForm::Density(r) => r.data().iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// True for vector states and for rank-one density matrices.
    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }

    /// Vector form of a pure state, extracting the dominant eigenvector of a
    /// rank-one density matrix if necessary.
    pub fn to_pure(&self, tol: f64) -> Result<LabeledState> {
        match &self.form {
            StateForm::Pure(_) => Ok(self.clone()),
            StateForm::Density(r) => {
                if !self.is_pure(tol) {
                    return Err(Error::Unsupported("state is mixed".into()));
                }
                let eig = linalg::hermitian_eig(r)?;
                Ok(Self::pure_unchecked(self.layout.clone(), eig.vectors.column(0)))
            }
        }
    }

    pub fn with_layout(&self, layout: PartyLayout) -> Result<Self> {
        expect_dim(&layout, self.dim())?;
        Ok(Self {
            layout,
            form: self.form.clone(),
        })
    }

    /// Moves ownership of `labels` from one party to the other.
    pub fn transfer<S: AsRef<str>>(&self, labels: &[S], from: Party, to: Party) -> Result<Self> {
        Ok(Self {
            layout: self.layout.transfer(labels, from, to)?,
            form: self.form.clone(),
        })
    }

    /// Applies `u` to `targets` (first target is the most significant gate bit).
    pub fn apply_unitary<S: AsRef<str>>(&self, u: &ComplexMatrix, targets: &[S]) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::EmptySelection);
        }
        let pos = self.layout.positions(targets)?;
        let d = 1usize << pos.len();
        if u.rows() != d || u.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} gate on {} qubits",
                u.rows(),
                u.cols(),
                pos.len()
            )));
        }
        let dev = u.unitary_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(self.apply_at(u, &pos))
    }

    pub(crate) fn apply_at(&self, u: &ComplexMatrix, pos: &[usize]) -> Self {
        let n = self.n_qubits();
        let form = match &self.form {
            StateForm::Pure(a) => {
                let mut a = a.clone();
                kernel::apply_to_vector(&mut a, n, u, pos);
                StateForm::Pure(a)
            }
            StateForm::Density(r) => StateForm::Density(kernel::conjugate_density(r, n, u, pos)),
        };
        Self {
            layout: self.layout.clone(),
            form,
        }
    }

    /// Reduced state on `keep`, listed in their original relative order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        let mut pos = self.layout.positions(keep)?;
        pos.sort_unstable();
        Ok(self.reduce_positions(&pos))
    }

    pub(crate) fn reduce_positions(&self, pos: &[usize]) -> Self {
        let n = self.n_qubits();
        let rho = match &self.form {
            StateForm::Pure(a) => kernel::reduce_vector(a, n, pos),
            StateForm::Density(r) => kernel::reduce_density(r, n, pos),
        };
        let layout = PartyLayout::new(pos.iter().map(|&p| self.layout.qubits()[p].clone()).collect())
            .expect("sub-layout of a valid layout");
        Self::density_unchecked(layout, rho)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        match &self.form {
            StateForm::Pure(_) => Ok(0.0),
            StateForm::Density(r) => Ok(shannon_bits(&linalg::hermitian_eigenvalues(r)?)),
        }
    }

    /// Entropy of the reduced state on `labels`; zero for an empty selection.
    ///
    /// For vector states the smaller side of the cut is diagonalised.
    pub fn subsystem_entropy<S: AsRef<str>>(&self, labels: &[S]) -> Result<f64> {
        let pos = self.layout.positions(labels)?;
        self.entropy_of_positions(pos)
    }

    pub(crate) fn entropy_of_positions(&self, mut pos: Vec<usize>) -> Result<f64> {
        let n = self.n_qubits();
        if self.is_pure_form() && 2 * pos.len() > n {
            pos = kernel::complement(n, &pos);
        }
        if pos.is_empty() {
            return Ok(0.0);
        }
        if pos.len() == n {
            return self.von_neumann_entropy();
        }
        pos.sort_unstable();
        self.reduce_positions(&pos).von_neumann_entropy()
    }

    /// Entropy of everything `party` holds.
    pub fn party_entropy(&self, party: Party) -> Result<f64> {
        self.subsystem_entropy(&self.layout.labels_of(party))
    }

    /// Appends qubits prepared in `|0>`.
    pub fn with_fresh_qubits(&self, qubits: &[Qubit]) -> Result<Self> {
        let extra = PartyLayout::new(qubits.to_vec())?;
        let layout = self.layout.concat(&extra)?;
        let k = qubits.len();
        let form = match &self.form {
            StateForm::Pure(a) => {
                let mut out = vec![ZERO; a.len() << k];
                for (i, x) in a.iter().enumerate() {
                    out[i << k] = *x;
                }
                StateForm::Pure(out)
            }
            StateForm::Density(r) => {
                let d = r.rows() << k;
                let mut out = ComplexMatrix::zeros(d, d);
                for i in 0..r.rows() {
                    for j in 0..r.cols() {
                        out[(i << k, j << k)] = r[(i, j)];
                    }
                }
                StateForm::Density(out)
            }
        };
        Ok(Self { layout, form })
    }

    /// Tensor product; `other`'s qubits follow `self`'s.
    pub fn tensor(&self, other: &LabeledState) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let form = match (&self.form, &other.form) {
            (StateForm::Pure(a), StateForm::Pure(b)) => StateForm::Pure(linalg::kron_vec(a, b)),
            _ => StateForm::Density(linalg::kron(&self.density_matrix(), &other.density_matrix())?),
        };
        Ok(Self { layout, form })
    }

    /// Permutes the register so that qubits appear in the order of `labels`.
    pub fn reorder<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.n_qubits() {
            return Err(Error::DimensionMismatch(
                "reorder must list every qubit exactly once".into(),
            ));
        }
        let order = self.layout.positions(labels)?;
        let layout = self.layout.select(labels)?;
        let perm = kernel::permutation(self.n_qubits(), &order);
        let form = match &self.form {
            StateForm::Pure(a) => StateForm::Pure(perm.iter().map(|&o| a[o]).collect()),
            StateForm::Density(r) => {
                let d = r.rows();
                StateForm::Density(ComplexMatrix::from_fn(d, d, |i, j| r[(perm[i], perm[j])]))
            }
        };
        Ok(Self { layout, form })
    }

    /// Pure state on the original qubits plus `ceil(log2 rank)` ancillas held by `party`
    /// with role R, whose reduced state on the original qubits is `self`.
    pub fn purify_with(&self, party: Party) -> Result<Self> {
        let rho = match &self.form {
            StateForm::Pure(_) => return Ok(self.clone()),
            StateForm::Density(r) => r,
        };
        let eig = linalg::hermitian_eig(rho)?;
        let rank = eig.values.iter().filter(|&&v| v > EIGEN_ZERO).count().max(1);
        if rank == 1 {
            return Ok(Self::pure_unchecked(self.layout.clone(), eig.vectors.column(0)));
        }
        let k = usize::BITS as usize - (rank - 1).leading_zeros() as usize;
        let mut layout = self.layout.clone();
        for i in 0..k {
            let label = layout.fresh_label(&format!("anc{i}"));
            layout = layout.with(label, party, Role::R)?;
        }
        let d = rho.rows();
        let mut amps = vec![ZERO; d << k];
        for (i, &lam) in eig.values.iter().take(rank).enumerate() {
            let w = lam.max(0.0).sqrt();
            for row in 0..d {
                amps[(row << k) + i] = eig.vectors[(row, i)] * w;
            }
        }
        Self::pure_normalized(layout, amps)
    }

    /// [`purify_with`](Self::purify_with) with Alice holding the ancillas.
    pub fn purify(&self) -> Result<Self> {
        self.purify_with(Party::Alice)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialisation is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidState(e.to_string()))
    }
}

/// Fidelity between two states of equal dimension.
///
/// `|<a|b>|^2` for two vectors, `<a|rho|a>` when one side is a vector, and
/// the Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2` otherwise.
pub fn fidelity(a: &LabeledState, b: &LabeledState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let f = match (&a.form, &b.form) {
        (StateForm::Pure(x), StateForm::Pure(y)) => {
            x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<Complex64>().norm_sqr()
        }
        (StateForm::Pure(x), StateForm::Density(r)) | (StateForm::Density(r), StateForm::Pure(x)) => {
            let rx = r.mul_vec(x)?;
            x.iter().zip(&rx).map(|(p, q)| p.conj() * q).sum::<Complex64>().re
        }
        (StateForm::Density(r), StateForm::Density(s)) => {
            let sqrt_r = linalg::hermitian_map(r, |v| v.max(0.0).sqrt())?;
            let inner = (&(&sqrt_r * s) * &sqrt_r).symmetrized();
            let t: f64 = linalg::hermitian_eigenvalues(&inner)?
                .iter()
                .map(|v| v.max(0.0).sqrt())
                .sum();
            t * t
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Wire format: layout plus either `amplitudes` or `density`, complex numbers as `[re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub layout: Vec<Qubit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<[f64; 2]>>>,
}

impl From<LabeledState> for StateRecord {
    fn from(s: LabeledState) -> Self {
        let layout = s.layout.qubits().to_vec();
        match s.form {
            StateForm::Pure(a) => StateRecord {
                layout,
                amplitudes: Some(a.iter().map(|z| [z.re, z.im]).collect()),
                density: None,
            },
            StateForm::Density(r) => StateRecord {
                layout,
                amplitudes: None,
                density: Some(
                    (0..r.rows())
                        .map(|i| r.row(i).iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                ),
            },
        }
    }
}

impl TryFrom<StateRecord> for LabeledState {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        let layout = PartyLayout::new(r.layout)?;
        match (r.amplitudes, r.density) {
            (Some(a), None) => LabeledState::pure(layout, a.iter().map(|p| c(p[0], p[1])).collect()),
            (None, Some(rows)) => {
                let d = rows.len();
                if d == 0 || rows.iter().any(|row| row.len() != d) {
                    return Err(Error::InvalidState("density must be a square array".into()));
                }
                let m = ComplexMatrix::from_fn(d, d, |i, j| c(rows[i][j][0], rows[i][j][1]));
                LabeledState::density(layout, m)
            }
            _ => Err(Error::InvalidState(
                "exactly one of `amplitudes` or `density` is required".into(),
            )),
        }
    }
}
