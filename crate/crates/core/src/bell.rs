//! Bell basis, the Werner family and bilateral twirling.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, gates, kron, ComplexMatrix, ZERO};
use crate::qstate::{LabeledState, Party, PartyLayout, Role};

/// Bell states in the order Φ+, Φ−, Ψ+, Ψ−.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Bell {
    pub const ALL: [Bell; 4] = [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus];

    pub fn vector(self) -> Vec<Complex64> {
        let h = c(FRAC_1_SQRT_2, 0.0);
        match self {
            Bell::PhiPlus => vec![h, ZERO, ZERO, h],
            Bell::PhiMinus => vec![h, ZERO, ZERO, -h],
            Bell::PsiPlus => vec![ZERO, h, h, ZERO],
            Bell::PsiMinus => vec![ZERO, h, -h, ZERO],
        }
    }

    /// Pauli on Bob's half mapping Ψ− onto this Bell state (up to phase).
    pub fn from_singlet(self) -> ComplexMatrix {
        match self {
            Bell::PsiMinus => ComplexMatrix::identity(2),
            Bell::PsiPlus => gates::pauli_z(),
            Bell::PhiMinus => gates::pauli_x(),
            Bell::PhiPlus => gates::pauli_y(),
        }
    }
}

/// `a` held by Alice, `b` held by Bob.
pub fn pair_layout() -> PartyLayout {
    pair_layout_named("a", "b")
}

pub fn pair_layout_named(alice: &str, bob: &str) -> PartyLayout {
    PartyLayout::default()
        .with(alice, Party::Alice, Role::S)
        .and_then(|l| l.with(bob, Party::Bob, Role::S))
        .expect("distinct labels")
}

pub fn bell_state(which: Bell) -> LabeledState {
    LabeledState::pure(pair_layout(), which.vector()).expect("normalised")
}

/// `(|01> - |10>)/√2` shared between Alice and Bob.
pub fn singlet() -> LabeledState {
    bell_state(Bell::PsiMinus)
}

fn check_pair(rho: &LabeledState) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    Ok(())
}

/// `F |Ψ−><Ψ−| + (1 − F)/3 (I − |Ψ−><Ψ−|)`.
pub fn werner_matrix(f: f64) -> ComplexMatrix {
    let p = ComplexMatrix::outer(&Bell::PsiMinus.vector());
    let rest = &ComplexMatrix::identity(4) - &p;
    &p.scale(c(f, 0.0)) + &rest.scale(c((1.0 - f) / 3.0, 0.0))
}

pub fn werner_state(f: f64) -> Result<LabeledState> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidParameter(format!("Werner fidelity {f} outside [0, 1]")));
    }
    LabeledState::density(pair_layout(), werner_matrix(f))
}

/// `<B|rho|B>` for every Bell state, in [`Bell::ALL`] order.
pub fn bell_fidelities(rho: &LabeledState) -> Result<[f64; 4]> {
    check_pair(rho)?;
    let m = rho.density_matrix();
    let mut out = [0.0; 4];
    for (slot, b) in out.iter_mut().zip(Bell::ALL) {
        let v = b.vector();
        let mv = m.mul_vec(&v)?;
        *slot = v.iter().zip(&mv).map(|(x, y)| x.conj() * y).sum::<Complex64>().re;
    }
    Ok(out)
}

pub fn singlet_fidelity(rho: &LabeledState) -> Result<f64> {
    Ok(bell_fidelities(rho)?[3])
}

/// The twelve single-qubit rotations `P · C^k`, with `P` a Pauli and `C` the
/// order-three rotation cycling x → y → z. Averaging `U ⊗ U` conjugation over
/// this set equals the full Haar twirl on two qubits.
pub fn twirl_rotations() -> Vec<ComplexMatrix> {
    let i2 = ComplexMatrix::identity(2);
    let x = gates::pauli_x();
    let y = gates::pauli_y();
    let z = gates::pauli_z();
    // C = (I - i(X + Y + Z)) / 2
    let sum = &(&x + &y) + &z;
    let cyc = (&i2 - &sum.scale(c(0.0, 1.0))).scale(c(0.5, 0.0));
    let cyc2 = &cyc * &cyc;
    let mut out = Vec::with_capacity(12);
    for p in [&i2, &x, &y, &z] {
        for k in [&i2, &cyc, &cyc2] {
            out.push(p * k);
        }
    }
    out
}

/// Exact bilateral twirl onto the Werner family. Preserves the singlet fidelity.
pub fn twirl(rho: &LabeledState) -> Result<LabeledState> {
    check_pair(rho)?;
    let m = rho.density_matrix();
    let rotations = twirl_rotations();
    let mut acc = ComplexMatrix::zeros(4, 4);
    for u in &rotations {
        let uu = kron(u, u)?;
        acc = &acc + &(&(&uu * &m) * &uu.dagger());
    }
    let acc = acc.scale(c(1.0 / rotations.len() as f64, 0.0)).symmetrized();
    LabeledState::density(rho.layout().clone(), acc)
}

/// Closed-form recurrence step for a Werner input of singlet fidelity `f`:
/// returns `(p_keep, f_next)`.
pub fn recurrence_map(f: f64) -> (f64, f64) {
    let q = (1.0 - f) / 3.0;
    let p_keep = f * f + 2.0 * f * q + 5.0 * q * q;
    (p_keep, (f * f + q * q) / p_keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{fidelity, random_mixed_state_on};

    #[test]
    fn bell_states_are_orthonormal() {
        for (i, a) in Bell::ALL.iter().enumerate() {
            for (j, b) in Bell::ALL.iter().enumerate() {
                let f = fidelity(&bell_state(*a), &bell_state(*b)).unwrap();
                assert!((f - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn local_pauli_maps_singlet_to_each_bell_state() {
        for b in Bell::ALL {
            let moved = singlet().apply_unitary(&b.from_singlet(), &["b"]).unwrap();
            assert!((fidelity(&moved, &bell_state(b)).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_fidelity_is_its_parameter() {
        for f in [0.5, 0.7, 0.9] {
            let w = werner_state(f).unwrap();
            assert!((fidelity(&singlet(), &w).unwrap() - f).abs() < 1e-12);
        }
    }

    #[test]
    fn twirl_rotations_form_a_unitary_set() {
        let r = twirl_rotations();
        assert_eq!(r.len(), 12);
        for u in &r {
            assert!(u.unitary_deviation() < 1e-12);
        }
    }

    #[test]
    fn twirl_produces_the_werner_state_of_equal_fidelity() {
        for seed in 0..20 {
            let rho = random_mixed_state_on(pair_layout(), 2, seed).unwrap();
            let f = singlet_fidelity(&rho).unwrap();
            let t = twirl(&rho).unwrap();
            assert!(t.density_matrix().max_abs_diff(&werner_matrix(f)) < 1e-12);
        }
    }

    #[test]
    fn recurrence_fixed_points() {
        let (p, f) = recurrence_map(1.0);
        assert!((p - 1.0).abs() < 1e-15 && (f - 1.0).abs() < 1e-15);
        let (_, f) = recurrence_map(0.5);
        assert!((f - 0.5).abs() < 1e-15);
    }
}
