//! Index arithmetic for gates and partial traces on qubit registers.
//!
//! Qubit `p` of an `n`-qubit register is bit `n - 1 - p` of the basis index.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ZERO};

/// Offsets of the `2^k` local basis states of `positions` inside the global index.
/// `positions[0]` is the most significant local bit.
pub(crate) fn offsets(n: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|j| {
            positions
                .iter()
                .enumerate()
                .filter(|(m, _)| (j >> (k - 1 - m)) & 1 == 1)
                .map(|(_, &p)| 1usize << (n - 1 - p))
                .sum()
        })
        .collect()
}

pub(crate) fn complement(n: usize, positions: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !positions.contains(p)).collect()
}

/// Applies `u` to the qubits at `positions` of a state vector in place.
pub(crate) fn apply_to_vector(amps: &mut [Complex64], n: usize, u: &ComplexMatrix, positions: &[usize]) {
    let local = offsets(n, positions);
    let rest = offsets(n, &complement(n, positions));
    let d = local.len();
    let mut buf = vec![ZERO; d];
    for base in rest {
        for (b, off) in buf.iter_mut().zip(&local) {
            *b = amps[base + off];
        }
        for (i, off) in local.iter().enumerate() {
            let row = u.row(i);
            let mut acc = ZERO;
            for j in 0..d {
                acc += row[j] * buf[j];
            }
            amps[base + off] = acc;
        }
    }
}

/// `rho -> u rho u^dagger` with `u` acting on `positions`.
pub(crate) fn conjugate_density(rho: &ComplexMatrix, n: usize, u: &ComplexMatrix, positions: &[usize]) -> ComplexMatrix {
    let dim = rho.rows();
    let uc = u.conj();
    // rows of rho times u^dagger
    let mut y = rho.clone();
    for r in 0..dim {
        apply_to_vector(&mut y.data_mut()[r * dim..(r + 1) * dim], n, &uc, positions);
    }
    let mut z = y.dagger();
    for r in 0..dim {
        apply_to_vector(&mut z.data_mut()[r * dim..(r + 1) * dim], n, &uc, positions);
    }
    z.dagger().symmetrized()
}

/// Reduced density matrix of a pure state on `keep` (in the order given).
pub(crate) fn reduce_vector(amps: &[Complex64], n: usize, keep: &[usize]) -> ComplexMatrix {
    let k_off = offsets(n, keep);
    let t_off = offsets(n, &complement(n, keep));
    let d = k_off.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut acc = ZERO;
            for t in &t_off {
                acc += amps[k_off[i] + t] * amps[k_off[j] + t].conj();
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    out
}

/// Reduced density matrix of a mixed state on `keep` (in the order given).
pub(crate) fn reduce_density(rho: &ComplexMatrix, n: usize, keep: &[usize]) -> ComplexMatrix {
    let k_off = offsets(n, keep);
    let t_off = offsets(n, &complement(n, keep));
    let d = k_off.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut acc = ZERO;
            for t in &t_off {
                acc += rho[(k_off[i] + t, k_off[j] + t)];
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    out
}

/// For a reordering where new qubit `q` is old qubit `order[q]`, entry `i` of
/// the result is the old basis index of new basis index `i`.
pub(crate) fn permutation(n: usize, order: &[usize]) -> Vec<usize> {
    offsets(n, order)
}
