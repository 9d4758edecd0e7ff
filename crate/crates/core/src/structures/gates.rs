//! Common single-qubit gates and the discrete Fourier transform.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::hilb::{c, ComplexTensor, C64};

pub fn hadamard() -> ComplexTensor {
    let h = FRAC_1_SQRT_2;
    ComplexTensor::from_real_rows(&[&[h, h], &[h, -h]])
}

pub fn pauli_x() -> ComplexTensor {
    ComplexTensor::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_z() -> ComplexTensor {
    ComplexTensor::diag(&[c(1.0, 0.0), c(-1.0, 0.0)])
}

pub fn pauli_y() -> ComplexTensor {
    ComplexTensor::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
}

/// `diag(1, e^{iθ})`.
pub fn phase(theta: f64) -> ComplexTensor {
    ComplexTensor::diag(&[c(1.0, 0.0), C64::from_polar(1.0, theta)])
}

/// `diag(1, i)`.
pub fn s_gate() -> ComplexTensor {
    ComplexTensor::diag(&[c(1.0, 0.0), c(0.0, 1.0)])
}

/// Unitary DFT, `F[j, k] = ω^{jk} / √d`.
pub fn dft(dim: usize) -> ComplexTensor {
    let norm = 1.0 / (dim as f64).sqrt();
    let mut f = ComplexTensor::zeros(vec![dim, dim]);
    for j in 0..dim {
        for k in 0..dim {
            let angle = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
            f.set(&[j, k], C64::from_polar(norm, angle));
        }
    }
    f
}
