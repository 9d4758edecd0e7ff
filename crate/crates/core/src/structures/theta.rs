use std::f64::consts::PI;

use rayon::prelude::*;

use crate::hilb::ComplexTensor;

use super::{gates, BasisStructure, Builtin};

/// Copying structure of `{ŷ₊, e^{iθ} ŷ₋}`: it agrees with `δ_Y` on `ŷ₊`,
/// multiplies `δ_Y(ŷ₋)` by `e^{iθ}` and `γ_Y(ŷ₋)` by `e^{-iθ}`.
pub fn theta_structure(theta: f64) -> BasisStructure {
    let u = Builtin::Y.basis_unitary().matmul(&gates::phase(theta)).expect("2x2");
    BasisStructure::from_basis(&u).expect("product of unitaries")
}

/// The state `δ'_θ ∘ γ'_θ† = ŷ₊ŷ₊ + e^{2iθ} ŷ₋ŷ₋`.
pub fn theta_state(theta: f64) -> ComplexTensor {
    theta_structure(theta).unit_copy_state()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaScan {
    /// `(θ, deviation)` pairs, θ = 2πk/n.
    pub samples: Vec<(f64, f64)>,
    pub min_deviation: f64,
    pub argmin: f64,
}

/// Max-entry deviation of `δ'_θ γ'_θ†` from `|00⟩ + |11⟩` over an even grid
/// of `n` angles in `[0, 2π)`.
pub fn theta_family_scan(n: usize) -> ThetaScan {
    assert!(n >= 1, "at least one sample");
    let bell = ComplexTensor::identity(2);
    let samples: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            (theta, theta_state(theta).max_diff(&bell))
        })
        .collect();
    let (argmin, min_deviation) = samples
        .iter()
        .copied()
        .fold((0.0, f64::INFINITY), |best, s| if s.1 < best.1 { s } else { best });
    ThetaScan { samples, min_deviation, argmin }
}
