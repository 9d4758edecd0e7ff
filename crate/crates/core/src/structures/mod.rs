//! Basis structures `(δ, γ, d)` on finite-dimensional spaces, their laws,
//! and the built-in qubit Z, X and Y structures.

pub mod gates;
mod laws;
mod maps;
mod theta;

use thiserror::Error;

use crate::hilb::{c, ComplexTensor, HilbError};

pub use laws::{
    check_dual_coherence, check_frobenius, dual_structure, dualiser_from_epsilon, epsilon_from_dualiser,
    induced_epsilon_selfdual, info_flow_check, snake_residual, AmbientCompact, DualCoherenceReport,
    FrobeniusReport, InfoFlowReport,
};
pub use maps::{
    conjugate_by_unitary, induced_epsilon_gap, is_partial_map, is_permutation, is_phase_map, is_total_map,
    lower_star, same_induced_epsilon, tensor_structures,
};
pub use theta::{theta_family_scan, theta_state, theta_structure, ThetaScan};

/// Default tolerance for all law checks, in max-entry norm.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("no {name} structure in dimension {dim}")]
    Unsupported { name: String, dim: usize },
    #[error(transparent)]
    Hilb(#[from] HilbError),
}

/// Copy `δ : A → A ⊗ A` with shape `(d, d, d)`, delete `γ : A → I` with
/// shape `(d)`, dualiser `d : A → A*` with shape `(d, d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisStructure {
    dim: usize,
    delta: ComplexTensor,
    gamma: ComplexTensor,
    dualiser: ComplexTensor,
}

fn expect_shape(t: &ComplexTensor, shape: &[usize]) -> Result<(), StructureError> {
    if t.shape() != shape {
        return Err(StructureError::ShapeMismatch { expected: shape.to_vec(), found: t.shape().to_vec() });
    }
    Ok(())
}

impl BasisStructure {
    /// Checks shapes only; use [`check_frobenius`] for the laws.
    pub fn new(delta: ComplexTensor, gamma: ComplexTensor, dualiser: ComplexTensor) -> Result<Self, StructureError> {
        let dim = gamma.shape().first().copied().unwrap_or(0);
        expect_shape(&gamma, &[dim])?;
        expect_shape(&delta, &[dim, dim, dim])?;
        expect_shape(&dualiser, &[dim, dim])?;
        Ok(BasisStructure { dim, delta, gamma, dualiser })
    }

    /// Frobenius data paired with the dualiser that factorises `amb`.
    pub fn with_ambient(delta: ComplexTensor, gamma: ComplexTensor, amb: &AmbientCompact) -> Result<Self, StructureError> {
        let dim = gamma.shape().first().copied().unwrap_or(0);
        let s = BasisStructure::new(delta, gamma, ComplexTensor::identity(dim.max(1)))?;
        let d = dualiser_from_epsilon(&s, amb)?;
        Ok(s.with_dualiser(d))
    }

    /// Copying structure of an orthonormal basis, given as the columns of `u`.
    pub fn from_basis(u: &ComplexTensor) -> Result<Self, StructureError> {
        let dim = u.shape()[0];
        conjugate_by_unitary(&standard(dim), u)
    }

    pub fn with_dualiser(mut self, d: ComplexTensor) -> Self {
        assert_eq!(d.shape(), &[self.dim, self.dim]);
        self.dualiser = d;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> &ComplexTensor {
        &self.delta
    }

    pub fn gamma(&self) -> &ComplexTensor {
        &self.gamma
    }

    pub fn dualiser(&self) -> &ComplexTensor {
        &self.dualiser
    }

    /// `δ` as a `(d², d)` matrix.
    pub fn delta_matrix(&self) -> ComplexTensor {
        self.delta.reshape(vec![self.dim * self.dim, self.dim]).expect("cube")
    }

    /// `γ` as a `(1, d)` matrix.
    pub fn gamma_matrix(&self) -> ComplexTensor {
        self.gamma.reshape(vec![1, self.dim]).expect("vector")
    }

    /// The state `δ ∘ γ† : I → A ⊗ A` as a `(d, d)` tensor.
    pub fn unit_copy_state(&self) -> ComplexTensor {
        self.delta.contract(&[2], &self.gamma.conj(), &[0]).expect("matching dims")
    }

    /// `C_k : A → A^{⊗k}`, the k-fold copy, axes `(o_1, …, o_k, x)`.
    fn copies(&self, k: usize) -> ComplexTensor {
        match k {
            0 => self.gamma.clone(),
            _ => {
                let mut t = ComplexTensor::identity(self.dim);
                for n in 1..k {
                    t = t.contract(&[n], &self.delta, &[0]).expect("matching dims");
                }
                t
            }
        }
    }

    /// Tensor of the spider with the given leg orientations (`true` = `A*`),
    /// axes ordered (outputs, inputs). Dual output legs pass through `d`,
    /// dual input legs through `d†`.
    pub fn spider(&self, inputs: &[bool], outputs: &[bool]) -> ComplexTensor {
        let (m, n) = (inputs.len(), outputs.len());
        let cn = self.copies(n);
        let cm = self.copies(m).conj();
        let mut s = cn.contract(&[n], &cm, &[m]).expect("matching dims");
        for (k, &dual) in outputs.iter().enumerate() {
            if dual {
                s = apply_to_axis(&s, &self.dualiser, k);
            }
        }
        let dd = self.dualiser.conj();
        for (k, &dual) in inputs.iter().enumerate() {
            if dual {
                s = apply_to_axis(&s, &dd, n + k);
            }
        }
        s
    }
}

/// `t'[…, p, …] = Σ_q m[p, q] t[…, q, …]` on axis `axis`.
pub(crate) fn apply_to_axis(t: &ComplexTensor, m: &ComplexTensor, axis: usize) -> ComplexTensor {
    let r = m.contract(&[1], t, &[axis]).expect("matching dims");
    // r has axes (p, rest of t); move p back into place
    let rank = t.rank();
    let mut perm = Vec::with_capacity(rank);
    for k in 0..rank {
        perm.push(match k.cmp(&axis) {
            std::cmp::Ordering::Less => k + 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => k,
        });
    }
    r.permute(&perm)
}

/// The copying structure of the standard basis, with `d = 1`.
pub fn standard(dim: usize) -> BasisStructure {
    assert!(dim >= 1, "dimension must be positive");
    let mut delta = ComplexTensor::zeros(vec![dim, dim, dim]);
    for j in 0..dim {
        delta.set(&[j, j, j], c(1.0, 0.0));
    }
    let gamma = ComplexTensor::vector(&vec![c(1.0, 0.0); dim]);
    BasisStructure { dim, delta, gamma, dualiser: ComplexTensor::identity(dim) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    Z,
    X,
    Y,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [Builtin::Z, Builtin::X, Builtin::Y];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Z => "Z",
            Builtin::X => "X",
            Builtin::Y => "Y",
        }
    }

    /// Unitary whose columns are the basis vectors of the structure.
    pub fn basis_unitary(self) -> ComplexTensor {
        match self {
            Builtin::Z => ComplexTensor::identity(2),
            Builtin::X => gates::hadamard(),
            Builtin::Y => gates::s_gate().matmul(&gates::hadamard()).expect("2x2"),
        }
    }
}

impl std::str::FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(Builtin::Z),
            "X" | "x" => Ok(Builtin::X),
            "Y" | "y" => Ok(Builtin::Y),
            other => Err(format!("unknown basis `{other}`")),
        }
    }
}

/// Qubit structure sharing the ambient pairing `|00⟩ + |11⟩`.
pub fn builtin(b: Builtin) -> BasisStructure {
    builtin_dim(b, 2).expect("qubit built-ins exist")
}

/// `Z` is the standard basis, `X` the Fourier basis; `Y` exists for qubits
/// only.
pub fn builtin_dim(b: Builtin, dim: usize) -> Result<BasisStructure, StructureError> {
    match (b, dim) {
        (Builtin::Z, d) if d >= 1 => Ok(standard(d)),
        (Builtin::X, 2) | (Builtin::Y, 2) => conjugate_by_unitary(&standard(2), &b.basis_unitary()),
        (Builtin::X, d) if d >= 1 => conjugate_by_unitary(&standard(d), &gates::dft(d)),
        (b, d) => Err(StructureError::Unsupported { name: b.name().into(), dim: d }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_copies_basis() {
        let z = builtin(Builtin::Z);
        assert_eq!(z.delta().get(&[1, 1, 1]), c(1.0, 0.0));
        assert_eq!(z.delta().get(&[0, 1, 1]), c(0.0, 0.0));
        assert_eq!(z.dualiser(), &ComplexTensor::identity(2));
    }

    #[test]
    fn shape_checks() {
        let z = standard(2);
        let err = BasisStructure::new(z.delta().clone(), ComplexTensor::vector(&[c(1.0, 0.0); 3]), ComplexTensor::identity(2));
        assert!(matches!(err, Err(StructureError::ShapeMismatch { .. })));
    }

    #[test]
    fn spider_small_cases() {
        for b in Builtin::ALL {
            let s = builtin(b);
            let id = s.spider(&[false], &[false]);
            assert!(id.max_diff(&ComplexTensor::identity(2)) < 1e-12);
            assert!(s.spider(&[false], &[false, false]).max_diff(s.delta()) < 1e-12);
            assert!(s.spider(&[false], &[]).max_diff(s.gamma()) < 1e-12);
            assert!(s.spider(&[false], &[true]).max_diff(s.dualiser()) < 1e-12);
            assert!(s.spider(&[true], &[false]).max_diff(&s.dualiser().adjoint()) < 1e-12);
            let circle = s.spider(&[], &[]);
            assert!((circle.data()[0] - c(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn x_for_higher_dimensions() {
        let x3 = builtin_dim(Builtin::X, 3).unwrap();
        assert!(check_frobenius(&x3).unwrap().max() < 1e-12);
        assert!(builtin_dim(Builtin::Y, 3).is_err());
    }

    #[test]
    fn apply_to_middle_axis() {
        let mut t = ComplexTensor::zeros(vec![2, 2, 2]);
        t.set(&[0, 1, 0], c(1.0, 0.0));
        let x = gates::pauli_x();
        let r = apply_to_axis(&t, &x, 1);
        assert_eq!(r.get(&[0, 0, 0]), c(1.0, 0.0));
        assert_eq!(r.get(&[0, 1, 0]), c(0.0, 0.0));
    }
}
