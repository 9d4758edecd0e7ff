use crate::hilb::{c, ComplexTensor};

use super::{BasisStructure, StructureError, TOL};

/// Residual of each law of a special commutative Frobenius algebra, in
/// max-entry norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrobeniusReport {
    pub coassociativity: f64,
    pub counit: f64,
    pub cocommutativity: f64,
    pub specialness: f64,
    pub frobenius: f64,
}

impl FrobeniusReport {
    pub fn max(&self) -> f64 {
        self.rows().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max() <= tol
    }

    pub fn rows(&self) -> [(&'static str, f64); 5] {
        [
            ("coassociativity", self.coassociativity),
            ("counit", self.counit),
            ("cocommutativity", self.cocommutativity),
            ("specialness", self.specialness),
            ("frobenius", self.frobenius),
        ]
    }
}

/// Permutation matrix of `σ : A ⊗ A → A ⊗ A`.
fn swap_matrix(d: usize) -> ComplexTensor {
    let mut p = ComplexTensor::zeros(vec![d * d, d * d]);
    for i in 0..d {
        for j in 0..d {
            p.set(&[j * d + i, i * d + j], c(1.0, 0.0));
        }
    }
    p
}

fn mm(a: &ComplexTensor, b: &ComplexTensor) -> ComplexTensor {
    a.matmul(b).expect("compatible matrices")
}

pub fn check_frobenius(s: &BasisStructure) -> Result<FrobeniusReport, StructureError> {
    let d = s.dim();
    let dm = s.delta_matrix();
    let g = s.gamma_matrix();
    let id = ComplexTensor::identity(d);
    let coassociativity = mm(&dm.kron(&id), &dm).max_diff(&mm(&id.kron(&dm), &dm));
    let counit = mm(&g.kron(&id), &dm).max_diff(&id).max(mm(&id.kron(&g), &dm).max_diff(&id));
    let cocommutativity = mm(&swap_matrix(d), &dm).max_diff(&dm);
    let specialness = mm(&dm.adjoint(), &dm).max_diff(&id);
    let frobenius = mm(&dm, &dm.adjoint()).max_diff(&mm(&dm.adjoint().kron(&id), &id.kron(&dm)));
    Ok(FrobeniusReport { coassociativity, counit, cocommutativity, specialness, frobenius })
}

/// The pairing `ε_A : A ⊗ A* → I` as a `(d, d)` matrix, rows indexed by
/// `A`, columns by `A*`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientCompact {
    epsilon: ComplexTensor,
}

impl AmbientCompact {
    pub fn new(epsilon: ComplexTensor) -> Result<Self, StructureError> {
        let sh = epsilon.shape();
        if sh.len() != 2 || sh[0] != sh[1] {
            let n = sh.first().copied().unwrap_or(0);
            return Err(StructureError::ShapeMismatch { expected: vec![n, n], found: sh.to_vec() });
        }
        Ok(AmbientCompact { epsilon })
    }

    /// `e_i ⊗ ē_j ↦ δ_ij`.
    pub fn kronecker(dim: usize) -> Self {
        AmbientCompact { epsilon: ComplexTensor::identity(dim) }
    }

    pub fn epsilon(&self) -> &ComplexTensor {
        &self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.epsilon.shape()[0]
    }

    pub fn snake_residual(&self) -> f64 {
        snake_residual(&self.epsilon)
    }
}

/// Residual of `(ε ⊗ 1)(1 ⊗ σ)(1 ⊗ ε†) = 1`. The composite sends `k` to
/// `Σ_a (εε†)[k, a] |a⟩`.
pub fn snake_residual(epsilon: &ComplexTensor) -> f64 {
    let d = epsilon.shape()[0];
    mm(epsilon, &epsilon.adjoint()).transpose2().max_diff(&ComplexTensor::identity(d))
}

/// `γ ∘ δ† : A ⊗ A → I`.
pub fn induced_epsilon_selfdual(s: &BasisStructure) -> ComplexTensor {
    s.unit_copy_state().conj()
}

/// `d = (γ ⊗ 1)(δ† ⊗ 1)(1 ⊗ ε†)`. Componentwise `d[b, k] = Σ_a G[k, a]
/// conj(ε[a, b])` with `G = γδ†`.
pub fn dualiser_from_epsilon(s: &BasisStructure, amb: &AmbientCompact) -> Result<ComplexTensor, StructureError> {
    if amb.dim() != s.dim() {
        return Err(StructureError::ShapeMismatch { expected: vec![s.dim(), s.dim()], found: amb.epsilon.shape().to_vec() });
    }
    let g = induced_epsilon_selfdual(s);
    Ok(mm(&g, &amb.epsilon.conj()).transpose2())
}

/// `ε = γ ∘ δ† ∘ (1 ⊗ d†)`.
pub fn epsilon_from_dualiser(s: &BasisStructure) -> ComplexTensor {
    mm(&induced_epsilon_selfdual(s), &s.dualiser().adjoint())
}

/// Residuals of `(d† ⊗ 1) ε_{A*}† = δγ†` and `δγ† = (1 ⊗ d†) ε_A†`, with
/// `ε_A` the pairing the structure factorises.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfoFlowReport {
    pub left: f64,
    pub right: f64,
}

impl InfoFlowReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.left.max(self.right) <= tol
    }
}

pub fn info_flow_check(s: &BasisStructure) -> InfoFlowReport {
    let e = epsilon_from_dualiser(s);
    let state = s.unit_copy_state();
    // ε_{A*}† = σ ε_A†, so both sides reduce to d† ε† up to the order of
    // the two output wires
    let core = mm(&s.dualiser().adjoint(), &e.adjoint());
    InfoFlowReport { left: core.max_diff(&state), right: core.transpose2().max_diff(&state) }
}

/// The structure on `A*` transported along `d`: `δ_{A*} = (d ⊗ d) δ d†`,
/// `γ_{A*} = γ d†`, with `d†` as its dualiser.
pub fn dual_structure(s: &BasisStructure) -> BasisStructure {
    let d = s.dim();
    let du = s.dualiser();
    let delta = mm(&mm(&du.kron(du), &s.delta_matrix()), &du.adjoint()).reshape(vec![d, d, d]).expect("cube");
    let gamma = mm(&s.gamma_matrix(), &du.adjoint()).reshape(vec![d]).expect("vector");
    BasisStructure::new(delta, gamma, du.adjoint()).expect("shapes preserved")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualCoherenceReport {
    pub frobenius: FrobeniusReport,
    pub dualiser_unitarity: f64,
    /// Deviation of `ε_{A*}` from `ε_A ∘ σ`.
    pub epsilon: f64,
}

impl DualCoherenceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.frobenius.passes(tol) && self.dualiser_unitarity <= tol && self.epsilon <= tol
    }
}

pub fn check_dual_coherence(s: &BasisStructure) -> DualCoherenceReport {
    let dual = dual_structure(s);
    let frobenius = check_frobenius(&dual).expect("shapes preserved");
    let eps_dual = epsilon_from_dualiser(&dual);
    let swapped = epsilon_from_dualiser(s).transpose2();
    DualCoherenceReport {
        frobenius,
        dualiser_unitarity: dual.dualiser().unitarity_residual(),
        epsilon: eps_dual.max_diff(&swapped),
    }
}

impl BasisStructure {
    /// All laws at once: Frobenius package, unitary dualiser and the snake
    /// equation for the pairing it induces.
    pub fn is_valid(&self) -> bool {
        check_frobenius(self).is_ok_and(|r| r.passes(TOL))
            && self.dualiser().unitarity_residual() <= TOL
            && snake_residual(&epsilon_from_dualiser(self)) <= TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{builtin, builtin_dim, conjugate_by_unitary, gates, standard, Builtin};

    #[test]
    fn builtins_pass_all_laws() {
        for b in Builtin::ALL {
            let s = builtin(b);
            let r = check_frobenius(&s).unwrap();
            assert!(r.max() < 1e-12, "{b:?}: {r:?}");
            assert!(s.is_valid());
        }
    }

    #[test]
    fn zero_counit_breaks_counit_law() {
        let z = standard(2);
        let broken = BasisStructure::new(z.delta().clone(), ComplexTensor::zeros(vec![2]), ComplexTensor::identity(2)).unwrap();
        let r = check_frobenius(&broken).unwrap();
        assert!((r.counit - 1.0).abs() < 1e-12);
        assert!(r.coassociativity < 1e-12 && r.specialness < 1e-12);
    }

    #[test]
    fn y_dualiser_is_z_gate() {
        let y = builtin(Builtin::Y);
        let d = dualiser_from_epsilon(&y, &AmbientCompact::kronecker(2)).unwrap();
        assert!(d.max_diff(&gates::pauli_z()) < 1e-12);
    }

    #[test]
    fn self_factorisation_gives_identity() {
        for b in Builtin::ALL {
            let s = builtin(b);
            let amb = AmbientCompact::new(induced_epsilon_selfdual(&s)).unwrap();
            let d = dualiser_from_epsilon(&s, &amb).unwrap();
            assert!(d.max_diff(&ComplexTensor::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn round_trip_on_builtins() {
        for b in Builtin::ALL {
            let s = builtin(b);
            let amb = AmbientCompact::new(epsilon_from_dualiser(&s)).unwrap();
            assert!(amb.snake_residual() < 1e-12);
            assert!(dualiser_from_epsilon(&s, &amb).unwrap().max_diff(s.dualiser()) < 1e-12);
        }
    }

    #[test]
    fn info_flow_and_dual_coherence() {
        for b in Builtin::ALL {
            let s = builtin(b);
            assert!(info_flow_check(&s).passes(1e-12));
            let r = check_dual_coherence(&s);
            assert!(r.passes(1e-12), "{b:?}: {r:?}");
        }
        let x3 = builtin_dim(Builtin::X, 3).unwrap();
        assert!(info_flow_check(&x3).passes(1e-12));
        assert!(check_dual_coherence(&x3).passes(1e-12));
    }

    #[test]
    fn info_flow_detects_a_wrong_dualiser() {
        let y = builtin(Builtin::Y).with_dualiser(ComplexTensor::identity(2));
        // ε is now induced by δγ† itself, so the information-flow equalities hold trivially
        assert!(info_flow_check(&y).passes(1e-12));
        // but the pairing is no longer the ambient one
        assert!(epsilon_from_dualiser(&y).max_diff(&ComplexTensor::identity(2)) > 0.5);
        let u = conjugate_by_unitary(&standard(2), &gates::s_gate()).unwrap();
        assert!(info_flow_check(&u).passes(1e-12));
    }
}
