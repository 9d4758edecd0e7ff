use crate::hilb::ComplexTensor;

use super::{induced_epsilon_selfdual, BasisStructure, StructureError, TOL};

fn mm(a: &ComplexTensor, b: &ComplexTensor) -> ComplexTensor {
    a.matmul(b).expect("compatible matrices")
}

fn require_unitary(u: &ComplexTensor) -> Result<(), StructureError> {
    let residual = u.unitarity_residual();
    if residual > TOL {
        return Err(StructureError::NotUnitary { residual });
    }
    Ok(())
}

/// `((U ⊗ U) δ U†, γ U†)` with the dualiser transported to `conj(U) d U†`,
/// since `A*` carries conjugate coordinates.
pub fn conjugate_by_unitary(s: &BasisStructure, u: &ComplexTensor) -> Result<BasisStructure, StructureError> {
    let d = s.dim();
    if u.shape() != [d, d] {
        return Err(StructureError::ShapeMismatch { expected: vec![d, d], found: u.shape().to_vec() });
    }
    require_unitary(u)?;
    let ud = u.adjoint();
    let delta = mm(&mm(&u.kron(u), &s.delta_matrix()), &ud).reshape(vec![d, d, d])?;
    let gamma = mm(&s.gamma_matrix(), &ud).reshape(vec![d])?;
    let dualiser = mm(&mm(&u.conj(), s.dualiser()), &ud);
    BasisStructure::new(delta, gamma, dualiser)
}

/// `U_*`, the entrywise conjugate in the fixed basis.
pub fn lower_star(u: &ComplexTensor) -> ComplexTensor {
    u.conj()
}

/// Max-entry distance between the self-dual pairings `γδ†` of two
/// structures.
pub fn induced_epsilon_gap(a: &BasisStructure, b: &BasisStructure) -> f64 {
    induced_epsilon_selfdual(a).max_diff(&induced_epsilon_selfdual(b))
}

pub fn same_induced_epsilon(a: &BasisStructure, b: &BasisStructure) -> bool {
    induced_epsilon_gap(a, b) <= TOL
}

fn check_map(f: &ComplexTensor, from: &BasisStructure, to: &BasisStructure) -> Result<(), StructureError> {
    let want = [to.dim(), from.dim()];
    if f.shape() != want {
        return Err(StructureError::ShapeMismatch { expected: want.to_vec(), found: f.shape().to_vec() });
    }
    Ok(())
}

/// `δ_B ∘ f = (f ⊗ f) ∘ δ_A`.
pub fn is_partial_map(f: &ComplexTensor, from: &BasisStructure, to: &BasisStructure) -> Result<bool, StructureError> {
    check_map(f, from, to)?;
    let lhs = mm(&to.delta_matrix(), f);
    let rhs = mm(&f.kron(f), &from.delta_matrix());
    Ok(lhs.max_diff(&rhs) <= TOL)
}

/// Partial, and `γ_B ∘ f = γ_A`.
pub fn is_total_map(f: &ComplexTensor, from: &BasisStructure, to: &BasisStructure) -> Result<bool, StructureError> {
    if !is_partial_map(f, from, to)? {
        return Ok(false);
    }
    Ok(mm(&to.gamma_matrix(), f).max_diff(&from.gamma_matrix()) <= TOL)
}

/// Total and unitary.
pub fn is_permutation(f: &ComplexTensor, from: &BasisStructure, to: &BasisStructure) -> Result<bool, StructureError> {
    Ok(is_total_map(f, from, to)? && f.unitarity_residual() <= TOL)
}

/// Unitary with `(f ⊗ 1) ∘ δ = δ ∘ f = (1 ⊗ f) ∘ δ`. Both equalities are
/// checked even though cocommutativity makes them equivalent.
pub fn is_phase_map(f: &ComplexTensor, s: &BasisStructure) -> Result<bool, StructureError> {
    check_map(f, s, s)?;
    let id = ComplexTensor::identity(s.dim());
    let dm = s.delta_matrix();
    let mid = mm(&dm, f);
    let left = mm(&f.kron(&id), &dm);
    let right = mm(&id.kron(f), &dm);
    Ok(left.max_diff(&mid) <= TOL && right.max_diff(&mid) <= TOL && f.unitarity_residual() <= TOL)
}

/// Structure on `A ⊗ B`: `δ = (1 ⊗ σ ⊗ 1)(δ_A ⊗ δ_B)`, `γ = γ_A ⊗ γ_B`,
/// `d = (d_B ⊗ d_A) σ`. Coordinates of `A ⊗ B` are `(a, b)`; those of
/// `(A ⊗ B)* = B* ⊗ A*` are `(b, a)`.
pub fn tensor_structures(a: &BasisStructure, b: &BasisStructure) -> BasisStructure {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    // axes (a1, a2, a, b1, b2, b) → (a1, b1, a2, b2, a, b)
    let delta = a.delta().outer(b.delta()).permute(&[0, 3, 1, 4, 2, 5]).reshape(vec![n, n, n]).expect("product");
    let gamma = a.gamma().outer(b.gamma()).reshape(vec![n]).expect("product");
    // axes (b', b, a', a) → (b', a', a, b)
    let dualiser = b.dualiser().outer(a.dualiser()).permute(&[0, 2, 3, 1]).reshape(vec![n, n]).expect("product");
    BasisStructure::new(delta, gamma, dualiser).expect("shapes by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilb::{c, random_unitary};
    use crate::structures::{builtin, check_frobenius, epsilon_from_dualiser, gates, standard, Builtin};

    #[test]
    fn hadamard_gives_x() {
        let x = conjugate_by_unitary(&standard(2), &gates::hadamard()).unwrap();
        assert_eq!(x, builtin(Builtin::X));
        let gd = x.gamma().conj();
        assert!((gd.get(&[0]) - c(2f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(gd.get(&[1]).norm() < 1e-12);
    }

    #[test]
    fn identity_conjugation_is_noop() {
        let z = standard(2);
        assert!(conjugate_by_unitary(&z, &ComplexTensor::identity(2)).unwrap() == z);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = ComplexTensor::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(conjugate_by_unitary(&standard(2), &m), Err(StructureError::NotUnitary { .. })));
    }

    #[test]
    fn phase_gate_conjugate_is_a_rephased_z() {
        // diag(1, i) keeps the Z basis up to phases, so the result copies
        // |0⟩ and |1⟩ rather than the Y eigenvectors
        let s = conjugate_by_unitary(&standard(2), &gates::s_gate()).unwrap();
        assert!(check_frobenius(&s).unwrap().passes(1e-12));
        assert!(s.delta().max_diff(builtin(Builtin::Y).delta()) > 0.1);
        // but it induces the same self-dual pairing as Y
        assert!(same_induced_epsilon(&s, &builtin(Builtin::Y)));
        assert!(!same_induced_epsilon(&s, &standard(2)));
    }

    #[test]
    fn map_predicates() {
        let z = standard(2);
        let id = ComplexTensor::identity(2);
        assert!(is_partial_map(&id, &z, &z).unwrap());
        assert!(is_total_map(&id, &z, &z).unwrap());
        assert!(is_permutation(&id, &z, &z).unwrap());
        assert!(is_phase_map(&id, &z).unwrap());
        assert!(is_permutation(&gates::pauli_x(), &z, &z).unwrap());
        assert!(!is_phase_map(&gates::pauli_x(), &z).unwrap());
        let p = gates::phase(0.7);
        assert!(is_phase_map(&p, &z).unwrap());
        assert!(!is_total_map(&p, &z, &z).unwrap());
        assert!(is_phase_map(&ComplexTensor::identity(3), &z).is_err());
    }

    #[test]
    fn phase_maps_are_diagonal_unitaries() {
        let z = standard(2);
        for seed in 0..20 {
            let u = random_unitary(2, seed);
            assert!(!is_phase_map(&u, &z).unwrap());
            let diag = ComplexTensor::diag(&[u.get(&[0, 0]) / u.get(&[0, 0]).norm(), u.get(&[1, 1]) / u.get(&[1, 1]).norm()]);
            assert!(is_phase_map(&diag, &z).unwrap());
        }
        // diagonal but not unitary
        assert!(!is_phase_map(&ComplexTensor::diag(&[c(1.0, 0.0), c(2.0, 0.0)]), &z).unwrap());
    }

    #[test]
    fn tensor_with_trivial_structure() {
        let x = builtin(Builtin::X);
        let t = tensor_structures(&x, &standard(1));
        assert_eq!(t.delta().data(), x.delta().data());
        assert_eq!(t.gamma().data(), x.gamma().data());
        assert_eq!(t.dualiser().data(), x.dualiser().data());
    }

    #[test]
    fn z_tensor_z_copies_product_basis() {
        let zz = tensor_structures(&standard(2), &standard(2));
        assert!(check_frobenius(&zz).unwrap().passes(1e-12));
        for j in 0..4 {
            for p in 0..4 {
                for q in 0..4 {
                    let want = if p == j && q == j { 1.0 } else { 0.0 };
                    assert_eq!(zz.delta().get(&[p, q, j]), c(want, 0.0));
                }
            }
        }
        // nested pairing ε[(a, b), (b', a')] = δ_{aa'} δ_{bb'}
        let e = epsilon_from_dualiser(&zz);
        for a in 0..2 {
            for b in 0..2 {
                for b2 in 0..2 {
                    for a2 in 0..2 {
                        let want = if a == a2 && b == b2 { 1.0 } else { 0.0 };
                        assert_eq!(e.get(&[a * 2 + b, b2 * 2 + a2]), c(want, 0.0));
                    }
                }
            }
        }
    }
}
