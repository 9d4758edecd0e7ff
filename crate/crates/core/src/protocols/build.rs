use crate::diagram::Diagram;
use crate::hilb::{c, ComplexTensor, Interpretation};
use crate::rules::{Context, Tag};
use crate::structures::{builtin, gates, Builtin};

use super::{Branch, Measurement, Protocol};

/// The qubit object every protocol diagram lives on.
pub const QUBIT: &str = "Q";

fn id() -> Diagram {
    Diagram::identity(QUBIT)
}

fn t(parts: &[&Diagram]) -> Diagram {
    Diagram::tensor_all(parts.iter().copied())
}

fn seq(parts: &[&Diagram]) -> Diagram {
    let mut d = parts[0].clone();
    for p in &parts[1..] {
        d = d.then(p).expect("protocol diagrams are well typed");
    }
    d
}

fn gate(name: &str) -> Diagram {
    Diagram::box_(name, &[QUBIT], &[QUBIT])
}

/// A box name with its matrix.
pub type NamedMatrix = (String, ComplexTensor);

/// Bob's corrections `U_x`, in outcome order: `I, X, Z, XZ`.
pub fn pauli_corrections() -> [NamedMatrix; 4] {
    let (x, z) = (gates::pauli_x(), gates::pauli_z());
    [
        ("U0".into(), ComplexTensor::identity(2)),
        ("U1".into(), x.clone()),
        ("U2".into(), z.clone()),
        ("U3".into(), x.matmul(&z).expect("2x2")),
    ]
}

/// `f_x`: permutations of the Z basis. `g_y`: phase maps.
pub fn transfer_maps() -> ([NamedMatrix; 2], [NamedMatrix; 2]) {
    (
        [("f0".into(), ComplexTensor::identity(2)), ("f1".into(), gates::pauli_x())],
        [("g0".into(), ComplexTensor::identity(2)), ("g1".into(), gates::pauli_z())],
    )
}

/// Z-basis qubit with every correction box of both protocols.
pub fn protocol_interpretation() -> Interpretation {
    let mut i = Interpretation::with_basis(QUBIT, builtin(Builtin::Z)).expect("Z factorises the ambient pairing");
    let (fs, gs) = transfer_maps();
    for (name, m) in pauli_corrections().into_iter().chain(fs).chain(gs) {
        i.set_box(name, m);
    }
    i
}

/// Tags that let the permutation and phase rules fire on the corrections.
pub fn protocol_context() -> Context {
    let mut ctx = Context::new().dim(QUBIT, 2);
    for (name, _) in pauli_corrections() {
        ctx = ctx.tag(name, Tag::Unitary);
    }
    let (fs, gs) = transfer_maps();
    for (name, _) in fs {
        ctx = ctx.tag(name, Tag::Permutation);
    }
    for (name, _) in gs {
        ctx = ctx.tag(name, Tag::Phase);
    }
    ctx
}

/// `(U_x ⊗ 1) δγ† γδ† (U_x† ⊗ 1)` on two qubits.
pub fn teleport_projector(x: usize) -> Diagram {
    let u = gate(&format!("U{x}"));
    let bell = seq(&[&Diagram::gamma_dagger(QUBIT), &Diagram::delta(QUBIT)]);
    let effect = seq(&[&Diagram::delta_dagger(QUBIT), &Diagram::gamma(QUBIT)]);
    seq(&[&t(&[&u.dagger(), &id()]), &effect, &bell, &t(&[&u, &id()])])
}

/// Effect form of outcome `x`: Alice's qubit `c` meets half of a Bell pair
/// in the effect `ε ∘ (U_x† ⊗ 1)`, and Bob applies `U_x` to the other half.
pub fn teleport_branch(x: usize) -> Branch {
    let name = format!("U{x}");
    let u = gate(&name);
    let diagram = seq(&[
        &t(&[&u.dagger(), &Diagram::cup(QUBIT)]),
        &t(&[&Diagram::cap(QUBIT), &u]),
    ]);
    Branch { outcome: vec![x], diagram, corrections: vec![name] }
}

pub fn build_teleportation() -> Protocol {
    Protocol {
        name: "teleportation",
        branches: (0..4).map(teleport_branch).collect(),
        measurement: Measurement { projectors: (0..4).map(teleport_projector).collect(), expected: c(2.0, 0.0) },
        interpretation: protocol_interpretation(),
        context: protocol_context(),
    }
}

/// `π_x = (1 ⊗ f_x) δ δ† (1 ⊗ f_x†)`.
pub fn parity_projector(x: usize) -> Diagram {
    let f = gate(&format!("f{x}"));
    seq(&[
        &t(&[&id(), &f.dagger()]),
        &Diagram::delta_dagger(QUBIT),
        &Diagram::delta(QUBIT),
        &t(&[&id(), &f]),
    ])
}

/// `P'_y = g_y γ† γ g_y†`.
pub fn phase_projector(y: usize) -> Diagram {
    let g = gate(&format!("g{y}"));
    seq(&[&g.dagger(), &Diagram::gamma(QUBIT), &Diagram::gamma_dagger(QUBIT), &g])
}

/// Effect form of outcome `(x, y)`: `b` starts in `|0⟩ + |1⟩`, the parity
/// measurement `π_x` acts on `(a, b)`, the effect of `P'_y` consumes `a`,
/// and `b` receives `f_x†` then `g_y`. With `corrected = false` the last
/// two boxes are left out.
pub fn transfer_branch(x: usize, y: usize, corrected: bool) -> Branch {
    let (fx, gy) = (format!("f{x}"), format!("g{y}"));
    let (f, g) = (gate(&fx), gate(&gy));
    let mut diagram = seq(&[
        &t(&[&id(), &Diagram::gamma_dagger(QUBIT)]),
        &t(&[&id(), &f.dagger()]),
        &Diagram::delta_dagger(QUBIT),
        &Diagram::delta(QUBIT),
        &t(&[&g.dagger(), &f]),
        &t(&[&Diagram::gamma(QUBIT), &id()]),
    ]);
    let mut corrections = Vec::new();
    if corrected {
        diagram = seq(&[&diagram, &f.dagger(), &g]);
        corrections = vec![fx, gy];
    }
    Branch { outcome: vec![x, y], diagram, corrections }
}

pub fn build_state_transfer() -> Protocol {
    let mut branches = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            branches.push(transfer_branch(x, y, true));
        }
    }
    Protocol {
        name: "state-transfer",
        branches,
        measurement: Measurement { projectors: (0..2).map(parity_projector).collect(), expected: c(1.0, 0.0) },
        interpretation: protocol_interpretation(),
        context: protocol_context(),
    }
}

/// Teleportation with identity corrections, all in Frobenius form:
/// `(γδ† ⊗ 1)(1 ⊗ δγ†)`.
pub fn teleport_core() -> Diagram {
    seq(&[
        &t(&[&id(), &Diagram::gamma_dagger(QUBIT)]),
        &t(&[&id(), &Diagram::delta(QUBIT)]),
        &t(&[&Diagram::delta_dagger(QUBIT), &id()]),
        &t(&[&Diagram::gamma(QUBIT), &id()]),
    ])
}

/// The same core with the Bell pair and effect as cup and cap.
pub fn teleport_core_compact() -> Diagram {
    seq(&[&t(&[&id(), &Diagram::cup(QUBIT)]), &t(&[&Diagram::cap(QUBIT), &id()])])
}

/// State transfer with identity corrections: `(γ ⊗ 1) δ δ† (1 ⊗ γ†)`.
pub fn transfer_core() -> Diagram {
    seq(&[
        &t(&[&id(), &Diagram::gamma_dagger(QUBIT)]),
        &Diagram::delta_dagger(QUBIT),
        &Diagram::delta(QUBIT),
        &t(&[&Diagram::gamma(QUBIT), &id()]),
    ])
}
