#![allow(dead_code)]

use dualspider::diagram::{BoxGen, BoxVariant, Diagram, Generator, WireType};
use dualspider::hilb::{c, eval, random_diagram, random_matrix, random_unitary, ComplexTensor, Interpretation, RandomDiagramParams};
use dualspider::rules::{apply, find_matches, registry, Context, Direction, Tag};
use dualspider::structures::{builtin, Builtin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const Q: &str = "Q";

fn conj_by(u: &ComplexTensor, m: &ComplexTensor) -> ComplexTensor {
    u.matmul(m).unwrap().matmul(&u.adjoint()).unwrap()
}

/// Qubit `Q` in basis `b`, with a generic box `f`, a unitary `u`, a
/// permutation `p` and a phase map `g` of that basis.
pub fn interp(b: Builtin) -> Interpretation {
    let basis = b.basis_unitary();
    let flip = ComplexTensor::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let phase = ComplexTensor::diag(&[c(1.0, 0.0), c(0.0, 0.7).exp()]);
    Interpretation::with_basis(Q, builtin(b))
        .unwrap()
        .with_box("f", random_matrix(2, 2, 101))
        .with_box("u", random_unitary(2, 102))
        .with_box("p", conj_by(&basis, &flip))
        .with_box("g", conj_by(&basis, &phase))
}

pub fn context() -> Context {
    Context::new().dim(Q, 2).tag("u", Tag::Unitary).tag("p", Tag::Permutation).tag("g", Tag::Phase)
}

fn qubit_box(name: &str, variant: BoxVariant) -> Generator {
    let q = || vec![WireType::base(Q)];
    Generator::Box(BoxGen::new(name, q(), q()).with_variant(variant))
}

/// Basis generators plus the four boxes in a couple of variants.
pub fn host_params() -> RandomDiagramParams {
    let mut p = RandomDiagramParams::basis(Q).nodes(1, 7);
    for (name, variant) in [
        ("f", BoxVariant::Plain),
        ("f", BoxVariant::Transpose),
        ("u", BoxVariant::Plain),
        ("u", BoxVariant::Dagger),
        ("p", BoxVariant::Plain),
        ("p", BoxVariant::Dagger),
        ("g", BoxVariant::Plain),
    ] {
        p = p.with_generator(qubit_box(name, variant), 1);
    }
    p
}

pub fn max_gap(a: &Diagram, b: &Diagram) -> f64 {
    Builtin::ALL
        .iter()
        .map(|&basis| {
            let i = interp(basis);
            eval(a, &i).unwrap().max_diff(&eval(b, &i).unwrap())
        })
        .fold(0.0, f64::max)
}

/// One seeded rewrite on a seeded host: `(rule, before, after)`, or `None`
/// when no rule matches the host.
pub fn random_application(seed: u64) -> Option<(String, Diagram, Diagram)> {
    let host = random_diagram(&host_params(), seed);
    let ctx = context();
    let mut candidates = Vec::new();
    for rule in registry() {
        for dir in [Direction::Forward, Direction::Backward] {
            if dir == Direction::Backward && !rule.bidirectional {
                continue;
            }
            for m in find_matches(rule, dir, &host, &ctx).unwrap() {
                candidates.push((rule, m));
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rule, m) = &candidates[rng.random_range(0..candidates.len())];
    let after = apply(rule, m, &host).unwrap();
    Some((rule.name.clone(), host, after))
}

/// Seeded connected diagrams of basis generators only.
pub fn basis_diagram(seed: u64) -> Diagram {
    random_diagram(&RandomDiagramParams::basis(Q).nodes(1, 8).max_boundary(6), seed)
}
