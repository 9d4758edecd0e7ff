//! The ten acceptance criteria. Runs without the test harness so that one
//! line per criterion is always printed; exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use common::{basis_diagram, max_gap, random_application, Q};
use dualspider::diagram::{format_complex, Diagram};
use dualspider::hilb::{c, eval, random_unitary, ComplexTensor, Interpretation};
use dualspider::protocols::{
    build_state_transfer, build_teleportation, parity_projector, protocol_context, protocol_interpretation,
    teleport_core, transfer_core, Mode, Status,
};
use dualspider::rules::{dot_cases, normalize, registry, Context, Normalizer, RuleSet};
use dualspider::structures::{
    builtin, check_frobenius, conjugate_by_unitary, dualiser_from_epsilon, epsilon_from_dualiser, gates,
    induced_epsilon_gap, induced_epsilon_selfdual, info_flow_check, snake_residual, standard, theta_family_scan,
    AmbientCompact, BasisStructure, Builtin,
};

const TOL: f64 = 1e-9;
const EXACT: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn law_suite() -> Outcome {
    let mut worst = 0.0f64;
    for b in Builtin::ALL {
        let s = builtin(b);
        let r = check_frobenius(&s).map_err(|e| e.to_string())?;
        worst = worst
            .max(r.max())
            .max(s.dualiser().unitarity_residual())
            .max(snake_residual(&epsilon_from_dualiser(&s)));
    }
    check(worst <= TOL, format!("max residual {worst:.1e}"))
}

fn conclusion_values() -> Outcome {
    let bell = ComplexTensor::identity(2);
    let anti = ComplexTensor::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    let eps = |b| induced_epsilon_selfdual(&builtin(b));
    let mut gaps = vec![
        ("eps_Z", eps(Builtin::Z).max_diff(&bell)),
        ("eps_X", eps(Builtin::X).max_diff(&bell)),
        ("eps_Y", eps(Builtin::Y).max_diff(&anti)),
    ];
    let d_y = dualiser_from_epsilon(&builtin(Builtin::Y), &AmbientCompact::kronecker(2)).map_err(|e| e.to_string())?;
    gaps.push(("d_Y", d_y.max_diff(&gates::pauli_z())));
    let root2_zero = ComplexTensor::vector(&[c(2f64.sqrt(), 0.0), c(0.0, 0.0)]);
    for b in [Builtin::X, Builtin::Y] {
        // γ† sends 1 to the conjugate of γ's coefficients
        gaps.push(("gamma_dagger", builtin(b).gamma().conj().max_diff(&root2_zero)));
    }
    let distinct = eps(Builtin::Y).max_diff(&bell) > 1e-3;
    let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    check(worst <= EXACT && distinct, format!("max deviation {worst:.1e}, eps_Y differs from eps: {distinct}"))
}

fn round_trip(s: &BasisStructure) -> Result<f64, String> {
    let amb = AmbientCompact::kronecker(s.dim());
    let d = dualiser_from_epsilon(s, &amb).map_err(|e| e.to_string())?;
    let there_back = epsilon_from_dualiser(&s.clone().with_dualiser(d)).max_diff(amb.epsilon());
    let eps = AmbientCompact::new(epsilon_from_dualiser(s)).map_err(|e| e.to_string())?;
    let back_there = dualiser_from_epsilon(s, &eps).map_err(|e| e.to_string())?.max_diff(s.dualiser());
    Ok(there_back.max(back_there))
}

fn correspondence_round_trip() -> Outcome {
    let mut structures: Vec<BasisStructure> = Builtin::ALL.iter().map(|&b| builtin(b)).collect();
    for seed in 0..50 {
        structures.push(conjugate_by_unitary(&standard(2), &random_unitary(2, 1000 + seed)).map_err(|e| e.to_string())?);
    }
    let mut worst = 0.0f64;
    for s in &structures {
        worst = worst.max(round_trip(s)?);
    }
    check(worst <= TOL, format!("{} structures, max residual {worst:.1e}", structures.len()))
}

fn conjugation_and_theta() -> Outcome {
    let z = standard(2);
    let h = conjugate_by_unitary(&z, &gates::hadamard()).map_err(|e| e.to_string())?;
    let s = conjugate_by_unitary(&z, &gates::s_gate()).map_err(|e| e.to_string())?;
    let (kept, changed) = (induced_epsilon_gap(&z, &h), induced_epsilon_gap(&z, &s));
    let scan = theta_family_scan(360);
    check(
        kept <= TOL && changed >= 1e-3 && scan.min_deviation >= 0.5,
        format!("H gap {kept:.1e}, S gap {changed:.3}, theta min deviation {:.3}", scan.min_deviation),
    )
}

fn rewrite_soundness() -> Outcome {
    let certificates = registry().iter().map(|r| r.certify()).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let cert_worst = certificates.iter().map(|c| c.max_residual()).fold(0.0, f64::max);
    let (mut applied, mut worst, mut seed) = (0, 0.0f64, 0u64);
    while applied < 200 {
        if let Some((_, before, after)) = random_application(seed) {
            worst = worst.max(max_gap(&before, &after));
            applied += 1;
        }
        seed += 1;
    }
    check(
        cert_worst <= TOL && worst <= TOL,
        format!("{} certificates (max {cert_worst:.1e}), {applied} applications (max {worst:.1e})", certificates.len()),
    )
}

fn spider_normal_forms() -> Outcome {
    let ctx = Context::new().dim(Q, 2);
    let mut worst = 0.0f64;
    let mut by_signature: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for seed in 0..200 {
        let d = basis_diagram(seed);
        let trace = normalize(&d, &ctx).map_err(|e| format!("seed {seed}: {e}"))?;
        worst = worst.max(max_gap(&d, &trace.result));
        let (ins, outs) = d.boundary_signature();
        by_signature.entry(format!("{ins:?} -> {outs:?}")).or_default().push(trace.result.to_string());
    }
    let clashes = by_signature.values().filter(|nfs| nfs.iter().any(|nf| nf != &nfs[0])).count();
    check(
        worst <= TOL && clashes == 0,
        format!("max eval gap {worst:.1e}, {} signatures, {clashes} with differing normal forms", by_signature.len()),
    )
}

fn teleportation() -> Outcome {
    let p = build_teleportation();
    let numeric = p.verify(Mode::Numeric, RuleSet::All).map_err(|e| e.to_string())?;
    let exact_one = numeric.branches.iter().all(|b| b.status == Status::Pass && (b.scalar - c(1.0, 0.0)).norm() <= TOL);
    let diagrammatic = p.verify(Mode::Diagrammatic, RuleSet::All).map_err(|e| e.to_string())?;
    let ends_in_wire = diagrammatic
        .branches
        .iter()
        .all(|b| b.status == Status::Pass && b.proof.as_ref().is_some_and(|pr| pr.left.result.is_identity()));
    check(
        numeric.passed() && exact_one && diagrammatic.passed() && ends_in_wire,
        format!(
            "branches = 1: {exact_one}, sum of projectors = {}, {} proofs ending in the wire",
            numeric.completeness_constant.map_or("none".into(), format_complex),
            diagrammatic.count(Status::Pass)
        ),
    )
}

fn state_transfer() -> Outcome {
    let p = build_state_transfer();
    let numeric = p.verify(Mode::Numeric, RuleSet::All).map_err(|e| e.to_string())?;
    let i = protocol_interpretation();
    let cross = eval(&parity_projector(0).then(&parity_projector(1)).map_err(|e| e.to_string())?, &i)
        .map_err(|e| e.to_string())?
        .max_abs();
    let diagrammatic = p.verify(Mode::Diagrammatic, RuleSet::All).map_err(|e| e.to_string())?;
    let special = diagrammatic.branches.iter().all(|b| {
        b.proof.as_ref().is_some_and(|pr| {
            pr.left.steps.iter().any(|s| s.rule.starts_with("permutation-") || s.rule == "phase-copy")
        })
    });
    check(
        numeric.passed() && cross <= TOL && diagrammatic.passed() && special,
        format!(
            "numeric {}, sum of projectors = {}, |pi0 pi1| = {cross:.1e}, {} proofs using permutation/phase rules: {special}",
            numeric.count(Status::Pass),
            numeric.completeness_constant.map_or("none".into(), format_complex),
            diagrammatic.count(Status::Pass)
        ),
    )
}

fn unification() -> Outcome {
    let proof = Normalizer::new(RuleSet::All, protocol_context())
        .prove_equal(&teleport_core(), &transfer_core())
        .map_err(|e| e.to_string())?;
    let teleport = build_teleportation().verify(Mode::Diagrammatic, RuleSet::NoFrobenius).map_err(|e| e.to_string())?;
    let transfer = build_state_transfer().verify(Mode::Diagrammatic, RuleSet::NoFrobenius).map_err(|e| e.to_string())?;
    let refused = transfer.count(Status::NotProved) == transfer.branches.len();
    check(
        proof.uses("frobenius") && teleport.passed() && refused,
        format!(
            "cores equal via frobenius: {}, compact-only teleport {}, transfer not proved {}/{}",
            proof.uses("frobenius"),
            teleport.count(Status::Pass),
            transfer.count(Status::NotProved),
            transfer.branches.len()
        ),
    )
}

fn information_flow() -> Outcome {
    let flow = Builtin::ALL.iter().map(|&b| {
        let r = info_flow_check(&builtin(b));
        r.left.max(r.right)
    });
    let flow_worst = flow.fold(0.0, f64::max);
    let gap = |d: &Diagram, e: &Diagram, b| -> Result<f64, String> {
        let i = Interpretation::with_basis(Q, builtin(b)).map_err(|e| e.to_string())?;
        Ok(eval(d, &i).map_err(|e| e.to_string())?.max_diff(&eval(e, &i).map_err(|e| e.to_string())?))
    };
    let (mut y_min, mut z_max) = (f64::INFINITY, 0.0f64);
    let cases = dot_cases(Q);
    for case in &cases {
        y_min = y_min.min(gap(&case.dotted, &case.plain, Builtin::Y)?);
        z_max = z_max.max(gap(&case.dotted, &case.plain, Builtin::Z)?);
    }
    check(
        flow_worst <= TOL && y_min >= 1e-3 && z_max <= TOL,
        format!("information-flow residual {flow_worst:.1e}, {} dot cases: min Y gap {y_min:.3}, max Z gap {z_max:.1e}", cases.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("law suite", law_suite),
        ("conclusion values", conclusion_values),
        ("pairing/dualiser round trip", correspondence_round_trip),
        ("conjugation and theta scan", conjugation_and_theta),
        ("rewrite soundness", rewrite_soundness),
        ("spider normal forms", spider_normal_forms),
        ("teleportation", teleportation),
        ("state transfer", state_transfer),
        ("unification", unification),
        ("information flow and dots", information_flow),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail}", k + 1);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
