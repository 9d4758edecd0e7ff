//! Teleportation and state transfer, one post-selected branch per
//! measurement outcome, checked numerically and by rewriting.

mod build;

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::diagram::Diagram;
use crate::hilb::{c, equal_upto_scalar, eval, ComplexTensor, HilbError, Interpretation, C64};
use crate::rules::{find_matches, registry, Context, Direction, Normalizer, Proof, ProofTrace, RuleError, RuleSet};
use crate::structures::TOL;

pub use build::{
    build_state_transfer, build_teleportation, parity_projector, pauli_corrections, phase_projector,
    protocol_context, protocol_interpretation, teleport_branch, teleport_core, teleport_core_compact,
    teleport_projector, transfer_branch, transfer_core, transfer_maps, NamedMatrix, QUBIT,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("branch {outcome:?} is not a one-qubit map")]
    MalformedBranch { outcome: Vec<usize> },
}

/// One measurement outcome in effect form: a map from the input qubit to
/// the output qubit, corrections included.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcome: Vec<usize>,
    pub diagram: Diagram,
    /// Names of the correction boxes, in the order they are applied.
    pub corrections: Vec<String>,
}

/// The projectors of one measurement and the constant `c` expected in
/// `Σ P = c·1`.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub projectors: Vec<Diagram>,
    pub expected: C64,
}

#[derive(Clone, Debug)]
pub struct Protocol {
    pub name: &'static str,
    pub branches: Vec<Branch>,
    pub measurement: Measurement,
    pub interpretation: Interpretation,
    pub context: Context,
}

impl Protocol {
    pub fn verify(&self, mode: Mode, rules: RuleSet) -> Result<VerificationReport, ProtocolError> {
        verify(&self.branches, Some(&self.measurement), &self.interpretation, &self.context, mode, rules)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Numeric,
    Diagrammatic,
    Both,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "numeric" => Ok(Mode::Numeric),
            "diagrammatic" => Ok(Mode::Diagrammatic),
            "both" => Ok(Mode::Both),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// Numerically the identity, but the rewriter found no proof.
    Partial,
    NotProved,
    BudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Partial => "PARTIAL",
            Status::NotProved => "NOT_PROVED",
            Status::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchReport {
    pub outcome: Vec<usize>,
    /// Numerical check: the branch is `c·1` with `|c| = 1`.
    pub equal_to_identity: bool,
    pub scalar: C64,
    pub residual: f64,
    pub proof: Option<Proof>,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub mode: Mode,
    pub branches: Vec<BranchReport>,
    /// `c` with `Σ P = c·1`, when a measurement was supplied.
    pub completeness_constant: Option<C64>,
    pub completeness_expected: Option<C64>,
}

impl VerificationReport {
    pub fn completeness_ok(&self) -> bool {
        match (self.completeness_constant, self.completeness_expected) {
            (Some(got), Some(want)) => (got - want).norm() <= TOL,
            (None, None) => true,
            _ => false,
        }
    }

    pub fn passed(&self) -> bool {
        self.branches.iter().all(|b| b.status == Status::Pass) && self.completeness_ok()
    }

    pub fn count(&self, status: Status) -> usize {
        self.branches.iter().filter(|b| b.status == status).count()
    }
}

fn fmt_c(z: C64) -> String {
    crate::diagram::format_complex(z)
}

impl fmt::Display for VerificationReport {
    /// `key: value` lines; keys sorted within each record.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.branches {
            let outcome: Vec<String> = b.outcome.iter().map(|x| x.to_string()).collect();
            writeln!(f, "branch {}", outcome.join(","))?;
            writeln!(f, "  equal_to_identity: {}", b.equal_to_identity)?;
            writeln!(f, "  residual: {:e}", b.residual)?;
            writeln!(f, "  scalar: {}", fmt_c(b.scalar))?;
            writeln!(f, "  status: {}", b.status.as_str())?;
            if let Some(p) = &b.proof {
                writeln!(f, "  trace:")?;
                for line in p.left.to_text().lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        match self.completeness_constant {
            Some(z) => writeln!(f, "completeness_constant: {}", fmt_c(z))?,
            None => writeln!(f, "completeness_constant: none")?,
        }
        writeln!(f, "mode: {:?}", self.mode)?;
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// `c` with `t ≈ c·1`, if any.
fn identity_multiple(t: &ComplexTensor, dim: usize) -> Result<(bool, C64, f64), HilbError> {
    let id = ComplexTensor::identity(dim);
    let (_, z) = equal_upto_scalar(t, &id, TOL)?;
    let residual = t.max_diff(&id.scale(z));
    Ok((residual <= TOL, z, residual))
}

fn check_branch(
    b: &Branch,
    interp: &Interpretation,
    normalizer: &Normalizer,
    mode: Mode,
) -> Result<BranchReport, ProtocolError> {
    let (ins, outs) = b.diagram.boundary_signature();
    if ins.len() != 1 || ins != outs {
        return Err(ProtocolError::MalformedBranch { outcome: b.outcome.clone() });
    }
    let value = eval(&b.diagram, interp)?;
    let dim = value.shape()[0];
    let (multiple, scalar, residual) = identity_multiple(&value, dim)?;
    let equal_to_identity = multiple && (scalar.norm() - 1.0).abs() <= TOL;

    let mut proof = None;
    let mut proved = None;
    if mode != Mode::Numeric {
        match normalizer.prove_equal(&b.diagram, &Diagram::identity(ins[0].clone())) {
            Ok(p) => {
                proof = Some(p);
                proved = Some(Ok(()));
            }
            Err(RuleError::NotProved { .. }) => proved = Some(Err(Status::NotProved)),
            Err(RuleError::BudgetExhausted(_)) => proved = Some(Err(Status::BudgetExhausted)),
            Err(e) => return Err(e.into()),
        }
    }
    let status = match (mode, proved) {
        (Mode::Numeric, _) | (_, None) => {
            if equal_to_identity {
                Status::Pass
            } else {
                Status::Fail
            }
        }
        (Mode::Diagrammatic, Some(Ok(()))) => Status::Pass,
        (Mode::Diagrammatic, Some(Err(s))) => s,
        (Mode::Both, Some(Ok(()))) if equal_to_identity => Status::Pass,
        // a proof of a false equation would be an engine bug
        (Mode::Both, Some(Ok(()))) => Status::Fail,
        (Mode::Both, Some(Err(_))) if equal_to_identity => Status::Partial,
        (Mode::Both, Some(Err(_))) => Status::Fail,
    };
    Ok(BranchReport { outcome: b.outcome.clone(), equal_to_identity, scalar, residual, proof, status })
}

/// `c` with `Σ_x P_x = c·1`.
pub fn completeness_constant(m: &Measurement, interp: &Interpretation) -> Result<C64, ProtocolError> {
    let mut sum: Option<ComplexTensor> = None;
    for p in &m.projectors {
        let v = eval(p, interp)?;
        sum = Some(match sum {
            Some(s) => s.add(&v)?,
            None => v,
        });
    }
    let Some(sum) = sum else { return Ok(c(0.0, 0.0)) };
    let rows: usize = sum.shape()[..sum.rank() / 2].iter().product();
    let (ok, z, _) = identity_multiple(&sum.reshape(vec![rows, rows])?, rows)?;
    Ok(if ok { z } else { c(f64::NAN, f64::NAN) })
}

/// Checks every branch against the identity. Numeric checks evaluate the
/// branch; diagrammatic checks rewrite it to a plain wire. Branches are
/// checked in parallel and reported in input order.
pub fn verify(
    branches: &[Branch],
    measurement: Option<&Measurement>,
    interp: &Interpretation,
    ctx: &Context,
    mode: Mode,
    rules: RuleSet,
) -> Result<VerificationReport, ProtocolError> {
    let normalizer = Normalizer::new(rules, ctx.clone());
    let reports = branches
        .par_iter()
        .map(|b| check_branch(b, interp, &normalizer, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let completeness_constant = measurement.map(|m| completeness_constant(m, interp)).transpose()?;
    Ok(VerificationReport {
        mode,
        branches: reports,
        completeness_constant,
        completeness_expected: measurement.map(|m| m.expected),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnifyMode {
    TeleportToTransfer,
    TransferToTeleport,
}

/// One Frobenius step between the identity-correction cores, checked to
/// land exactly on the other core.
pub fn unify(mode: UnifyMode) -> Result<ProofTrace, RuleError> {
    let frobenius = registry().iter().find(|r| r.name == "frobenius").expect("built-in rule");
    let (from, to, dir) = match mode {
        UnifyMode::TeleportToTransfer => (teleport_core(), transfer_core(), Direction::Backward),
        UnifyMode::TransferToTeleport => (transfer_core(), teleport_core(), Direction::Forward),
    };
    let ctx = protocol_context();
    for m in find_matches(frobenius, dir, &from, &ctx)? {
        let next = crate::rules::apply(frobenius, &m, &from)?;
        if next.is_isomorphic(&to) {
            return Ok(ProofTrace { initial: from, steps: vec![m.step()], result: next.canonicalize() });
        }
    }
    Err(RuleError::NotProved { left: from.to_string(), right: to.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teleport_branches_are_identity() {
        let p = build_teleportation();
        let r = p.verify(Mode::Numeric, RuleSet::All).unwrap();
        assert!(r.passed(), "{r}");
        for b in &r.branches {
            assert!((b.scalar - c(1.0, 0.0)).norm() < 1e-9);
        }
        assert!((r.completeness_constant.unwrap() - c(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn transfer_needs_its_corrections() {
        let i = protocol_interpretation();
        let b = transfer_branch(1, 0, false);
        let v = eval(&b.diagram, &i).unwrap();
        let (ok, _, residual) = identity_multiple(&v, 2).unwrap();
        assert!(!ok && residual >= 1e-3);
        let p = build_state_transfer();
        assert!(p.verify(Mode::Numeric, RuleSet::All).unwrap().passed());
    }

    #[test]
    fn empty_branch_list_passes() {
        let r = verify(&[], None, &protocol_interpretation(), &Context::new(), Mode::Both, RuleSet::All).unwrap();
        assert!(r.passed());
        assert!(r.branches.is_empty());
    }

    #[test]
    fn malformed_branch_is_an_error() {
        let b = Branch { outcome: vec![0], diagram: Diagram::delta(QUBIT), corrections: vec![] };
        let e = verify(&[b], None, &protocol_interpretation(), &Context::new(), Mode::Numeric, RuleSet::All);
        assert!(matches!(e, Err(ProtocolError::MalformedBranch { .. })));
    }

    #[test]
    fn partial_when_only_numbers_agree() {
        // without tags the phase and permutation rules cannot fire
        let p = build_state_transfer();
        let r = verify(&p.branches, None, &p.interpretation, &Context::new().dim(QUBIT, 2), Mode::Both, RuleSet::All).unwrap();
        assert!(r.branches.iter().any(|b| b.status == Status::Partial));
        assert!(!r.passed());
    }

    #[test]
    fn unify_round_trip() {
        let there = unify(UnifyMode::TeleportToTransfer).unwrap();
        assert_eq!(there.rule_names(), ["frobenius"]);
        assert!(there.result.is_isomorphic(&transfer_core()));
        let back = unify(UnifyMode::TransferToTeleport).unwrap();
        assert!(back.result.is_isomorphic(&teleport_core()));
        let i = protocol_interpretation();
        assert!(eval(&teleport_core(), &i).unwrap().max_diff(&eval(&transfer_core(), &i).unwrap()) < 1e-12);
    }

    #[test]
    fn diagrammatic_proofs() {
        let teleport = build_teleportation().verify(Mode::Both, RuleSet::All).unwrap();
        assert!(teleport.passed(), "{teleport}");
        let transfer = build_state_transfer().verify(Mode::Both, RuleSet::All).unwrap();
        assert!(transfer.passed(), "{transfer}");
        let used = |r: &VerificationReport, rule: &str| {
            r.branches.iter().any(|b| b.proof.as_ref().is_some_and(|p| p.uses(rule)))
        };
        assert!(used(&transfer, "permutation-unit"));
        assert!(used(&transfer, "phase-copy"));
    }

    #[test]
    fn compact_rules_alone_cannot_do_transfer() {
        let teleport = build_teleportation().verify(Mode::Diagrammatic, RuleSet::NoFrobenius).unwrap();
        assert!(teleport.passed(), "{teleport}");
        let transfer = build_state_transfer().verify(Mode::Both, RuleSet::NoFrobenius).unwrap();
        assert_eq!(transfer.count(Status::Partial), 4, "{transfer}");
    }

    #[test]
    fn projector_laws() {
        let i = protocol_interpretation();
        let ev = |d: &Diagram| eval(d, &i).unwrap();
        let sq = |d: &Diagram| ev(&d.then(d).unwrap());
        for x in 0..4 {
            let p = teleport_projector(x);
            assert!(sq(&p).max_diff(&ev(&p).scale(c(2.0, 0.0))) < 1e-12);
        }
        for x in 0..2 {
            let p = parity_projector(x);
            assert!(sq(&p).max_diff(&ev(&p)) < 1e-12);
            let q = phase_projector(x);
            assert!(sq(&q).max_diff(&ev(&q).scale(c(2.0, 0.0))) < 1e-12);
        }
        let cross = ev(&parity_projector(0).then(&parity_projector(1)).unwrap());
        assert!(cross.max_abs() < 1e-12);
    }
}
