use std::sync::OnceLock;

use crate::diagram::{BoxGen, BoxVariant, Diagram, WireType};
use crate::hilb::{c, eval, random_matrix, random_unitary, ComplexTensor, Interpretation};
use crate::structures::{builtin, gates, Builtin, TOL};

use super::{RewriteRule, RuleError, Tag};

/// Which part of the theory a rule belongs to. Restricting the normalizer
/// to [`Family::Compact`] gives the purely compact-closed fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Compact,
    Frobenius,
}

/// Numerical evidence that a rule holds: the max-entry residual of
/// `lhs − rhs` under each built-in basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub rule: String,
    pub residuals: Vec<(Builtin, f64)>,
}

impl Certificate {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

/// Sample tensor for a box variable: a generic matrix, or one with the
/// required property relative to the basis `u`.
fn sample(tag: Option<Tag>, u: &ComplexTensor, seed: u64) -> ComplexTensor {
    let conj = |m: &ComplexTensor| u.matmul(m).unwrap().matmul(&u.adjoint()).unwrap();
    match tag {
        None => random_matrix(2, 2, seed),
        Some(Tag::Unitary) => random_unitary(2, seed),
        Some(Tag::Permutation) => conj(&gates::pauli_x()),
        Some(Tag::Phase) => conj(&ComplexTensor::diag(&[c(1.0, 0.0), c(0.0, 0.7).exp()])),
    }
}

impl RewriteRule {
    /// Evaluates both sides under Z, X and Y on every object, with box
    /// variables instantiated by sample tensors that satisfy the rule's tag
    /// requirements.
    pub fn certify(&self) -> Result<Certificate, RuleError> {
        let mut residuals = Vec::new();
        let mut objects: Vec<_> = Vec::new();
        let mut vars: Vec<String> = Vec::new();
        for d in [&self.lhs, &self.rhs] {
            for t in d.inputs().iter().chain(d.outputs()) {
                objects.push(t.object.clone());
            }
            for (_, g) in d.nodes() {
                if let Some(o) = g.object() {
                    objects.push(o.clone());
                }
                if let crate::diagram::Generator::Box(b) = g {
                    vars.push(b.name.clone());
                    objects.extend(b.inputs.iter().chain(&b.outputs).map(|t| t.object.clone()));
                }
            }
        }
        objects.sort();
        objects.dedup();
        vars.sort();
        vars.dedup();
        for b in Builtin::ALL {
            let u = b.basis_unitary();
            let mut interp = Interpretation::new();
            for o in &objects {
                interp.set_basis(o.clone(), builtin(b))?;
            }
            for (k, v) in vars.iter().enumerate() {
                let tag = self.requires.iter().filter(|(n, _)| n == v).map(|(_, t)| *t).max();
                interp.set_box(v.clone(), sample(tag, &u, 17 + k as u64));
            }
            let residual = eval(&self.lhs, &interp)?.max_diff(&eval(&self.rhs, &interp)?);
            if residual > TOL {
                return Err(RuleError::CertificateFailed { rule: self.name.clone(), basis: b.name().into(), residual });
            }
            residuals.push((b, residual));
        }
        Ok(Certificate { rule: self.name.clone(), residuals })
    }
}

fn id(t: &str) -> Diagram {
    Diagram::identity(t)
}

fn t(parts: &[&Diagram]) -> Diagram {
    Diagram::tensor_all(parts.iter().copied())
}

fn seq(parts: &[&Diagram]) -> Diagram {
    let mut d = parts[0].clone();
    for p in &parts[1..] {
        d = d.then(p).expect("rule sides are well typed");
    }
    d
}

fn f_box(variant: BoxVariant) -> Diagram {
    Diagram::boxed(BoxGen::new("?f", vec![WireType::base("A")], vec![WireType::base("B")]).with_variant(variant))
}

fn endo(name: &str) -> Diagram {
    Diagram::box_(name, &["A"], &["A"])
}

fn rule(name: &str, lhs: Diagram, rhs: Diagram) -> RewriteRule {
    RewriteRule::new(name, lhs, rhs).expect("rule sides share a signature")
}

fn build() -> Vec<RewriteRule> {
    use super::Family::*;
    let (delta, delta_d) = (Diagram::delta("A"), Diagram::delta_dagger("A"));
    let (gamma, gamma_d) = (Diagram::gamma("A"), Diagram::gamma_dagger("A"));
    let (d, d_d) = (Diagram::dualiser("A"), Diagram::dualiser_dagger("A"));
    let (cap, cup) = (Diagram::cap("A"), Diagram::cup("A"));
    let (a, ad) = (id("A"), id("A*"));
    let f = f_box(BoxVariant::Plain);
    let ft = f_box(BoxVariant::Transpose);
    let fd = f_box(BoxVariant::Dagger);
    let (p, g) = (endo("?f"), endo("?g"));

    vec![
        rule("snake", seq(&[&t(&[&a, &cup]), &t(&[&cap, &a])]), a.clone()),
        rule("snake-dual", seq(&[&t(&[&cup, &ad]), &t(&[&ad, &cap])]), ad.clone()),
        rule("dual-object", seq(&[&Diagram::swap("A*", "A"), &cap]), seq(&[&Diagram::swap("A*", "A"), &cap])),
        rule(
            "slide-cap",
            seq(&[&t(&[&f, &id("B*")]), &Diagram::cap("B")]),
            seq(&[&t(&[&a, &ft]), &cap]),
        ),
        rule(
            "slide-cup",
            seq(&[&cup, &t(&[&ad, &f])]),
            seq(&[&Diagram::cup("B"), &t(&[&ft, &id("B")])]),
        ),
        rule(
            "transpose-wrap",
            seq(&[&t(&[&cup, &id("B*")]), &t(&[&ad, &f, &id("B*")]), &t(&[&ad, &Diagram::cap("B")])]),
            ft.clone(),
        ),
        rule("unitary-cancel", seq(&[&f, &fd]), a.clone()).requires("?f", Tag::Unitary),
        rule("counit", seq(&[&delta, &t(&[&gamma, &a])]), a.clone()).family(Frobenius),
        rule("unit", seq(&[&t(&[&a, &gamma_d]), &delta_d]), a.clone()).family(Frobenius),
        rule(
            "coassociativity",
            seq(&[&delta, &t(&[&delta, &a])]),
            seq(&[&delta, &t(&[&a, &delta])]),
        )
        .family(Frobenius),
        rule(
            "associativity",
            seq(&[&t(&[&delta_d, &a]), &delta_d]),
            seq(&[&t(&[&a, &delta_d]), &delta_d]),
        )
        .family(Frobenius),
        rule("cocommutativity", seq(&[&delta, &Diagram::swap("A", "A")]), delta.clone()).family(Frobenius),
        rule("specialness", seq(&[&delta, &delta_d]), a.clone()).family(Frobenius),
        rule("frobenius", seq(&[&delta_d, &delta]), seq(&[&t(&[&a, &delta]), &t(&[&delta_d, &a])])).family(Frobenius),
        rule("factorise-cap", cap.clone(), seq(&[&t(&[&a, &d_d]), &delta_d, &gamma])).family(Frobenius),
        rule("factorise-cup", cup.clone(), seq(&[&gamma_d, &delta, &t(&[&d, &a])])).family(Frobenius),
        rule("dualiser-unitary", seq(&[&d, &d_d]), a.clone()).family(Frobenius),
        rule("dualiser-unitary-dual", seq(&[&d_d, &d]), ad.clone()).family(Frobenius),
        rule("info-flow", seq(&[&cup, &t(&[&d_d, &a])]), seq(&[&gamma_d, &delta])).family(Frobenius),
        rule(
            "strict-tensor",
            seq(&[&t(&[&d, &Diagram::dualiser("B")]), &Diagram::swap("A*", "B*")]),
            seq(&[&Diagram::swap("A", "B"), &t(&[&Diagram::dualiser("B"), &d])]),
        )
        .family(Frobenius),
        rule("permutation-counit", seq(&[&p, &gamma]), gamma.clone())
            .family(Frobenius)
            .requires("?f", Tag::Permutation),
        rule("permutation-unit", seq(&[&gamma_d, &p]), gamma_d.clone())
            .family(Frobenius)
            .requires("?f", Tag::Permutation),
        rule("permutation-copy", seq(&[&p, &delta]), seq(&[&delta, &t(&[&p, &p])]))
            .family(Frobenius)
            .requires("?f", Tag::Permutation),
        rule("phase-copy", seq(&[&delta, &t(&[&g, &a])]), seq(&[&g, &delta]))
            .family(Frobenius)
            .requires("?g", Tag::Phase),
    ]
}

/// The built-in rules, each certified numerically on first use.
pub fn registry() -> &'static [RewriteRule] {
    static RULES: OnceLock<Vec<RewriteRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let rules = build();
        for r in &rules {
            if let Err(e) = r.certify() {
                panic!("built-in rule failed certification: {e}");
            }
        }
        rules
    })
}

pub(crate) fn lookup(name: &str) -> Option<&'static RewriteRule> {
    registry().iter().find(|r| r.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_rule_certifies() {
        for r in registry() {
            let cert = r.certify().unwrap();
            assert_eq!(cert.residuals.len(), 3);
            assert!(cert.max_residual() < 1e-9, "{}: {}", r.name, cert.max_residual());
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = registry().iter().map(|r| r.name.as_str()).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn corrupted_rule_fails() {
        let bad = rule("corrupt", t(&[&id("A"), &id("A")]), Diagram::swap("A", "A"));
        let err = bad.certify().unwrap_err();
        assert!(matches!(err, RuleError::CertificateFailed { .. }));
        let bad = rule("corrupt-frobenius", seq(&[&Diagram::delta_dagger("A"), &Diagram::delta("A")]), t(&[&id("A"), &id("A")]));
        assert!(bad.certify().is_err());
    }

    #[test]
    fn tags_matter_for_certificates() {
        // phase-copy is false for a generic unitary
        let r = lookup("phase-copy").unwrap().clone();
        let mut untagged = r.clone();
        untagged.requires = vec![("?g".into(), Tag::Unitary)];
        assert!(untagged.certify().is_err());
        assert!(r.certify().is_ok());
    }

    #[test]
    fn structural_rules_are_detected() {
        let structural: Vec<&str> = registry().iter().filter(|r| r.is_structural()).map(|r| r.name.as_str()).collect();
        assert_eq!(structural, ["dual-object", "cocommutativity", "strict-tensor"]);
    }
}
