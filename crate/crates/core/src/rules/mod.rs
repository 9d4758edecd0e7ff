//! Rewrite rules over diagrams: pattern matching, application, the
//! certified registry of equational laws, and the spider normalizer.
//!
//! Rule patterns are ordinary diagrams. Their object names act as variables
//! (bound to a host object, possibly dualized when the object only occurs on
//! boxes), and boxes whose name starts with `?` match any host box with a
//! compatible signature, subject to the tags the rule requires.

mod dots;
mod normalize;
mod pattern;
mod registry;
mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Obj};
use crate::hilb::HilbError;

pub use dots::{dot_cases, DotCase};
pub use normalize::{normalize, normalize_with, prove_equal, Normalizer, Proof, RuleSet, DEFAULT_BUDGET};
pub use pattern::{apply, find_matches, Match};
pub use registry::{registry, Certificate, Family};
pub use trace::{ProofTrace, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Properties a box may be declared to have. Rules about permutations and
/// phase maps only fire on boxes carrying the tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Unitary,
    Permutation,
    Phase,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Unitary => "unitary",
            Tag::Permutation => "permutation",
            Tag::Phase => "phase",
        }
    }
}

impl std::str::FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unitary" => Ok(Tag::Unitary),
            "permutation" => Ok(Tag::Permutation),
            "phase" => Ok(Tag::Phase),
            other => Err(format!("unknown tag `{other}`")),
        }
    }
}

/// What the engine may assume about the host: box tags and object
/// dimensions (used to turn closed loops into scalars).
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub tags: BTreeMap<String, BTreeSet<Tag>>,
    pub dims: BTreeMap<Obj, usize>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tag(mut self, name: impl Into<String>, tag: Tag) -> Self {
        self.tags.entry(name.into()).or_default().insert(tag);
        self
    }

    pub fn dim(mut self, object: impl Into<Obj>, dim: usize) -> Self {
        self.dims.insert(object.into(), dim);
        self
    }

    /// Permutations and phase maps are unitary.
    pub fn has_tag(&self, name: &str, tag: Tag) -> bool {
        let Some(tags) = self.tags.get(name) else { return false };
        match tag {
            Tag::Unitary => !tags.is_empty(),
            t => tags.contains(&t),
        }
    }
}

/// A named equation `lhs = rhs` between diagrams of equal signature.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: Diagram,
    pub rhs: Diagram,
    pub bidirectional: bool,
    pub family: Family,
    /// Box variables and the tag each must carry.
    pub requires: Vec<(String, Tag)>,
}

impl RewriteRule {
    pub fn new(name: impl Into<String>, lhs: Diagram, rhs: Diagram) -> Result<Self, RuleError> {
        let name = name.into();
        if lhs.boundary_signature() != rhs.boundary_signature() {
            return Err(RuleError::SignatureMismatch { rule: name });
        }
        Ok(RewriteRule { name, lhs, rhs, bidirectional: true, family: Family::Compact, requires: Vec::new() })
    }

    pub fn family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn requires(mut self, var: &str, tag: Tag) -> Self {
        self.requires.push((var.to_string(), tag));
        self
    }

    pub fn one_way(mut self) -> Self {
        self.bidirectional = false;
        self
    }

    /// `(from, to)` for a direction.
    pub fn sides(&self, dir: Direction) -> (&Diagram, &Diagram) {
        match dir {
            Direction::Forward => (&self.lhs, &self.rhs),
            Direction::Backward => (&self.rhs, &self.lhs),
        }
    }

    /// True if both sides are the same graph; such rules hold by the
    /// representation itself and never need to fire.
    pub fn is_structural(&self) -> bool {
        self.lhs.is_isomorphic(&self.rhs)
    }

    /// Node count change when applied in `dir`.
    pub fn size_change(&self, dir: Direction) -> isize {
        let (from, to) = self.sides(dir);
        to.node_count() as isize - from.node_count() as isize
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("rule `{rule}`: sides have different boundary signatures")]
    SignatureMismatch { rule: String },
    #[error("rule `{rule}` fails its certificate under the {basis} basis (residual {residual:e})")]
    CertificateFailed { rule: String, basis: String, residual: f64 },
    #[error("match is stale: the host changed since it was computed")]
    StaleMatch,
    #[error("rule `{rule}` cannot be applied {direction}")]
    WrongDirection { rule: String, direction: Direction },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("step `{0}` does not match the diagram")]
    ReplayFailed(String),
    #[error("normalization exceeded the budget of {0} steps")]
    BudgetExhausted(usize),
    #[error("diagrams have different boundary signatures")]
    BoundaryMismatch,
    /// Normal forms differ; this never means the diagrams are unequal.
    #[error("not proved: normal forms differ\n{left}\n{right}")]
    NotProved { left: String, right: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Hilb(#[from] HilbError),
}
