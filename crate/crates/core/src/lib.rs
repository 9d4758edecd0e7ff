//! String-diagram rewriting and numerical verification for dagger compact
//! categories with basis structures.

pub mod diagram;
pub mod hilb;
pub mod protocols;
pub mod rules;
pub mod structures;

pub use diagram::{BoxGen, BoxVariant, Diagram, DiagramError, Generator, NodeId, Obj, Side, Source, SpiderGen, Target, WireType};
pub use hilb::{eval, ComplexTensor, HilbError, Interpretation, C64};
pub use structures::{builtin, BasisStructure, Builtin, StructureError};
pub use rules::{normalize, prove_equal, Context, ProofTrace, RewriteRule, RuleError, RuleSet, Tag};
pub use protocols::{build_state_transfer, build_teleportation, unify, verify, Protocol, ProtocolError, UnifyMode, VerificationReport};
