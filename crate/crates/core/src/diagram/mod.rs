//! Open string diagrams as directed port graphs.
//!
//! A [`Diagram`] is a set of generator nodes, each with an ordered list of
//! input and output ports, plus an ordered list of boundary inputs and
//! outputs. Every wire runs from an output-side port ([`Source`]) to an
//! input-side port ([`Target`]). Symmetries are not nodes: a crossing is
//! just a wire that connects non-adjacent positions, so diagrams are
//! automatically taken modulo the symmetric monoidal structure.

mod iso;
mod ops;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use iso::canonical_key;
pub use validate::Violation;

/// Name of a base object. Duals are never separate objects, see [`WireType`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(String);

impl Obj {
    pub fn new(name: impl Into<String>) -> Self {
        Obj(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Obj {
    fn from(s: &str) -> Self {
        Obj::new(s)
    }
}

/// The type carried by a wire: an object `A` or its dual `A*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireType {
    pub object: Obj,
    pub dualized: bool,
}

impl WireType {
    pub fn base(object: impl Into<Obj>) -> Self {
        WireType { object: object.into(), dualized: false }
    }

    pub fn dual_of(object: impl Into<Obj>) -> Self {
        WireType { object: object.into(), dualized: true }
    }

    /// `A ↦ A*`, `A* ↦ A`.
    pub fn dual(&self) -> Self {
        WireType { object: self.object.clone(), dualized: !self.dualized }
    }
}

impl From<&str> for WireType {
    fn from(s: &str) -> Self {
        match s.strip_suffix('*') {
            Some(base) => WireType::dual_of(base),
            None => WireType::base(s),
        }
    }
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dualized {
            write!(f, "{}*", self.object)
        } else {
            write!(f, "{}", self.object)
        }
    }
}

/// Which of the four images of a box under `†`, `*` and `_*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxVariant {
    Plain,
    Dagger,
    Transpose,
    Conjugate,
}

impl BoxVariant {
    fn bits(self) -> (bool, bool) {
        match self {
            BoxVariant::Plain => (false, false),
            BoxVariant::Dagger => (true, false),
            BoxVariant::Transpose => (false, true),
            BoxVariant::Conjugate => (true, true),
        }
    }

    fn from_bits(dagger: bool, transpose: bool) -> Self {
        match (dagger, transpose) {
            (false, false) => BoxVariant::Plain,
            (true, false) => BoxVariant::Dagger,
            (false, true) => BoxVariant::Transpose,
            (true, true) => BoxVariant::Conjugate,
        }
    }

    pub fn dagger(self) -> Self {
        let (d, t) = self.bits();
        Self::from_bits(!d, t)
    }

    pub fn transpose(self) -> Self {
        let (d, t) = self.bits();
        Self::from_bits(d, !t)
    }

    pub fn conjugate(self) -> Self {
        self.dagger().transpose()
    }

    /// Applies `other`'s operations on top of `self`. The variants form the
    /// Klein four-group, so this is commutative and every element is its
    /// own inverse.
    pub fn then(self, other: BoxVariant) -> Self {
        let (d1, t1) = self.bits();
        let (d2, t2) = other.bits();
        Self::from_bits(d1 ^ d2, t1 ^ t2)
    }
}

/// A named, opaque morphism. `inputs`/`outputs` are the signature of the
/// plain box; the variant determines the signature actually exposed.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxGen {
    pub name: String,
    pub inputs: Vec<WireType>,
    pub outputs: Vec<WireType>,
    pub variant: BoxVariant,
}

fn reversed_duals(ts: &[WireType]) -> Vec<WireType> {
    ts.iter().rev().map(WireType::dual).collect()
}

impl BoxGen {
    pub fn new(name: impl Into<String>, inputs: Vec<WireType>, outputs: Vec<WireType>) -> Self {
        BoxGen { name: name.into(), inputs, outputs, variant: BoxVariant::Plain }
    }

    pub fn with_variant(mut self, variant: BoxVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn signature(&self) -> (Vec<WireType>, Vec<WireType>) {
        match self.variant {
            BoxVariant::Plain => (self.inputs.clone(), self.outputs.clone()),
            BoxVariant::Dagger => (self.outputs.clone(), self.inputs.clone()),
            BoxVariant::Transpose => (reversed_duals(&self.outputs), reversed_duals(&self.inputs)),
            BoxVariant::Conjugate => (reversed_duals(&self.inputs), reversed_duals(&self.outputs)),
        }
    }
}

/// Normal-form node: a spider over one object with oriented legs.
/// `true` marks a leg of type `A*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpiderGen {
    pub object: Obj,
    pub inputs: Vec<bool>,
    pub outputs: Vec<bool>,
}

impl SpiderGen {
    fn legs(&self, legs: &[bool]) -> Vec<WireType> {
        legs.iter()
            .map(|&d| WireType { object: self.object.clone(), dualized: d })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Box(BoxGen),
    Delta(Obj),
    DeltaDagger(Obj),
    Gamma(Obj),
    GammaDagger(Obj),
    Dualiser(Obj),
    DualiserDagger(Obj),
    /// `ε_A : A ⊗ A* → I`
    Cap(Obj),
    /// `η_A : I → A* ⊗ A`
    Cup(Obj),
    Swap(WireType, WireType),
    Identity(WireType),
    Scalar(Complex64),
    Spider(SpiderGen),
}

impl Generator {
    pub fn signature(&self) -> (Vec<WireType>, Vec<WireType>) {
        use Generator::*;
        let a = |o: &Obj| WireType::base(o.clone());
        let ad = |o: &Obj| WireType::dual_of(o.clone());
        match self {
            Box(b) => b.signature(),
            Delta(o) => (vec![a(o)], vec![a(o), a(o)]),
            DeltaDagger(o) => (vec![a(o), a(o)], vec![a(o)]),
            Gamma(o) => (vec![a(o)], vec![]),
            GammaDagger(o) => (vec![], vec![a(o)]),
            Dualiser(o) => (vec![a(o)], vec![ad(o)]),
            DualiserDagger(o) => (vec![ad(o)], vec![a(o)]),
            Cap(o) => (vec![a(o), ad(o)], vec![]),
            Cup(o) => (vec![], vec![ad(o), a(o)]),
            Swap(x, y) => (vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]),
            Identity(t) => (vec![t.clone()], vec![t.clone()]),
            Scalar(_) => (vec![], vec![]),
            Spider(s) => (s.legs(&s.inputs), s.legs(&s.outputs)),
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.signature().0.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.signature().1.len()
    }

    /// Base object of a basis-structure generator.
    pub fn object(&self) -> Option<&Obj> {
        use Generator::*;
        match self {
            Delta(o) | DeltaDagger(o) | Gamma(o) | GammaDagger(o) | Dualiser(o)
            | DualiserDagger(o) | Cap(o) | Cup(o) => Some(o),
            Spider(s) => Some(&s.object),
            Swap(..) | Identity(_) | Scalar(_) | Box(_) => None,
        }
    }

    /// True for the generators the spider normalizer may absorb.
    pub fn is_basis_generator(&self) -> bool {
        self.object().is_some()
    }

    /// Generators that only rearrange wires and never become nodes.
    pub fn is_wiring(&self) -> bool {
        matches!(self, Generator::Swap(..) | Generator::Identity(_))
    }

    pub fn dagger(&self) -> Generator {
        use Generator::*;
        match self {
            Box(b) => Box(b.clone().with_variant(b.variant.dagger())),
            Delta(o) => DeltaDagger(o.clone()),
            DeltaDagger(o) => Delta(o.clone()),
            Gamma(o) => GammaDagger(o.clone()),
            GammaDagger(o) => Gamma(o.clone()),
            Dualiser(o) => DualiserDagger(o.clone()),
            DualiserDagger(o) => Dualiser(o.clone()),
            Cap(o) => Cup(o.clone()),
            Cup(o) => Cap(o.clone()),
            Swap(x, y) => Swap(y.clone(), x.clone()),
            Identity(t) => Identity(t.clone()),
            Scalar(c) => Scalar(c.conj()),
            Spider(s) => Spider(SpiderGen {
                object: s.object.clone(),
                inputs: s.outputs.clone(),
                outputs: s.inputs.clone(),
            }),
        }
    }

    /// Interchangeability class of a port. Ports in the same class can be
    /// permuted without changing the morphism (δ is cocommutative; spider
    /// legs of equal orientation are symmetric).
    pub fn port_class(&self, side: Side, index: usize) -> usize {
        match (self, side) {
            (Generator::Delta(_), Side::Out) | (Generator::DeltaDagger(_), Side::In) => 0,
            (Generator::Spider(s), Side::In) => s.inputs[index] as usize,
            (Generator::Spider(s), Side::Out) => s.outputs[index] as usize,
            _ => index,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Generator::*;
        match self {
            Box(b) => {
                let ins: Vec<String> = b.inputs.iter().map(|t| t.to_string()).collect();
                let outs: Vec<String> = b.outputs.iter().map(|t| t.to_string()).collect();
                let plain = format!("box({}: {} -> {})", b.name, ins.join(", "), outs.join(", "));
                match b.variant {
                    BoxVariant::Plain => write!(f, "{plain}"),
                    BoxVariant::Dagger => write!(f, "dag({plain})"),
                    BoxVariant::Transpose => write!(f, "transp({plain})"),
                    BoxVariant::Conjugate => write!(f, "conj({plain})"),
                }
            }
            Delta(o) => write!(f, "delta({o})"),
            DeltaDagger(o) => write!(f, "dag(delta({o}))"),
            Gamma(o) => write!(f, "gamma({o})"),
            GammaDagger(o) => write!(f, "dag(gamma({o}))"),
            Dualiser(o) => write!(f, "dualiser({o})"),
            DualiserDagger(o) => write!(f, "dag(dualiser({o}))"),
            Cap(o) => write!(f, "cap({o})"),
            Cup(o) => write!(f, "cup({o})"),
            Swap(x, y) => write!(f, "swap({x}, {y})"),
            Identity(t) => write!(f, "id({t})"),
            Scalar(c) => write!(f, "scalar({})", format_complex(*c)),
            Spider(s) => {
                let leg = |d: &bool| if *d { format!("{}*", s.object) } else { s.object.to_string() };
                let ins: Vec<String> = s.inputs.iter().map(leg).collect();
                let outs: Vec<String> = s.outputs.iter().map(leg).collect();
                write!(f, "spider({}: {} -> {})", s.object, ins.join(", "), outs.join(", "))
            }
        }
    }
}

/// `a+bi` with enough digits to round-trip an `f64`.
pub fn format_complex(c: Complex64) -> String {
    let re = if c.re == 0.0 { 0.0 } else { c.re };
    let im = if c.im == 0.0 { 0.0 } else { c.im };
    if im < 0.0 {
        format!("{re:?}-{:?}i", -im)
    } else {
        format!("{re:?}+{im:?}i")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Output-side port: where a wire starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Input(usize),
    Node(NodeId, usize),
}

/// Input-side port: where a wire ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Output(usize),
    Node(NodeId, usize),
}

impl Source {
    pub fn node(&self) -> Option<NodeId> {
        match self {
            Source::Node(n, _) => Some(*n),
            Source::Input(_) => None,
        }
    }
}

impl Target {
    pub fn node(&self) -> Option<NodeId> {
        match self {
            Target::Node(n, _) => Some(*n),
            Target::Output(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("signature mismatch: outputs {outputs:?} cannot feed inputs {inputs:?}")]
    SignatureMismatch { outputs: Vec<WireType>, inputs: Vec<WireType> },
    #[error("duplicate use of port {0:?}")]
    DuplicatePort(Source),
}

#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub(crate) nodes: BTreeMap<NodeId, Generator>,
    pub(crate) wires: BTreeMap<Source, Target>,
    pub(crate) inputs: Vec<WireType>,
    pub(crate) outputs: Vec<WireType>,
    pub(crate) next_id: u32,
}

impl Diagram {
    /// The empty diagram `1_I`.
    pub fn empty() -> Self {
        Diagram::default()
    }

    pub fn identity(t: impl Into<WireType>) -> Self {
        Diagram::identities(&[t.into()])
    }

    pub fn identities(ts: &[WireType]) -> Self {
        let mut d = Diagram { inputs: ts.to_vec(), outputs: ts.to_vec(), ..Default::default() };
        for i in 0..ts.len() {
            d.wires.insert(Source::Input(i), Target::Output(i));
        }
        d
    }

    /// Wiring-only diagram realizing a permutation: input `i` goes to output
    /// `perm[i]`.
    pub fn permutation(ts: &[WireType], perm: &[usize]) -> Self {
        assert_eq!(ts.len(), perm.len());
        let mut outputs = ts.to_vec();
        let mut d = Diagram { inputs: ts.to_vec(), ..Default::default() };
        for (i, &p) in perm.iter().enumerate() {
            outputs[p] = ts[i].clone();
            d.wires.insert(Source::Input(i), Target::Output(p));
        }
        d.outputs = outputs;
        d
    }

    pub fn swap(x: impl Into<WireType>, y: impl Into<WireType>) -> Self {
        Diagram::permutation(&[x.into(), y.into()], &[1, 0])
    }

    /// One generator with its ports exposed in order.
    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::Identity(t) => Diagram::identity(t),
            Generator::Swap(x, y) => Diagram::swap(x, y),
            g => {
                let (ins, outs) = g.signature();
                let mut d = Diagram { inputs: ins.clone(), outputs: outs.clone(), ..Default::default() };
                let n = d.add_node(g);
                for i in 0..ins.len() {
                    d.wires.insert(Source::Input(i), Target::Node(n, i));
                }
                for j in 0..outs.len() {
                    d.wires.insert(Source::Node(n, j), Target::Output(j));
                }
                d
            }
        }
    }

    pub fn delta(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::Delta(o.into()))
    }

    pub fn delta_dagger(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::DeltaDagger(o.into()))
    }

    pub fn gamma(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::Gamma(o.into()))
    }

    pub fn gamma_dagger(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::GammaDagger(o.into()))
    }

    pub fn dualiser(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::Dualiser(o.into()))
    }

    pub fn dualiser_dagger(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::DualiserDagger(o.into()))
    }

    pub fn cap(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::Cap(o.into()))
    }

    pub fn cup(o: impl Into<Obj>) -> Self {
        Diagram::generator(Generator::Cup(o.into()))
    }

    pub fn scalar(c: Complex64) -> Self {
        Diagram::generator(Generator::Scalar(c))
    }

    pub fn boxed(b: BoxGen) -> Self {
        Diagram::generator(Generator::Box(b))
    }

    /// A plain box `name : inputs -> outputs`.
    pub fn box_(name: &str, inputs: &[&str], outputs: &[&str]) -> Self {
        let t = |xs: &[&str]| xs.iter().map(|s| WireType::from(*s)).collect();
        Diagram::boxed(BoxGen::new(name, t(inputs), t(outputs)))
    }

    /// Builds a diagram from raw parts without checking any invariant.
    /// Meant for tests of [`Diagram::validate`] and for deserializers that
    /// validate afterwards.
    pub fn from_raw(
        inputs: Vec<WireType>,
        outputs: Vec<WireType>,
        nodes: Vec<(NodeId, Generator)>,
        wires: Vec<(Source, Target)>,
    ) -> Result<Self, DiagramError> {
        let next_id = nodes.iter().map(|(n, _)| n.0 + 1).max().unwrap_or(0);
        let mut d = Diagram { inputs, outputs, nodes: nodes.into_iter().collect(), next_id, ..Default::default() };
        for (s, t) in wires {
            if d.wires.insert(s, t).is_some() {
                return Err(DiagramError::DuplicatePort(s));
            }
        }
        Ok(d)
    }

    pub fn inputs(&self) -> &[WireType] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireType] {
        &self.outputs
    }

    pub fn boundary_signature(&self) -> (Vec<WireType>, Vec<WireType>) {
        (self.inputs.clone(), self.outputs.clone())
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Generator)> {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn node(&self, id: NodeId) -> Option<&Generator> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn wires(&self) -> impl Iterator<Item = (Source, Target)> + '_ {
        self.wires.iter().map(|(s, t)| (*s, *t))
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn target_of(&self, s: Source) -> Option<Target> {
        self.wires.get(&s).copied()
    }

    pub fn source_of(&self, t: Target) -> Option<Source> {
        self.wires.iter().find(|(_, v)| **v == t).map(|(k, _)| *k)
    }

    /// Reverse wire index, target → source.
    pub fn back_index(&self) -> BTreeMap<Target, Source> {
        self.wires.iter().map(|(s, t)| (*t, *s)).collect()
    }

    /// Type of the value leaving a source port.
    pub fn source_type(&self, s: Source) -> Option<WireType> {
        match s {
            Source::Input(i) => self.inputs.get(i).cloned(),
            Source::Node(n, j) => self.nodes.get(&n)?.signature().1.get(j).cloned(),
        }
    }

    /// Type expected at a target port.
    pub fn target_type(&self, t: Target) -> Option<WireType> {
        match t {
            Target::Output(i) => self.outputs.get(i).cloned(),
            Target::Node(n, j) => self.nodes.get(&n)?.signature().0.get(j).cloned(),
        }
    }

    pub(crate) fn add_node(&mut self, g: Generator) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.nodes.insert(id, g);
        id
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.inputs.is_empty() && self.outputs.is_empty()
    }

    /// True if the diagram is a bundle of plain wires (possibly crossed).
    pub fn is_wiring(&self) -> bool {
        self.nodes.is_empty()
    }

    /// True if the diagram is `identities(inputs)` exactly.
    pub fn is_identity(&self) -> bool {
        self.nodes.is_empty()
            && self.inputs == self.outputs
            && self.wires.iter().all(|(s, t)| matches!((s, t), (Source::Input(i), Target::Output(j)) if i == j))
    }

    /// Graph isomorphism with fixed boundary order, honoring port symmetries.
    pub fn is_isomorphic(&self, other: &Diagram) -> bool {
        iso::isomorphic(self, other)
    }

    /// Re-identifies nodes in a traversal order that depends only on the
    /// graph up to isomorphism (modulo symmetric ports).
    pub fn canonicalize(&self) -> Diagram {
        iso::canonicalize(self)
    }

    /// Removes nodes and any wire touching them.
    pub(crate) fn remove_nodes(&mut self, ids: &[NodeId]) {
        for id in ids {
            self.nodes.remove(id);
        }
        self.wires.retain(|s, t| {
            !s.node().is_some_and(|n| ids.contains(&n)) && !t.node().is_some_and(|n| ids.contains(&n))
        });
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(|t| t.to_string()).collect();
        let outs: Vec<String> = self.outputs.iter().map(|t| t.to_string()).collect();
        writeln!(f, "diagram [{}] -> [{}]", ins.join(", "), outs.join(", "))?;
        for (id, g) in &self.nodes {
            writeln!(f, "  {id}: {g}")?;
        }
        for (s, t) in &self.wires {
            writeln!(f, "  {s:?} -> {t:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_of_dual_is_base() {
        let a = WireType::base("A");
        assert_eq!(a.dual().dual(), a);
        assert!(a.dual().dualized);
    }

    #[test]
    fn box_variant_table() {
        use BoxVariant::*;
        for v in [Plain, Dagger, Transpose, Conjugate] {
            assert_eq!(v.dagger().dagger(), v);
            assert_eq!(v.transpose().transpose(), v);
            assert_eq!(v.conjugate().conjugate(), v);
        }
        assert_eq!(Plain.conjugate(), Plain.dagger().transpose());
        assert_eq!(Plain.conjugate(), Plain.transpose().dagger());
        assert_eq!(Dagger.then(Transpose), Conjugate);
    }

    #[test]
    fn generator_signatures() {
        let a = WireType::base("A");
        let ad = a.dual();
        assert_eq!(Generator::Delta("A".into()).signature(), (vec![a.clone()], vec![a.clone(), a.clone()]));
        assert_eq!(Generator::Gamma("A".into()).signature(), (vec![a.clone()], vec![]));
        assert_eq!(Generator::Dualiser("A".into()).signature(), (vec![a.clone()], vec![ad.clone()]));
        assert_eq!(Generator::Cap("A".into()).signature(), (vec![a.clone(), ad.clone()], vec![]));
        assert_eq!(Generator::Cup("A".into()).signature(), (vec![], vec![ad.clone(), a.clone()]));
        assert_eq!(Generator::Scalar(Complex64::new(2.0, 0.0)).signature(), (vec![], vec![]));
    }

    #[test]
    fn box_variant_signatures() {
        let b = BoxGen::new("f", vec!["A".into(), "B".into()], vec!["C".into()]);
        let t = |s: &str| WireType::from(s);
        assert_eq!(b.clone().with_variant(BoxVariant::Dagger).signature(), (vec![t("C")], vec![t("A"), t("B")]));
        assert_eq!(
            b.clone().with_variant(BoxVariant::Transpose).signature(),
            (vec![t("C*")], vec![t("B*"), t("A*")])
        );
        assert_eq!(
            b.with_variant(BoxVariant::Conjugate).signature(),
            (vec![t("B*"), t("A*")], vec![t("C*")])
        );
    }

    #[test]
    fn identity_signature() {
        let d = Diagram::identity("A");
        assert_eq!(d.boundary_signature(), (vec!["A".into()], vec!["A".into()]));
        let d = Diagram::identity("A*");
        assert_eq!(d.boundary_signature(), (vec!["A*".into()], vec!["A*".into()]));
        assert!(d.is_identity());
        assert_eq!(d.node_count(), 0);
    }

    #[test]
    fn swap_and_identity_are_wiring() {
        assert!(Diagram::generator(Generator::Swap("A".into(), "B".into())).is_wiring());
        assert!(Diagram::generator(Generator::Identity("A".into())).is_identity());
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(format_complex(Complex64::new(1.5, -2.0)), "1.5-2.0i");
        assert_eq!(format_complex(Complex64::new(-0.0, 0.0)), "0.0+0.0i");
    }
}
