use std::collections::BTreeMap;

use crate::diagram::{BoxGen, BoxVariant, Diagram, Generator, Obj, Source, Target, WireType};
use crate::structures::BasisStructure;

use super::{c, ComplexTensor, HilbError};

const EPSILON_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ObjectInterp {
    pub dim: usize,
    pub basis: Option<BasisStructure>,
}

/// Assigns a Hilbert space to every object and a tensor to every box name.
///
/// `A*` lives on the same coordinates as `A`; caps and cups are the plain
/// Kronecker pairing in those coordinates. A basis structure is accepted
/// only if it factorises that pairing.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    objects: BTreeMap<Obj, ObjectInterp>,
    boxes: BTreeMap<String, ComplexTensor>,
}

/// `e_i ⊗ ē_j ↦ δ_ij` as a `(d, d)` tensor.
pub fn kronecker_epsilon(dim: usize) -> ComplexTensor {
    ComplexTensor::identity(dim)
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single object carrying `basis`.
    pub fn with_basis(object: impl Into<Obj>, basis: BasisStructure) -> Result<Self, HilbError> {
        let mut i = Interpretation::new();
        i.set_basis(object, basis)?;
        Ok(i)
    }

    /// Declares an object without a basis structure. Diagrams over it may
    /// still use caps, cups and boxes.
    pub fn set_dim(&mut self, object: impl Into<Obj>, dim: usize) {
        self.objects.insert(object.into(), ObjectInterp { dim, basis: None });
    }

    pub fn set_basis(&mut self, object: impl Into<Obj>, basis: BasisStructure) -> Result<(), HilbError> {
        let object = object.into();
        let eps = crate::structures::epsilon_from_dualiser(&basis);
        let residual = eps.max_diff(&kronecker_epsilon(basis.dim()));
        if residual > EPSILON_TOL {
            return Err(HilbError::InconsistentDualiser { object: object.to_string(), residual });
        }
        self.objects.insert(object, ObjectInterp { dim: basis.dim(), basis: Some(basis) });
        Ok(())
    }

    pub fn set_box(&mut self, name: impl Into<String>, tensor: ComplexTensor) {
        self.boxes.insert(name.into(), tensor);
    }

    pub fn with_box(mut self, name: impl Into<String>, tensor: ComplexTensor) -> Self {
        self.set_box(name, tensor);
        self
    }

    pub fn objects(&self) -> impl Iterator<Item = (&Obj, &ObjectInterp)> {
        self.objects.iter()
    }

    pub fn boxes(&self) -> impl Iterator<Item = (&String, &ComplexTensor)> {
        self.boxes.iter()
    }

    pub fn dim(&self, object: &Obj) -> Result<usize, HilbError> {
        self.objects
            .get(object)
            .map(|o| o.dim)
            .ok_or_else(|| HilbError::UnknownObject(object.to_string()))
    }

    pub fn basis(&self, object: &Obj) -> Result<&BasisStructure, HilbError> {
        self.objects
            .get(object)
            .ok_or_else(|| HilbError::UnknownObject(object.to_string()))?
            .basis
            .as_ref()
            .ok_or_else(|| HilbError::MissingBasis(object.to_string()))
    }

    pub fn box_tensor(&self, name: &str) -> Result<&ComplexTensor, HilbError> {
        self.boxes.get(name).ok_or_else(|| HilbError::UnknownBox(name.to_string()))
    }

    fn dims(&self, ts: &[WireType]) -> Result<Vec<usize>, HilbError> {
        ts.iter().map(|t| self.dim(&t.object)).collect()
    }

    fn box_semantics(&self, b: &BoxGen) -> Result<ComplexTensor, HilbError> {
        let raw = self.box_tensor(&b.name)?;
        let outs = self.dims(&b.outputs)?;
        let ins = self.dims(&b.inputs)?;
        let shape: Vec<usize> = outs.iter().chain(&ins).copied().collect();
        let plain = if raw.shape() == shape.as_slice() {
            raw.clone()
        } else if raw.len() == shape.iter().product::<usize>() && !shape.is_empty() {
            raw.reshape(shape.clone())?
        } else {
            return Err(HilbError::ShapeMismatch { expected: shape, found: raw.shape().to_vec() });
        };
        let (no, ni) = (outs.len(), ins.len());
        let out_axes: Vec<usize> = (0..no).collect();
        let in_axes: Vec<usize> = (no..no + ni).collect();
        let cat = |a: Vec<usize>, b: Vec<usize>| -> Vec<usize> { a.into_iter().chain(b).collect() };
        let rev = |v: &[usize]| -> Vec<usize> { v.iter().rev().copied().collect() };
        Ok(match b.variant {
            BoxVariant::Plain => plain,
            BoxVariant::Dagger => plain.permute(&cat(in_axes, out_axes)).conj(),
            BoxVariant::Transpose => plain.permute(&cat(rev(&in_axes), rev(&out_axes))),
            BoxVariant::Conjugate => plain.permute(&cat(rev(&out_axes), rev(&in_axes))).conj(),
        })
    }

    /// Tensor of one generator, axes ordered (outputs, inputs).
    pub fn generator_tensor(&self, g: &Generator) -> Result<ComplexTensor, HilbError> {
        use Generator::*;
        Ok(match g {
            Box(b) => self.box_semantics(b)?,
            Delta(o) => self.basis(o)?.delta().clone(),
            DeltaDagger(o) => self.basis(o)?.delta().permute(&[2, 0, 1]).conj(),
            Gamma(o) => self.basis(o)?.gamma().clone(),
            GammaDagger(o) => self.basis(o)?.gamma().conj(),
            Dualiser(o) => self.basis(o)?.dualiser().clone(),
            DualiserDagger(o) => self.basis(o)?.dualiser().adjoint(),
            Cap(o) | Cup(o) => kronecker_epsilon(self.dim(o)?),
            Swap(x, y) => {
                let (dx, dy) = (self.dim(&x.object)?, self.dim(&y.object)?);
                // outputs (y, x), inputs (x, y)
                let mut t = ComplexTensor::zeros(vec![dy, dx, dx, dy]);
                for i in 0..dx {
                    for j in 0..dy {
                        t.set(&[j, i, i, j], c(1.0, 0.0));
                    }
                }
                t
            }
            Identity(t) => ComplexTensor::identity(self.dim(&t.object)?),
            Scalar(z) => ComplexTensor::scalar(*z),
            Spider(s) => self.basis(&s.object)?.spider(&s.inputs, &s.outputs),
        })
    }
}

/// Pairwise contraction schedule for [`eval_with_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionOrder {
    /// Contract the pair with the smallest intermediate result first.
    Greedy,
    /// Absorb node tensors one at a time, in node order.
    Sequential,
    /// Like `Sequential`, in reverse node order.
    Reverse,
}

/// Evaluates `f` to a tensor with axes (outputs, inputs).
pub fn eval(f: &Diagram, interp: &Interpretation) -> Result<ComplexTensor, HilbError> {
    eval_with_order(f, interp, ContractionOrder::Greedy)
}

struct Net {
    tensors: Vec<(ComplexTensor, Vec<usize>)>,
    dims: BTreeMap<usize, usize>,
}

impl Net {
    fn result_size(&self, a: usize, b: usize) -> (usize, bool) {
        let (la, lb) = (&self.tensors[a].1, &self.tensors[b].1);
        let shared = la.iter().any(|l| lb.contains(l));
        let size = la
            .iter()
            .filter(|l| !lb.contains(l))
            .chain(lb.iter().filter(|l| !la.contains(l)))
            .map(|l| self.dims[l])
            .product();
        (size, shared)
    }

    fn contract_pair(&mut self, a: usize, b: usize) -> Result<(), HilbError> {
        let (hi, lo) = (a.max(b), a.min(b));
        let (tb, lb) = self.tensors.remove(hi);
        let (ta, la) = self.tensors.remove(lo);
        let (ta, la, tb, lb) = if lo == a { (ta, la, tb, lb) } else { (tb, lb, ta, la) };
        let mut ax_a = Vec::new();
        let mut ax_b = Vec::new();
        for (i, l) in la.iter().enumerate() {
            if let Some(j) = lb.iter().position(|m| m == l) {
                ax_a.push(i);
                ax_b.push(j);
            }
        }
        let t = ta.contract(&ax_a, &tb, &ax_b)?;
        let labels: Vec<usize> = la
            .iter()
            .enumerate()
            .filter(|(i, _)| !ax_a.contains(i))
            .map(|(_, l)| *l)
            .chain(lb.iter().enumerate().filter(|(j, _)| !ax_b.contains(j)).map(|(_, l)| *l))
            .collect();
        self.tensors.insert(lo, (t, labels));
        Ok(())
    }

    fn contract_all(mut self, order: ContractionOrder) -> Result<(ComplexTensor, Vec<usize>), HilbError> {
        if self.tensors.is_empty() {
            return Ok((ComplexTensor::scalar(c(1.0, 0.0)), vec![]));
        }
        if order == ContractionOrder::Reverse {
            self.tensors.reverse();
        }
        while self.tensors.len() > 1 {
            match order {
                ContractionOrder::Greedy => {
                    let mut best: Option<((bool, usize), usize, usize)> = None;
                    for i in 0..self.tensors.len() {
                        for j in i + 1..self.tensors.len() {
                            let (size, shared) = self.result_size(i, j);
                            let key = (!shared, size);
                            if best.is_none_or(|(k, _, _)| key < k) {
                                best = Some((key, i, j));
                            }
                        }
                    }
                    let (_, i, j) = best.expect("at least two tensors");
                    self.contract_pair(i, j)?;
                }
                ContractionOrder::Sequential | ContractionOrder::Reverse => self.contract_pair(0, 1)?,
            }
        }
        Ok(self.tensors.pop().expect("one tensor left"))
    }
}

/// Evaluates `f` with an explicit contraction schedule. The result does
/// not depend on the schedule beyond rounding.
pub fn eval_with_order(f: &Diagram, interp: &Interpretation, order: ContractionOrder) -> Result<ComplexTensor, HilbError> {
    if let Err(v) = f.validate() {
        let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        return Err(HilbError::InvalidDiagram(msg.join("; ")));
    }
    let mut net = Net { tensors: Vec::new(), dims: BTreeMap::new() };
    // one label per wire; a wire running straight from input to output
    // gets a second label and an explicit identity
    let mut src_label: BTreeMap<Source, usize> = BTreeMap::new();
    let mut tgt_label: BTreeMap<Target, usize> = BTreeMap::new();
    let mut next = 0usize;
    for (s, t) in f.wires() {
        let d = interp.dim(&f.source_type(s).expect("validated").object)?;
        if let (Source::Input(_), Target::Output(_)) = (s, t) {
            let (a, b) = (next, next + 1);
            next += 2;
            net.dims.insert(a, d);
            net.dims.insert(b, d);
            src_label.insert(s, a);
            tgt_label.insert(t, b);
            net.tensors.push((ComplexTensor::identity(d), vec![b, a]));
        } else {
            net.dims.insert(next, d);
            src_label.insert(s, next);
            tgt_label.insert(t, next);
            next += 1;
        }
    }
    for (id, g) in f.nodes() {
        let t = interp.generator_tensor(g)?;
        let (ins, outs) = g.signature();
        let labels: Vec<usize> = (0..outs.len())
            .map(|j| src_label[&Source::Node(id, j)])
            .chain((0..ins.len()).map(|i| tgt_label[&Target::Node(id, i)]))
            .collect();
        let expected: Vec<usize> = labels.iter().map(|l| net.dims[l]).collect();
        if t.shape() != expected.as_slice() {
            return Err(HilbError::ShapeMismatch { expected, found: t.shape().to_vec() });
        }
        net.tensors.push((t, labels));
    }
    let want: Vec<usize> = (0..f.outputs().len())
        .map(|j| tgt_label[&Target::Output(j)])
        .chain((0..f.inputs().len()).map(|i| src_label[&Source::Input(i)]))
        .collect();
    let (t, labels) = net.contract_all(order)?;
    let perm: Vec<usize> = want
        .iter()
        .map(|l| labels.iter().position(|m| m == l).expect("free label survives"))
        .collect();
    Ok(t.permute(&perm))
}
