use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::*;

impl Diagram {
    /// Copies every node of `other` into `self` under fresh ids and returns
    /// the id translation.
    pub(crate) fn embed_nodes(&mut self, other: &Diagram) -> BTreeMap<NodeId, NodeId> {
        other
            .nodes
            .iter()
            .map(|(id, g)| (*id, self.add_node(g.clone())))
            .collect()
    }

    /// `g ∘ f`: feeds the outputs of `f` into the inputs of `g`.
    pub fn compose(g: &Diagram, f: &Diagram) -> Result<Diagram, DiagramError> {
        if f.outputs != g.inputs {
            return Err(DiagramError::SignatureMismatch {
                outputs: f.outputs.clone(),
                inputs: g.inputs.clone(),
            });
        }
        let mut out = Diagram { inputs: f.inputs.clone(), outputs: g.outputs.clone(), ..Default::default() };
        let fmap = out.embed_nodes(f);
        let gmap = out.embed_nodes(g);
        let fs = |s: Source| match s {
            Source::Node(n, j) => Source::Node(fmap[&n], j),
            s => s,
        };
        let ft = |t: Target| match t {
            Target::Node(n, j) => Target::Node(fmap[&n], j),
            t => t,
        };
        let gs = |s: Source| match s {
            Source::Node(n, j) => Source::Node(gmap[&n], j),
            s => s,
        };
        let gt = |t: Target| match t {
            Target::Node(n, j) => Target::Node(gmap[&n], j),
            t => t,
        };
        // middle boundary: f's output i is g's input i
        let mut middle_src: BTreeMap<usize, Source> = BTreeMap::new();
        for (s, t) in &f.wires {
            match t {
                Target::Output(i) => {
                    middle_src.insert(*i, fs(*s));
                }
                t => {
                    out.wires.insert(fs(*s), ft(*t));
                }
            }
        }
        for (s, t) in &g.wires {
            match s {
                Source::Input(i) => {
                    if let Some(src) = middle_src.get(i) {
                        out.wires.insert(*src, gt(*t));
                    }
                }
                s => {
                    out.wires.insert(gs(*s), gt(*t));
                }
            }
        }
        Ok(out)
    }

    /// Diagrammatic order: `self` first, then `next` (the `>>` of the
    /// diagram language).
    pub fn then(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        Diagram::compose(next, self)
    }

    /// `f ⊗ g`, placing `g` to the right of `f`.
    pub fn tensor(f: &Diagram, g: &Diagram) -> Diagram {
        let mut out = f.clone();
        out.inputs.extend(g.inputs.iter().cloned());
        out.outputs.extend(g.outputs.iter().cloned());
        let (ni, no) = (f.inputs.len(), f.outputs.len());
        let gmap = out.embed_nodes(g);
        for (s, t) in &g.wires {
            let s = match s {
                Source::Input(i) => Source::Input(i + ni),
                Source::Node(n, j) => Source::Node(gmap[n], *j),
            };
            let t = match t {
                Target::Output(i) => Target::Output(i + no),
                Target::Node(n, j) => Target::Node(gmap[n], *j),
            };
            out.wires.insert(s, t);
        }
        out
    }

    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
        parts.into_iter().fold(Diagram::empty(), |acc, d| Diagram::tensor(&acc, d))
    }

    /// Vertical reflection. Node ids are preserved.
    pub fn dagger(&self) -> Diagram {
        let mut out = Diagram {
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
            next_id: self.next_id,
            ..Default::default()
        };
        for (id, g) in &self.nodes {
            out.nodes.insert(*id, g.dagger());
        }
        // Cap's input ports (A, A*) become Cup's output ports (A*, A).
        let crossed = |g: &Generator| matches!(g, Generator::Cap(_) | Generator::Cup(_));
        for (s, t) in &self.wires {
            let ns = match t {
                Target::Output(i) => Source::Input(*i),
                Target::Node(n, j) => {
                    let j = if crossed(&self.nodes[n]) { 1 - j } else { *j };
                    Source::Node(*n, j)
                }
            };
            let nt = match s {
                Source::Input(i) => Target::Output(*i),
                Source::Node(n, j) => {
                    let j = if crossed(&self.nodes[n]) { 1 - j } else { *j };
                    Target::Node(*n, j)
                }
            };
            out.wires.insert(ns, nt);
        }
        out
    }

    /// `f* : B* → A*`, built by bending every boundary wire of `f` with a cup
    /// (inputs) or a cap (outputs), then yanking straightened snakes and
    /// absorbing fully wrapped boxes into their transpose variant.
    pub fn transpose(&self) -> Diagram {
        let n_in = self.inputs.len();
        let n_out = self.outputs.len();
        let mut out = Diagram {
            inputs: reversed_duals(&self.outputs),
            outputs: reversed_duals(&self.inputs),
            ..Default::default()
        };
        let map = out.embed_nodes(self);
        let mut cup_port = Vec::with_capacity(n_in);
        for (i, t) in self.inputs.iter().enumerate() {
            let u = out.add_node(Generator::Cup(t.object.clone()));
            // Cup(A) emits (A*, A)
            let tport = if t.dualized { 0 } else { 1 };
            out.wires.insert(Source::Node(u, 1 - tport), Target::Output(n_in - 1 - i));
            cup_port.push(Source::Node(u, tport));
        }
        let mut cap_port = Vec::with_capacity(n_out);
        for (j, t) in self.outputs.iter().enumerate() {
            let v = out.add_node(Generator::Cap(t.object.clone()));
            // Cap(A) absorbs (A, A*)
            let tport = if t.dualized { 1 } else { 0 };
            out.wires.insert(Source::Input(n_out - 1 - j), Target::Node(v, 1 - tport));
            cap_port.push(Target::Node(v, tport));
        }
        for (s, t) in &self.wires {
            let s = match s {
                Source::Input(i) => cup_port[*i],
                Source::Node(n, j) => Source::Node(map[n], *j),
            };
            let t = match t {
                Target::Output(j) => cap_port[*j],
                Target::Node(n, j) => Target::Node(map[n], *j),
            };
            out.wires.insert(s, t);
        }
        out.straighten();
        out
    }

    /// Horizontal reflection, `(-)_* = (-)^{†*}`.
    pub fn conjugate(&self) -> Diagram {
        self.transpose().dagger()
    }

    /// Yanks snakes and slides boxes through complete cup/cap wrappings until
    /// neither applies. Sound in every compact closed model.
    pub(crate) fn straighten(&mut self) {
        loop {
            if self.yank_once() || self.slide_box_once() {
                continue;
            }
            break;
        }
    }

    fn yank_once(&mut self) -> bool {
        let cups: Vec<NodeId> = self
            .nodes
            .iter()
            .filter(|(_, g)| matches!(g, Generator::Cup(_)))
            .map(|(k, _)| *k)
            .collect();
        for u in cups {
            for p in 0..2 {
                let Some(Target::Node(v, q)) = self.target_of(Source::Node(u, p)) else { continue };
                if !matches!(self.nodes[&v], Generator::Cap(_)) || self.nodes[&v] .object() != self.nodes[&u].object() {
                    continue;
                }
                // Cup out1 (A) meets Cap in0 (A); Cup out0 (A*) meets Cap in1 (A*)
                if (p, q) != (1, 0) && (p, q) != (0, 1) {
                    continue;
                }
                let Some(src) = self.source_of(Target::Node(v, 1 - q)) else { continue };
                let Some(tgt) = self.target_of(Source::Node(u, 1 - p)) else { continue };
                if src == Source::Node(u, 1 - p) {
                    // closed loop, not a snake
                    continue;
                }
                if let (Some(a), Some(b)) = (tgt.node(), src.node()) {
                    if self.reaches(a, b) {
                        continue;
                    }
                }
                self.remove_nodes(&[u, v]);
                self.wires.insert(src, tgt);
                return true;
            }
        }
        false
    }

    fn slide_box_once(&mut self) -> bool {
        let boxes: Vec<NodeId> = self
            .nodes
            .iter()
            .filter(|(_, g)| matches!(g, Generator::Box(_)))
            .map(|(k, _)| *k)
            .collect();
        let back = self.back_index();
        'outer: for b in boxes {
            let Generator::Box(bx) = &self.nodes[&b] else { unreachable!() };
            let (ins, outs) = bx.signature();
            let mut wrap = BTreeSet::new();
            let mut new_outs = Vec::new();
            for (i, t) in ins.iter().enumerate() {
                let Some(Source::Node(u, p)) = back.get(&Target::Node(b, i)).copied() else { continue 'outer };
                let tport = if t.dualized { 0 } else { 1 };
                if !matches!(self.nodes[&u], Generator::Cup(_)) || p != tport || !wrap.insert(u) {
                    continue 'outer;
                }
                let Some(tgt) = self.target_of(Source::Node(u, 1 - p)) else { continue 'outer };
                new_outs.push(tgt);
            }
            let mut new_ins = Vec::new();
            for (j, t) in outs.iter().enumerate() {
                let Some(Target::Node(v, q)) = self.target_of(Source::Node(b, j)) else { continue 'outer };
                let tport = if t.dualized { 1 } else { 0 };
                if !matches!(self.nodes[&v], Generator::Cap(_)) || q != tport || !wrap.insert(v) {
                    continue 'outer;
                }
                let Some(src) = back.get(&Target::Node(v, 1 - q)).copied() else { continue 'outer };
                new_ins.push(src);
            }
            if ins.is_empty() && outs.is_empty() {
                continue;
            }
            // the freed ends must not touch the wrapping itself
            let touches = |n: Option<NodeId>| n.is_some_and(|n| n == b || wrap.contains(&n));
            if new_outs.iter().any(|t| touches(t.node())) || new_ins.iter().any(|s| touches(s.node())) {
                continue;
            }
            let mut trial = self.clone();
            let mut nb = bx.clone();
            nb.variant = nb.variant.transpose();
            let mut removed: Vec<NodeId> = wrap.iter().copied().collect();
            removed.push(b);
            trial.remove_nodes(&removed);
            let id = trial.add_node(Generator::Box(nb));
            // transpose reverses port order on both sides
            for (k, src) in new_ins.iter().rev().enumerate() {
                trial.wires.insert(*src, Target::Node(id, k));
            }
            for (k, tgt) in new_outs.iter().rev().enumerate() {
                trial.wires.insert(Source::Node(id, k), *tgt);
            }
            if trial.is_acyclic() {
                *self = trial;
                return true;
            }
        }
        false
    }

    /// Node adjacency in wire direction.
    pub(crate) fn successors(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut succ: BTreeMap<NodeId, Vec<NodeId>> = self.nodes.keys().map(|k| (*k, Vec::new())).collect();
        for (s, t) in &self.wires {
            if let (Some(a), Some(b)) = (s.node(), t.node()) {
                if let Some(v) = succ.get_mut(&a) {
                    v.push(b);
                }
            }
        }
        succ
    }

    /// Whether a directed path leads from node `from` to node `to`.
    pub(crate) fn reaches(&self, from: NodeId, to: NodeId) -> bool {
        let succ = self.successors();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            if n == to {
                return true;
            }
            if !seen.insert(n) {
                continue;
            }
            if let Some(next) = succ.get(&n) {
                queue.extend(next.iter().copied());
            }
        }
        false
    }

    /// Topological order of the nodes, or `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let succ = self.successors();
        let mut indeg: BTreeMap<NodeId, usize> = self.nodes.keys().map(|k| (*k, 0)).collect();
        for next in succ.values() {
            for n in next {
                *indeg.get_mut(n)? += 1;
            }
        }
        let mut ready: VecDeque<NodeId> = indeg.iter().filter(|(_, d)| **d == 0).map(|(k, _)| *k).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(n) = ready.pop_front() {
            order.push(n);
            for m in &succ[&n] {
                let d = indeg.get_mut(m)?;
                *d -= 1;
                if *d == 0 {
                    ready.push_back(*m);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> WireType {
        WireType::base("A")
    }

    #[test]
    fn compose_identities() {
        let id = Diagram::identity(a());
        let c = Diagram::compose(&id, &id).unwrap();
        assert!(c.is_isomorphic(&id));
        assert!(c.is_identity());
    }

    #[test]
    fn compose_delta_after_unit() {
        let d = Diagram::compose(&Diagram::delta("A"), &Diagram::gamma_dagger("A")).unwrap();
        assert_eq!(d.boundary_signature(), (vec![], vec![a(), a()]));
        assert_eq!(d.node_count(), 2);
    }

    #[test]
    fn compose_mismatch() {
        let err = Diagram::compose(&Diagram::identity("A*"), &Diagram::identity("A")).unwrap_err();
        assert!(matches!(err, DiagramError::SignatureMismatch { .. }));
        let err = Diagram::compose(&Diagram::delta("A"), &Diagram::delta("A")).unwrap_err();
        assert!(matches!(err, DiagramError::SignatureMismatch { .. }));
    }

    #[test]
    fn tensor_signatures() {
        let t = Diagram::tensor(&Diagram::identity("A"), &Diagram::identity("B"));
        assert_eq!(t.boundary_signature(), (vec!["A".into(), "B".into()], vec!["A".into(), "B".into()]));
        let t = Diagram::tensor(&Diagram::gamma("A"), &Diagram::gamma("A"));
        assert_eq!(t.boundary_signature(), (vec![a(), a()], vec![]));
    }

    #[test]
    fn dagger_basics() {
        assert!(Diagram::identity(a()).dagger().is_identity());
        assert!(Diagram::delta("A").dagger().is_isomorphic(&Diagram::delta_dagger("A")));
        let cap = Diagram::cap("A");
        assert!(cap.dagger().dagger().is_isomorphic(&cap));
        // dagger(Cap) is the cup with crossed legs
        let crossed = Diagram::cup("A").then(&Diagram::swap("A*", "A")).unwrap();
        assert!(cap.dagger().is_isomorphic(&crossed));
    }

    #[test]
    fn dagger_is_contravariant() {
        let f = Diagram::delta("A");
        let g = Diagram::tensor(&Diagram::dualiser("A"), &Diagram::gamma("A"));
        let gf = Diagram::compose(&g, &f).unwrap();
        let lhs = gf.dagger();
        let rhs = Diagram::compose(&f.dagger(), &g.dagger()).unwrap();
        assert!(lhs.is_isomorphic(&rhs));
    }

    #[test]
    fn swap_self_inverse() {
        let s = Diagram::compose(&Diagram::swap("B", "A"), &Diagram::swap("A", "B")).unwrap();
        assert!(s.is_identity());
    }

    #[test]
    fn transpose_of_identity() {
        let t = Diagram::identity(a()).transpose();
        assert!(t.is_identity());
        assert_eq!(t.inputs(), &[a().dual()]);
        assert!(Diagram::identity("A*").transpose().is_isomorphic(&Diagram::identity("A")));
    }

    #[test]
    fn transpose_of_box_is_variant() {
        let f = Diagram::box_("f", &["A", "B"], &["C"]);
        let t = f.transpose();
        assert_eq!(t.node_count(), 1);
        let (_, g) = t.nodes().next().unwrap();
        assert!(matches!(g, Generator::Box(b) if b.variant == BoxVariant::Transpose));
        assert_eq!(t.boundary_signature(), (vec!["C*".into()], vec!["B*".into(), "A*".into()]));
    }

    #[test]
    fn involutions_on_generators() {
        let gens = [
            Diagram::delta("A"),
            Diagram::gamma_dagger("A"),
            Diagram::dualiser("A"),
            Diagram::cap("A"),
            Diagram::cup("A"),
            Diagram::box_("f", &["A"], &["A*", "B"]),
        ];
        for f in &gens {
            assert!(f.transpose().transpose().is_isomorphic(f), "transpose twice:\n{f}");
            assert!(f.conjugate().conjugate().is_isomorphic(f), "conjugate twice:\n{f}");
            assert!(f.dagger().dagger().is_isomorphic(f));
        }
    }

    #[test]
    fn topological_order_detects_cycles() {
        let d = Diagram::compose(&Diagram::delta_dagger("A"), &Diagram::delta("A")).unwrap();
        assert_eq!(d.topological_order().unwrap().len(), 2);
    }
}
