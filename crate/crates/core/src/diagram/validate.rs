use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::*;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A port that no wire touches.
    DanglingSource(Source),
    DanglingTarget(Target),
    /// Two wires end at the same input-side port.
    DuplicateTarget(Target),
    TypeClash { source: Source, target: Target, source_type: WireType, target_type: WireType },
    /// A wire endpoint names a node or port that does not exist.
    UnknownPort(String),
    /// Swap/Identity stored as a node instead of as wiring.
    WiringNode(NodeId),
    Cycle,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingSource(s) => write!(f, "dangling output-side port {s:?}"),
            Violation::DanglingTarget(t) => write!(f, "dangling input-side port {t:?}"),
            Violation::DuplicateTarget(t) => write!(f, "port {t:?} used by more than one wire"),
            Violation::TypeClash { source, target, source_type, target_type } => {
                write!(f, "type clash: {source:?} carries {source_type} but {target:?} expects {target_type}")
            }
            Violation::UnknownPort(p) => write!(f, "wire endpoint {p} does not exist"),
            Violation::WiringNode(n) => write!(f, "node {n} is a wiring generator"),
            Violation::Cycle => write!(f, "diagram contains a directed cycle"),
        }
    }
}

/// An element of the underlying undirected graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Element {
    Input(usize),
    Output(usize),
    Node(NodeId),
}

impl Diagram {
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let mut used_targets: BTreeSet<Target> = BTreeSet::new();
        for (s, t) in &self.wires {
            let st = self.source_type(*s);
            let tt = self.target_type(*t);
            match (st, tt) {
                (None, _) => violations.push(Violation::UnknownPort(format!("{s:?}"))),
                (_, None) => violations.push(Violation::UnknownPort(format!("{t:?}"))),
                (Some(a), Some(b)) if a != b => violations.push(Violation::TypeClash {
                    source: *s,
                    target: *t,
                    source_type: a,
                    target_type: b,
                }),
                _ => {}
            }
            if !used_targets.insert(*t) {
                violations.push(Violation::DuplicateTarget(*t));
            }
        }
        for i in 0..self.inputs.len() {
            if !self.wires.contains_key(&Source::Input(i)) {
                violations.push(Violation::DanglingSource(Source::Input(i)));
            }
        }
        for i in 0..self.outputs.len() {
            if !used_targets.contains(&Target::Output(i)) {
                violations.push(Violation::DanglingTarget(Target::Output(i)));
            }
        }
        for (id, g) in &self.nodes {
            if g.is_wiring() {
                violations.push(Violation::WiringNode(*id));
            }
            let (ins, outs) = g.signature();
            for j in 0..outs.len() {
                if !self.wires.contains_key(&Source::Node(*id, j)) {
                    violations.push(Violation::DanglingSource(Source::Node(*id, j)));
                }
            }
            for j in 0..ins.len() {
                if !used_targets.contains(&Target::Node(*id, j)) {
                    violations.push(Violation::DanglingTarget(Target::Node(*id, j)));
                }
            }
        }
        if !self.is_acyclic() {
            violations.push(Violation::Cycle);
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Connected components of the undirected port graph, boundary ports
    /// included. Components are listed in order of their smallest element.
    pub(crate) fn components(&self) -> Vec<Vec<Element>> {
        let mut elems: Vec<Element> = Vec::new();
        elems.extend((0..self.inputs.len()).map(Element::Input));
        elems.extend((0..self.outputs.len()).map(Element::Output));
        elems.extend(self.nodes.keys().map(|n| Element::Node(*n)));
        let index: BTreeMap<Element, usize> = elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut parent: Vec<usize> = (0..elems.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (s, t) in &self.wires {
            let a = match s {
                Source::Input(i) => Element::Input(*i),
                Source::Node(n, _) => Element::Node(*n),
            };
            let b = match t {
                Target::Output(i) => Element::Output(*i),
                Target::Node(n, _) => Element::Node(*n),
            };
            let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&b)) else { continue };
            let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Element>> = BTreeMap::new();
        for (i, e) in elems.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(*e);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connectivity() {
        let two = Diagram::tensor(&Diagram::identity("A"), &Diagram::identity("A"));
        assert!(!two.is_connected());
        assert!(Diagram::delta("A").is_connected());
        assert!(Diagram::empty().is_connected());
        assert!(Diagram::scalar(Complex64::new(2.0, 0.0)).is_connected());
    }

    #[test]
    fn type_clash_reported() {
        let d = Diagram::from_raw(
            vec!["A".into()],
            vec!["A*".into()],
            vec![],
            vec![(Source::Input(0), Target::Output(0))],
        )
        .unwrap();
        let v = d.validate().unwrap_err();
        assert!(matches!(v[0], Violation::TypeClash { .. }));
    }

    #[test]
    fn dangling_and_duplicate() {
        let d = Diagram::from_raw(
            vec!["A".into(), "A".into()],
            vec!["A".into()],
            vec![(NodeId(0), Generator::Gamma("A".into()))],
            vec![(Source::Input(0), Target::Output(0)), (Source::Input(1), Target::Output(0))],
        )
        .unwrap();
        let v = d.validate().unwrap_err();
        assert!(v.contains(&Violation::DuplicateTarget(Target::Output(0))));
        assert!(v.contains(&Violation::DanglingTarget(Target::Node(NodeId(0), 0))));
    }

    #[test]
    fn wiring_nodes_rejected() {
        let d = Diagram::from_raw(
            vec!["A".into()],
            vec!["A".into()],
            vec![(NodeId(0), Generator::Identity("A".into()))],
            vec![(Source::Input(0), Target::Node(NodeId(0), 0)), (Source::Node(NodeId(0), 0), Target::Output(0))],
        )
        .unwrap();
        assert_eq!(d.validate().unwrap_err(), vec![Violation::WiringNode(NodeId(0))]);
    }

    #[test]
    fn built_diagrams_are_valid() {
        let d = Diagram::compose(&Diagram::delta("A"), &Diagram::gamma_dagger("A")).unwrap();
        assert!(d.is_valid());
        assert!(Diagram::cap("A").transpose().is_valid());
    }
}
