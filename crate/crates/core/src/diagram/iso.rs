use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::*;

const SCALAR_TOL: f64 = 1e-9;

fn same_label(a: &Generator, b: &Generator) -> bool {
    match (a, b) {
        (Generator::Scalar(x), Generator::Scalar(y)) => (x - y).norm() <= SCALAR_TOL,
        _ => a == b,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Work {
    Src(Source, Source),
    Tgt(Target, Target),
}

#[derive(Clone, Default)]
struct State {
    nodes: BTreeMap<NodeId, NodeId>,
    used: BTreeSet<NodeId>,
    ports: BTreeMap<(NodeId, Side, usize), usize>,
    used_ports: BTreeSet<(NodeId, Side, usize)>,
}

struct Ctx<'a> {
    a: &'a Diagram,
    b: &'a Diagram,
    back_a: BTreeMap<Target, Source>,
    back_b: BTreeMap<Target, Source>,
}

impl Ctx<'_> {
    #[allow(clippy::too_many_arguments)]
    fn map_port(&self, st: &mut State, x: NodeId, y: NodeId, side: Side, p: usize, q: usize, work: &mut VecDeque<Work>) -> bool {
        let gx = &self.a.nodes[&x];
        let gy = &self.b.nodes[&y];
        if !self.map_node(st, x, y, work) {
            return false;
        }
        match st.ports.get(&(x, side, p)) {
            Some(&q0) => q0 == q,
            None => {
                if gx.port_class(side, p) != gy.port_class(side, q) || st.used_ports.contains(&(y, side, q)) {
                    return false;
                }
                st.ports.insert((x, side, p), q);
                st.used_ports.insert((y, side, q));
                match side {
                    Side::In => work.push_back(Work::Tgt(Target::Node(x, p), Target::Node(y, q))),
                    Side::Out => work.push_back(Work::Src(Source::Node(x, p), Source::Node(y, q))),
                }
                true
            }
        }
    }

    fn map_node(&self, st: &mut State, x: NodeId, y: NodeId, work: &mut VecDeque<Work>) -> bool {
        match st.nodes.get(&x) {
            Some(&y0) => y0 == y,
            None => {
                if st.used.contains(&y) || !same_label(&self.a.nodes[&x], &self.b.nodes[&y]) {
                    return false;
                }
                st.nodes.insert(x, y);
                st.used.insert(y);
                // ports with a singleton class are forced
                let g = &self.a.nodes[&x];
                let (ins, outs) = g.signature();
                for (side, n) in [(Side::In, ins.len()), (Side::Out, outs.len())] {
                    let classes: Vec<usize> = (0..n).map(|p| g.port_class(side, p)).collect();
                    for p in 0..n {
                        if classes.iter().filter(|c| **c == classes[p]).count() == 1 {
                            st.ports.insert((x, side, p), p);
                            st.used_ports.insert((y, side, p));
                            match side {
                                Side::In => work.push_back(Work::Tgt(Target::Node(x, p), Target::Node(y, p))),
                                Side::Out => work.push_back(Work::Src(Source::Node(x, p), Source::Node(y, p))),
                            }
                        }
                    }
                }
                true
            }
        }
    }

    fn propagate(&self, st: &mut State, mut work: VecDeque<Work>) -> bool {
        let mut done = BTreeSet::new();
        while let Some(w) = work.pop_front() {
            if !done.insert(w) {
                continue;
            }
            match w {
                Work::Src(sa, sb) => {
                    let ok = match (sa, sb) {
                        (Source::Input(i), Source::Input(j)) => i == j,
                        (Source::Node(x, p), Source::Node(y, q)) => self.map_port(st, x, y, Side::Out, p, q, &mut work),
                        _ => false,
                    };
                    if !ok {
                        return false;
                    }
                    match (self.a.wires.get(&sa), self.b.wires.get(&sb)) {
                        (Some(ta), Some(tb)) => work.push_back(Work::Tgt(*ta, *tb)),
                        (None, None) => {}
                        _ => return false,
                    }
                }
                Work::Tgt(ta, tb) => {
                    let ok = match (ta, tb) {
                        (Target::Output(i), Target::Output(j)) => i == j,
                        (Target::Node(x, p), Target::Node(y, q)) => self.map_port(st, x, y, Side::In, p, q, &mut work),
                        _ => false,
                    };
                    if !ok {
                        return false;
                    }
                    match (self.back_a.get(&ta), self.back_b.get(&tb)) {
                        (Some(sa), Some(sb)) => work.push_back(Work::Src(*sa, *sb)),
                        (None, None) => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }

    fn search(&self, st: State) -> bool {
        // an unresolved symmetric port on a mapped node
        for (&x, &y) in &st.nodes {
            let g = &self.a.nodes[&x];
            let (ins, outs) = g.signature();
            for (side, n) in [(Side::In, ins.len()), (Side::Out, outs.len())] {
                for p in 0..n {
                    if st.ports.contains_key(&(x, side, p)) {
                        continue;
                    }
                    for q in 0..n {
                        if st.used_ports.contains(&(y, side, q)) || g.port_class(side, p) != g.port_class(side, q) {
                            continue;
                        }
                        let mut next = st.clone();
                        let mut work = VecDeque::new();
                        if self.map_port(&mut next, x, y, side, p, q, &mut work) && self.propagate(&mut next, work) && self.search(next) {
                            return true;
                        }
                    }
                    return false;
                }
            }
        }
        // a component unreachable from what is mapped so far
        if let Some(x) = self.a.nodes.keys().find(|x| !st.nodes.contains_key(x)) {
            for y in self.b.nodes.keys() {
                if st.used.contains(y) {
                    continue;
                }
                let mut next = st.clone();
                let mut work = VecDeque::new();
                if self.map_node(&mut next, *x, *y, &mut work) && self.propagate(&mut next, work) && self.search(next) {
                    return true;
                }
            }
            return false;
        }
        true
    }
}

fn label_multiset(d: &Diagram) -> Vec<String> {
    let mut v: Vec<String> = d
        .nodes
        .values()
        .map(|g| match g {
            Generator::Scalar(_) => "scalar".to_string(),
            g => g.to_string(),
        })
        .collect();
    v.sort();
    v
}

pub(crate) fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
    if a.inputs != b.inputs
        || a.outputs != b.outputs
        || a.nodes.len() != b.nodes.len()
        || a.wires.len() != b.wires.len()
        || label_multiset(a) != label_multiset(b)
    {
        return false;
    }
    let ctx = Ctx { a, b, back_a: a.back_index(), back_b: b.back_index() };
    let mut work = VecDeque::new();
    for i in 0..a.inputs.len() {
        work.push_back(Work::Src(Source::Input(i), Source::Input(i)));
    }
    for j in 0..a.outputs.len() {
        work.push_back(Work::Tgt(Target::Output(j), Target::Output(j)));
    }
    let mut st = State::default();
    if !ctx.propagate(&mut st, work) {
        return false;
    }
    ctx.search(st)
}

/// Node visiting order: breadth-first from the boundary (inputs, then
/// outputs), ports in index order; closed components last, by label.
fn traversal_order(d: &Diagram) -> Vec<NodeId> {
    let back = d.back_index();
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..d.inputs.len() {
        if let Some(n) = d.wires.get(&Source::Input(i)).and_then(|t| t.node()) {
            queue.push_back(n);
        }
    }
    for j in 0..d.outputs.len() {
        if let Some(n) = back.get(&Target::Output(j)).and_then(|s| s.node()) {
            queue.push_back(n);
        }
    }
    let mut rest: Vec<NodeId> = Vec::new();
    loop {
        while let Some(n) = queue.pop_front() {
            if !seen.insert(n) {
                continue;
            }
            order.push(n);
            let g = &d.nodes[&n];
            for p in 0..g.num_inputs() {
                if let Some(m) = back.get(&Target::Node(n, p)).and_then(|s| s.node()) {
                    queue.push_back(m);
                }
            }
            for p in 0..g.num_outputs() {
                if let Some(m) = d.wires.get(&Source::Node(n, p)).and_then(|t| t.node()) {
                    queue.push_back(m);
                }
            }
        }
        if rest.is_empty() {
            rest = d.nodes.keys().filter(|n| !seen.contains(n)).copied().collect();
            rest.sort_by_key(|n| (d.nodes[n].to_string(), *n));
            rest.reverse();
        }
        match rest.pop() {
            Some(n) if !seen.contains(&n) => queue.push_back(n),
            Some(_) => continue,
            None => break,
        }
    }
    order
}

pub(crate) fn canonicalize(d: &Diagram) -> Diagram {
    let order = traversal_order(d);
    let rename: BTreeMap<NodeId, NodeId> = order.iter().enumerate().map(|(i, n)| (*n, NodeId(i as u32))).collect();
    let mut out = Diagram {
        inputs: d.inputs.clone(),
        outputs: d.outputs.clone(),
        next_id: order.len() as u32,
        ..Default::default()
    };
    for (old, new) in &rename {
        out.nodes.insert(*new, d.nodes[old].clone());
    }
    for (s, t) in &d.wires {
        let s = match s {
            Source::Node(n, j) => Source::Node(rename[n], *j),
            s => *s,
        };
        let t = match t {
            Target::Node(n, j) => Target::Node(rename[n], *j),
            t => *t,
        };
        out.wires.insert(s, t);
    }
    out
}

/// Text key of the canonicalized diagram; equal keys imply isomorphic
/// diagrams. The converse holds only up to the order of symmetric ports.
pub fn canonical_key(d: &Diagram) -> String {
    canonicalize(d).to_string()
}
