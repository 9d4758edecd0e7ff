use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use crate::diagram::{BoxGen, Diagram, Generator, NodeId, Obj, Side, Source, SpiderGen, Target, WireType};

use super::{Context, Direction, RewriteRule, RuleError, Step};

const SCALAR_TOL: f64 = 1e-9;

/// An occurrence of one side of a rule inside a host diagram.
#[derive(Clone, Debug)]
pub struct Match {
    pub(crate) rule: String,
    pub(crate) direction: Direction,
    /// pattern node → host node
    pub(crate) nodes: BTreeMap<NodeId, NodeId>,
    /// host sources feeding the pattern inputs, in pattern order
    pub(crate) inputs: Vec<Source>,
    /// host targets fed by the pattern outputs
    pub(crate) outputs: Vec<Target>,
    /// set when the pattern is a single bare wire
    pub(crate) wire: Option<(Source, Target)>,
    pub(crate) objects: BTreeMap<Obj, (Obj, bool)>,
    pub(crate) boxes: BTreeMap<String, BoxGen>,
    pub(crate) fingerprint: u64,
}

impl Match {
    pub fn rule(&self) -> &str {
        &self.rule
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Matched host nodes, ascending.
    pub fn host_nodes(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.nodes.values().copied().collect();
        v.sort();
        v
    }

    pub fn wire(&self) -> Option<(Source, Target)> {
        self.wire
    }

    /// The box a `?` variable was bound to, with the variant offset folded in.
    pub fn box_binding(&self, var: &str) -> Option<&BoxGen> {
        self.boxes.get(var)
    }

    pub fn step(&self) -> Step {
        Step { rule: self.rule.clone(), direction: self.direction, nodes: self.host_nodes(), wire: self.wire }
    }

    fn key(&self) -> (Vec<NodeId>, Option<(Source, Target)>) {
        (self.host_nodes(), self.wire)
    }
}

pub(crate) fn fingerprint(d: &Diagram) -> u64 {
    let mut h = DefaultHasher::new();
    d.to_string().hash(&mut h);
    h.finish()
}

fn is_box_var(name: &str) -> bool {
    name.starts_with('?')
}

#[derive(Clone, Default)]
struct St {
    nodes: BTreeMap<NodeId, NodeId>,
    used: BTreeSet<NodeId>,
    ports: BTreeMap<(NodeId, Side, usize), usize>,
    used_ports: BTreeSet<(NodeId, Side, usize)>,
    objects: BTreeMap<Obj, (Obj, bool)>,
    boxes: BTreeMap<String, BoxGen>,
}

impl St {
    fn bind_obj(&mut self, var: &Obj, host: &Obj, flip: bool) -> bool {
        match self.objects.get(var) {
            Some((h, f)) => h == host && *f == flip,
            None => {
                self.objects.insert(var.clone(), (host.clone(), flip));
                true
            }
        }
    }

    fn bind_type(&mut self, pat: &WireType, host: &WireType) -> bool {
        self.bind_obj(&pat.object, &host.object, pat.dualized ^ host.dualized)
    }

    fn bind_types(&mut self, pat: &[WireType], host: &[WireType]) -> bool {
        pat.len() == host.len() && pat.iter().zip(host).all(|(p, h)| self.bind_type(p, h))
    }

    /// Label compatibility, extending the bindings.
    fn compatible(&mut self, pg: &Generator, hg: &Generator) -> bool {
        use Generator::*;
        match (pg, hg) {
            (Box(pb), Box(hb)) if is_box_var(&pb.name) => {
                let offset = pb.variant.then(hb.variant);
                let bound = BoxGen { variant: offset, ..hb.clone() };
                if let Some(prev) = self.boxes.get(&pb.name) {
                    return *prev == bound;
                }
                let (hi, ho) = bound.signature();
                if !self.bind_types(&pb.inputs, &hi) || !self.bind_types(&pb.outputs, &ho) {
                    return false;
                }
                self.boxes.insert(pb.name.clone(), bound);
                true
            }
            (Box(pb), Box(hb)) => {
                let (pi, po) = pb.signature();
                let (hi, ho) = hb.signature();
                pb.name == hb.name && pb.variant == hb.variant && self.bind_types(&pi, &hi) && self.bind_types(&po, &ho)
            }
            (Scalar(a), Scalar(b)) => (a - b).norm() <= SCALAR_TOL,
            (Spider(a), Spider(b)) => a.inputs == b.inputs && a.outputs == b.outputs && self.bind_obj(&a.object, &b.object, false),
            (p, h) if std::mem::discriminant(p) == std::mem::discriminant(h) => match (p.object(), h.object()) {
                (Some(po), Some(ho)) => self.bind_obj(po, ho, false),
                _ => false,
            },
            _ => false,
        }
    }
}

fn with_object(g: &Generator, o: Obj) -> Generator {
    use Generator::*;
    match g {
        Delta(_) => Delta(o),
        DeltaDagger(_) => DeltaDagger(o),
        Gamma(_) => Gamma(o),
        GammaDagger(_) => GammaDagger(o),
        Dualiser(_) => Dualiser(o),
        DualiserDagger(_) => DualiserDagger(o),
        Cap(_) => Cap(o),
        Cup(_) => Cup(o),
        Spider(s) => Spider(SpiderGen { object: o, inputs: s.inputs.clone(), outputs: s.outputs.clone() }),
        other => other.clone(),
    }
}

/// The host generator a pattern generator stands for under the bindings.
fn instantiate(g: &Generator, objects: &BTreeMap<Obj, (Obj, bool)>, boxes: &BTreeMap<String, BoxGen>) -> Option<Generator> {
    match g {
        Generator::Box(b) if is_box_var(&b.name) => {
            let bound = boxes.get(&b.name)?;
            Some(Generator::Box(BoxGen { variant: bound.variant.then(b.variant), ..bound.clone() }))
        }
        Generator::Box(b) => {
            let map = |ts: &[WireType]| -> Option<Vec<WireType>> {
                ts.iter()
                    .map(|t| {
                        let (o, flip) = objects.get(&t.object)?;
                        Some(WireType { object: o.clone(), dualized: t.dualized ^ flip })
                    })
                    .collect()
            };
            Some(Generator::Box(BoxGen { inputs: map(&b.inputs)?, outputs: map(&b.outputs)?, ..b.clone() }))
        }
        g => match g.object() {
            Some(o) => {
                let (h, flip) = objects.get(o)?;
                (!flip).then(|| with_object(g, h.clone()))
            }
            None => Some(g.clone()),
        },
    }
}

struct Search<'a> {
    pat: &'a Diagram,
    host: &'a Diagram,
    host_back: BTreeMap<Target, Source>,
    internal: Vec<(NodeId, usize, NodeId, usize)>,
    found: Vec<St>,
}

impl Search<'_> {
    fn map_node(&self, st: &mut St, p: NodeId, h: NodeId) -> bool {
        if let Some(&h0) = st.nodes.get(&p) {
            return h0 == h;
        }
        if st.used.contains(&h) || !st.compatible(&self.pat.nodes[&p], &self.host.nodes[&h]) {
            return false;
        }
        st.nodes.insert(p, h);
        st.used.insert(h);
        true
    }

    fn map_port(&self, st: &mut St, p: NodeId, side: Side, j: usize, hj: usize) -> bool {
        let h = st.nodes[&p];
        if let Some(&x) = st.ports.get(&(p, side, j)) {
            return x == hj;
        }
        let (pg, hg) = (&self.pat.nodes[&p], &self.host.nodes[&h]);
        let arity = match side {
            Side::In => hg.num_inputs(),
            Side::Out => hg.num_outputs(),
        };
        if hj >= arity || pg.port_class(side, j) != hg.port_class(side, hj) || st.used_ports.contains(&(h, side, hj)) {
            return false;
        }
        st.ports.insert((p, side, j), hj);
        st.used_ports.insert((h, side, hj));
        true
    }

    fn search(&mut self, st: St) {
        for &(p, j, q, k) in &self.internal {
            let pm = st.nodes.get(&p).copied();
            let qm = st.nodes.get(&q).copied();
            let pj = pm.and(st.ports.get(&(p, Side::Out, j)).copied());
            let qk = qm.and(st.ports.get(&(q, Side::In, k)).copied());
            match (pm, pj, qm, qk) {
                (Some(hp), Some(hj), _, _) => {
                    let Some(Target::Node(hq, hk)) = self.host.target_of(Source::Node(hp, hj)) else { return };
                    if let (Some(q0), Some(k0)) = (qm, qk) {
                        if (q0, k0) != (hq, hk) {
                            return;
                        }
                        continue;
                    }
                    let mut next = st.clone();
                    if self.map_node(&mut next, q, hq) && self.map_port(&mut next, q, Side::In, k, hk) {
                        self.search(next);
                    }
                    return;
                }
                (_, _, Some(hq), Some(hk)) => {
                    let Some(&Source::Node(hp, hj)) = self.host_back.get(&Target::Node(hq, hk)) else { return };
                    let mut next = st.clone();
                    if self.map_node(&mut next, p, hp) && self.map_port(&mut next, p, Side::Out, j, hj) {
                        self.search(next);
                    }
                    return;
                }
                (Some(hp), None, _, _) => {
                    for hj in 0..self.host.nodes[&hp].num_outputs() {
                        let mut next = st.clone();
                        if self.map_port(&mut next, p, Side::Out, j, hj) {
                            self.search(next);
                        }
                    }
                    return;
                }
                (_, _, Some(hq), None) => {
                    for hk in 0..self.host.nodes[&hq].num_inputs() {
                        let mut next = st.clone();
                        if self.map_port(&mut next, q, Side::In, k, hk) {
                            self.search(next);
                        }
                    }
                    return;
                }
                _ => continue,
            }
        }
        if let Some(&p) = self.pat.nodes.keys().find(|p| !st.nodes.contains_key(p)) {
            let hosts: Vec<NodeId> = self.host.nodes.keys().copied().collect();
            for h in hosts {
                let mut next = st.clone();
                if self.map_node(&mut next, p, h) {
                    self.search(next);
                }
            }
            return;
        }
        self.found.push(st);
    }

    /// Assigns the remaining (boundary) ports and reads off the match
    /// boundary. Fails if the match is not a clean, convex subgraph.
    fn finish(&self, mut st: St) -> Option<(St, Vec<Source>, Vec<Target>)> {
        for (&p, &h) in &st.nodes.clone() {
            let pg = &self.pat.nodes[&p];
            for (side, n) in [(Side::In, pg.num_inputs()), (Side::Out, pg.num_outputs())] {
                for j in 0..n {
                    if st.ports.contains_key(&(p, side, j)) {
                        continue;
                    }
                    let hj = (0..n).find(|&hj| {
                        !st.used_ports.contains(&(h, side, hj))
                            && pg.port_class(side, j) == self.host.nodes[&h].port_class(side, hj)
                    })?;
                    st.ports.insert((p, side, j), hj);
                    st.used_ports.insert((h, side, hj));
                }
            }
        }
        let pat_back = self.pat.back_index();
        let mut inputs = Vec::new();
        for i in 0..self.pat.inputs.len() {
            let Some(Target::Node(q, k)) = self.pat.target_of(Source::Input(i)) else { return None };
            let ht = Target::Node(st.nodes[&q], st.ports[&(q, Side::In, k)]);
            let src = *self.host_back.get(&ht)?;
            if src.node().is_some_and(|n| st.used.contains(&n)) {
                return None;
            }
            inputs.push(src);
        }
        let mut outputs = Vec::new();
        for o in 0..self.pat.outputs.len() {
            let Some(&Source::Node(p, j)) = pat_back.get(&Target::Output(o)) else { return None };
            let hs = Source::Node(st.nodes[&p], st.ports[&(p, Side::Out, j)]);
            let tgt = self.host.target_of(hs)?;
            if tgt.node().is_some_and(|n| st.used.contains(&n)) {
                return None;
            }
            outputs.push(tgt);
        }
        if !self.convex(&st.used, &outputs) {
            return None;
        }
        Some((st, inputs, outputs))
    }

    /// No path may leave the matched region and come back into it.
    fn convex(&self, used: &BTreeSet<NodeId>, outputs: &[Target]) -> bool {
        let succ = self.host.successors();
        let mut stack: Vec<NodeId> = outputs.iter().filter_map(|t| t.node()).collect();
        let mut seen = BTreeSet::new();
        while let Some(n) = stack.pop() {
            if used.contains(&n) {
                return false;
            }
            if seen.insert(n) {
                stack.extend(succ[&n].iter().copied());
            }
        }
        true
    }
}

/// All matches of one side of `rule` in `host`, deterministically ordered
/// by matched node set. Matches that differ only in how symmetric ports are
/// paired up are reported once.
pub fn find_matches(rule: &RewriteRule, direction: Direction, host: &Diagram, ctx: &Context) -> Result<Vec<Match>, RuleError> {
    if direction == Direction::Backward && !rule.bidirectional {
        return Err(RuleError::WrongDirection { rule: rule.name.clone(), direction });
    }
    let (from, to) = rule.sides(direction);
    let fp = fingerprint(host);
    let make = |st: St, inputs: Vec<Source>, outputs: Vec<Target>, wire: Option<(Source, Target)>| -> Option<Match> {
        for (var, tag) in &rule.requires {
            let bound = st.boxes.get(var)?;
            if !ctx.has_tag(&bound.name, *tag) {
                return None;
            }
        }
        if to.nodes.values().any(|g| instantiate(g, &st.objects, &st.boxes).is_none()) {
            return None;
        }
        Some(Match {
            rule: rule.name.clone(),
            direction,
            nodes: st.nodes,
            inputs,
            outputs,
            wire,
            objects: st.objects,
            boxes: st.boxes,
            fingerprint: fp,
        })
    };

    let mut out = Vec::new();
    if from.nodes.is_empty() {
        // a bare wire matches every host wire of a compatible type
        let bare = from.inputs.len() == 1
            && from.outputs.len() == 1
            && from.target_of(Source::Input(0)) == Some(Target::Output(0));
        if bare {
            for (s, t) in host.wires() {
                let Some(ty) = host.source_type(s) else { continue };
                let mut st = St::default();
                if st.bind_type(&from.inputs[0], &ty) {
                    out.extend(make(st, vec![s], vec![t], Some((s, t))));
                }
            }
        }
        return Ok(out);
    }

    let internal = from
        .wires()
        .filter_map(|(s, t)| match (s, t) {
            (Source::Node(p, j), Target::Node(q, k)) => Some((p, j, q, k)),
            _ => None,
        })
        .collect();
    let mut search = Search { pat: from, host, host_back: host.back_index(), internal, found: Vec::new() };
    search.search(St::default());
    for st in std::mem::take(&mut search.found) {
        if let Some((st, inputs, outputs)) = search.finish(st) {
            out.extend(make(st, inputs, outputs, None));
        }
    }
    out.sort_by_key(Match::key);
    out.dedup_by_key(|m| m.key());
    Ok(out)
}

/// Replaces the matched occurrence by the other side of the rule.
pub fn apply(rule: &RewriteRule, m: &Match, host: &Diagram) -> Result<Diagram, RuleError> {
    if m.rule != rule.name {
        return Err(RuleError::UnknownRule(m.rule.clone()));
    }
    if m.fingerprint != fingerprint(host) {
        return Err(RuleError::StaleMatch);
    }
    let (_, to) = rule.sides(m.direction);
    let mut out = host.clone();
    match m.wire {
        Some((s, _)) => {
            out.wires.remove(&s);
        }
        None => out.remove_nodes(&m.host_nodes()),
    }
    let mut ids = BTreeMap::new();
    for (id, g) in &to.nodes {
        let g = instantiate(g, &m.objects, &m.boxes).ok_or_else(|| RuleError::UnknownRule(m.rule.clone()))?;
        ids.insert(*id, out.add_node(g));
    }
    for (s, t) in to.wires() {
        let s = match s {
            Source::Input(i) => m.inputs[i],
            Source::Node(n, j) => Source::Node(ids[&n], j),
        };
        let t = match t {
            Target::Output(o) => m.outputs[o],
            Target::Node(n, k) => Target::Node(ids[&n], k),
        };
        out.wires.insert(s, t);
    }
    Ok(out)
}
