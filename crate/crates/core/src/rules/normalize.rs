use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{Diagram, Generator, NodeId, Obj, Source, SpiderGen, Target};
use crate::hilb::c;

use super::pattern::{apply, find_matches, Match};
use super::registry::{lookup, registry, Family};
use super::{Context, Direction, ProofTrace, RewriteRule, RuleError, Step};

pub const DEFAULT_BUDGET: usize = 10_000;

/// Name of the pseudo-rule that fuses a pure component into one spider.
pub(crate) const SPIDER: &str = "spider";
/// Name of the pseudo-rule that multiplies scalar nodes together.
pub(crate) const SCALAR: &str = "scalar";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RuleSet {
    #[default]
    All,
    /// Compact-closed rules only; no Frobenius laws and no spider fusion.
    NoFrobenius,
}

impl std::str::FromStr for RuleSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(RuleSet::All),
            "no-frobenius" => Ok(RuleSet::NoFrobenius),
            other => Err(format!("unknown rule set `{other}`")),
        }
    }
}

/// Two traces that end in the same normal form.
#[derive(Clone, Debug)]
pub struct Proof {
    pub left: ProofTrace,
    pub right: ProofTrace,
}

impl Proof {
    pub fn uses(&self, rule: &str) -> bool {
        self.left.uses(rule) || self.right.uses(rule)
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn normal_form(&self) -> &Diagram {
        &self.left.result
    }

    /// Left steps, a `=` separator line, then the right steps.
    pub fn to_text(&self) -> String {
        format!("{}=\n{}", self.left.to_text(), self.right.to_text())
    }
}

/// Rewrites with node-reducing rules, uses size-preserving rules only when
/// they immediately enable a reduction, then fuses every component made of
/// basis generators into a single spider.
#[derive(Clone, Debug)]
pub struct Normalizer {
    rules: Vec<&'static RewriteRule>,
    ctx: Context,
    budget: usize,
    fuse: bool,
}

impl Normalizer {
    pub fn new(set: RuleSet, ctx: Context) -> Self {
        let rules = registry()
            .iter()
            .filter(|r| !r.is_structural())
            .filter(|r| set == RuleSet::All || r.family == Family::Compact)
            .collect();
        Normalizer { rules, ctx, budget: DEFAULT_BUDGET, fuse: set == RuleSet::All }
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    fn directions(r: &RewriteRule) -> &'static [Direction] {
        if r.bidirectional {
            &[Direction::Forward, Direction::Backward]
        } else {
            &[Direction::Forward]
        }
    }

    /// First reducing match, optionally required to touch one of `fresh`.
    fn reducing(&self, d: &Diagram, fresh: Option<&BTreeSet<NodeId>>) -> Result<Option<(&'static RewriteRule, Match)>, RuleError> {
        for &r in &self.rules {
            for &dir in Self::directions(r) {
                if r.size_change(dir) >= 0 {
                    continue;
                }
                for m in find_matches(r, dir, d, &self.ctx)? {
                    if fresh.is_none_or(|f| m.host_nodes().iter().any(|n| f.contains(n))) {
                        return Ok(Some((r, m)));
                    }
                }
            }
        }
        Ok(None)
    }

    fn rewrite(&self, cur: &mut Diagram, steps: &mut Vec<Step>) -> Result<(), RuleError> {
        loop {
            if steps.len() >= self.budget {
                return Err(RuleError::BudgetExhausted(self.budget));
            }
            if let Some((r, m)) = self.reducing(cur, None)? {
                *cur = apply(r, &m, cur)?;
                steps.push(m.step());
                continue;
            }
            if !self.enable(cur, steps)? {
                return Ok(());
            }
        }
    }

    /// Tries each size-preserving rewrite; keeps the first one after which a
    /// reducing rule fires on one of the nodes it created.
    fn enable(&self, cur: &mut Diagram, steps: &mut Vec<Step>) -> Result<bool, RuleError> {
        for &r in &self.rules {
            for &dir in Self::directions(r) {
                if r.size_change(dir) != 0 || r.sides(dir).0.node_count() == 0 {
                    continue;
                }
                for m in find_matches(r, dir, cur, &self.ctx)? {
                    let trial = apply(r, &m, cur)?;
                    let fresh: BTreeSet<NodeId> = trial.nodes.keys().filter(|n| n.0 >= cur.next_id).copied().collect();
                    if let Some((r2, m2)) = self.reducing(&trial, Some(&fresh))? {
                        *cur = apply(r2, &m2, &trial)?;
                        steps.push(m.step());
                        steps.push(m2.step());
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    fn fuse(&self, cur: &mut Diagram, steps: &mut Vec<Step>) -> Result<(), RuleError> {
        while let Some(comp) = next_fusable(cur) {
            if steps.len() >= self.budget {
                return Err(RuleError::BudgetExhausted(self.budget));
            }
            *cur = fuse_component(cur, &comp, &self.ctx).expect("pure components fuse");
            steps.push(Step { rule: SPIDER.into(), direction: Direction::Forward, nodes: comp, wire: None });
        }
        let scalars = scalar_nodes(cur);
        if needs_merge(cur, &scalars) {
            *cur = merge_scalars(cur, &scalars);
            steps.push(Step { rule: SCALAR.into(), direction: Direction::Forward, nodes: scalars, wire: None });
        }
        Ok(())
    }

    pub fn run(&self, d: &Diagram) -> Result<ProofTrace, RuleError> {
        let mut cur = d.clone();
        let mut steps = Vec::new();
        self.rewrite(&mut cur, &mut steps)?;
        if self.fuse {
            self.fuse(&mut cur, &mut steps)?;
        }
        Ok(ProofTrace { initial: d.clone(), steps, result: cur.canonicalize() })
    }

    /// Normalizes both sides and compares the normal forms up to
    /// isomorphism. Never concludes that the diagrams differ.
    pub fn prove_equal(&self, f: &Diagram, g: &Diagram) -> Result<Proof, RuleError> {
        if f.boundary_signature() != g.boundary_signature() {
            return Err(RuleError::BoundaryMismatch);
        }
        if f.is_isomorphic(g) {
            let trivial = |d: &Diagram| ProofTrace { initial: d.clone(), steps: Vec::new(), result: d.canonicalize() };
            return Ok(Proof { left: trivial(f), right: trivial(g) });
        }
        let left = self.run(f)?;
        let right = self.run(g)?;
        if left.result.is_isomorphic(&right.result) {
            Ok(Proof { left, right })
        } else {
            Err(RuleError::NotProved { left: left.result.to_string(), right: right.result.to_string() })
        }
    }
}

pub fn normalize(d: &Diagram, ctx: &Context) -> Result<ProofTrace, RuleError> {
    normalize_with(d, RuleSet::All, ctx)
}

pub fn normalize_with(d: &Diagram, set: RuleSet, ctx: &Context) -> Result<ProofTrace, RuleError> {
    Normalizer::new(set, ctx.clone()).run(d)
}

pub fn prove_equal(f: &Diagram, g: &Diagram, ctx: &Context) -> Result<Proof, RuleError> {
    Normalizer::new(RuleSet::All, ctx.clone()).prove_equal(f, g)
}

/// Node sets of the connected components, ignoring the boundary, ordered by
/// smallest node id.
fn node_components(d: &Diagram) -> Vec<Vec<NodeId>> {
    let mut parent: BTreeMap<NodeId, NodeId> = d.nodes.keys().map(|n| (*n, *n)).collect();
    fn find(p: &mut BTreeMap<NodeId, NodeId>, x: NodeId) -> NodeId {
        let mut r = x;
        while p[&r] != r {
            r = p[&r];
        }
        p.insert(x, r);
        r
    }
    for (s, t) in d.wires() {
        if let (Some(a), Some(b)) = (s.node(), t.node()) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra.max(rb), ra.min(rb));
            }
        }
    }
    let mut groups: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let keys: Vec<NodeId> = parent.keys().copied().collect();
    for n in keys {
        let r = find(&mut parent, n);
        groups.entry(r).or_default().push(n);
    }
    groups.into_values().collect()
}

/// Spiders of one leg in, one leg out, of equal orientation, are wires.
fn is_wire_spider(g: &Generator) -> bool {
    matches!(g, Generator::Spider(s) if s.inputs.len() == 1 && s.outputs.len() == 1 && s.inputs[0] == s.outputs[0])
}

/// First component made only of basis generators that is not already a
/// lone, irreducible spider.
fn next_fusable(d: &Diagram) -> Option<Vec<NodeId>> {
    node_components(d).into_iter().find(|comp| {
        let pure = comp.iter().all(|n| d.nodes[n].is_basis_generator());
        let done = comp.len() == 1 && matches!(d.nodes[&comp[0]], Generator::Spider(_)) && !is_wire_spider(&d.nodes[&comp[0]]);
        pure && !done
    })
}

/// Replaces `comp` by one spider whose legs are the component's external
/// wires, inputs sorted by where they come from and outputs by where they
/// go. A bare identity becomes a wire; a closed component becomes the
/// scalar `dim` when the dimension is known.
fn fuse_component(d: &Diagram, comp: &[NodeId], ctx: &Context) -> Option<Diagram> {
    let set: BTreeSet<NodeId> = comp.iter().copied().collect();
    let object: Obj = d.node(*comp.first()?)?.object()?.clone();
    let back = d.back_index();
    let mut ins: Vec<(Source, bool)> = Vec::new();
    let mut outs: Vec<(Target, bool)> = Vec::new();
    for &n in comp {
        let g = d.node(n)?;
        if g.object() != Some(&object) {
            return None;
        }
        let (ti, to) = g.signature();
        for (k, t) in ti.iter().enumerate() {
            let s = *back.get(&Target::Node(n, k))?;
            if !s.node().is_some_and(|m| set.contains(&m)) {
                ins.push((s, t.dualized));
            }
        }
        for (j, t) in to.iter().enumerate() {
            let tg = d.target_of(Source::Node(n, j))?;
            if !tg.node().is_some_and(|m| set.contains(&m)) {
                outs.push((tg, t.dualized));
            }
        }
    }
    ins.sort();
    outs.sort();
    let mut out = d.clone();
    out.remove_nodes(comp);
    match (ins.as_slice(), outs.as_slice()) {
        ([(s, a)], [(t, b)]) if a == b => {
            out.wires.insert(*s, *t);
        }
        ([], []) => {
            let g = match ctx.dims.get(&object) {
                Some(&dim) => Generator::Scalar(c(dim as f64, 0.0)),
                None => Generator::Spider(SpiderGen { object, inputs: vec![], outputs: vec![] }),
            };
            out.add_node(g);
        }
        _ => {
            let id = out.add_node(Generator::Spider(SpiderGen {
                object,
                inputs: ins.iter().map(|(_, d)| *d).collect(),
                outputs: outs.iter().map(|(_, d)| *d).collect(),
            }));
            for (k, (s, _)) in ins.iter().enumerate() {
                out.wires.insert(*s, Target::Node(id, k));
            }
            for (j, (t, _)) in outs.iter().enumerate() {
                out.wires.insert(Source::Node(id, j), *t);
            }
        }
    }
    Some(out)
}

fn scalar_nodes(d: &Diagram) -> Vec<NodeId> {
    d.nodes().filter(|(_, g)| matches!(g, Generator::Scalar(_))).map(|(n, _)| n).collect()
}

fn scalar_product(d: &Diagram, ids: &[NodeId]) -> num_complex::Complex64 {
    ids.iter()
        .map(|n| match d.nodes[n] {
            Generator::Scalar(z) => z,
            _ => c(1.0, 0.0),
        })
        .product()
}

fn needs_merge(d: &Diagram, ids: &[NodeId]) -> bool {
    ids.len() > 1 || (ids.len() == 1 && (scalar_product(d, ids) - c(1.0, 0.0)).norm() <= 1e-12)
}

fn merge_scalars(d: &Diagram, ids: &[NodeId]) -> Diagram {
    let z = scalar_product(d, ids);
    let mut out = d.clone();
    out.remove_nodes(ids);
    if (z - c(1.0, 0.0)).norm() > 1e-12 {
        out.add_node(Generator::Scalar(z));
    }
    out
}

/// Re-applies a recorded step.
pub(crate) fn apply_step(d: &Diagram, step: &Step, ctx: &Context) -> Result<Diagram, RuleError> {
    let failed = || RuleError::ReplayFailed(step.to_string());
    match step.rule.as_str() {
        SPIDER => fuse_component(d, &step.nodes, ctx).ok_or_else(failed),
        SCALAR => {
            if step.nodes.iter().any(|n| !matches!(d.node(*n), Some(Generator::Scalar(_)))) {
                return Err(failed());
            }
            Ok(merge_scalars(d, &step.nodes))
        }
        name => {
            let rule = lookup(name).ok_or_else(|| RuleError::UnknownRule(name.into()))?;
            let m = find_matches(rule, step.direction, d, ctx)?
                .into_iter()
                .find(|m| m.host_nodes() == step.nodes && m.wire() == step.wire)
                .ok_or_else(failed)?;
            apply(rule, &m, d)
        }
    }
}
