use std::fmt;
use std::str::FromStr;

use crate::diagram::{Diagram, NodeId, Source, Target};

use super::{normalize, Context, Direction, RuleError};

/// One rewrite: rule name, direction and the host nodes it consumed (or
/// the bare wire it grew from).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub direction: Direction,
    pub nodes: Vec<NodeId>,
    pub wire: Option<(Source, Target)>,
}

fn fmt_source(s: &Source) -> String {
    match s {
        Source::Input(i) => format!("in{i}"),
        Source::Node(n, j) => format!("{n}.{j}"),
    }
}

fn fmt_target(t: &Target) -> String {
    match t {
        Target::Output(o) => format!("out{o}"),
        Target::Node(n, k) => format!("{n}.{k}"),
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} @", self.rule, self.direction)?;
        if let Some((s, t)) = &self.wire {
            return write!(f, " {}->{}", fmt_source(s), fmt_target(t));
        }
        for n in &self.nodes {
            write!(f, " {n}")?;
        }
        Ok(())
    }
}

fn parse_node(s: &str) -> Option<NodeId> {
    s.strip_prefix('n')?.parse().ok().map(NodeId)
}

fn parse_port(s: &str) -> Option<(NodeId, usize)> {
    let (n, p) = s.split_once('.')?;
    Some((parse_node(n)?, p.parse().ok()?))
}

impl FromStr for Step {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed step `{line}`");
        let (head, tail) = line.split_once('@').ok_or_else(bad)?;
        let mut words = head.split_whitespace();
        let rule = words.next().ok_or_else(bad)?.to_string();
        let direction = match words.next() {
            Some("forward") => Direction::Forward,
            Some("backward") => Direction::Backward,
            _ => return Err(bad()),
        };
        if words.next().is_some() {
            return Err(bad());
        }
        let tail = tail.trim();
        if let Some((s, t)) = tail.split_once("->") {
            let s = match s.strip_prefix("in") {
                Some(i) => Source::Input(i.parse().map_err(|_| bad())?),
                None => parse_port(s).map(|(n, j)| Source::Node(n, j)).ok_or_else(bad)?,
            };
            let t = match t.strip_prefix("out") {
                Some(o) => Target::Output(o.parse().map_err(|_| bad())?),
                None => parse_port(t).map(|(n, k)| Target::Node(n, k)).ok_or_else(bad)?,
            };
            return Ok(Step { rule, direction, nodes: Vec::new(), wire: Some((s, t)) });
        }
        let nodes = tail.split_whitespace().map(|w| parse_node(w).ok_or_else(bad)).collect::<Result<_, _>>()?;
        Ok(Step { rule, direction, nodes, wire: None })
    }
}

/// A rewrite sequence from `initial` to `result`. The result is always
/// canonicalized, so replaying ends with a canonicalization as well.
#[derive(Clone, Debug)]
pub struct ProofTrace {
    pub initial: Diagram,
    pub steps: Vec<Step>,
    pub result: Diagram,
}

impl ProofTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn uses(&self, rule: &str) -> bool {
        self.steps.iter().any(|s| s.rule == rule)
    }

    pub fn rule_names(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.rule.as_str()).collect()
    }

    /// One step per line.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }

    /// Re-applies every step to `initial`; each step must pick out exactly
    /// the recorded nodes.
    pub fn replay(&self, ctx: &Context) -> Result<Diagram, RuleError> {
        self.replay_states(ctx).map(|mut v| v.pop().expect("at least the initial state"))
    }

    /// Every intermediate diagram, starting with `initial` and ending with
    /// the canonicalized result.
    pub fn replay_states(&self, ctx: &Context) -> Result<Vec<Diagram>, RuleError> {
        let mut states = vec![self.initial.clone()];
        let mut cur = self.initial.clone();
        for step in &self.steps {
            cur = normalize::apply_step(&cur, step, ctx)?;
            states.push(cur.clone());
        }
        states.push(cur.canonicalize());
        Ok(states)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_text_round_trips() {
        let steps = [
            Step { rule: "snake".into(), direction: Direction::Forward, nodes: vec![NodeId(3), NodeId(4)], wire: None },
            Step {
                rule: "snake".into(),
                direction: Direction::Backward,
                nodes: vec![],
                wire: Some((Source::Input(0), Target::Node(NodeId(2), 1))),
            },
            Step {
                rule: "spider".into(),
                direction: Direction::Forward,
                nodes: vec![],
                wire: Some((Source::Node(NodeId(7), 0), Target::Output(2))),
            },
        ];
        for s in steps {
            let text = s.to_string();
            assert_eq!(text.parse::<Step>().unwrap(), s, "{text}");
        }
        assert_eq!(steps_text(), "snake forward @ n3 n4");
        assert!("snake sideways @ n1".parse::<Step>().is_err());
        assert!("snake forward n1".parse::<Step>().is_err());
    }

    fn steps_text() -> String {
        Step { rule: "snake".into(), direction: Direction::Forward, nodes: vec![NodeId(3), NodeId(4)], wire: None }.to_string()
    }
}
