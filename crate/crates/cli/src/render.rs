//! Graph renderings: Graphviz DOT and a plain-text layer listing.

use std::fmt::Write;

use dualspider::diagram::{Diagram, Source, Target};

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn source_id(s: &Source) -> String {
    match s {
        Source::Input(i) => format!("in{i}"),
        Source::Node(n, _) => n.to_string(),
    }
}

fn target_id(t: &Target) -> String {
    match t {
        Target::Output(j) => format!("out{j}"),
        Target::Node(n, _) => n.to_string(),
    }
}

/// One graph node per generator and per boundary port. Edges follow the
/// flow of the diagram; a wire of dual type keeps its place but its arrow
/// points back towards its source.
pub fn to_dot(d: &Diagram) -> String {
    let mut out = String::from("digraph diagram {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, t) in d.inputs().iter().enumerate() {
        let _ = writeln!(out, "  in{i} [shape=plaintext, label=\"in{i}: {}\"];", dot_escape(&t.to_string()));
    }
    for (j, t) in d.outputs().iter().enumerate() {
        let _ = writeln!(out, "  out{j} [shape=plaintext, label=\"out{j}: {}\"];", dot_escape(&t.to_string()));
    }
    for (n, g) in d.nodes() {
        let _ = writeln!(out, "  {n} [label=\"{}\"];", dot_escape(&g.to_string()));
    }
    for (s, t) in d.wires() {
        let ty = d.source_type(s).expect("wired port");
        let mut attrs = vec![format!("label=\"{}\"", dot_escape(&ty.to_string()))];
        if let Source::Node(_, j) = s {
            attrs.push(format!("taillabel=\"{j}\""));
        }
        if let Target::Node(_, k) = t {
            attrs.push(format!("headlabel=\"{k}\""));
        }
        if ty.dualized {
            attrs.push("dir=back".into());
        }
        let _ = writeln!(out, "  {} -> {} [{}];", source_id(&s), target_id(&t), attrs.join(", "));
    }
    out.push_str("}\n");
    out
}

fn fmt_source(s: &Source) -> String {
    match s {
        Source::Input(i) => format!("in{i}"),
        Source::Node(n, j) => format!("{n}.{j}"),
    }
}

fn fmt_target(t: &Target) -> String {
    match t {
        Target::Output(j) => format!("out{j}"),
        Target::Node(n, k) => format!("{n}.{k}"),
    }
}

/// Boundary, then one line per node in topological order with where each
/// input comes from and where each output goes.
pub fn to_ascii(d: &Diagram) -> String {
    let types = |ts: &[dualspider::diagram::WireType]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
    let mut out = format!("[{}] -> [{}]\n", types(d.inputs()), types(d.outputs()));
    let order = d.topological_order().expect("diagrams are acyclic");
    for n in order {
        let g = d.node(n).expect("ordered node");
        let ins: Vec<String> =
            (0..g.num_inputs()).map(|k| d.source_of(Target::Node(n, k)).map_or("?".into(), |s| fmt_source(&s))).collect();
        let outs: Vec<String> =
            (0..g.num_outputs()).map(|j| d.target_of(Source::Node(n, j)).map_or("?".into(), |t| fmt_target(&t))).collect();
        let _ = writeln!(out, "{:>4}  {g}  <- [{}]  -> [{}]", n.to_string(), ins.join(", "), outs.join(", "));
    }
    for (s, t) in d.wires() {
        if let (Source::Input(_), Target::Output(_)) = (s, t) {
            let _ = writeln!(out, "      wire {} -> {}", fmt_source(&s), fmt_target(&t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn dot_has_one_node_per_generator_and_terminal() {
        let d = parse("id(Q) || cup(Q) >> cap(Q) || id(Q)").unwrap();
        let dot = to_dot(&d);
        assert!(dot.starts_with("digraph diagram {"));
        assert!(dot.contains("n0 [label=\"cup(Q)\"]"));
        assert!(dot.contains("n1 [label=\"cap(Q)\"]"));
        assert!(dot.contains("in0 [shape=plaintext"));
        assert!(dot.contains("out0 [shape=plaintext"));
        // the Q* wire from the cup into the cap is drawn reversed
        assert!(dot.contains("n0 -> n1 [label=\"Q*\", taillabel=\"0\", headlabel=\"1\", dir=back];"), "{dot}");
        assert_eq!(dot.matches(" -> ").count(), 3);
    }

    #[test]
    fn ascii_lists_nodes_in_order() {
        let d = parse("delta(Q) >> id(Q) || gamma(Q)").unwrap();
        let text = to_ascii(&d);
        assert_eq!(text, "[Q] -> [Q]\n  n0  delta(Q)  <- [in0]  -> [out0, n1.0]\n  n1  gamma(Q)  <- [n0.1]  -> []\n");
        assert!(to_ascii(&parse("id(Q)").unwrap()).contains("wire in0 -> out0"));
    }
}
