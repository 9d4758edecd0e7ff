//! The textual diagram language.
//!
//! ```text
//! term  := par (">>" par)*
//! par   := atom ("||" atom)*
//! atom  := id(T) | swap(T, T) | delta(O) | gamma(O) | dualiser(O)
//!        | cap(O) | cup(O) | dag(term) | transp(term) | conj(term)
//!        | box(name : T, .. -> T, ..) | scalar(a+bi)
//!        | spider(O : T, .. -> T, ..) | empty | "(" term ")"
//! T     := O | O "*"
//! ```
//!
//! `>>` composes left to right (bottom to top in pictures) and binds more
//! loosely than `||`.

use std::collections::BTreeMap;

use dualspider::diagram::{BoxGen, Diagram, Generator, SpiderGen, Source, Target, WireType};
use dualspider::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
    Syntax { line: usize, column: usize, expected: Vec<String>, found: String },
    #[error("{line}:{column}: {message}")]
    Type { line: usize, column: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::Type { line, column, .. } => (*line, *column),
        }
    }
}

pub fn parse(src: &str) -> Result<Diagram, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let d = p.term()?;
    p.ws();
    if p.pos < src.len() {
        return Err(p.expected(&["`>>`", "`||`", "end of input"]));
    }
    Ok(d)
}

/// A lone complex literal such as `1`, `-0.5i` or `1.5-2i`.
pub fn parse_complex(text: &str) -> Option<C64> {
    let mut p = Parser { src: text, pos: 0 };
    let z = p.complex().ok()?;
    p.ws();
    (p.pos == text.len()).then_some(z)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn expected(&self, what: &[&str]) -> ParseError {
        let (line, column) = self.line_col(self.pos);
        let found = match self.rest().chars().next() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        };
        ParseError::Syntax { line, column, expected: what.iter().map(|s| s.to_string()).collect(), found }
    }

    fn type_error(&self, at: usize, message: String) -> ParseError {
        let (line, column) = self.line_col(at);
        ParseError::Type { line, column, message }
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.expected(&[&format!("`{tok}`")]))
        }
    }

    fn name(&mut self) -> Option<&'a str> {
        self.ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars.find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_')).map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    fn object(&mut self) -> Result<&'a str, ParseError> {
        self.name().ok_or_else(|| self.expected(&["object name"]))
    }

    fn wire_type(&mut self) -> Result<WireType, ParseError> {
        let o = self.object()?;
        Ok(if self.eat("*") { WireType::dual_of(o) } else { WireType::base(o) })
    }

    /// Possibly empty, comma separated; stops before `stop`.
    fn type_list(&mut self, stop: &str) -> Result<Vec<WireType>, ParseError> {
        let mut ts = Vec::new();
        self.ws();
        if self.rest().starts_with(stop) {
            return Ok(ts);
        }
        loop {
            ts.push(self.wire_type()?);
            if !self.eat(",") {
                return Ok(ts);
            }
        }
    }

    fn term(&mut self) -> Result<Diagram, ParseError> {
        let mut d = self.par()?;
        loop {
            self.ws();
            let at = self.pos;
            if !self.eat(">>") {
                return Ok(d);
            }
            let next = self.par()?;
            d = d.then(&next).map_err(|e| self.type_error(at, e.to_string()))?;
        }
    }

    fn par(&mut self) -> Result<Diagram, ParseError> {
        let mut d = self.atom()?;
        while self.eat("||") {
            d = Diagram::tensor(&d, &self.atom()?);
        }
        Ok(d)
    }

    fn atom(&mut self) -> Result<Diagram, ParseError> {
        const ATOMS: &[&str] = &[
            "`(`", "`id`", "`swap`", "`delta`", "`gamma`", "`dualiser`", "`cap`", "`cup`", "`dag`", "`transp`",
            "`conj`", "`box`", "`scalar`", "`spider`", "`empty`",
        ];
        if self.eat("(") {
            let d = self.term()?;
            self.expect(")")?;
            return Ok(d);
        }
        let start = self.pos;
        let Some(head) = self.name() else { return Err(self.expected(ATOMS)) };
        if head == "empty" {
            return Ok(Diagram::empty());
        }
        let single: Option<fn(&str) -> Diagram> = match head {
            "delta" => Some(|o| Diagram::delta(o)),
            "gamma" => Some(|o| Diagram::gamma(o)),
            "dualiser" => Some(|o| Diagram::dualiser(o)),
            "cap" => Some(|o| Diagram::cap(o)),
            "cup" => Some(|o| Diagram::cup(o)),
            _ => None,
        };
        let known = single.is_some()
            || matches!(head, "id" | "swap" | "dag" | "transp" | "conj" | "box" | "scalar" | "spider");
        if !known {
            self.pos = start;
            return Err(self.expected(ATOMS));
        }
        self.expect("(")?;
        let d = match head {
            _ if single.is_some() => single.unwrap()(self.object()?),
            "id" => Diagram::identity(self.wire_type()?),
            "swap" => {
                let x = self.wire_type()?;
                self.expect(",")?;
                Diagram::swap(x, self.wire_type()?)
            }
            "dag" => self.term()?.dagger(),
            "transp" => self.term()?.transpose(),
            "conj" => self.term()?.conjugate(),
            "box" => {
                let name = self.name().ok_or_else(|| self.expected(&["box name"]))?;
                self.expect(":")?;
                let ins = self.type_list("->")?;
                self.expect("->")?;
                let outs = self.type_list(")")?;
                Diagram::boxed(BoxGen::new(name, ins, outs))
            }
            "spider" => {
                let o = self.object()?;
                self.expect(":")?;
                let legs_at = self.pos;
                let ins = self.type_list("->")?;
                self.expect("->")?;
                let outs = self.type_list(")")?;
                let legs = |ts: &[WireType]| -> Result<Vec<bool>, ParseError> {
                    ts.iter()
                        .map(|t| {
                            if t.object.name() == o {
                                Ok(t.dualized)
                            } else {
                                Err(self.type_error(legs_at, format!("spider over {o} has a leg of type {t}")))
                            }
                        })
                        .collect()
                };
                let s = SpiderGen { object: o.into(), inputs: legs(&ins)?, outputs: legs(&outs)? };
                Diagram::generator(Generator::Spider(s))
            }
            "scalar" => Diagram::scalar(self.complex()?),
            _ => unreachable!("checked above"),
        };
        self.expect(")")?;
        Ok(d)
    }

    fn number(&mut self) -> Option<f64> {
        self.ws();
        let rest = self.rest();
        let bytes = rest.as_bytes();
        let mut i = 0;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i > s
        };
        let int = digits(&mut i);
        let mut frac = false;
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            frac = digits(&mut i);
        }
        if !int && !frac {
            return None;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) {
                i = j;
            }
        }
        let x = rest[..i].parse().ok()?;
        self.pos += i;
        Some(x)
    }

    fn sign(&mut self) -> Option<f64> {
        if self.eat("+") {
            Some(1.0)
        } else if self.eat("-") {
            Some(-1.0)
        } else {
            None
        }
    }

    /// `a`, `bi`, `a+bi` or `a-bi`.
    fn complex(&mut self) -> Result<C64, ParseError> {
        const WHAT: &[&str] = &["complex literal `a+bi`"];
        let s1 = self.sign().unwrap_or(1.0);
        let a = self.number().ok_or_else(|| self.expected(WHAT))? * s1;
        if self.eat("i") {
            return Ok(C64::new(0.0, a));
        }
        let Some(s2) = self.sign() else { return Ok(C64::new(a, 0.0)) };
        let b = self.number().ok_or_else(|| self.expected(WHAT))?;
        self.expect("i")?;
        Ok(C64::new(a, s2 * b))
    }
}

fn ids(ts: &[WireType]) -> Vec<String> {
    ts.iter().map(|t| format!("id({t})")).collect()
}

/// One layer: `id`s around `middle`.
fn layer(before: &[WireType], middle: String, after: &[WireType]) -> String {
    let mut parts = ids(before);
    parts.push(middle);
    parts.extend(ids(after));
    parts.join(" || ")
}

/// Prints `d` as a term: each node gets its own layer, with adjacent swaps
/// bringing its input wires to the left edge first.
pub fn print(d: &Diagram) -> String {
    let order = d.topological_order().expect("diagrams are acyclic");
    let mut current: Vec<Source> = (0..d.inputs().len()).map(Source::Input).collect();
    let types: BTreeMap<Source, WireType> = d.wires().map(|(s, _)| (s, d.source_type(s).expect("wired port"))).collect();
    let mut layers: Vec<String> = Vec::new();

    let bring = |current: &mut Vec<Source>, wanted: &[Source], layers: &mut Vec<String>| {
        for (k, s) in wanted.iter().enumerate() {
            let mut at = current.iter().position(|c| c == s).expect("open wire");
            while at > k {
                let ts: Vec<WireType> = current.iter().map(|c| types[c].clone()).collect();
                let middle = format!("swap({}, {})", ts[at - 1], ts[at]);
                layers.push(layer(&ts[..at - 1], middle, &ts[at + 1..]));
                current.swap(at - 1, at);
                at -= 1;
            }
        }
    };

    for n in order {
        let g = d.node(n).expect("ordered node");
        let wanted: Vec<Source> =
            (0..g.num_inputs()).map(|i| d.source_of(Target::Node(n, i)).expect("wired input")).collect();
        bring(&mut current, &wanted, &mut layers);
        let rest: Vec<Source> = current.split_off(wanted.len());
        let rest_types: Vec<WireType> = rest.iter().map(|c| types[c].clone()).collect();
        layers.push(layer(&[], g.to_string(), &rest_types));
        current = (0..g.num_outputs()).map(|j| Source::Node(n, j)).chain(rest).collect();
    }
    let wanted: Vec<Source> =
        (0..d.outputs().len()).map(|j| d.source_of(Target::Output(j)).expect("wired output")).collect();
    bring(&mut current, &wanted, &mut layers);

    if layers.is_empty() {
        let plain = ids(d.inputs());
        return if plain.is_empty() { "empty".into() } else { plain.join(" || ") };
    }
    // a layer that only consumes wires still needs the untouched ones
    // spelled out, which `layer` already does; parallel binds tighter, so
    // no parentheses are needed
    layers.join("\n>> ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use dualspider::hilb::c;

    #[test]
    fn snake_composite() {
        let d = parse("id(Q) || cup(Q) >> cap(Q) || id(Q)").unwrap();
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.boundary_signature(), (vec![WireType::base("Q")], vec![WireType::base("Q")]));
        let direct = Diagram::tensor(&Diagram::identity("Q"), &Diagram::cup("Q"))
            .then(&Diagram::tensor(&Diagram::cap("Q"), &Diagram::identity("Q")))
            .unwrap();
        assert!(d.is_isomorphic(&direct));
    }

    #[test]
    fn frobenius_lhs() {
        let d = parse("delta(Q) >> dag(delta(Q))").unwrap();
        let direct = Diagram::delta("Q").then(&Diagram::delta_dagger("Q")).unwrap();
        assert!(d.is_isomorphic(&direct));
    }

    #[test]
    fn unclosed_paren() {
        let e = parse("delta(Q >>").unwrap_err();
        match e {
            ParseError::Syntax { line, column, expected, .. } => {
                assert_eq!((line, column), (1, 9));
                assert_eq!(expected, ["`)`"]);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn type_errors_are_positioned() {
        let e = parse("delta(Q)\n  >> cap(Q)").unwrap_err();
        assert!(matches!(e, ParseError::Type { line: 2, column: 3, .. }), "{e}");
        assert!(parse("spider(Q: R -> Q)").is_err());
        assert!(matches!(parse("frob(Q)"), Err(ParseError::Syntax { column: 1, .. })));
    }

    #[test]
    fn complex_literals() {
        for (text, z) in [
            ("scalar(2)", c(2.0, 0.0)),
            ("scalar(1.5-2.0i)", c(1.5, -2.0)),
            ("scalar(-0.5i)", c(0.0, -0.5)),
            ("scalar( 1e-3 + 4.i )", c(1e-3, 4.0)),
        ] {
            let d = parse(text).unwrap();
            let (_, g) = d.nodes().next().unwrap();
            assert_eq!(g, &Generator::Scalar(z), "{text}");
        }
    }

    #[test]
    fn boxes_variants_and_spiders() {
        let d = parse("box(f: Q, R* -> ) || transp(box(g: Q -> Q)) >> empty || spider(Q: Q* -> Q, Q)").unwrap();
        assert_eq!(d.outputs().len(), 2);
        let again = parse(&print(&d)).unwrap();
        assert!(again.is_isomorphic(&d));
        assert_eq!(print(&Diagram::empty()), "empty");
        assert_eq!(print(&Diagram::identity("Q")), "id(Q)");
    }

    #[test]
    fn printing_round_trips_through_swaps() {
        let d = parse("cup(Q) || id(R) >> id(Q*) || swap(Q, R) >> id(Q*) || box(k: R -> Q) || id(Q)").unwrap();
        assert!(parse(&print(&d)).unwrap().is_isomorphic(&d));
    }
}
