use crate::diagram::Diagram;

/// A spider whose dualiser cannot be dropped, next to the compact-closed
/// wiring it would collapse to if it could.
#[derive(Clone, Debug)]
pub struct DotCase {
    pub name: &'static str,
    pub dotted: Diagram,
    pub plain: Diagram,
}

fn seq(parts: &[&Diagram]) -> Diagram {
    let mut d = parts[0].clone();
    for p in &parts[1..] {
        d = d.then(p).expect("well typed");
    }
    d
}

/// The six orientation-changing two-legged spiders on `object`: `d`, `d†`,
/// and the pairings/copairings whose two legs share an orientation.
pub fn dot_cases(object: &str) -> Vec<DotCase> {
    let o = object;
    let d = Diagram::dualiser(o);
    let dd = Diagram::dualiser_dagger(o);
    let pairing = seq(&[&Diagram::delta_dagger(o), &Diagram::gamma(o)]);
    let copairing = seq(&[&Diagram::gamma_dagger(o), &Diagram::delta(o)]);
    let dual = format!("{o}*");
    vec![
        DotCase { name: "dualiser", dotted: d.clone(), plain: Diagram::identity(o) },
        DotCase { name: "dualiser-dagger", dotted: dd.clone(), plain: Diagram::identity(dual.as_str()) },
        DotCase { name: "pairing", dotted: pairing.clone(), plain: Diagram::cap(o) },
        DotCase {
            name: "dual-pairing",
            dotted: seq(&[&Diagram::tensor(&dd, &dd), &pairing]),
            plain: Diagram::cap(o),
        },
        DotCase { name: "copairing", dotted: copairing.clone(), plain: Diagram::cup(o) },
        DotCase {
            name: "dual-copairing",
            dotted: seq(&[&copairing, &Diagram::tensor(&d, &d)]),
            plain: Diagram::cup(o),
        },
    ]
}
