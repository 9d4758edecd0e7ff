mod common;

use common::{basis_diagram, context, host_params, interp, max_gap, random_application};
use dualspider::diagram::Diagram;
use dualspider::hilb::{eval, eval_with_order, random_diagram, ComplexTensor, ContractionOrder};
use dualspider::rules::{normalize, Context};
use dualspider::structures::Builtin;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn matrix(d: &Diagram, b: Builtin) -> ComplexTensor {
    eval(d, &interp(b)).unwrap().as_matrix(d.outputs().len())
}

fn basis() -> impl Strategy<Value = Builtin> {
    prop::sample::select(Builtin::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_respects_composition(seed in any::<u64>(), b in basis()) {
        let f = random_diagram(&host_params(), seed);
        let ff = f.then(&f.dagger()).unwrap();
        let want = matrix(&f.dagger(), b).matmul(&matrix(&f, b)).unwrap();
        prop_assert!(matrix(&ff, b).max_diff(&want) <= TOL);
    }

    #[test]
    fn eval_respects_tensor(s1 in any::<u64>(), s2 in any::<u64>(), b in basis()) {
        let (f, g) = (random_diagram(&host_params(), s1), random_diagram(&host_params(), s2));
        let want = matrix(&f, b).kron(&matrix(&g, b));
        prop_assert!(matrix(&Diagram::tensor(&f, &g), b).max_diff(&want) <= TOL);
    }

    #[test]
    fn dagger_is_an_involution(seed in any::<u64>(), b in basis()) {
        let f = random_diagram(&host_params(), seed);
        prop_assert!(f.dagger().dagger().is_isomorphic(&f));
        prop_assert!(matrix(&f.dagger(), b).max_diff(&matrix(&f, b).adjoint()) <= TOL);
    }

    #[test]
    fn contraction_order_does_not_matter(seed in any::<u64>(), b in basis()) {
        let f = random_diagram(&host_params(), seed);
        let i = interp(b);
        let greedy = eval_with_order(&f, &i, ContractionOrder::Greedy).unwrap();
        for order in [ContractionOrder::Sequential, ContractionOrder::Reverse] {
            prop_assert!(eval_with_order(&f, &i, order).unwrap().max_diff(&greedy) <= TOL);
        }
    }

    #[test]
    fn canonical_form_is_isomorphic(seed in any::<u64>()) {
        let f = random_diagram(&host_params(), seed);
        let canon = f.canonicalize();
        prop_assert!(canon.is_isomorphic(&f));
        prop_assert_eq!(canon.to_string(), canon.canonicalize().to_string());
    }

    #[test]
    fn rewrites_preserve_eval(seed in any::<u64>()) {
        if let Some((rule, before, after)) = random_application(seed) {
            prop_assert!(after.is_valid(), "{} produced an invalid diagram", rule);
            prop_assert!(max_gap(&before, &after) <= TOL, "{} changed the value", rule);
        }
    }

    #[test]
    fn normalization_is_sound_and_idempotent(seed in any::<u64>()) {
        let d = random_diagram(&host_params(), seed);
        let ctx = context();
        let trace = normalize(&d, &ctx).unwrap();
        prop_assert!(max_gap(&d, &trace.result) <= TOL);
        prop_assert!(trace.replay(&ctx).unwrap().is_isomorphic(&trace.result));
        let again = normalize(&trace.result, &ctx).unwrap();
        prop_assert!(again.is_empty(), "{}", again.to_text());
        for line in trace.to_text().lines() {
            prop_assert_eq!(line.parse::<dualspider::rules::Step>().unwrap().to_string(), line);
        }
    }

    #[test]
    fn connected_basis_diagrams_become_one_spider(seed in any::<u64>()) {
        let d = basis_diagram(seed);
        let nf = normalize(&d, &Context::new().dim(common::Q, 2)).unwrap().result;
        prop_assert!(nf.node_count() <= 1, "{}", nf);
        prop_assert!(max_gap(&d, &nf) <= TOL);
    }
}
