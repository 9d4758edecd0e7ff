//! Derived outputs, computed once and frozen.

use std::f64::consts::FRAC_PI_2;

use dualspider::protocols::{protocol_context, teleport_core, teleport_core_compact, transfer_core};
use dualspider::rules::normalize;
use dualspider::structures::theta_family_scan;

fn trace_text(d: &dualspider::diagram::Diagram) -> String {
    let t = normalize(d, &protocol_context()).unwrap();
    assert!(t.result.is_identity());
    t.to_text()
}

#[test]
fn core_traces() {
    assert_eq!(
        trace_text(&teleport_core()),
        "frobenius backward @ n1 n2\ncounit forward @ n3 n5\nunit forward @ n0 n4\n"
    );
    assert_eq!(trace_text(&teleport_core_compact()), "snake forward @ n0 n1\n");
    assert_eq!(trace_text(&transfer_core()), "counit forward @ n2 n3\nunit forward @ n0 n1\n");
}

#[test]
fn theta_scan_minimum() {
    // (1 + e^{2iθ})/2 vanishes at θ = π/2, where the deviation is exactly 1
    let scan = theta_family_scan(360);
    assert!((scan.min_deviation - 1.0).abs() < 1e-12);
    assert!((scan.argmin - FRAC_PI_2).abs() < 1e-12);
    assert_eq!(scan.samples.len(), 360);
}
