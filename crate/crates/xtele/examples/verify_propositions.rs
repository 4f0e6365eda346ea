//! The three verification campaigns at desk scale: CHSH violation implies
//! nonclassical teleportation; the fidelity gap never exceeds 1/9 (and a
//! hill climb actually attains it); B_max sits between the two concurrence
//! bounds.
//!
//! ```sh
//! cargo run -p xtele --example verify_propositions --release
//! ```

use xtele::ensemble;
use xtele::states::EnsembleSpec;

fn main() {
    let spec = EnsembleSpec::new(100_000, 42).unwrap();

    let p1 = ensemble::verify_prop1(&spec);
    println!(
        "[{}] {} states: counterexamples = {}, min F2 among CHSH violators = {:.6}",
        p1.proposition_id,
        p1.samples_tested,
        p1.counterexamples.len(),
        p1.extremal_value,
    );
    assert!(p1.passed());
    assert!(p1.extremal_value > 2.0 / 3.0);

    let p2 = ensemble::verify_prop2(&spec, true);
    println!(
        "[{}] {} states: counterexamples = {}, max gap after refinement = {:.12}",
        p2.proposition_id,
        p2.samples_tested,
        p2.counterexamples.len(),
        p2.extremal_value,
    );
    assert!(p2.passed());
    assert!(p2.extremal_value >= 1.0 / 9.0 - 1e-6);
    assert!(p2.extremal_value <= 1.0 / 9.0 + 1e-10);

    let vw = ensemble::verify_vw_bound(&spec);
    println!(
        "[{}] {} states: counterexamples = {}, worst bound margin = {:.3e}",
        vw.proposition_id,
        vw.samples_tested,
        vw.counterexamples.len(),
        vw.extremal_value,
    );
    assert!(vw.passed());
    assert!(vw.extremal_value <= 1e-9);

    println!("\nreport JSON for the gap campaign:");
    println!("{}", serde_json::to_string_pretty(&p2).unwrap());
    println!("\nall campaigns passed");
}
