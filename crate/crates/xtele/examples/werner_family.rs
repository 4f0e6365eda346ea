//! The Werner family p|Psi-><Psi-| + (1-p) I/4 swept across p, printing the
//! closed-form invariants and the two classification thresholds.
//!
//! Expected structure: concurrence turns on at p = 1/3 together with
//! nonclassical teleportation, while CHSH violation needs p > 1/sqrt(2).
//!
//! ```sh
//! cargo run -p xtele --example werner_family
//! ```

use xtele::metrics;
use xtele::states::XState;

fn main() {
    println!("{:>5} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}  flags (E/T/B)", "p", "N", "M", "B_max", "C", "F1", "F2");
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let x = XState::werner(p).unwrap();
        let m = metrics::m_closed_form(&x);
        let n = metrics::n_closed_form(&x);
        let fr = metrics::fidelity_report(&x);
        let flags = metrics::classify(&x);
        println!(
            "{:5.2} {:8.4} {:8.4} {:8.4} {:8.4} {:8.4} {:8.4}  {}{}{}",
            p,
            n,
            m,
            2.0 * m.sqrt(),
            fr.concurrence,
            fr.f1,
            fr.f2,
            if flags.entangled { 'E' } else { '-' },
            if flags.nonclassical_teleport { 'T' } else { '-' },
            if flags.violates_chsh { 'B' } else { '-' },
        );

        // the closed forms the sweep is built on
        assert!((m - 2.0 * p * p).abs() < 1e-12);
        assert!((fr.f1 - (1.0 + p) / 2.0).abs() < 1e-12);
        assert!((fr.f2 - (1.0 + p) / 2.0).abs() < 1e-12);
        assert!((fr.concurrence - (0.0f64).max((3.0 * p - 1.0) / 2.0)).abs() < 1e-12);
    }

    // bisect the two thresholds
    let teleport_threshold = bisect(|p| {
        metrics::classify(&XState::werner(p).unwrap()).nonclassical_teleport
    });
    let chsh_threshold = bisect(|p| metrics::classify(&XState::werner(p).unwrap()).violates_chsh);
    println!("\nnonclassical teleportation for p > {teleport_threshold:.10}  (1/3 = {:.10})", 1.0 / 3.0);
    println!("CHSH violation for            p > {chsh_threshold:.10}  (1/sqrt(2) = {:.10})", std::f64::consts::FRAC_1_SQRT_2);
    assert!((teleport_threshold - 1.0 / 3.0).abs() < 1e-10);
    assert!((chsh_threshold - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    println!("\nall Werner-family checks passed");
}

fn bisect(flag: impl Fn(f64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    assert!(!flag(lo) && flag(hi));
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if flag(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
