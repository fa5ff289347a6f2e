//! Check the A∞ relations on duals and compare the two sign conventions.
//!
//!     cargo run --release --example stasheff -- 5

use koszul_dual::dual::{adjudicate_sign, build_dual, SignConvention};
use koszul_dual::pattern::fixtures;

fn main() {
    let n_max: usize = std::env::args()
        .nth(1)
        .map_or(4, |s| s.parse().expect("integer n_max"));

    let a3 = fixtures::a3();
    for c in SignConvention::ALL {
        let report = build_dual(&a3, c).category().verify_ainfty(a3.n() + 1);
        println!(
            "{a3} under {c}: {} chains, {} failures",
            report.chains_checked,
            report.failures.len()
        );
        if let Some(f) = report.failures.first() {
            println!("  first: {f}");
        }
    }

    let a = adjudicate_sign(n_max).expect("n_max >= 3");
    for v in &a.verdicts {
        println!(
            "{}: {} of {} patterns fail",
            v.convention,
            v.failures.len(),
            v.patterns_checked
        );
        if let Some(f) = v.failures.first() {
            println!("  smallest: {} ({})", f.pattern, f.first_failure);
        }
    }
    match a.chosen {
        Some(c) => println!("chosen convention: {c}"),
        None => println!("no convention survives"),
    }
}
