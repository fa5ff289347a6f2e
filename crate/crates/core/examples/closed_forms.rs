//! Compare duals of the uniform patterns (i, i + k) with their closed form.
//!
//!     cargo run --example closed_forms

use koszul_dual::dual::{compare_with_closed_form, SignConvention};

fn main() {
    for (n, k) in [(4, 2), (5, 2), (6, 3), (4, 4), (6, 6), (9, 3)] {
        let r = compare_with_closed_form(n, k, SignConvention::default()).unwrap();
        println!(
            "n={n} k={k}: {} hom mismatches, {} unit-step chains, {}",
            r.hom_mismatches.len(),
            r.chains.len(),
            if r.passed { "pass" } else { "FAIL" }
        );
        for c in r.chains.iter().take(2) {
            println!("  {:?} -> {}", c.chain, c.value);
        }
    }
}
