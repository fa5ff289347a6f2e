//! Minimal projective resolutions of the simple modules, and the Ext table
//! checked against the dual's hom spaces.
//!
//!     cargo run --example ext_oracle

use koszul_dual::dual::{build_dual, SignConvention};
use koszul_dual::ext::{minimal_resolution, oracle_agreement, projective};
use koszul_dual::pattern::fixtures;

fn main() {
    let a1 = fixtures::a1();
    println!("{a1}");
    for i in a1.vertices() {
        println!(
            "  P({i}) has dimension vector {:?}",
            projective(&a1, i).unwrap().dims
        );
    }
    let r = minimal_resolution(&a1, 3, 5).unwrap();
    for (d, step) in r.steps.iter().enumerate() {
        let terms: Vec<String> = step
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(q, &m)| {
                if m == 1 {
                    format!("P({q})")
                } else {
                    format!("P({q})^{m}")
                }
            })
            .collect();
        println!(
            "  term {d} of the resolution of S(3): {}",
            terms.join(" + ")
        );
    }

    let a3 = fixtures::a3();
    let report = oracle_agreement(&build_dual(&a3, SignConvention::default())).unwrap();
    println!(
        "{a3}: {} mismatches between Ext and hom dimensions",
        report.mismatches.len()
    );
}
