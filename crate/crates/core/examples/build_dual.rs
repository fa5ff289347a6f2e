//! Build the dual category of a pattern and list its basis and products.
//!
//!     cargo run --example build_dual

use koszul_dual::ainf::format_coefficient;
use koszul_dual::dual::{build_dual, SignConvention};
use koszul_dual::pattern::fixtures;

fn main() {
    for pattern in [fixtures::a1(), fixtures::a2(), fixtures::a3()] {
        let dual = build_dual(&pattern, SignConvention::default());
        let cat = dual.category();
        println!("{pattern}");
        println!("  objects: {}", cat.objects().join(" < "));
        for m in cat.non_identity_morphisms() {
            println!("  {} has degree {}", cat.label(m), cat.degree(m));
        }
        for (chain, term) in dual.nontrivial_products() {
            let b = term.basis().expect("stored products are nonzero");
            println!(
                "  mu^{} along {:?} = {} {}",
                chain.len() - 1,
                chain,
                format_coefficient(term.coefficient()),
                cat.label(b)
            );
        }
    }
}
