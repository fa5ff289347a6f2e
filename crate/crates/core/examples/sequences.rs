//! Print d, d† and both sequence families for a pattern.
//!
//!     cargo run --example sequences -- fixtures/a3.json

use koszul_dual::combinatorics::{check_inversion, d_dagger, d_map};
use koszul_dual::pattern::{fixtures, PatternDocument};

fn main() {
    let pattern = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable pattern file");
            PatternDocument::parse(&text)
                .and_then(|d| d.normalize())
                .expect("valid pattern")
                .pattern
        }
        None => fixtures::a3(),
    };
    println!("{pattern}");
    let table = pattern.sequences();
    for p in pattern.vertices() {
        println!(
            "p={p:<2} d={:<4} d†={:<4} a={:?} l={} a†={:?} l†={}",
            d_map(&pattern, p).to_string(),
            d_dagger(&pattern, p).to_string(),
            table.plain[p].values,
            table.plain[p].length(),
            table.dagger[p].values,
            table.dagger[p].length(),
        );
    }
    let inv = check_inversion(&pattern);
    println!(
        "inversion round trips: {} counterexamples",
        inv.counterexamples.len()
    );
}
