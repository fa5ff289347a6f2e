//! Marked-point orders, relation polygons and admissible chains, and the
//! SVG drawing.
//!
//!     cargo run --example core_diagram -- a3.svg

use koszul_dual::diagram::{admissible_chains, marked_order, relation_polygon, render_svg};
use koszul_dual::dual::{build_dual, SignConvention};
use koszul_dual::pattern::fixtures;

fn main() {
    let a3 = fixtures::a3();
    for p in a3.vertices() {
        let c = marked_order(&a3, p);
        let show = |v: Vec<_>| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<String>>()
                .join(" ")
        };
        println!(
            "S{p}: root | {} | {}",
            show(c.dagger_side()),
            show(c.plain_side())
        );
    }
    for j in 1..=a3.m() {
        let w = relation_polygon(&a3, j).unwrap();
        println!("polygon {j} ({}-gon): {w}", w.sides());
    }
    let dual = build_dual(&a3, SignConvention::default());
    for c in admissible_chains(&a3, &dual) {
        println!("chain {:?} -> {}", c.vertices, c.value);
    }
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, render_svg(&a3)).expect("writable output");
        println!("wrote {path}");
    }
}
