//! For quadratic patterns the dual is the graded opposite of the path
//! algebra of the complementary pattern.
//!
//!     cargo run --example quadratic

use koszul_dual::dual::{compare_quadratic, SignConvention};
use koszul_dual::pattern::{enumerate_patterns, RelationPattern};

fn main() {
    let p = RelationPattern::from_pairs(5, &[(0, 2), (2, 4), (3, 5)]).unwrap();
    let r = compare_quadratic(&p, SignConvention::default()).unwrap();
    println!(
        "{p}: complement {:?}, isomorphic {}",
        r.complement, r.isomorphic
    );

    let mut total = 0;
    let mut passed = 0;
    for n in 0..=7 {
        for p in enumerate_patterns(n)
            .into_iter()
            .filter(RelationPattern::is_quadratic)
        {
            total += 1;
            passed += usize::from(
                compare_quadratic(&p, SignConvention::default())
                    .unwrap()
                    .passed,
            );
        }
    }
    println!("{passed}/{total} quadratic patterns with n <= 7 agree");
}
