//! Run the full verification suite over every pattern up to a size.
//!
//!     cargo run --release --example sweep -- 6

use koszul_dual::service::{cmd_sweep, render, Format, Options};

fn main() {
    let n_max = std::env::args()
        .nth(1)
        .map_or(5, |s| s.parse().expect("integer n_max"));
    let opts = Options {
        n_max: Some(n_max),
        ..Options::default()
    };
    let report = cmd_sweep(&opts).expect("n_max within the ceiling");
    print!("{}", render(&report, Format::Human));
    std::process::exit(report.exit_code());
}
