//! Regenerates `data/zeros.csv` by scanning sign changes of Ξ(t).
//!
//!     cargo run --release -p hp-core --example gen_zeros > crates/core/data/zeros.csv

use hp_core::zeros::{format_zeros_csv, scan_zeros, CERTIFICATION_TOL, SCAN_STEP};

fn main() {
    let zeros = scan_zeros(0.0, 240.0, SCAN_STEP, 1e-12).expect("scan failed");
    let first: Vec<_> = zeros.into_iter().take(100).collect();
    assert_eq!(first.len(), 100, "expected 100 zeros below t = 240");
    for z in &first {
        assert!(
            z.residual < CERTIFICATION_TOL,
            "zero {} has residual {}",
            z.index,
            z.residual
        );
    }
    print!("{}", format_zeros_csv(&first));
}
