//! The exponential-growth phase transition of the d = 4 family.
//!
//! Below the critical parameter the diagonal grows like `rho^{-4n}`
//! (about 81 per index near criticality); exactly at `c = 27` the growth
//! drops to about 9 per index.  The empirical rate uses the exact
//! P-recurrence out to n = 200.
//!
//! Run with: `cargo run --release --example growth_drop`

use symdiag::smoothasm::{growth_drop_scan, growth_rate};
use symdiag::symmlin::{big, parse_rational};

fn main() {
    println!("    c   predicted/step   empirical/step   drop");
    for c in ["20", "26", "53/2", "27", "28", "40"] {
        let cr = parse_rational(c).unwrap();
        let predicted = match growth_rate(&cr, 4) {
            Ok(g) => format!("{:>14.3}", g.powi(4)),
            Err(_) => "   (critical) ".to_string(),
        };
        let scan = growth_drop_scan(&cr, 4, 200).expect("scan failed");
        println!(
            "{c:>5}   {predicted}   {:>14.3}   {}",
            scan.empirical_growth.powi(4),
            if scan.drop_detected { "YES" } else { "no" }
        );
    }
    println!();
    println!(
        "critical parameter for d = 4: c_* = {}",
        big(3).pow(3)
    );
}
