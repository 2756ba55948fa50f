//! Regime map over the (a, b) parameter plane as CSV.
//!
//! Each grid point carries its exact regime label and the three boundary
//! curves `b = -9a`, `b = 2 - 3a + 2(1-a)^(3/2)`, `b = -a^3`, which is
//! enough to re-plot the phase diagram with any plotting tool.
//!
//! Run with: `cargo run --example regime_sweep > regimes.csv`

use num_rational::BigRational;
use symdiag::cli::m3_bound;
use symdiag::smoothasm::{classify_m3, RegimeLabel};

fn main() {
    let steps = 19;
    println!("a,b,regime,bound");
    for i in 0..steps {
        let a = -5.0 + 9.0 * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let b = -30.0 + 75.0 * j as f64 / (steps - 1) as f64;
            let regime = match classify_m3(
                &BigRational::from_float(a).unwrap(),
                &BigRational::from_float(b).unwrap(),
            ) {
                RegimeLabel::EventuallyPositive => "positive",
                RegimeLabel::InfinitelyManySignChanges => "oscillating",
                RegimeLabel::BoundaryDegenerate(_) => "boundary",
            };
            println!("{a},{b},{regime},{}", m3_bound(a));
        }
    }
}
