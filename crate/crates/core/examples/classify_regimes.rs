//! Exact positivity-regime classification for both families.
//!
//! The three-variable family `1 - e1 + a e2 + b e3` transitions along a
//! piecewise boundary in the (a, b) plane; the one-parameter family
//! `1 - e1 + c e_d` transitions at `c = (d-1)^(d-1)`.  All comparisons
//! are exact rational arithmetic.
//!
//! Run with: `cargo run --example classify_regimes`

use symdiag::smoothasm::{classify_grz, classify_m3, grz_critical_parameter};
use symdiag::symmlin::parse_rational;

fn main() {
    println!("three-variable family:");
    for (a, b) in [
        ("-4", "30"),
        ("-4", "36"),
        ("-4", "40"),
        ("0", "7/2"),
        ("0", "4"),
        ("0", "9/2"),
        ("1", "-1"),
        ("2", "-9"),
        ("2", "-15/2"),
    ] {
        let label = classify_m3(&parse_rational(a).unwrap(), &parse_rational(b).unwrap());
        println!("  a = {a:>4}, b = {b:>5}  ->  {label:?}");
    }

    println!();
    println!("one-parameter family, threshold c_* = (d-1)^(d-1):");
    for d in 3..=6usize {
        let c_star = grz_critical_parameter(d);
        for (label, c) in [
            ("below", c_star.clone() - parse_rational("1").unwrap()),
            ("at   ", c_star.clone()),
            ("above", c_star.clone() + parse_rational("1").unwrap()),
        ] {
            println!("  d = {d}, c {label} threshold ({c}): {:?}", classify_grz(&c, d));
        }
    }
}
