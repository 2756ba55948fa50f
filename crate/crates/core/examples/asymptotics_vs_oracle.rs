//! Smooth-point asymptotics against the exact power-series oracle.
//!
//! For each instance the diagonal is expanded exactly by the kernel
//! recurrence, then compared with the saddle-point estimate
//! `sum C x^(-dn) n^((1-d)/2)` over the minimal codiagonal roots.
//!
//! Run with: `cargo run --release --example asymptotics_vs_oracle`

use num_traits::ToPrimitive;
use symdiag::oracle::{diagonal, expand};
use symdiag::smoothasm::asm_m3;
use symdiag::symmlin::{parse_rational, SymPoly};

fn main() {
    for (a, b) in [("0", "1"), ("-1", "2"), ("0", "8")] {
        let (ar, br) = (parse_rational(a).unwrap(), parse_rational(b).unwrap());
        let est = asm_m3(&ar, &br).expect("estimate failed");
        println!("a = {a}, b = {b}: {} asymptotic term(s)", est.terms.len());
        for t in &est.terms {
            println!(
                "  base {:.6}{:+.6}i, power {}, constant {:.6}{:+.6}i",
                t.base.re, t.base.im, t.power, t.constant.re, t.constant.im
            );
        }
        let arr = expand(&SymPoly::m3(ar, br), 30).expect("expansion failed");
        let diag = diagonal(&arr);
        println!("    n        exact       predicted   rel.err");
        for n in [10usize, 15, 20, 25, 30] {
            let exact = diag[n].to_f64().unwrap();
            let predicted = est.evaluate(n);
            println!(
                "  {n:>3}  {exact:>12.5e}  {predicted:>12.5e}   {:.4}",
                ((predicted - exact) / exact).abs()
            );
        }
        println!();
    }
}
