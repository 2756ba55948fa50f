//! Root structure of the codiagonal `Q(x, ..., x)` across the critical
//! parameter: a unique positive minimal root below `c_*`, a doubled root
//! at `c_*`, and an off-axis conjugate pair above.
//!
//! Run with: `cargo run --example codiagonal_roots`

use symdiag::polyroots::{find_roots, minimal_modulus_roots};
use symdiag::symmlin::{big, SymPoly};

fn main() {
    for d in [3usize, 4, 5] {
        let c_star = big(d as i64 - 1).pow(d as i32 - 1);
        println!("d = {d}, c_* = {c_star}");
        for (label, c) in [
            ("c_* - 1", c_star.clone() - big(1)),
            ("c_*    ", c_star.clone()),
            ("c_* + 1", c_star.clone() + big(1)),
        ] {
            let q = SymPoly::grz(c, d);
            let rs = find_roots(&q.codiagonal(), 1e-10).expect("root finding failed");
            let min = minimal_modulus_roots(&rs);
            let desc: Vec<String> = min
                .iter()
                .map(|&(z, m)| format!("{:.6}{:+.6}i (x{m})", z.re, z.im))
                .collect();
            println!(
                "  {label}: {} minimal root(s): {}",
                min.len(),
                desc.join(", ")
            );
        }
        println!();
    }
}
