//! Exact diagonal coefficients and sign patterns.
//!
//! The power series of `1/Q` is expanded with exact rational arithmetic
//! via the kernel identity `Q * F = 1`; the diagonal slice reveals the
//! sign behavior that the asymptotic classification predicts.
//!
//! Run with: `cargo run --release --example exact_diagonal`

use symdiag::oracle::{diagonal, expand, rational_text, sign_changes, sign_profile};
use symdiag::symmlin::{big, parse_rational, SymPoly};

fn main() {
    // all-ones family: every coefficient is exactly 1
    let q = SymPoly::new(3, vec![big(1), big(-1), big(1), big(-1)]).unwrap();
    let diag = diagonal(&expand(&q, 8).unwrap());
    println!(
        "1 - e1 + e2 - e3:       {:?} ...",
        diag.iter().take(6).map(rational_text).collect::<Vec<_>>()
    );

    // central 4-nomials at c = 0: delta_n = (4n)!/(n!)^4
    let q = SymPoly::grz(big(0), 4);
    let diag = diagonal(&expand(&q, 5).unwrap());
    println!(
        "1 - e1 (d=4):           {:?}",
        diag.iter().map(rational_text).collect::<Vec<_>>()
    );

    // supercritical: oscillating signs
    let q = SymPoly::grz(big(28), 4);
    let diag = diagonal(&expand(&q, 12).unwrap());
    println!(
        "1 - e1 + 28 e4: profile {:?}, {} sign changes up to n = 12",
        sign_profile(&diag, 1),
        sign_changes(&diag)
    );

    // rational parameters work throughout
    let q = SymPoly::m3(parse_rational("-1/2").unwrap(), parse_rational("3/4").unwrap());
    let diag = diagonal(&expand(&q, 6).unwrap());
    println!(
        "a=-1/2, b=3/4 diagonal: {:?}",
        diag.iter().map(rational_text).collect::<Vec<_>>()
    );
}
