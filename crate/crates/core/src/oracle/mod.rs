//! Ground-truth coefficient computation for `1/Q`.
//!
//! Everything here is exact big-rational arithmetic; no floating point.
//! The power series is expanded via the kernel identity `Q * F = 1`, which
//! yields the recurrence
//! `a_r = (delta_{r,0} - sum_{0 != s <= r} q_s a_{r-s}) / q_0`
//! over the monomial support of `Q`.

mod ratpoly;
mod recurrence;

pub use ratpoly::RatPoly;
pub use recurrence::{
    grz_d4_l27, grz_d4_operator, ode_to_recurrence, parse_diffop, run_recurrence, DiffOp,
    RecError, Recurrence,
};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::symmlin::SymPoly;

/// Default cap on dense array entries; override with `SYMDIAG_MAX_ENTRIES`.
const DEFAULT_MAX_ENTRIES: usize = 100_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("coefficient box too large: {entries} entries with d={d} (budget {budget})")]
    BudgetExceeded { d: usize, entries: usize, budget: usize },
    #[error("Q has zero constant term; 1/Q has no power series at the origin")]
    ZeroConstantTerm,
}

fn entry_budget() -> usize {
    std::env::var("SYMDIAG_MAX_ENTRIES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ENTRIES)
}

/// Dense array of exact power-series coefficients of `1/Q` on the box
/// `0 <= r_j <= N`.
#[derive(Debug, Clone)]
pub struct CoeffArray {
    d: usize,
    box_n: usize,
    values: Vec<BigRational>,
}

impl CoeffArray {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn box_n(&self) -> usize {
        self.box_n
    }

    fn flat(&self, r: &[usize]) -> usize {
        let mut idx = 0;
        for &ri in r.iter().rev() {
            idx = idx * (self.box_n + 1) + ri;
        }
        idx
    }

    pub fn get(&self, r: &[usize]) -> &BigRational {
        assert_eq!(r.len(), self.d);
        &self.values[self.flat(r)]
    }
}

/// Expands `1/Q` on the full box by the kernel recurrence.  Arithmetic is
/// exact; `Q` multilinear means each support monomial is a 0/1 vector with
/// coefficient `e_coeffs[popcount]`.
pub fn expand(q: &SymPoly, box_n: usize) -> Result<CoeffArray, OracleError> {
    let d = q.dim();
    let side = box_n + 1;
    let entries = side.checked_pow(d as u32).unwrap_or(usize::MAX);
    let budget = entry_budget();
    if d > 6 || entries > budget {
        return Err(OracleError::BudgetExceeded { d, entries, budget });
    }
    let coeffs = q.e_coeffs();
    if coeffs[0].is_zero() {
        return Err(OracleError::ZeroConstantTerm);
    }

    // support masks with nonzero coefficient, excluding the constant term
    let mut support: Vec<(Vec<usize>, BigRational)> = Vec::new();
    for mask in 1u32..(1 << d) {
        let k = mask.count_ones() as usize;
        if coeffs[k].is_zero() {
            continue;
        }
        let positions: Vec<usize> = (0..d).filter(|&j| mask >> j & 1 == 1).collect();
        support.push((positions, coeffs[k].clone()));
    }

    let strides: Vec<usize> = (0..d).map(|j| side.pow(j as u32)).collect();
    let mut values = vec![BigRational::zero(); entries];
    values[0] = coeffs[0].recip(); // = 1 after normalization

    let mut r = vec![0usize; d];
    for idx in 1..entries {
        // increment multi-index (coordinate 0 fastest)
        for j in 0..d {
            if r[j] < box_n {
                r[j] += 1;
                break;
            }
            r[j] = 0;
        }
        let mut acc = BigRational::zero();
        'support: for (positions, c) in &support {
            let mut offset = 0usize;
            for &j in positions {
                if r[j] == 0 {
                    continue 'support;
                }
                offset += strides[j];
            }
            let term = c * &values[idx - offset];
            acc -= term;
        }
        values[idx] = acc;
    }

    Ok(CoeffArray {
        d,
        box_n,
        values,
    })
}

/// The diagonal slice `(delta_0, ..., delta_N)`.
pub fn diagonal(arr: &CoeffArray) -> Vec<BigRational> {
    (0..=arr.box_n)
        .map(|n| arr.get(&vec![n; arr.d]).clone())
        .collect()
}

/// Convolves the expanded array with `Q` over the sub-box where the
/// convolution is fully determined and checks that the result is the delta
/// array (`1` at the origin, `0` elsewhere).
pub fn kernel_identity_holds(q: &SymPoly, arr: &CoeffArray) -> bool {
    let d = q.dim();
    let coeffs = q.e_coeffs();
    let mut r = vec![0usize; d];
    loop {
        let mut acc = BigRational::zero();
        for mask in 0u32..(1 << d) {
            let k = mask.count_ones() as usize;
            if coeffs[k].is_zero() {
                continue;
            }
            let mut s = r.clone();
            let mut ok = true;
            for j in 0..d {
                if mask >> j & 1 == 1 {
                    if s[j] == 0 {
                        ok = false;
                        break;
                    }
                    s[j] -= 1;
                }
            }
            if ok {
                acc += &coeffs[k] * arr.get(&s);
            }
        }
        let expect = if r.iter().all(|&x| x == 0) {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        if acc != expect {
            return false;
        }
        // next multi-index in the box
        let mut j = 0;
        loop {
            if j == d {
                return true;
            }
            if r[j] < arr.box_n {
                r[j] += 1;
                break;
            }
            r[j] = 0;
            j += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SignProfile {
    AllPositive,
    AllNegative,
    MixedSigns,
    HasZeros,
}

/// Classifies the signs of `seq[n_from..]`.
pub fn sign_profile(seq: &[BigRational], n_from: usize) -> SignProfile {
    assert!(seq.len() > n_from, "sequence too short for n_from={n_from}");
    let tail = &seq[n_from..];
    if tail.iter().any(|v| v.is_zero()) {
        return SignProfile::HasZeros;
    }
    let pos = tail.iter().any(|v| v.is_positive());
    let neg = tail.iter().any(|v| v.is_negative());
    match (pos, neg) {
        (true, false) => SignProfile::AllPositive,
        (false, true) => SignProfile::AllNegative,
        _ => SignProfile::MixedSigns,
    }
}

/// Number of sign changes in `seq`, ignoring zeros.
pub fn sign_changes(seq: &[BigRational]) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for v in seq {
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    changes
}

/// Natural log of `|x|` for big rationals of any size.
pub fn ln_abs(x: &BigRational) -> f64 {
    fn ln_big(n: &num_bigint::BigInt) -> f64 {
        use num_traits::ToPrimitive;
        let bits = n.bits();
        if bits <= 960 {
            n.abs().to_f64().unwrap().ln()
        } else {
            let shift = bits - 53;
            let top = (n.abs() >> shift).to_f64().unwrap();
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_big(x.numer()) - ln_big(x.denom())
}

/// Exact decimal text for a rational: plain integer when integral,
/// `p/q` otherwise.  One value per line is the export format.
pub fn rational_text(x: &BigRational) -> String {
    if x.denom() == &num_bigint::BigInt::one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn export_sequence(seq: &[BigRational]) -> String {
    let mut out = String::new();
    for v in seq {
        out.push_str(&rational_text(v));
        out.push('\n');
    }
    out
}
