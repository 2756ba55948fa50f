//! P-recurrences from linear differential operators.
//!
//! A term `q z^a d^b` acting on `sum f(n) z^n` contributes
//! `q * (n+b-a)(n+b-a-1)...(n-a+1) * f(n+b-a)` to the coefficient of `z^n`,
//! so a D-finite equation translates into a polynomial-coefficient linear
//! recurrence on the series coefficients.

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::ratpoly::RatPoly;

#[derive(Debug, Error, PartialEq)]
pub enum RecError {
    #[error("all translated recurrence coefficients vanish")]
    DegenerateOperator,
    #[error("leading recurrence coefficient vanishes at n={0} (apparent singularity)")]
    LeadingZero(i64),
    #[error("initial segment too short: need {need} values, got {got}")]
    InsufficientInitial { need: usize, got: usize },
    #[error("operator parse error: {0}")]
    Parse(String),
}

/// Linear differential operator `sum_i coeffs[i](z) d^i/dz^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    coeffs: Vec<RatPoly>,
}

impl DiffOp {
    /// `coeffs[i]` multiplies the i-th derivative; the leading coefficient
    /// must be nonzero.
    pub fn new(coeffs: Vec<RatPoly>) -> Self {
        assert!(
            coeffs.last().map_or(false, |p| !p.is_zero()),
            "leading operator coefficient must be nonzero"
        );
        DiffOp { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    /// Divides every coefficient exactly by `divisor`; `None` when any
    /// coefficient is not divisible.
    pub fn div_exact(&self, divisor: &RatPoly) -> Option<DiffOp> {
        let coeffs: Option<Vec<RatPoly>> =
            self.coeffs.iter().map(|p| p.div_exact(divisor)).collect();
        coeffs.map(DiffOp::new)
    }
}

/// Polynomial-coefficient linear recurrence
/// `sum_{i=0}^{span} polys[i](n) f(n+i) = 0`, valid for `n >= valid_from`.
#[derive(Debug, Clone, PartialEq)]
pub struct Recurrence {
    pub polys: Vec<RatPoly>,
    pub valid_from: usize,
}

impl Recurrence {
    pub fn span(&self) -> usize {
        self.polys.len() - 1
    }
}

/// Falling-factorial polynomial `(n + shift)(n + shift - 1)...(n + shift - b + 1)`
/// in the variable `n`.
fn falling_poly(shift: i64, b: usize) -> RatPoly {
    let mut acc = RatPoly::constant(BigRational::one());
    for t in 0..b as i64 {
        acc = acc.mul(&RatPoly::new(vec![
            BigRational::from_integer((shift - t).into()),
            BigRational::one(),
        ]));
    }
    acc
}

/// Translates a differential operator into the recurrence satisfied by the
/// coefficient sequences of its power-series solutions.
pub fn ode_to_recurrence(op: &DiffOp) -> Result<Recurrence, RecError> {
    // collect (b, a, q) over all monomials of all coefficients
    let mut terms: Vec<(usize, usize, BigRational)> = Vec::new();
    for (b, poly) in op.coeffs().iter().enumerate() {
        for (a, q) in poly.coeffs().iter().enumerate() {
            if !q.is_zero() {
                terms.push((b, a, q.clone()));
            }
        }
    }
    if terms.is_empty() {
        return Err(RecError::DegenerateOperator);
    }
    let jmin = terms.iter().map(|&(b, a, _)| b as i64 - a as i64).min().unwrap();
    let jmax = terms.iter().map(|&(b, a, _)| b as i64 - a as i64).max().unwrap();
    let span = (jmax - jmin) as usize;

    // p_i(n) = sum over terms with b - a = jmin + i of q * falling(n + i, b)
    let mut polys = vec![RatPoly::zero(); span + 1];
    for (b, a, q) in terms {
        let i = (b as i64 - a as i64 - jmin) as usize;
        polys[i] = polys[i].add(&falling_poly(i as i64, b).scale(&q));
    }
    while polys.len() > 1 && polys.last().map_or(false, |p| p.is_zero()) {
        polys.pop();
    }
    if polys.iter().all(|p| p.is_zero()) {
        return Err(RecError::DegenerateOperator);
    }

    // valid from where the series identity starts holding, then pushed past
    // any integer zero of the leading coefficient
    let mut valid_from = jmin.max(0) as usize;
    let lead = polys.last().unwrap().clone();
    let scan_limit = valid_from + 2000;
    let mut n = valid_from;
    while n <= scan_limit {
        if lead.eval_i64(n as i64).is_zero() {
            valid_from = n + 1;
        }
        n += 1;
    }
    Ok(Recurrence { polys, valid_from })
}

/// Runs a recurrence forward with exact arithmetic.
///
/// `initial` must supply `f(0), ..., f(valid_from + span - 1)`.
pub fn run_recurrence(
    rec: &Recurrence,
    initial: &[BigRational],
    n_max: usize,
) -> Result<Vec<BigRational>, RecError> {
    let span = rec.span();
    let need = rec.valid_from + span;
    if initial.len() < need.min(n_max + 1) {
        return Err(RecError::InsufficientInitial {
            need: need.min(n_max + 1),
            got: initial.len(),
        });
    }
    let mut values: Vec<BigRational> = initial[..initial.len().min(n_max + 1)].to_vec();
    let lead = rec.polys.last().unwrap();
    // next value to compute sits at index values.len() = n + span
    let mut n = values.len().saturating_sub(span) as i64;
    while values.len() <= n_max {
        let lead_val = lead.eval_i64(n);
        if lead_val.is_zero() {
            return Err(RecError::LeadingZero(n));
        }
        let mut acc = BigRational::zero();
        for (i, p) in rec.polys.iter().enumerate().take(span) {
            let term = p.eval_i64(n) * &values[(n as usize) + i];
            acc += term;
        }
        values.push(-acc / lead_val);
        n += 1;
    }
    Ok(values)
}

/// The annihilating operator of `diag 1/(1 - e1 + c e4)`, transcribed with
/// exact coefficients polynomial in the parameter `c`.
pub fn grz_d4_operator(c: &BigRational) -> DiffOp {
    let c1 = c.clone();
    let c2 = &c1 * &c1;
    let c3 = &c2 * &c1;
    let c4 = &c3 * &c1;
    let c5 = &c4 * &c1;
    let c6 = &c5 * &c1;
    let r = |n: i64| BigRational::from_integer(n.into());

    // z^2 (c^4 z^4 + 4c^3 z^3 + 6c^2 z^2 + (4c - 256) z + 1) (3cz - 1)^2
    let p3 = RatPoly::monomial(BigRational::one(), 2)
        .mul(&RatPoly::new(vec![
            r(1),
            &c1 * r(4) - r(256),
            &c2 * r(6),
            &c3 * r(4),
            c4.clone(),
        ]))
        .mul(&RatPoly::new(vec![-r(1), &c1 * r(3)]).pow(2));

    // 3z (3cz - 1) (6c^5 z^5 + 15c^4 z^4 + 8c^3 z^3 - (6c^2 + 384c) z^2
    //               + (384 - 6c) z - 1)
    let p2 = RatPoly::monomial(r(3), 1)
        .mul(&RatPoly::new(vec![-r(1), &c1 * r(3)]))
        .mul(&RatPoly::new(vec![
            -r(1),
            r(384) - &c1 * r(6),
            -(&c2 * r(6)) - &c1 * r(384),
            &c3 * r(8),
            &c4 * r(15),
            &c5 * r(6),
        ]));

    // (cz + 1) (63c^5 z^5 - 3c^4 z^4 - 66c^3 z^3 + (18c^2 + 720c) z^2
    //           + (19c - 816) z + 1)
    let p1 = RatPoly::new(vec![r(1), c1.clone()]).mul(&RatPoly::new(vec![
        r(1),
        &c1 * r(19) - r(816),
        &c2 * r(18) + &c1 * r(720),
        -(&c3 * r(66)),
        -(&c4 * r(3)),
        &c5 * r(63),
    ]));

    // 9c^6 z^5 - 3c^5 z^4 - 6c^4 z^3 + (18c^3 - 360c^2) z^2
    //   + (13c^2 - 384c) z + (c - 24)
    let p0 = RatPoly::new(vec![
        &c1 - r(24),
        &c2 * r(13) - &c1 * r(384),
        &c3 * r(18) - &c2 * r(360),
        -(&c4 * r(6)),
        -(&c5 * r(3)),
        &c6 * r(9),
    ]);

    DiffOp::new(vec![p0, p1, p2, p3])
}

/// The reduced operator `L_27`: the quotient of `grz_d4_operator(27)`
/// by `(81z - 1)^4`.
pub fn grz_d4_l27() -> DiffOp {
    DiffOp::new(vec![
        // 3 (27z + 1)
        RatPoly::from_i64(&[3, 81]),
        // (21z + 1)(27z + 1)
        RatPoly::from_i64(&[1, 48, 567]),
        // 3z (162 z^2 + 21 z + 1)
        RatPoly::from_i64(&[0, 3, 63, 486]),
        // z^2 (81 z^2 + 14 z + 1)
        RatPoly::from_i64(&[0, 0, 1, 14, 81]),
    ])
}

/// Parses a differential operator from lines of the form
/// `"<order>: c0 c1 c2 ..."` with ascending-power rational coefficients.
pub fn parse_diffop(lines: &[&str]) -> Result<DiffOp, RecError> {
    let mut by_order: Vec<(usize, RatPoly)> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (order, rest) = line
            .split_once(':')
            .ok_or_else(|| RecError::Parse(format!("expected 'order: coeffs' in '{line}'")))?;
        let order: usize = order
            .trim()
            .parse()
            .map_err(|_| RecError::Parse(format!("bad derivative order '{order}'")))?;
        let coeffs: Result<Vec<BigRational>, RecError> = rest
            .split_whitespace()
            .map(|tok| {
                crate::symmlin::parse_rational(tok)
                    .map_err(|e| RecError::Parse(format!("{e}")))
            })
            .collect();
        by_order.push((order, RatPoly::new(coeffs?)));
    }
    if by_order.is_empty() {
        return Err(RecError::Parse("empty operator".into()));
    }
    let max_order = by_order.iter().map(|&(o, _)| o).max().unwrap();
    let mut coeffs = vec![RatPoly::zero(); max_order + 1];
    for (o, p) in by_order {
        coeffs[o] = coeffs[o].add(&p);
    }
    if coeffs[max_order].is_zero() {
        return Err(RecError::Parse("zero leading coefficient".into()));
    }
    Ok(DiffOp::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{diagonal, expand};
    use crate::symmlin::{big, SymPoly};

    #[test]
    fn exponential_series() {
        // d/dz - 1 annihilates e^z: (n+1) f(n+1) - f(n) = 0
        let op = DiffOp::new(vec![
            RatPoly::from_i64(&[-1]),
            RatPoly::from_i64(&[1]),
        ]);
        let rec = ode_to_recurrence(&op).unwrap();
        assert_eq!(rec.span(), 1);
        assert_eq!(rec.valid_from, 0);
        assert_eq!(rec.polys[1], RatPoly::from_i64(&[1, 1]));
        assert_eq!(rec.polys[0], RatPoly::from_i64(&[-1]));
        let vals = run_recurrence(&rec, &[big(1)], 5).unwrap();
        assert_eq!(vals[3], BigRational::new(1.into(), 6.into()));
        assert_eq!(vals[5], BigRational::new(1.into(), 120.into()));
    }

    #[test]
    fn geometric_series() {
        // (1 - z) d/dz - 1 annihilates 1/(1-z)
        let op = DiffOp::new(vec![
            RatPoly::from_i64(&[-1]),
            RatPoly::from_i64(&[1, -1]),
        ]);
        let rec = ode_to_recurrence(&op).unwrap();
        let vals = run_recurrence(&rec, &[big(1)], 6).unwrap();
        assert!(vals.iter().all(|v| *v == big(1)));
    }

    #[test]
    fn fibonacci_style_constant_recurrence() {
        let rec = Recurrence {
            polys: vec![
                RatPoly::from_i64(&[1]),
                RatPoly::from_i64(&[1]),
                RatPoly::from_i64(&[-1]),
            ],
            valid_from: 0,
        };
        let vals = run_recurrence(&rec, &[big(1), big(1)], 5).unwrap();
        let expect = [1, 1, 2, 3, 5, 8];
        for (v, &e) in vals.iter().zip(expect.iter()) {
            assert_eq!(*v, big(e));
        }
    }

    #[test]
    fn central_binomial_recurrence() {
        // (n+1) f(n+1) = (4n+2) f(n)
        let rec = Recurrence {
            polys: vec![RatPoly::from_i64(&[-2, -4]), RatPoly::from_i64(&[1, 1])],
            valid_from: 0,
        };
        let vals = run_recurrence(&rec, &[big(1)], 3).unwrap();
        let expect = [1, 2, 6, 20];
        for (v, &e) in vals.iter().zip(expect.iter()) {
            assert_eq!(*v, big(e));
        }
    }

    #[test]
    fn leading_zero_detected() {
        // n f(n+1) - f(n) = 0 has an apparent singularity at n = 0, which
        // the translation pushes past; force one by hand instead
        let rec = Recurrence {
            polys: vec![RatPoly::from_i64(&[-1]), RatPoly::from_i64(&[-3, 1])],
            valid_from: 0,
        };
        let err = run_recurrence(&rec, &[big(1)], 10).unwrap_err();
        assert_eq!(err, RecError::LeadingZero(3));
    }

    #[test]
    fn l27_divisibility_and_quotient() {
        let op = grz_d4_operator(&big(27));
        let divisor = RatPoly::from_i64(&[-1, 81]).pow(4);
        let quotient = op.div_exact(&divisor).expect("(81z-1)^4 must divide L at c=27");
        assert_eq!(quotient, grz_d4_l27());
        // the factor does not divide at a generic parameter
        assert!(grz_d4_operator(&big(26)).div_exact(&divisor).is_none());
    }

    #[test]
    fn operator_reproduces_central_4nomials() {
        // c = 0: diagonal of 1/(1 - e1) in 4 variables is (4n)!/(n!)^4
        let op = grz_d4_operator(&big(0));
        let rec = ode_to_recurrence(&op).unwrap();
        let mut multinomial = vec![big(1)];
        for n in 1..=20i64 {
            let prev = multinomial.last().unwrap().clone();
            // (4n)!/(n!)^4 ratio: prod_{j=1}^{4} (4n-j+1) / n ... use exact
            let num = big(4 * n) * big(4 * n - 1) * big(4 * n - 2) * big(4 * n - 3);
            let den = big(n).pow(4);
            multinomial.push(prev * num / den);
        }
        // recurrence must annihilate the sequence
        for n in rec.valid_from..=(20 - rec.span()) {
            let mut acc = BigRational::zero();
            for (i, p) in rec.polys.iter().enumerate() {
                acc += p.eval_i64(n as i64) * &multinomial[n + i];
            }
            assert_eq!(acc, big(0), "failed at n={n}");
        }
    }

    #[test]
    fn recurrence_matches_convolution_oracle() {
        for c in [big(1), big(27)] {
            let q = SymPoly::grz(c.clone(), 4);
            let arr = expand(&q, 8).unwrap();
            let diag = diagonal(&arr);
            let rec = ode_to_recurrence(&grz_d4_operator(&c)).unwrap();
            let need = rec.valid_from + rec.span();
            let vals = run_recurrence(&rec, &diag[..need.max(1).min(diag.len())], 8).unwrap();
            assert_eq!(vals, diag, "c={c}");
        }
    }

    #[test]
    fn parse_diffop_round_trip() {
        let op = parse_diffop(&["1: 1", "0: -1"]).unwrap();
        assert_eq!(op.order(), 1);
        let rec = ode_to_recurrence(&op).unwrap();
        let vals = run_recurrence(&rec, &[big(1)], 4).unwrap();
        assert_eq!(vals[4], BigRational::new(1.into(), 24.into()));
        assert!(parse_diffop(&["x: 1"]).is_err());
        assert!(parse_diffop(&[]).is_err());
    }
}
