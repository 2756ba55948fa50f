//! Smooth-point diagonal asymptotics, regime classification, and growth
//! analysis.
//!
//! The general engine follows the implicit-phase Hessian parametrization:
//! with distinguished coordinate `N` and `lambda = z_N dQ/dz_N`, the
//! reduced Hessian has entries
//! `M[i][j] = 1 + (U[i][j] - U[i][N] - U[j][N] + U[N][N]) / lambda` off the
//! diagonal and `M[i][i] = 2 + (U[i][i] - 2 U[i][N] + U[N][N]) / lambda`,
//! and each smooth nondegenerate minimal point contributes
//! `C * n^((1-d)/2) * (prod z_j)^{-n}` with
//! `C = -P(z) / lambda * det(M)^(-1/2) * (2 pi)^((1-d)/2)`.
//!
//! The specialized closed forms for the three-variable family and the GRZ
//! family are implemented alongside and cross-checked against the general
//! engine; both printed versions contain typos (a missing `1/pi` factor in
//! the former, a misplaced `2 pi` and exponent sign in the latter), so the
//! closed forms here use the empirically verified reading.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::oracle::{self, RecError};
use crate::polyroots::{self, RootError};
use crate::symmlin::{big, PointC, SymPoly};

#[derive(Debug, Error)]
pub enum AsymError {
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error("Hessian determinant is degenerate at the critical point")]
    DegenerateHessian,
    #[error("all log-gradient components vanish; not a smooth point")]
    NonSmoothPoint,
    #[error("parameter sits at the critical value c = (d-1)^(d-1)")]
    CriticalParameter,
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
    #[error(transparent)]
    Recurrence(#[from] RecError),
}

/// One contribution `constant * base^n * n^power` to the diagonal
/// asymptotics, sourced from a minimal critical point.
#[derive(Debug, Clone)]
pub struct AsymptoticTerm {
    pub base: Complex64,
    pub power: f64,
    pub constant: Complex64,
    pub source_point: PointC,
}

#[derive(Debug, Clone)]
pub struct AsymptoticEstimate {
    pub terms: Vec<AsymptoticTerm>,
    pub valid: bool,
    pub degenerate_reason: Option<String>,
}

impl AsymptoticEstimate {
    pub fn degenerate(reason: impl Into<String>) -> Self {
        AsymptoticEstimate {
            terms: Vec::new(),
            valid: false,
            degenerate_reason: Some(reason.into()),
        }
    }

    /// Evaluates the estimate at integer `n`; the imaginary parts of
    /// conjugate-paired terms cancel.
    pub fn evaluate(&self, n: usize) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.constant * t.base.powf(n as f64) * (n as f64).powf(t.power);
        }
        acc.re
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum RegimeLabel {
    EventuallyPositive,
    InfinitelyManySignChanges,
    BoundaryDegenerate(String),
}

/// Reduced-Hessian determinant of the phase at `z`, together with the
/// product of row norms used as the degeneracy scale.
pub fn hessian_determinant(q: &SymPoly, z: &PointC) -> Result<(Complex64, f64), AsymError> {
    let (m, _) = reduced_hessian(q, z)?;
    let scale: f64 = m
        .iter()
        .map(|row| row.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt())
        .product::<f64>()
        .max(f64::MIN_POSITIVE);
    Ok((det_complex(m), scale))
}

fn reduced_hessian(
    q: &SymPoly,
    z: &PointC,
) -> Result<(Vec<Vec<Complex64>>, (usize, Complex64)), AsymError> {
    let d = q.dim();
    let grad = q.grad_log(z).map_err(|_| AsymError::NonSmoothPoint)?;
    let (n_idx, lambda) = grad
        .iter()
        .cloned()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    let scale = z.coords.iter().map(|w| w.norm()).fold(0.0, f64::max);
    if lambda.norm() < 1e-12 * (1.0 + scale) {
        return Err(AsymError::NonSmoothPoint);
    }
    let u = q.hessian_entries(z).map_err(|_| AsymError::NonSmoothPoint)?;
    let others: Vec<usize> = (0..d).filter(|&j| j != n_idx).collect();
    let k = d - 1;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for (i, &ii) in others.iter().enumerate() {
        for (j, &jj) in others.iter().enumerate() {
            m[i][j] = if i == j {
                Complex64::new(2.0, 0.0)
                    + (u[ii][ii] - 2.0 * u[ii][n_idx] + u[n_idx][n_idx]) / lambda
            } else {
                Complex64::new(1.0, 0.0)
                    + (u[ii][jj] - u[ii][n_idx] - u[jj][n_idx] + u[n_idx][n_idx]) / lambda
            };
        }
    }
    Ok((m, (n_idx, lambda)))
}

fn det_complex(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .norm()
                    .partial_cmp(&m[j][col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        det *= m[col][col];
        for row in (col + 1)..n {
            let factor = m[row][col] / m[col][col];
            for kk in col..n {
                let delta = factor * m[col][kk];
                m[row][kk] -= delta;
            }
        }
    }
    det
}

/// The smooth-point contribution of a nondegenerate minimal critical point.
///
/// `numerator_value` is `P(z)` for `F = P/Q`; the diagonals here all have
/// `P = 1`.  The square-root branch is principal, so a positive real point
/// with positive Hessian determinant yields a positive real constant.
pub fn smooth_point_term(
    q: &SymPoly,
    numerator_value: Complex64,
    z: &PointC,
) -> Result<AsymptoticTerm, AsymError> {
    let d = q.dim();
    let (m, (_, lambda)) = reduced_hessian(q, z)?;
    let scale: f64 = m
        .iter()
        .map(|row| row.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt())
        .product::<f64>()
        .max(f64::MIN_POSITIVE);
    let hes = det_complex(m);
    if hes.norm() < 1e-8 * scale {
        return Err(AsymError::DegenerateHessian);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let constant = -numerator_value / lambda * hes.powf(-0.5)
        * two_pi.powf((1.0 - d as f64) / 2.0);
    let base = z.coords.iter().map(|w| 1.0 / w).product();
    Ok(AsymptoticTerm {
        base,
        power: (1.0 - d as f64) / 2.0,
        constant,
        source_point: z.clone(),
    })
}

/// Builds the full estimate from the minimal-modulus codiagonal roots,
/// enforcing conjugate pairing of the constants so the evaluated estimate
/// is real.
pub fn diagonal_estimate(q: &SymPoly) -> Result<AsymptoticEstimate, AsymError> {
    let rs = polyroots::find_roots(&q.codiagonal(), 1e-10)?;
    let minimal = polyroots::minimal_modulus_roots(&rs);
    if minimal.iter().any(|&(_, m)| m > 1) {
        return Ok(AsymptoticEstimate::degenerate(
            "repeated minimal codiagonal root",
        ));
    }
    let mut terms: Vec<AsymptoticTerm> = Vec::new();
    for &(x, _) in &minimal {
        if x.im < -1e-12 {
            // conjugate of an already-processed (or upcoming) partner;
            // handled below
            continue;
        }
        let z = PointC::diagonal(x, q.dim());
        let term = smooth_point_term(q, Complex64::new(1.0, 0.0), &z)?;
        if x.im > 1e-12 {
            let conj = AsymptoticTerm {
                base: term.base.conj(),
                power: term.power,
                constant: term.constant.conj(),
                source_point: PointC::diagonal(x.conj(), q.dim()),
            };
            terms.push(term);
            terms.push(conj);
        } else {
            terms.push(term);
        }
    }
    Ok(AsymptoticEstimate {
        terms,
        valid: true,
        degenerate_reason: None,
    })
}

/// Closed-form constant for the three-variable family at a minimal
/// codiagonal root `x`: `|(1-2ax-bx^2)/(1-ax)| / (2 sqrt(3) pi (1-2x+ax^2))`,
/// the printed formula corrected by the missing `1/pi`.  The absolute value
/// applies to real roots only; complex roots take the unmodified ratio.
pub fn m3_closed_form_term(a: f64, b: f64, x: Complex64) -> AsymptoticTerm {
    let one = Complex64::new(1.0, 0.0);
    let mut ratio = (one - 2.0 * a * x - b * x * x) / (one - a * x);
    if x.im.abs() < 1e-12 {
        ratio = Complex64::new(ratio.re.abs(), 0.0);
    }
    let denom = 2.0 * 3.0f64.sqrt() * std::f64::consts::PI * (one - 2.0 * x + a * x * x);
    AsymptoticTerm {
        base: (x * x * x).powf(-1.0),
        power: -1.0,
        constant: ratio / denom,
        source_point: PointC::diagonal(x, 3),
    }
}

/// Closed-form constant for the GRZ family at a minimal codiagonal root:
/// `((1-(d-1)x) / (2 pi x))^((d-1)/2) / (sqrt(d) (1-(d-1)x))`, the printed
/// formula under the empirically correct reading (`r = x`, the `2 pi`
/// inside the power in the denominator, exponent `(d-1)/2` applied once).
pub fn grz_closed_form_term(d: usize, x: Complex64) -> AsymptoticTerm {
    let one = Complex64::new(1.0, 0.0);
    let dm1 = d as f64 - 1.0;
    let w = one - dm1 * x;
    let constant = (w / (2.0 * std::f64::consts::PI * x)).powf(dm1 / 2.0)
        / ((d as f64).sqrt() * w);
    AsymptoticTerm {
        base: x.powf(-(d as f64)),
        power: -dm1 / 2.0,
        constant,
        source_point: PointC::diagonal(x, d),
    }
}

/// Diagonal asymptotics of `1/(1 - e1 + a e2 + b e3)`, one term per
/// minimal-modulus codiagonal root.  Returns a degenerate estimate on the
/// regime boundary.
pub fn asm_m3(a: &BigRational, b: &BigRational) -> Result<AsymptoticEstimate, AsymError> {
    if let RegimeLabel::BoundaryDegenerate(reason) = classify_m3(a, b) {
        return Ok(AsymptoticEstimate::degenerate(reason));
    }
    let q = SymPoly::m3(a.clone(), b.clone());
    diagonal_estimate(&q)
}

/// Diagonal asymptotics of the GRZ family for `c != (d-1)^(d-1)`.
pub fn asm_grz(c: &BigRational, d: usize) -> Result<AsymptoticEstimate, AsymError> {
    if *c == grz_critical_parameter(d) {
        return Err(AsymError::CriticalParameter);
    }
    let q = SymPoly::grz(c.clone(), d);
    diagonal_estimate(&q)
}

pub fn grz_critical_parameter(d: usize) -> BigRational {
    big((d - 1) as i64).pow((d - 1) as i32)
}

/// Exact positivity-regime classification for the three-variable family.
///
/// The piecewise bound is `-9a` for `a <= -3`, `2 - 3a + 2(1-a)^(3/2)` for
/// `-3 <= a <= 1`, and `-a^3` for `a >= 1`; below it the diagonal is
/// eventually positive, above it the signs change infinitely often.  The
/// middle branch is compared exactly via `(b - 2 + 3a)^2` vs `4 (1-a)^3`.
pub fn classify_m3(a: &BigRational, b: &BigRational) -> RegimeLabel {
    use std::cmp::Ordering;
    let three = big(3);
    let one = big(1);
    let cmp = if *a <= -three.clone() {
        let bound = big(-9) * a;
        b.cmp(&bound)
    } else if *a >= one {
        let bound = -(a * a * a);
        b.cmp(&bound)
    } else {
        let l = b - big(2) + big(3) * a;
        if l.is_negative() {
            Ordering::Less
        } else {
            let lhs = &l * &l;
            let w = big(1) - a;
            let rhs = big(4) * &w * &w * &w;
            lhs.cmp(&rhs)
        }
    };
    match cmp {
        std::cmp::Ordering::Less => RegimeLabel::EventuallyPositive,
        std::cmp::Ordering::Greater => RegimeLabel::InfinitelyManySignChanges,
        std::cmp::Ordering::Equal => {
            let detail = if *a < big(-3) {
                "boundary: two diagonal minimal points, positive point dominates"
            } else if *a == big(-3) {
                "boundary: alternation from degenerate smooth point at -1/3"
            } else if *a < big(1) {
                "boundary: dominant positive real cone point"
            } else if *a == big(1) {
                "boundary: all-ones coefficients"
            } else {
                "boundary: conjectural degenerate dominance"
            };
            RegimeLabel::BoundaryDegenerate(detail.into())
        }
    }
}

/// Exact positivity-regime classification for the GRZ family: the
/// transition is at `c = (d-1)^(d-1)`.
pub fn classify_grz(c: &BigRational, d: usize) -> RegimeLabel {
    let c_star = grz_critical_parameter(d);
    match c.cmp(&c_star) {
        std::cmp::Ordering::Less => RegimeLabel::EventuallyPositive,
        std::cmp::Ordering::Greater => RegimeLabel::InfinitelyManySignChanges,
        std::cmp::Ordering::Equal => RegimeLabel::BoundaryDegenerate(
            "lacuna candidate; growth drop for even d >= 4".into(),
        ),
    }
}

/// Predicted per-coordinate exponential growth `|rho|^{-1}` of
/// `|delta_n|^{1/(dn)}`, from the minimal-modulus codiagonal root.  The
/// per-diagonal-step growth is the d-th power.
pub fn growth_rate(c: &BigRational, d: usize) -> Result<f64, AsymError> {
    if *c == grz_critical_parameter(d) {
        return Err(AsymError::CriticalParameter);
    }
    let q = SymPoly::grz(c.clone(), d);
    let rs = polyroots::find_roots(&q.codiagonal(), 1e-10)?;
    Ok(1.0 / rs.min_modulus())
}

#[derive(Debug, Clone)]
pub struct GrowthScan {
    /// `|delta_n|^{1/(dn)}` with ratio extrapolation over the last indices.
    pub empirical_growth: f64,
    pub drop_detected: bool,
    /// Exact diagonal values used for the scan.
    pub diagonal: Vec<BigRational>,
}

/// Computes the diagonal up to `n_max`: P-recurrence path for `d = 4`,
/// convolution otherwise.
pub fn grz_diagonal(c: &BigRational, d: usize, n_max: usize) -> Result<Vec<BigRational>, AsymError> {
    let q = SymPoly::grz(c.clone(), d);
    if d == 4 {
        let rec = oracle::ode_to_recurrence(&oracle::grz_d4_operator(c))?;
        let need = rec.valid_from + rec.span();
        let arr = oracle::expand(&q, need.max(1))
            .map_err(|e| AsymError::OracleUnavailable(e.to_string()))?;
        let initial = oracle::diagonal(&arr);
        Ok(oracle::run_recurrence(&rec, &initial[..(need.min(n_max + 1)).max(1)], n_max)?)
    } else {
        let arr = oracle::expand(&q, n_max)
            .map_err(|e| AsymError::OracleUnavailable(e.to_string()))?;
        Ok(oracle::diagonal(&arr))
    }
}

/// Empirical growth with drop detection at the critical parameter.
///
/// The estimate takes the window maximum of `ln|delta_m| / (d m)` near
/// `n_max` (robust against oscillating signs) and Richardson-extrapolates
/// against the same quantity near `n_max / 2` to cancel the polynomial
/// correction.  A drop is flagged when the result falls more than 5%
/// below `d - 1`.
pub fn growth_drop_scan(
    c: &BigRational,
    d: usize,
    n_max: usize,
) -> Result<GrowthScan, AsymError> {
    assert!(n_max >= 20, "growth scan needs n_max >= 20");
    let diag = grz_diagonal(c, d, n_max)?;
    let level = |n: usize| -> f64 {
        let lo = n.saturating_sub(9).max(1);
        (lo..=n)
            .map(|m| oracle::ln_abs(&diag[m]) / (d as f64 * m as f64))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let l_full = level(n_max);
    let l_half = level(n_max / 2);
    let empirical_growth = (2.0 * l_full - l_half).exp();
    let dm1 = d as f64 - 1.0;
    let drop_detected = empirical_growth < dm1 - 0.05 * dm1;
    Ok(GrowthScan {
        empirical_growth,
        drop_detected,
        diagonal: diag,
    })
}
