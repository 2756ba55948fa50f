//! Critical and minimal points of `{Q = 0}` in the diagonal direction.
//!
//! For symmetric multilinear `Q` the Grace-Walsh-Szego reduction puts
//! minimal points on the diagonal, so the search reduces to minimal-modulus
//! roots of the codiagonal.  The numeric solvers here only falsify; the
//! lemma-backed facts are the primary justification.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::polyroots::{self, RootError};
use crate::symmlin::{big, PointC, SymPoly};

#[derive(Debug, Error)]
pub enum CriticalError {
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error("found a non-diagonal critical point {0:?}; contradicts the diagonality lemma")]
    VerificationFailure(Vec<Complex64>),
    #[error("point is not on the variety: |Q(z)| = {0:.3e}")]
    NotOnVariety(f64),
}

/// A critical point of `1/Q` for the diagonal direction.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub point: PointC,
    pub is_diagonal: bool,
    pub is_minimal: bool,
    /// Multiplicity of the corresponding codiagonal root when diagonal.
    pub multiplicity: usize,
    pub is_smooth: bool,
    /// Hessian determinant of the phase below threshold.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TangentCone {
    None,
    E2Cone,
    Other,
}

#[derive(Debug, Clone)]
pub struct SingularityReport {
    pub singular_points: Vec<PointC>,
    pub tangent_cone_label: TangentCone,
}

/// Diagonal critical points `(x, ..., x)` for every root `x` of the
/// codiagonal.  Minimal-modulus roots are flagged minimal per the
/// Grace-Walsh-Szego reduction.
pub fn diagonal_critical_points(
    q: &SymPoly,
    tol: f64,
) -> Result<Vec<CriticalPoint>, CriticalError> {
    let cd = q.codiagonal();
    let rs = polyroots::find_roots(&cd, tol)?;
    let min_mod = rs.min_modulus();
    let mut out = Vec::new();
    for (i, &(x, m)) in rs.roots.iter().enumerate() {
        let point = PointC::diagonal(x, q.dim());
        let is_minimal = rs.min_modulus_indices.contains(&i);
        let grad = q.grad_log(&point).unwrap_or_default();
        let is_smooth = grad.iter().any(|g| g.norm() > 1e-10 * (1.0 + min_mod));
        let degenerate = m > 1
            || crate::smoothasm::hessian_determinant(q, &point)
                .map_or(true, |(det, row_scale)| det.norm() < 1e-8 * row_scale);
        out.push(CriticalPoint {
            point,
            is_diagonal: true,
            is_minimal,
            multiplicity: m,
            is_smooth,
            degenerate,
        });
    }
    Ok(out)
}

/// Asserts (per the GRZ diagonality lemma) that every critical point of
/// `1/(1 - e1 + c ed)` in the diagonal direction is diagonal, and verifies
/// it numerically by Newton iteration from random torus starts.
pub fn grz_offdiagonal_check(
    c: f64,
    d: usize,
    torus_radius: f64,
    seed: u64,
) -> Result<bool, CriticalError> {
    let q = SymPoly::grz(
        BigRational::from_float(c).unwrap_or_else(BigRational::zero),
        d,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let start: Vec<Complex64> = (0..d)
            .map(|_| Complex64::from_polar(torus_radius, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        if let Some(z) = newton_critical_system(&q, &start) {
            let scale = z.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1e-3);
            let diagonal = z
                .iter()
                .all(|&w| (w - z[0]).norm() < 1e-6 * scale);
            if !diagonal {
                return Err(CriticalError::VerificationFailure(z));
            }
        }
    }
    Ok(true)
}

/// Newton iteration on the critical system `Q(z) = 0`,
/// `z_j dQ/dz_j - z_1 dQ/dz_1 = 0`.  Returns a converged solution or None.
fn newton_critical_system(q: &SymPoly, start: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = q.dim();
    let mut z = start.to_vec();
    for _ in 0..60 {
        let p = PointC::new(z.clone());
        if z.iter().any(|w| w.norm() < 1e-12) {
            return None;
        }
        let qv = q.eval(&p).ok()?;
        let grad_log = q.grad_log(&p).ok()?;
        let u = q.hessian_entries(&p).ok()?;
        let partials: Vec<Complex64> = (0..d).map(|j| grad_log[j] / z[j]).collect();

        // residual vector
        let mut f = vec![qv];
        for j in 1..d {
            f.push(grad_log[j] - grad_log[0]);
        }

        // Jacobian: row 0 = partials; row j: d/dz_i (z_j dQ_j - z_1 dQ_1)
        // using d/dz_i (z_j dQ_j) = U[i][j]/z_i for i != j and dQ_j for i = j
        let mut jac = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for i in 0..d {
            jac[0][i] = partials[i];
        }
        for j in 1..d {
            for i in 0..d {
                let dj = if i == j { partials[j] } else { u[i][j] / z[i] };
                let d0 = if i == 0 { partials[0] } else { u[i][0] / z[i] };
                jac[j][i] = dj - d0;
            }
        }

        let step = solve_complex(&mut jac, &mut f)?;
        let mut step_norm = 0.0f64;
        for i in 0..d {
            z[i] -= step[i];
            step_norm = step_norm.max(step[i].norm());
        }
        if step_norm < 1e-13 {
            let p = PointC::new(z.clone());
            let residual = q.eval(&p).ok()?.norm()
                + q.grad_log(&p)
                    .ok()?
                    .windows(2)
                    .map(|w| (w[1] - w[0]).norm())
                    .sum::<f64>();
            return if residual < 1e-9 { Some(z) } else { None };
        }
    }
    None
}

/// Gaussian elimination with partial pivoting on a complex system.
fn solve_complex(a: &mut [Vec<Complex64>], b: &mut [Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .norm()
                .partial_cmp(&a[j][col].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let delta = factor * a[col][k];
                a[row][k] -= delta;
            }
            let delta = factor * b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Non-diagonal critical points of the M3 family in the diagonal
/// direction: permutations of `(1/a, 1/a, a(1-a)/(a^2+b))`.
///
/// These exist for every `(a, b)` with `a != 0` and `a^2 + b != 0`: writing
/// `g_j = z_j dQ/dz_j`, at `(1/a, 1/a, w)` both `g_1` and `g_3` reduce to
/// `w (1 + b/a^2)`, so criticality is automatic and `Q = 0` pins
/// `w = a(1-a)/(a^2+b)`.  They only land on the symmetric minimal torus
/// when `b = a^2(a-2)`; elsewhere they sit on an asymmetric torus, where
/// they are typically non-minimal but can still dwarf the finite-`n`
/// correction terms when the modulus product `|u^2 w|` is close to the
/// cube of the minimal codiagonal root.
pub fn m3_offdiagonal_check(a: f64, b: f64) -> Vec<PointC> {
    if a == 0.0 {
        return Vec::new();
    }
    let denom = a * a + b;
    if denom.abs() < 1e-14 {
        return Vec::new();
    }
    let u = Complex64::new(1.0 / a, 0.0);
    let v = Complex64::new(a * (1.0 - a) / denom, 0.0);
    let perms = [[u, u, v], [u, v, u], [v, u, u]];
    perms
        .iter()
        .map(|coords| PointC::new(coords.to_vec()))
        .collect()
}

/// Whether any non-diagonal M3 critical point lies on the symmetric
/// minimal torus `T(p, p, p)`.  Outside the trivial case
/// `(a, b) = (1, -1)` this does not happen, which is what makes the
/// symmetric reduction to codiagonal roots sound.
pub fn m3_offdiagonal_on_minimal_torus(a: f64, b: f64) -> Result<bool, CriticalError> {
    let candidates = m3_offdiagonal_check(a, b);
    if candidates.is_empty() {
        return Ok(false);
    }
    let q = SymPoly::m3(
        BigRational::from_float(a).unwrap_or_else(BigRational::zero),
        BigRational::from_float(b).unwrap_or_else(BigRational::zero),
    );
    let rs = polyroots::find_roots(&q.codiagonal(), 1e-10)?;
    let p = rs.min_modulus();
    Ok(candidates.iter().any(|z| {
        z.coords
            .iter()
            .all(|w| (w.norm() - p).abs() < 1e-8 * (1.0 + p))
    }))
}

/// Probabilistic minimality check: samples the open polydisk of `z` plus a
/// fine diagonal grid for zeros of `Q`.  A `true` result is evidence, not
/// proof; minimality of diagonal points is established by the GWS lemma.
pub fn verify_minimality(
    q: &SymPoly,
    z: &PointC,
    samples: usize,
    seed: u64,
) -> Result<bool, CriticalError> {
    let qv = q.eval(z).map_err(|_| CriticalError::NotOnVariety(f64::NAN))?;
    if qv.norm() > 1e-8 {
        return Err(CriticalError::NotOnVariety(qv.norm()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = q.dim();
    // `Q` is multilinear, so with all but one coordinate fixed it is
    // linear in the remaining one: sample the fixed coordinates inside
    // their disks (biased toward the boundary, where interior zeros
    // concentrate), solve for the free coordinate exactly, and test
    // whether the solution lands strictly inside its disk.
    for s in 0..samples {
        let free = s % d;
        let mut w: Vec<Complex64> = (0..d)
            .map(|j| {
                let u: f64 = rng.gen_range(0.0..1.0);
                let r = z.coords[j].norm() * (1.0 - 0.95 * u * u) * 0.9999;
                Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        w[free] = Complex64::new(0.0, 0.0);
        let point = PointC::new(w);
        let a0 = q.eval(&point).unwrap();
        let b0 = q.partial(&point, free).unwrap();
        if b0.norm() < 1e-14 {
            continue;
        }
        let root = -a0 / b0;
        if root.norm() < z.coords[free].norm() * (1.0 - 1e-9) {
            return Ok(false);
        }
    }
    // diagonal zeros strictly inside the polydisk come from codiagonal
    // roots of smaller modulus (sign-change bracketing misses
    // even-multiplicity zeros, so use the roots themselves)
    let rho = z.coords.iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min);
    let cd = q.codiagonal();
    if cd.degree() > 0 {
        let rs = polyroots::find_roots(&cd, 1e-10)?;
        for &(root, _) in &rs.roots {
            if root.norm() < rho * (1.0 - 1e-9) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smoothness of the GRZ variety: singular exactly at `c = (d-1)^(d-1)`,
/// where the single singular point is the diagonal `1/(d-1)` point with
/// tangent cone `e2`.
pub fn detect_singularity(c: &BigRational, d: usize) -> SingularityReport {
    assert!(d >= 2);
    let c_star = big((d - 1) as i64).pow((d - 1) as i32);
    if *c != c_star {
        return SingularityReport {
            singular_points: Vec::new(),
            tangent_cone_label: TangentCone::None,
        };
    }
    let x = 1.0 / (d as f64 - 1.0);
    let z = PointC::diagonal(Complex64::new(x, 0.0), d);
    let q = SymPoly::grz(c.clone(), d);

    // recentred series must have vanishing constant and linear parts and
    // quadratic part proportional to e2, i.e. all mixed second partials
    // equal (their common value is d-1)
    let qv = q.eval(&z).unwrap().norm();
    let grad = q.grad_log(&z).unwrap();
    let u = q.hessian_entries(&z).unwrap();
    let expected = d as f64 - 1.0;
    let mut cone = TangentCone::E2Cone;
    if qv > 1e-10 || grad.iter().any(|g| g.norm() > 1e-10) {
        cone = TangentCone::Other;
    }
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let second = u[i][j] / (z.coords[i] * z.coords[j]);
                if (second - Complex64::new(expected, 0.0)).norm() > 1e-8 * expected {
                    cone = TangentCone::Other;
                }
            }
        }
    }
    SingularityReport {
        singular_points: vec![z],
        tangent_cone_label: cone,
    }
}
