//! Univariate complex polynomial arithmetic and root finding.
//!
//! Roots are located by Aberth-Ehrlich simultaneous iteration, then
//! clustered into multiple roots and grouped by minimal modulus.  Degrees
//! in this crate never exceed ~12, so double precision with a fixed
//! iteration cap is sufficient.

use num_complex::Complex64;
use thiserror::Error;

const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("polynomial is constant; no roots to find")]
    DegreeZero,
    #[error("root iteration failed to converge within {0} iterations")]
    NoConvergence(usize),
}

/// Dense univariate polynomial; `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    /// Builds a polynomial from coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    /// Expands `lead * prod (x - r_i)^{m_i}`.
    pub fn from_roots(lead: Complex64, roots: &[(Complex64, usize)]) -> UniPoly {
        let mut out = vec![lead];
        for &(r, m) in roots {
            for _ in 0..m {
                let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
                for (k, &c) in out.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= r * c;
                }
                out = next;
            }
        }
        UniPoly::new(out)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Roots of a univariate polynomial with multiplicities and a distinguished
/// minimal-modulus subset.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<(Complex64, usize)>,
    pub min_modulus_indices: Vec<usize>,
    pub tolerance: f64,
}

impl RootSet {
    /// Sum of multiplicities; equals the degree of the source polynomial.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    pub fn min_modulus(&self) -> f64 {
        self.min_modulus_indices
            .iter()
            .map(|&i| self.roots[i].0.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Finds all roots of `p` with multiplicity detection.
///
/// `tol` controls multiplicity clustering: simple numeric roots closer than
/// `tol^(1/m)` are merged into a multiplicity-`m` root whose centroid makes
/// `p` and its first `m-1` derivatives small.
pub fn find_roots(p: &UniPoly, tol: f64) -> Result<RootSet, RootError> {
    assert!(tol > 0.0 && tol <= 1e-4, "tol must lie in (0, 1e-4]");
    if p.degree() == 0 {
        return Err(RootError::DegreeZero);
    }
    let raw = aberth_ehrlich(p)?;
    let clusters = cluster_roots(p, &raw, tol);

    let mut roots = clusters;
    // deterministic order: by principal argument in [0, 2pi), then multiplicity
    roots.sort_by(|a, b| {
        let ka = sort_key(a.0);
        let kb = sort_key(b.0);
        ka.partial_cmp(&kb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });

    let min_mod = roots.iter().map(|&(r, _)| r.norm()).fold(f64::INFINITY, f64::min);
    // Clustered roots are accurate to far better than sqrt(tol); group
    // moduli within a sqrt(tol)-scale band of the minimum.
    let band = tol.max(1e-14).sqrt() * (1.0 + min_mod);
    let min_modulus_indices = roots
        .iter()
        .enumerate()
        .filter(|(_, &(r, _))| r.norm() <= min_mod + band)
        .map(|(i, _)| i)
        .collect();

    Ok(RootSet {
        roots,
        min_modulus_indices,
        tolerance: band,
    })
}

fn sort_key(z: Complex64) -> (f64, f64) {
    let mut arg = z.arg();
    if arg < -1e-12 {
        arg += std::f64::consts::TAU;
    }
    (arg, z.norm())
}

/// The minimal-modulus subset of `rs` in deterministic order.
pub fn minimal_modulus_roots(rs: &RootSet) -> Vec<(Complex64, usize)> {
    rs.min_modulus_indices.iter().map(|&i| rs.roots[i]).collect()
}

fn aberth_ehrlich(p: &UniPoly) -> Result<Vec<Complex64>, RootError> {
    let n = p.degree();
    let lead = *p.coeffs().last().unwrap();
    let dp = p.derivative();

    // Cauchy bound for the root radius
    let radius = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);

    // initial guesses on a circle, offset angle to dodge real-axis symmetry
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(0.5 * radius.min(2.0 * radius.powf(1.0 / n as f64)), theta)
        })
        .collect();

    let scale = p.max_coeff_norm();
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let pv = p.eval(z[i]);
            let dv = dp.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let newton = if dv.norm() > 0.0 { pv / dv } else { pv };
            let mut repel = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        repel += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repel;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * (1.0 + radius) {
            break;
        }
    }

    // residual-based acceptance
    for &zi in &z {
        let residual = p.eval(zi).norm();
        let local_scale = scale * (1.0 + zi.norm()).powi(p.degree() as i32);
        if !(residual <= 1e-8 * local_scale) {
            return Err(RootError::NoConvergence(MAX_ITERATIONS));
        }
    }
    Ok(z)
}

/// Agglomerative clustering of numeric roots into multiple roots.
fn cluster_roots(p: &UniPoly, raw: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = raw.iter().map(|&z| (z, 1)).collect();
    let scale = 1.0 + raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let dist = (clusters[i].0 - clusters[j].0).norm();
                let m = clusters[i].1 + clusters[j].1;
                let threshold = tol.powf(1.0 / m as f64) * scale;
                if dist < threshold && best.map_or(true, |(_, _, d)| dist < d) {
                    best = Some((i, j, dist));
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let (zi, mi) = clusters[i];
        let (zj, mj) = clusters[j];
        let centroid = (zi * mi as f64 + zj * mj as f64) / (mi + mj) as f64;
        // accept the merge only if p and the first m-1 derivatives are small
        // at the centroid
        let m = mi + mj;
        let mut deriv = p.clone();
        let mut small = true;
        let local = p.max_coeff_norm() * (1.0 + centroid.norm()).powi(p.degree() as i32);
        for _ in 0..m {
            if deriv.eval(centroid).norm() > 1e-4 * local {
                small = false;
                break;
            }
            deriv = deriv.derivative();
        }
        if !small {
            break;
        }
        clusters[i] = (centroid, m);
        clusters.remove(j);
    }
    // snap near-real roots so conjugate symmetry of real inputs is exact
    for c in &mut clusters {
        if c.0.im.abs() < 1e-12 * scale {
            c.0.im = 0.0;
        }
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_constant() {
        let p = UniPoly::from_real(&[3.0]);
        assert_eq!(find_roots(&p, 1e-10).unwrap_err(), RootError::DegreeZero);
    }

    #[test]
    fn triple_root_at_one() {
        // 1 - 3x + 3x^2 - x^3 = (1-x)^3
        let p = UniPoly::from_real(&[1.0, -3.0, 3.0, -1.0]);
        let rs = find_roots(&p, 1e-10).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].1, 3);
        assert!((rs.roots[0].0 - c(1.0, 0.0)).norm() < 1e-6);
        assert_eq!(rs.total_multiplicity(), 3);
    }

    #[test]
    fn double_root_and_simple_root() {
        // 1 - 3x + 4x^3 = (2x-1)^2 (x+1)
        let p = UniPoly::from_real(&[1.0, -3.0, 0.0, 4.0]);
        let rs = find_roots(&p, 1e-10).unwrap();
        let mut by_mult: Vec<_> = rs.roots.clone();
        by_mult.sort_by_key(|&(_, m)| m);
        assert_eq!(by_mult.len(), 2);
        assert!((by_mult[0].0 - c(-1.0, 0.0)).norm() < 1e-8);
        assert_eq!(by_mult[0].1, 1);
        assert!((by_mult[1].0 - c(0.5, 0.0)).norm() < 1e-6);
        assert_eq!(by_mult[1].1, 2);
    }

    #[test]
    fn grz_critical_double_minimal_root() {
        // 1 - 4x + 27x^4 has a doubled minimal root at 1/3
        let p = UniPoly::from_real(&[1.0, -4.0, 0.0, 0.0, 27.0]);
        let rs = find_roots(&p, 1e-10).unwrap();
        let min = minimal_modulus_roots(&rs);
        assert_eq!(min.len(), 1);
        assert_eq!(min[0].1, 2);
        assert!((min[0].0 - c(1.0 / 3.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn linear_minimal_root() {
        for d in 1..=6 {
            let p = UniPoly::from_real(&[1.0, -(d as f64)]);
            let rs = find_roots(&p, 1e-10).unwrap();
            let min = minimal_modulus_roots(&rs);
            assert_eq!(min.len(), 1);
            assert!((min[0].0 - c(1.0 / d as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn grz_c3_d3_minimal_root_in_bracket() {
        // 1 - 3x + 3x^3: single real minimal root in [1/3, 1/2]
        let p = UniPoly::from_real(&[1.0, -3.0, 0.0, 3.0]);
        let rs = find_roots(&p, 1e-10).unwrap();
        let min = minimal_modulus_roots(&rs);
        assert_eq!(min.len(), 1);
        let r = min[0].0;
        assert!(r.im.abs() < 1e-10);
        assert!(r.re >= 1.0 / 3.0 - 1e-10 && r.re <= 0.5 + 1e-10);
    }

    #[test]
    fn grz_supercritical_conjugate_pair() {
        // 1 - 4x + 28x^4 (c > c_* = 27): minimal roots a conjugate pair,
        // no positive real member
        let p = UniPoly::from_real(&[1.0, -4.0, 0.0, 0.0, 28.0]);
        let rs = find_roots(&p, 1e-10).unwrap();
        let min = minimal_modulus_roots(&rs);
        assert_eq!(min.len(), 2);
        assert!(min.iter().all(|&(r, _)| r.im.abs() > 1e-8));
        assert!((min[0].0 - min[1].0.conj()).norm() < 1e-8);
    }

    #[test]
    fn rouche_unique_small_root() {
        // 1 - dx + c x^d with 0 < c < (d-1)^(d-1): exactly one root of
        // modulus below 1/(d-1)
        for d in 3..=6usize {
            let c_star = ((d - 1) as f64).powi(d as i32 - 1);
            for frac in [0.1, 0.5, 0.9] {
                let cc = frac * c_star;
                let mut coeffs = vec![0.0; d + 1];
                coeffs[0] = 1.0;
                coeffs[1] = -(d as f64);
                coeffs[d] = cc;
                let p = UniPoly::from_real(&coeffs);
                let rs = find_roots(&p, 1e-10).unwrap();
                let inside: Vec<_> = rs
                    .roots
                    .iter()
                    .filter(|&&(r, _)| r.norm() < 1.0 / (d as f64 - 1.0))
                    .collect();
                assert_eq!(inside.len(), 1, "d={d}, c={cc}");
                assert_eq!(inside[0].1, 1);
            }
        }
    }

    #[test]
    fn reconstruction_of_random_polynomials() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let deg = rng.gen_range(1..=8);
            let mut coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-10.0..10.0)).collect();
            if coeffs[deg].abs() < 0.5 {
                coeffs[deg] = 1.0;
            }
            let p = UniPoly::from_real(&coeffs);
            let rs = find_roots(&p, 1e-10).unwrap();
            let rebuilt = UniPoly::from_roots(*p.coeffs().last().unwrap(), &rs.roots);
            let scale = p.max_coeff_norm();
            for (a, b) in p.coeffs().iter().zip(rebuilt.coeffs()) {
                assert!((a - b).norm() <= 1e-8 * scale, "{:?} vs {:?}", p, rebuilt);
            }
        }
    }

    #[test]
    fn conjugate_closure_for_real_input() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let deg = rng.gen_range(2..=8);
            let mut coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-10.0..10.0)).collect();
            if coeffs[deg].abs() < 0.5 {
                coeffs[deg] = 1.0;
            }
            let p = UniPoly::from_real(&coeffs);
            let rs = find_roots(&p, 1e-10).unwrap();
            for &(r, m) in &rs.roots {
                if r.im.abs() > 1e-8 {
                    let found = rs
                        .roots
                        .iter()
                        .any(|&(s, ms)| (s - r.conj()).norm() < 1e-6 * (1.0 + r.norm()) && ms == m);
                    assert!(found, "missing conjugate of {r}");
                }
            }
        }
    }
}
