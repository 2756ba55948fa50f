//! Symmetric multilinear polynomials on the elementary-symmetric basis.
//!
//! A polynomial `Q = sum_k c_k e_{k,d}` is stored as its `d+1` basis
//! coefficients, never as the expanded `2^d`-term polynomial.  All
//! derivative operations use multilinear specialization: `Q = A + z_j B`
//! with `A`, `B` symmetric in the remaining variables.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::polyroots::UniPoly;

#[derive(Debug, Error, PartialEq)]
pub enum SymError {
    #[error("point has {got} coordinates but the polynomial has {want} variables")]
    DimensionMismatch { want: usize, got: usize },
    #[error("coordinate {0} is zero; log-gradient operations need nonzero coordinates")]
    ZeroCoordinate(usize),
    #[error("constant term e0 must be nonzero")]
    ZeroConstantTerm,
    #[error("need at least two variables, got d={0}")]
    TooFewVariables(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Evaluation point in `(C*)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointC {
    pub coords: Vec<Complex64>,
}

impl PointC {
    pub fn new(coords: Vec<Complex64>) -> Self {
        PointC { coords }
    }

    /// The diagonal point `(x, ..., x)`.
    pub fn diagonal(x: Complex64, d: usize) -> Self {
        PointC { coords: vec![x; d] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A symmetric multilinear polynomial `sum_k c_k e_{k,d}`, normalized so
/// that `c_0 = 1`.  Coefficients are exact rationals; evaluation is in
/// double-precision complex arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPoly {
    d: usize,
    e_coeffs: Vec<BigRational>,
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn binomial(n: usize, k: usize) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * big((n - i) as i64) / big((i + 1) as i64);
    }
    acc
}

impl SymPoly {
    /// Builds `sum_k e_coeffs[k] * e_k` and rescales so `e_coeffs[0] = 1`.
    pub fn new(d: usize, e_coeffs: Vec<BigRational>) -> Result<Self, SymError> {
        if d < 2 {
            return Err(SymError::TooFewVariables(d));
        }
        let mut e_coeffs = e_coeffs;
        e_coeffs.resize(d + 1, BigRational::zero());
        if e_coeffs[0].is_zero() {
            return Err(SymError::ZeroConstantTerm);
        }
        let c0 = e_coeffs[0].clone();
        for c in &mut e_coeffs {
            *c /= c0.clone();
        }
        Ok(SymPoly { d, e_coeffs })
    }

    /// The M3 family `1 - e1 + a e2 + b e3` in three variables.
    pub fn m3(a: BigRational, b: BigRational) -> Self {
        SymPoly::new(3, vec![big(1), big(-1), a, b]).unwrap()
    }

    /// The GRZ family `1 - e1 + c ed` in `d` variables.
    pub fn grz(c: BigRational, d: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[0] = big(1);
        coeffs[1] = big(-1);
        coeffs[d] = c;
        SymPoly::new(d, coeffs).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn e_coeffs(&self) -> &[BigRational] {
        &self.e_coeffs
    }

    pub fn e_coeffs_f64(&self) -> Vec<f64> {
        self.e_coeffs.iter().map(|c| c.to_f64().unwrap()).collect()
    }

    /// Rescales `x_j -> lambda x_j` so the `e1` coefficient becomes `-1`.
    /// Returns the rescaled polynomial and the applied `lambda`; callers
    /// un-scale asymptotics with it.  No-op when the `e1` coefficient is
    /// already `-1` or zero.
    pub fn normalize_linear(&self) -> (SymPoly, BigRational) {
        if self.e_coeffs[1].is_zero() {
            return (self.clone(), BigRational::one());
        }
        let lambda = -self.e_coeffs[1].recip();
        let mut coeffs = self.e_coeffs.clone();
        let mut pow = BigRational::one();
        for c in coeffs.iter_mut() {
            *c *= pow.clone();
            pow *= lambda.clone();
        }
        (SymPoly::new(self.d, coeffs).unwrap(), lambda)
    }

    /// Elementary symmetric values `e_0(z), ..., e_m(z)` of the given
    /// coordinates, by coefficient extraction from `prod (1 + z_j t)`.
    fn elementary_values(coords: &[Complex64]) -> Vec<Complex64> {
        let mut e = vec![Complex64::new(0.0, 0.0); coords.len() + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for (j, &z) in coords.iter().enumerate() {
            for k in (1..=j + 1).rev() {
                let lower = e[k - 1];
                e[k] += z * lower;
            }
        }
        e
    }

    fn check_dim(&self, z: &PointC) -> Result<(), SymError> {
        if z.dim() != self.d {
            return Err(SymError::DimensionMismatch {
                want: self.d,
                got: z.dim(),
            });
        }
        Ok(())
    }

    fn eval_on(&self, coords: &[Complex64]) -> Complex64 {
        let e = Self::elementary_values(coords);
        let cf = self.e_coeffs_f64();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, ek) in e.iter().enumerate().take(self.d + 1) {
            if k < cf.len() {
                acc += ek * cf[k];
            }
        }
        acc
    }

    pub fn eval(&self, z: &PointC) -> Result<Complex64, SymError> {
        self.check_dim(z)?;
        Ok(self.eval_on(&z.coords))
    }

    /// `dQ/dz_j`: the coefficient polynomial of `z_j` under multilinearity,
    /// i.e. `sum_k c_k e_{k-1}` of the remaining variables.
    pub fn partial(&self, z: &PointC, j: usize) -> Result<Complex64, SymError> {
        self.check_dim(z)?;
        let rest: Vec<Complex64> = z
            .coords
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &c)| c)
            .collect();
        let e = Self::elementary_values(&rest);
        let cf = self.e_coeffs_f64();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=self.d {
            if k - 1 < e.len() {
                acc += e[k - 1] * cf[k];
            }
        }
        Ok(acc)
    }

    /// Log-gradient `(z_1 dQ/dz_1, ..., z_d dQ/dz_d)`.
    pub fn grad_log(&self, z: &PointC) -> Result<Vec<Complex64>, SymError> {
        self.check_dim(z)?;
        for (j, c) in z.coords.iter().enumerate() {
            if c.norm() == 0.0 {
                return Err(SymError::ZeroCoordinate(j));
            }
        }
        (0..self.d)
            .map(|j| Ok(z.coords[j] * self.partial(z, j)?))
            .collect()
    }

    /// The matrix `U[i][j] = z_i z_j d^2 Q / dz_i dz_j`; diagonal entries
    /// vanish by multilinearity.
    pub fn hessian_entries(&self, z: &PointC) -> Result<Vec<Vec<Complex64>>, SymError> {
        self.check_dim(z)?;
        for (j, c) in z.coords.iter().enumerate() {
            if c.norm() == 0.0 {
                return Err(SymError::ZeroCoordinate(j));
            }
        }
        let cf = self.e_coeffs_f64();
        let mut u = vec![vec![Complex64::new(0.0, 0.0); self.d]; self.d];
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                let rest: Vec<Complex64> = z
                    .coords
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != i && m != j)
                    .map(|(_, &c)| c)
                    .collect();
                let e = Self::elementary_values(&rest);
                let mut second = Complex64::new(0.0, 0.0);
                for k in 2..=self.d {
                    if k - 2 < e.len() {
                        second += e[k - 2] * cf[k];
                    }
                }
                let entry = z.coords[i] * z.coords[j] * second;
                u[i][j] = entry;
                u[j][i] = entry;
            }
        }
        Ok(u)
    }

    /// The codiagonal `delta^Q(x) = Q(x, ..., x) = sum_k c_k C(d,k) x^k`
    /// as a double-precision polynomial.
    pub fn codiagonal(&self) -> UniPoly {
        UniPoly::from_real(
            &self
                .codiagonal_exact()
                .iter()
                .map(|c| c.to_f64().unwrap())
                .collect::<Vec<_>>(),
        )
    }

    /// Exact codiagonal coefficients.
    pub fn codiagonal_exact(&self) -> Vec<BigRational> {
        (0..=self.d)
            .map(|k| self.e_coeffs[k].clone() * binomial(self.d, k))
            .collect()
    }
}

/// Parses the text form `"d=3; e0=1, e1=-1, e2=1/2, e3=-0.25"`.
///
/// Coefficient values may be integers, fractions `p/q`, or decimals;
/// all are stored exactly.  Omitted `e_k` default to zero.
pub fn parse_sympoly(text: &str) -> Result<SymPoly, SymError> {
    let mut d: Option<usize> = None;
    let mut coeffs: Vec<(usize, BigRational)> = Vec::new();
    for part in text.split([';', ',']) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| SymError::Parse(format!("expected key=value, got '{part}'")))?;
        let key = key.trim();
        let value = value.trim();
        if key == "d" {
            d = Some(
                value
                    .parse::<usize>()
                    .map_err(|_| SymError::Parse(format!("bad dimension '{value}'")))?,
            );
        } else if let Some(idx) = key.strip_prefix('e') {
            let k = idx
                .parse::<usize>()
                .map_err(|_| SymError::Parse(format!("bad basis index '{key}'")))?;
            coeffs.push((k, parse_rational(value)?));
        } else {
            return Err(SymError::Parse(format!("unknown key '{key}'")));
        }
    }
    let d = d.ok_or_else(|| SymError::Parse("missing 'd='".into()))?;
    let mut e_coeffs = vec![BigRational::zero(); d + 1];
    for (k, v) in coeffs {
        if k > d {
            return Err(SymError::Parse(format!("e{k} exceeds d={d}")));
        }
        e_coeffs[k] = v;
    }
    SymPoly::new(d, e_coeffs)
}

/// Parses an exact rational from integer, `p/q`, or decimal text.
pub fn parse_rational(s: &str) -> Result<BigRational, SymError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: num_bigint::BigInt = num
            .trim()
            .parse()
            .map_err(|_| SymError::Parse(format!("bad numerator '{num}'")))?;
        let d: num_bigint::BigInt = den
            .trim()
            .parse()
            .map_err(|_| SymError::Parse(format!("bad denominator '{den}'")))?;
        if d.is_zero() {
            return Err(SymError::Parse("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = format!(
            "{}{}",
            int_part.trim().trim_start_matches(['+', '-']),
            frac_part.trim()
        );
        let n: num_bigint::BigInt = digits
            .parse()
            .map_err(|_| SymError::Parse(format!("bad decimal '{s}'")))?;
        let den = num_bigint::BigInt::from(10u32).pow(frac_part.trim().len() as u32);
        let val = BigRational::new(n, den);
        return Ok(if negative { -val.abs() } else { val.abs() });
    }
    let n: num_bigint::BigInt = s
        .parse()
        .map_err(|_| SymError::Parse(format!("bad number '{s}'")))?;
    Ok(BigRational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_form_evaluation() {
        // Q = 1 - e1 + e2 - e3 = (1-x)(1-y)(1-z)
        let q = SymPoly::new(3, vec![big(1), big(-1), big(1), big(-1)]).unwrap();
        let z = PointC::new(vec![c(0.5, 0.0); 3]);
        let v = q.eval(&z).unwrap();
        assert!((v - c(0.125, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn grz_critical_point_is_on_variety() {
        let q = SymPoly::grz(big(27), 4);
        let z = PointC::diagonal(c(1.0 / 3.0, 0.0), 4);
        assert!(q.eval(&z).unwrap().norm() < 1e-13);
    }

    #[test]
    fn m3_codiagonal_closed_form() {
        // Q = 1 - e1 + a e2 + b e3 on the diagonal: 1 - 3x + 3a x^2 + b x^3
        let q = SymPoly::m3(big(2), big(5));
        let cd = q.codiagonal();
        let expect = [1.0, -3.0, 6.0, 5.0];
        for (a, &b) in cd.coeffs().iter().zip(expect.iter()) {
            assert!((a.re - b).abs() < 1e-14);
        }
        // codiagonal consistency against eval
        for x in [0.3, -0.7, 1.9] {
            let via_eval = q.eval(&PointC::diagonal(c(x, 0.0), 3)).unwrap();
            let via_cd = cd.eval(c(x, 0.0));
            assert!((via_eval - via_cd).norm() < 1e-12 * (1.0 + via_cd.norm()));
        }
    }

    #[test]
    fn grz_codiagonal() {
        let q = SymPoly::grz(big(7), 5);
        let cd = q.codiagonal();
        let expect = [1.0, -5.0, 0.0, 0.0, 0.0, 7.0];
        for (a, &b) in cd.coeffs().iter().zip(expect.iter()) {
            assert!((a.re - b).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_codiagonal() {
        let q = SymPoly::new(2, vec![big(1)]).unwrap();
        let cd = q.codiagonal();
        assert_eq!(cd.degree(), 0);
        assert!((cd.coeffs()[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hyperplane_grad_log() {
        // Q = 1 - e1: log-gradient is (-z_1, ..., -z_d)
        let q = SymPoly::new(4, vec![big(1), big(-1)]).unwrap();
        let z = PointC::new(vec![c(0.3, 0.1), c(-0.5, 0.0), c(0.2, -0.4), c(1.0, 1.0)]);
        let g = q.grad_log(&z).unwrap();
        for (gi, zi) in g.iter().zip(z.coords.iter()) {
            assert!((gi + zi).norm() < 1e-14);
        }
    }

    #[test]
    fn m3_diagonal_grad_log_closed_form() {
        // all components equal x * (-1 + 2ax + bx^2) on the diagonal
        let (a, b) = (1.5, -0.75);
        let q = SymPoly::m3(parse_rational("3/2").unwrap(), parse_rational("-3/4").unwrap());
        for x in [0.2, -0.8] {
            let z = PointC::diagonal(c(x, 0.0), 3);
            let g = q.grad_log(&z).unwrap();
            let expect = x * (-1.0 + 2.0 * a * x + b * x * x);
            for gi in g {
                assert!((gi.re - expect).abs() < 1e-12 && gi.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grz_grad_log_sign_convention() {
        // Direct differentiation of 1 - e1 + c ed gives
        // (grad_log Q)_j = -z_j + c e_d(z); verified here by finite
        // differences, this is the convention the crate uses throughout.
        let q = SymPoly::grz(big(5), 4);
        let z = PointC::new(vec![c(0.3, 0.0), c(0.4, 0.0), c(0.25, 0.0), c(0.5, 0.0)]);
        let ed: Complex64 = z.coords.iter().product();
        let g = q.grad_log(&z).unwrap();
        for (j, gj) in g.iter().enumerate() {
            let expect = -z.coords[j] + 5.0 * ed;
            assert!((gj - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn hessian_entries_closed_forms() {
        // Q = 1 - e1: zero matrix
        let q = SymPoly::new(3, vec![big(1), big(-1)]).unwrap();
        let z = PointC::new(vec![c(0.4, 0.0), c(0.5, 0.0), c(0.6, 0.0)]);
        let u = q.hessian_entries(&z).unwrap();
        for row in &u {
            for e in row {
                assert!(e.norm() < 1e-15);
            }
        }
        // Q = 1 - e1 + a e2 (d=3) at (x,x,x): off-diagonal a x^2
        let a = parse_rational("0.7").unwrap();
        let q = SymPoly::new(3, vec![big(1), big(-1), a]).unwrap();
        let x = 0.45;
        let u = q.hessian_entries(&PointC::diagonal(c(x, 0.0), 3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert!(u[i][j].norm() < 1e-15);
                } else {
                    assert!((u[i][j].re - 0.7 * x * x).abs() < 1e-13);
                }
            }
        }
        // GRZ (c, 4) at (x,x,x,x): off-diagonal c x^4
        let q = SymPoly::grz(big(3), 4);
        let x = 0.31;
        let u = q.hessian_entries(&PointC::diagonal(c(x, 0.0), 4)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!((u[i][j].re - 3.0 * x.powi(4)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn finite_difference_consistency() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let q = SymPoly::new(
            4,
            vec![big(1), big(-1), big(2), parse_rational("-1/3").unwrap(), big(5)],
        )
        .unwrap();
        let h = 1e-5;
        for _ in 0..10 {
            let z = PointC::new(
                (0..4)
                    .map(|_| c(rng.gen_range(0.2..1.0), rng.gen_range(-0.5..0.5)))
                    .collect(),
            );
            let g = q.grad_log(&z).unwrap();
            for j in 0..4 {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp.coords[j] += c(h, 0.0);
                zm.coords[j] -= c(h, 0.0);
                let fd = (q.eval(&zp).unwrap() - q.eval(&zm).unwrap()) / (2.0 * h);
                let expect = z.coords[j] * fd;
                assert!((g[j] - expect).norm() <= 1e-6 * (1.0 + expect.norm()));
            }
            let u = q.hessian_entries(&z).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let mut zpp = z.clone();
                    let mut zpm = z.clone();
                    let mut zmp = z.clone();
                    let mut zmm = z.clone();
                    zpp.coords[i] += c(h, 0.0);
                    zpp.coords[j] += c(h, 0.0);
                    zpm.coords[i] += c(h, 0.0);
                    zpm.coords[j] -= c(h, 0.0);
                    zmp.coords[i] -= c(h, 0.0);
                    zmp.coords[j] += c(h, 0.0);
                    zmm.coords[i] -= c(h, 0.0);
                    zmm.coords[j] -= c(h, 0.0);
                    let fd = (q.eval(&zpp).unwrap() - q.eval(&zpm).unwrap()
                        - q.eval(&zmp).unwrap()
                        + q.eval(&zmm).unwrap())
                        / (4.0 * h * h);
                    let expect = z.coords[i] * z.coords[j] * fd;
                    assert!((u[i][j] - expect).norm() <= 1e-5 * (1.0 + expect.norm()));
                }
            }
        }
    }

    #[test]
    fn permutation_symmetry_and_multilinearity() {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let q = SymPoly::new(5, vec![big(1), big(-2), big(1), big(0), big(3), big(-1)]).unwrap();
        for _ in 0..10 {
            let coords: Vec<Complex64> = (0..5)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let v = q.eval(&PointC::new(coords.clone())).unwrap();
            let mut shuffled = coords.clone();
            shuffled.shuffle(&mut rng);
            let vs = q.eval(&PointC::new(shuffled)).unwrap();
            assert!((v - vs).norm() < 1e-12 * (1.0 + v.norm()));

            // affine in each coordinate: three collinear samples
            let j = rng.gen_range(0..5);
            let mut z0 = coords.clone();
            let mut z1 = coords.clone();
            let mut z2 = coords;
            z0[j] = c(0.0, 0.0);
            z1[j] = c(1.0, 0.0);
            z2[j] = c(2.0, 0.0);
            let f0 = q.eval(&PointC::new(z0)).unwrap();
            let f1 = q.eval(&PointC::new(z1)).unwrap();
            let f2 = q.eval(&PointC::new(z2)).unwrap();
            assert!((f2 - 2.0 * f1 + f0).norm() < 1e-10 * (1.0 + f2.norm()));
        }
    }

    #[test]
    fn parse_round_trip() {
        let q = parse_sympoly("d=3; e0=1, e1=-1, e2=1/2, e3=-0.25").unwrap();
        assert_eq!(q.dim(), 3);
        assert_eq!(q.e_coeffs()[2], parse_rational("1/2").unwrap());
        assert_eq!(q.e_coeffs()[3], parse_rational("-1/4").unwrap());
        assert!(parse_sympoly("d=3; e5=1").is_err());
        assert!(parse_sympoly("e1=1").is_err());
        assert!(parse_sympoly("d=3; e0=0, e1=1").is_err());
    }

    #[test]
    fn normalization_scale() {
        // e0=2 is divided through; e1=-3 is rescaled to -1 by lambda=1/3
        let q = SymPoly::new(3, vec![big(2), big(-6), big(2), big(4)]).unwrap();
        assert_eq!(q.e_coeffs()[0], big(1));
        assert_eq!(q.e_coeffs()[1], big(-3));
        let (qn, lambda) = q.normalize_linear();
        assert_eq!(lambda, parse_rational("1/3").unwrap());
        assert_eq!(qn.e_coeffs()[1], big(-1));
        // rescaling is evaluation-compatible: Qn(z) = Q(lambda z)
        let z = PointC::new(vec![c(0.9, 0.0), c(0.6, 0.3), c(-0.2, 0.1)]);
        let scaled = PointC::new(z.coords.iter().map(|&w| w / 3.0).collect());
        let lhs = qn.eval(&z).unwrap();
        let rhs = q.eval(&scaled).unwrap();
        assert!((lhs - rhs).norm() < 1e-13 * (1.0 + lhs.norm()));
    }
}
