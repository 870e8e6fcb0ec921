//! Fourier coefficients by trapezoidal quadrature and the map between real
//! Fourier coefficients and complex Taylor coefficients.
//!
//! For a real function `f` with coefficients `alpha_0, alpha_k, beta_k`, the
//! Taylor coefficients of the associated inner analytic function are
//! `c_0 = alpha_0 / 2` and `c_k = alpha_k - i beta_k`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::PeriodicFunction;
use crate::inner::InnerAnalytic;
use crate::quad::{cos_sin_multiple, CompensatedSum, UnitRoots};

/// Largest `|Im c_0|` accepted by [`from_taylor`].
pub const REAL_MEAN_TOL: f64 = 1e-12;

/// Default quadrature size for `K` harmonics.
pub fn default_points(k: usize) -> usize {
    (4 * k).max(256)
}

/// Real Fourier coefficients `alpha_0`, `alpha_1..=K`, `beta_1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FourierWire", into = "FourierWire")]
pub struct FourierCoefficients {
    alpha0: f64,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct FourierWire {
    #[serde(rename = "K")]
    k: usize,
    alpha0: f64,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl TryFrom<FourierWire> for FourierCoefficients {
    type Error = Error;

    fn try_from(w: FourierWire) -> Result<Self> {
        if w.alpha.len() != w.k {
            return Err(Error::Parse(format!(
                "K = {} but alpha has {} entries",
                w.k,
                w.alpha.len()
            )));
        }
        FourierCoefficients::new(w.alpha0, w.alpha, w.beta)
    }
}

impl From<FourierCoefficients> for FourierWire {
    fn from(fc: FourierCoefficients) -> Self {
        FourierWire {
            k: fc.alpha.len(),
            alpha0: fc.alpha0,
            alpha: fc.alpha,
            beta: fc.beta,
        }
    }
}

impl FourierCoefficients {
    pub fn new(alpha0: f64, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::precondition(format!(
                "alpha has {} entries but beta has {}",
                alpha.len(),
                beta.len()
            )));
        }
        let finite = alpha0.is_finite() && alpha.iter().chain(&beta).all(|v| v.is_finite());
        if !finite {
            return Err(Error::precondition("Fourier coefficients must be finite"));
        }
        Ok(FourierCoefficients {
            alpha0,
            alpha,
            beta,
        })
    }

    pub fn zeros(k: usize) -> Self {
        FourierCoefficients {
            alpha0: 0.0,
            alpha: vec![0.0; k],
            beta: vec![0.0; k],
        }
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    /// `alpha_1..=K` (index 0 holds `alpha_1`).
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `beta_1..=K` (index 0 holds `beta_1`).
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// `alpha_k` for `k >= 1`.
    pub fn alpha_k(&self, k: usize) -> f64 {
        self.alpha[k - 1]
    }

    pub fn beta_k(&self, k: usize) -> f64 {
        self.beta[k - 1]
    }

    /// Plain (unregulated) trigonometric sum at `theta`.
    pub fn evaluate(&self, theta: f64) -> f64 {
        let mut acc = CompensatedSum::<f64>::default();
        acc.add(0.5 * self.alpha0);
        for (i, (a, b)) in self.alpha.iter().zip(&self.beta).enumerate() {
            let (c, s) = cos_sin_multiple((i + 1) as f64, theta);
            acc.add(a * c + b * s);
        }
        acc.value()
    }

    /// `a * self + b * other`; both must have the same order.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::precondition("orders differ"));
        }
        let combine = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(u, v)| a * u + b * v).collect();
        FourierCoefficients::new(
            a * self.alpha0 + b * other.alpha0,
            combine(&self.alpha, &other.alpha),
            combine(&self.beta, &other.beta),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.order(), other.order());
        let mut worst = (self.alpha0 - other.alpha0).abs();
        for (x, y) in self
            .alpha
            .iter()
            .chain(&self.beta)
            .zip(other.alpha.iter().chain(&other.beta))
        {
            worst = worst.max((x - y).abs());
        }
        worst
    }
}

/// Complex Taylor coefficients `c_0..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TaylorWire", into = "TaylorWire")]
pub struct TaylorCoefficients {
    c: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TaylorWire {
    #[serde(rename = "K")]
    k: usize,
    c_re: Vec<f64>,
    c_im: Vec<f64>,
}

impl TryFrom<TaylorWire> for TaylorCoefficients {
    type Error = Error;

    fn try_from(w: TaylorWire) -> Result<Self> {
        if w.c_re.len() != w.k + 1 || w.c_im.len() != w.k + 1 {
            return Err(Error::Parse(format!(
                "K = {} needs {} entries in c_re and c_im, found {} and {}",
                w.k,
                w.k + 1,
                w.c_re.len(),
                w.c_im.len()
            )));
        }
        TaylorCoefficients::new(
            w.c_re
                .into_iter()
                .zip(w.c_im)
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<TaylorCoefficients> for TaylorWire {
    fn from(tc: TaylorCoefficients) -> Self {
        TaylorWire {
            k: tc.order(),
            c_re: tc.c.iter().map(|c| c.re).collect(),
            c_im: tc.c.iter().map(|c| c.im).collect(),
        }
    }
}

impl TaylorCoefficients {
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::precondition("Taylor coefficients need at least c_0"));
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::precondition("Taylor coefficients must be finite"));
        }
        Ok(TaylorCoefficients { c })
    }

    pub(crate) fn from_raw(c: Vec<Complex64>) -> Self {
        debug_assert!(!c.is_empty());
        TaylorCoefficients { c }
    }

    pub fn zeros(k: usize) -> Self {
        TaylorCoefficients {
            c: vec![Complex64::new(0.0, 0.0); k + 1],
        }
    }

    /// `c_k = 1` for `k = power`, zero elsewhere.
    pub fn monomial(power: usize) -> Self {
        let mut tc = TaylorCoefficients::zeros(power);
        tc.c[power] = Complex64::new(1.0, 0.0);
        tc
    }

    /// Truncation order `K` (there are `K + 1` coefficients).
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.c
    }

    pub fn get(&self, k: usize) -> Complex64 {
        self.c.get(k).copied().unwrap_or_default()
    }

    /// Copy truncated or zero-padded to order `k`.
    pub fn resized(&self, k: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(k + 1, Complex64::new(0.0, 0.0));
        TaylorCoefficients { c }
    }

    /// Horner evaluation of the full truncated series at `z`.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        horner(&self.c, z)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.c.len().max(other.c.len());
        (0..n)
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, ck| acc * z + ck)
}

/// Trapezoidal Fourier coefficients of `f` on `points` uniform nodes.
pub fn fourier_coefficients(
    f: &PeriodicFunction,
    order: usize,
    points: usize,
) -> Result<FourierCoefficients> {
    if points < 2 * order + 2 {
        return Err(Error::precondition(format!(
            "{points} quadrature points cannot resolve {order} harmonics (need at least {})",
            2 * order + 2
        )));
    }
    let values = f.sample(points)?;
    Ok(coefficients_from_samples(&values, order))
}

/// Same rule applied to values already sampled on the uniform grid.
pub(crate) fn coefficients_from_samples(values: &[f64], order: usize) -> FourierCoefficients {
    let points = values.len();
    let roots = UnitRoots::new(points);
    let scale = 2.0 / points as f64;
    let alpha0 = scale * crate::quad::compensated_sum(values.iter().copied());
    let (alpha, beta): (Vec<f64>, Vec<f64>) = (1..=order)
        .into_par_iter()
        .map(|k| {
            let mut ca = CompensatedSum::<f64>::default();
            let mut cb = CompensatedSum::<f64>::default();
            for (m, v) in values.iter().enumerate() {
                let e = roots.power(k as i64, m);
                ca.add(v * e.re);
                cb.add(v * e.im);
            }
            (scale * ca.value(), scale * cb.value())
        })
        .unzip();
    FourierCoefficients {
        alpha0,
        alpha,
        beta,
    }
}

/// `c_0 = alpha_0 / 2`, `c_k = alpha_k - i beta_k`.
pub fn to_taylor(fc: &FourierCoefficients) -> TaylorCoefficients {
    let mut c = Vec::with_capacity(fc.order() + 1);
    c.push(Complex64::new(0.5 * fc.alpha0, 0.0));
    c.extend(
        fc.alpha
            .iter()
            .zip(&fc.beta)
            .map(|(a, b)| Complex64::new(*a, -b)),
    );
    TaylorCoefficients { c }
}

/// Inverse of [`to_taylor`]; rejects a mean term with an imaginary part.
pub fn from_taylor(tc: &TaylorCoefficients) -> Result<FourierCoefficients> {
    let c0 = tc.c[0];
    if c0.im.abs() > REAL_MEAN_TOL {
        return Err(Error::NonRealMean(c0.im));
    }
    let alpha = tc.c[1..].iter().map(|c| c.re).collect();
    let beta = tc.c[1..].iter().map(|c| -c.im).collect();
    Ok(FourierCoefficients {
        alpha0: 2.0 * c0.re,
        alpha,
        beta,
    })
}

/// `c_k` from the Cauchy integral of `w / z^(k+1)` on the circle of radius
/// `rho`, by the `points`-node trapezoidal rule.
pub fn coefficients_by_cauchy(
    w: &InnerAnalytic,
    k: usize,
    rho: f64,
    points: usize,
) -> Result<Complex64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::domain(format!(
            "contour radius must lie in (0, 1], got {rho}"
        )));
    }
    if points == 0 {
        return Err(Error::precondition("need at least one quadrature point"));
    }
    let roots = UnitRoots::new(points);
    let grid = roots.grid();
    let mut acc = CompensatedSum::<Complex64>::default();
    for m in 0..points {
        let z = rho * roots.power(1, m);
        let value = w.eval_at(z).map_err(|e| match e {
            Error::Pole { .. } => e,
            other => Error::Evaluation {
                theta: grid.theta(m),
                reason: other.to_string(),
            },
        })?;
        acc.add(value * roots.power(-(k as i64), m));
    }
    Ok(acc.value() / (points as f64 * rho.powi(k as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::CatalogFunction;
    use std::f64::consts::PI;

    #[test]
    fn constant_function() {
        let f = PeriodicFunction::from(CatalogFunction::Const(1.0));
        let fc = fourier_coefficients(&f, 4, default_points(4)).unwrap();
        assert!((fc.alpha0() - 2.0).abs() < 1e-15);
        assert!(fc.alpha().iter().chain(fc.beta()).all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn basis_element_cos3() {
        let f = PeriodicFunction::from(CatalogFunction::Cos(3));
        let fc = fourier_coefficients(&f, 4, 32).unwrap();
        for k in 1..=4 {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!((fc.alpha_k(k) - expect).abs() < 1e-14, "alpha_{k}");
            assert!(fc.beta_k(k).abs() < 1e-14, "beta_{k}");
        }
        assert!(fc.alpha0().abs() < 1e-14);
    }

    #[test]
    fn too_few_points_is_a_precondition_error() {
        let f = PeriodicFunction::from(CatalogFunction::Zero);
        assert!(matches!(
            fourier_coefficients(&f, 4, 9),
            Err(Error::Precondition(_))
        ));
        assert!(fourier_coefficients(&f, 4, 10).is_ok());
    }

    #[test]
    fn singular_grid_point_is_an_evaluation_error() {
        let f = PeriodicFunction::from(CatalogFunction::LogAbsSin);
        assert!(matches!(
            fourier_coefficients(&f, 4, 64),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn to_taylor_examples() {
        let fc = FourierCoefficients::new(2.0, vec![0.0; 3], vec![0.0; 3]).unwrap();
        let tc = to_taylor(&fc);
        assert_eq!(tc.get(0), Complex64::new(1.0, 0.0));
        assert!(tc.coefficients()[1..]
            .iter()
            .all(|c| *c == Complex64::new(0.0, 0.0)));

        let fc = FourierCoefficients::new(0.0, vec![1.0], vec![1.0]).unwrap();
        assert_eq!(to_taylor(&fc).get(1), Complex64::new(1.0, -1.0));
    }

    #[test]
    fn to_taylor_of_delta_coefficients_is_euler() {
        let theta1 = 0.7;
        let k_max = 6;
        let alpha = (1..=k_max)
            .map(|k| (k as f64 * theta1).cos() / PI)
            .collect();
        let beta = (1..=k_max)
            .map(|k| (k as f64 * theta1).sin() / PI)
            .collect();
        let tc = to_taylor(&FourierCoefficients::new(1.0 / PI, alpha, beta).unwrap());
        for k in 1..=k_max {
            let expect = Complex64::from_polar(1.0 / PI, -(k as f64) * theta1);
            assert!((tc.get(k) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn from_taylor_examples() {
        let tc = TaylorCoefficients::new(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, -1.0)])
            .unwrap();
        let fc = from_taylor(&tc).unwrap();
        assert_eq!(fc.alpha0(), 2.0);
        assert_eq!(fc.alpha_k(1), 1.0);
        assert_eq!(fc.beta_k(1), 1.0);

        let bad = TaylorCoefficients::new(vec![Complex64::new(0.0, 1.0)]).unwrap();
        assert!(matches!(from_taylor(&bad), Err(Error::NonRealMean(_))));
    }

    #[test]
    fn cauchy_on_monomials() {
        let w = InnerAnalytic::Taylor(TaylorCoefficients::monomial(2));
        let c2 = coefficients_by_cauchy(&w, 2, 0.5, 64).unwrap();
        assert!((c2 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let c1 = coefficients_by_cauchy(&w, 1, 0.5, 64).unwrap();
        assert!(c1.norm() < 1e-12);
    }

    #[test]
    fn cauchy_rejects_bad_radius() {
        let w = InnerAnalytic::Taylor(TaylorCoefficients::monomial(1));
        assert!(coefficients_by_cauchy(&w, 1, 0.0, 16).is_err());
        assert!(coefficients_by_cauchy(&w, 1, 1.5, 16).is_err());
    }

    #[test]
    fn cauchy_pole_on_unit_circle() {
        // theta_1 = 0 is a node of every even grid
        let w = InnerAnalytic::Delta { theta1: 0.0 };
        assert!(matches!(
            coefficients_by_cauchy(&w, 1, 1.0, 16),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn json_shapes() {
        let fc = FourierCoefficients::new(1.0, vec![2.0], vec![3.0]).unwrap();
        let s = serde_json::to_string(&fc).unwrap();
        assert_eq!(s, r#"{"K":1,"alpha0":1.0,"alpha":[2.0],"beta":[3.0]}"#);
        let back: FourierCoefficients = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fc);

        let tc = to_taylor(&fc);
        let s = serde_json::to_string(&tc).unwrap();
        assert_eq!(s, r#"{"K":1,"c_re":[0.5,2.0],"c_im":[0.0,-3.0]}"#);

        assert!(serde_json::from_str::<FourierCoefficients>(
            r#"{"K":2,"alpha0":1.0,"alpha":[2.0],"beta":[3.0]}"#
        )
        .is_err());
        assert!(
            serde_json::from_str::<TaylorCoefficients>(r#"{"K":1,"c_re":[1.0],"c_im":[0.0]}"#)
                .is_err()
        );
    }
}
