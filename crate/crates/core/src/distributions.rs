//! The Dirac delta on the circle and its derivatives, as coefficient
//! generators and as a closed-form inner analytic function.

use std::f64::consts::PI;

use crate::coeffs::FourierCoefficients;
use crate::error::{Error, Result};
use crate::inner::InnerAnalytic;
use crate::quad::cos_sin_multiple;

/// `delta^(order)(theta - theta1)`; order 0 is the delta itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSpec {
    theta1: f64,
    order: u32,
}

impl DeltaSpec {
    pub fn new(theta1: f64, order: u32) -> Result<Self> {
        if !(-PI..PI).contains(&theta1) {
            return Err(Error::precondition(format!(
                "theta1 must lie in [-pi, pi), got {theta1}"
            )));
        }
        Ok(DeltaSpec { theta1, order })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

pub fn delta_inner(theta1: f64) -> Result<InnerAnalytic> {
    let spec = DeltaSpec::new(theta1, 0)?;
    Ok(InnerAnalytic::Delta {
        theta1: spec.theta1,
    })
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::precondition("K must be at least 1"));
    }
    Ok(())
}

/// `alpha_0 = 1/pi`, `alpha_k = cos(k theta1)/pi`, `beta_k = sin(k theta1)/pi`.
pub fn delta_coefficients(spec: &DeltaSpec, k: usize) -> Result<FourierCoefficients> {
    check_order(k)?;
    if spec.order != 0 {
        return Err(Error::precondition(
            "delta_coefficients takes order 0; use delta_derivative_coefficients",
        ));
    }
    let (alpha, beta) = (1..=k).map(|j| base_pair(j, spec.theta1)).unzip();
    FourierCoefficients::new(1.0 / PI, alpha, beta)
}

fn base_pair(k: usize, theta1: f64) -> (f64, f64) {
    let (c, s) = cos_sin_multiple(k as f64, theta1);
    (c / PI, s / PI)
}

/// Coefficients of the `n`-th derivative of the delta. Each harmonic is
/// built from the delta's `(alpha_k, beta_k)` by `n` quarter turns scaled by
/// `k`, in the same order of operations as repeated
/// [`angular_derivative`](crate::series::angular_derivative), so the two
/// routes agree bit for bit.
pub fn delta_derivative_coefficients(spec: &DeltaSpec, k: usize) -> Result<FourierCoefficients> {
    check_order(k)?;
    if spec.order == 0 {
        return Err(Error::precondition("derivative order must be at least 1"));
    }
    let (alpha, beta) = (1..=k)
        .map(|j| {
            let (a, b) = base_pair(j, spec.theta1);
            let kf = j as f64;
            // Taylor form c = a - i b, rotated by i k per derivative.
            let (mut re, mut im) = (a, -b);
            for _ in 0..spec.order {
                (re, im) = (-(kf * im), kf * re);
            }
            (re, -im)
        })
        .unzip();
    FourierCoefficients::new(0.0, alpha, beta)
}

/// Coefficients for any order: dispatches on `spec.order`.
pub fn distribution_coefficients(spec: &DeltaSpec, k: usize) -> Result<FourierCoefficients> {
    if spec.order == 0 {
        delta_coefficients(spec, k)
    } else {
        delta_derivative_coefficients(spec, k)
    }
}

/// `(1/2pi) (1 - rho^2) / (1 + rho^2 - 2 rho cos(theta - theta1))`, with the
/// denominator written as `(1 - rho)^2 + 4 rho sin^2(dtheta/2)` to keep it
/// accurate near the peak.
pub fn poisson_kernel(theta: f64, theta1: f64, rho: f64) -> f64 {
    let half = 0.5 * (theta - theta1);
    let s = half.sin();
    let denom = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * s * s;
    (1.0 - rho) * (1.0 + rho) / (2.0 * PI * denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{from_taylor, to_taylor};
    use crate::series::{angular_derivative, regulated_sum};
    use num_complex::Complex64;

    #[test]
    fn delta_at_zero_has_flat_cosines() {
        let fc = delta_coefficients(&DeltaSpec::new(0.0, 0).unwrap(), 16).unwrap();
        assert_eq!(fc.alpha0(), 1.0 / PI);
        assert!(fc.alpha().iter().all(|&a| a == 1.0 / PI));
        assert!(fc.beta().iter().all(|&b| b == 0.0));
    }

    #[test]
    fn delta_at_quarter_turn() {
        let fc = delta_coefficients(&DeltaSpec::new(PI / 2.0, 0).unwrap(), 4).unwrap();
        assert!(fc.alpha_k(1).abs() < 1e-16);
        assert!((fc.beta_k(1) - 1.0 / PI).abs() < 1e-16);
        assert_eq!(fc.alpha0(), 1.0 / PI);
    }

    #[test]
    fn first_and_second_derivative_at_zero() {
        let d1 = delta_derivative_coefficients(&DeltaSpec::new(0.0, 1).unwrap(), 10).unwrap();
        let d2 = delta_derivative_coefficients(&DeltaSpec::new(0.0, 2).unwrap(), 10).unwrap();
        for k in 1..=10 {
            let kf = k as f64;
            assert_eq!(d1.alpha_k(k), 0.0);
            assert!((d1.beta_k(k) + kf / PI).abs() <= 1e-15 * kf);
            assert!((d2.alpha_k(k) + kf * kf / PI).abs() <= 1e-15 * kf * kf);
            assert_eq!(d2.beta_k(k), 0.0);
        }
        let tc = to_taylor(&d1);
        for k in 1..=10 {
            let want = Complex64::new(0.0, k as f64 / PI);
            assert!((tc.get(k) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_matches_repeated_angular_derivative_exactly() {
        for &theta1 in &[0.0, 0.7, -2.9, PI / 3.0] {
            let base =
                to_taylor(&delta_coefficients(&DeltaSpec::new(theta1, 0).unwrap(), 50).unwrap());
            let mut tc = base;
            for n in 1..=5 {
                tc = angular_derivative(&tc);
                let direct =
                    delta_derivative_coefficients(&DeltaSpec::new(theta1, n).unwrap(), 50).unwrap();
                assert_eq!(from_taylor(&tc).unwrap(), direct, "theta1={theta1}, n={n}");
            }
        }
    }

    #[test]
    fn closed_form_values() {
        let w = delta_inner(0.0).unwrap();
        let origin = w.eval_at(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(origin, Complex64::new(1.0 / (2.0 * PI), 0.0));
        assert!(delta_inner(PI).is_err());
    }

    #[test]
    fn real_part_is_poisson_kernel() {
        let theta1 = 0.4;
        let fc = delta_coefficients(&DeltaSpec::new(theta1, 0).unwrap(), 10_000).unwrap();
        let w = delta_inner(theta1).unwrap();
        for &(rho, theta) in &[(0.3, 1.0), (0.9, 0.5), (0.99, -2.0)] {
            let kernel = poisson_kernel(theta, theta1, rho);
            let series = regulated_sum(&fc, theta, rho).unwrap();
            let closed = w.eval_at(Complex64::from_polar(rho, theta)).unwrap().re;
            assert!((series - kernel).abs() < 1e-12, "{series} vs {kernel}");
            assert!((closed - kernel).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(delta_coefficients(&DeltaSpec::new(0.0, 0).unwrap(), 0).is_err());
        assert!(delta_coefficients(&DeltaSpec::new(0.0, 1).unwrap(), 3).is_err());
        assert!(delta_derivative_coefficients(&DeltaSpec::new(0.0, 0).unwrap(), 3).is_err());
    }
}
