//! In-disk evaluation and the regulated summation rule.
//!
//! A Fourier series, summable or not, is read as the boundary value of the
//! inner analytic function built from its coefficients:
//!
//! ```text
//! u(rho, theta) = alpha_0 / 2 + sum_k rho^k [alpha_k cos(k theta) + beta_k sin(k theta)]
//! v(rho, theta) =               sum_k rho^k [alpha_k sin(k theta) - beta_k cos(k theta)]
//! ```
//!
//! and `f(theta)` is recovered as `u` in the limit `rho -> 1-`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{FourierCoefficients, TaylorCoefficients};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::quad::{cos_sin_multiple, CompensatedSum};

pub use crate::inner::{ClosedForm, CustomForm, InnerAnalytic, PolarPoint};

/// Exact `cos/sin(k theta)` is recomputed every this many terms; in between
/// the phase is advanced by one rotation.
const PHASE_REFRESH: usize = 16;

/// Default tolerance on the last step of a radius schedule.
pub const DEFAULT_LIMIT_TOL: f64 = 1e-6;

/// Default schedule exponents, `rho_j = 1 - 2^-j` for `j` in this range.
pub const DEFAULT_SCHEDULE: (u32, u32) = (1, 14);

/// `w(z)` at a point strictly inside the unit disk.
pub fn eval_inner(w: &InnerAnalytic, p: PolarPoint) -> Result<Complex64> {
    if p.rho() >= 1.0 {
        return Err(Error::domain(format!(
            "in-disk evaluation needs rho < 1, got {}",
            p.rho()
        )));
    }
    w.eval_at(p.z())
}

fn check_radius(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(format!(
            "regulated sums need 0 <= rho < 1, got {rho}"
        )));
    }
    Ok(())
}

/// Both regulated sums `(u, v)` at `(rho, theta)`.
fn regulated_pair(fc: &FourierCoefficients, theta: f64, rho: f64) -> (f64, f64) {
    let mut u = CompensatedSum::<f64>::default();
    let mut v = CompensatedSum::<f64>::default();
    u.add(0.5 * fc.alpha0());
    let (s1, c1) = theta.sin_cos();
    let (mut c, mut s) = (1.0, 0.0);
    let mut weight = 1.0;
    for (i, (a, b)) in fc.alpha().iter().zip(fc.beta()).enumerate() {
        let k = i + 1;
        if i % PHASE_REFRESH == 0 {
            (c, s) = cos_sin_multiple(k as f64, theta);
            weight = rho.powi(k as i32);
        } else {
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
            weight *= rho;
        }
        if weight == 0.0 {
            break;
        }
        u.add(weight * (a * c + b * s));
        v.add(weight * (a * s - b * c));
    }
    (u.value(), v.value())
}

/// `alpha_0/2 + sum_k rho^k [alpha_k cos(k theta) + beta_k sin(k theta)]`.
pub fn regulated_sum(fc: &FourierCoefficients, theta: f64, rho: f64) -> Result<f64> {
    check_radius(rho)?;
    Ok(regulated_pair(fc, theta, rho).0)
}

/// `sum_k rho^k [alpha_k sin(k theta) - beta_k cos(k theta)]`, the series of
/// the Fourier conjugate.
pub fn conjugate_sum(fc: &FourierCoefficients, theta: f64, rho: f64) -> Result<f64> {
    check_radius(rho)?;
    Ok(regulated_pair(fc, theta, rho).1)
}

/// `(regulated_sum, conjugate_sum)` in one pass.
pub fn regulated_sums(fc: &FourierCoefficients, theta: f64, rho: f64) -> Result<(f64, f64)> {
    check_radius(rho)?;
    Ok(regulated_pair(fc, theta, rho))
}

/// Ascending radii in `(0, 1)` realising `rho -> 1-`, with the tolerance
/// on the change between the last two evaluations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoSchedule {
    rhos: Vec<f64>,
    tol: f64,
}

impl RhoSchedule {
    pub fn new(rhos: Vec<f64>, tol: f64) -> Result<Self> {
        if rhos.len() < 2 {
            return Err(Error::precondition(
                "a radius schedule needs at least two entries",
            ));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::precondition(format!(
                "schedule tolerance must be positive, got {tol}"
            )));
        }
        if rhos.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::precondition("schedule radii must lie in (0, 1)"));
        }
        if rhos.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::precondition(
                "schedule radii must be strictly ascending",
            ));
        }
        Ok(RhoSchedule { rhos, tol })
    }

    /// `rho_j = 1 - 2^-j` for `j = first..=last`.
    pub fn geometric(first: u32, last: u32, tol: f64) -> Result<Self> {
        if first == 0 || last <= first {
            return Err(Error::precondition(format!(
                "need 1 <= first < last, got {first}..{last}"
            )));
        }
        RhoSchedule::new(
            (first..=last)
                .map(|j| 1.0 - 0.5f64.powi(j as i32))
                .collect(),
            tol,
        )
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

impl Default for RhoSchedule {
    fn default() -> Self {
        RhoSchedule::geometric(DEFAULT_SCHEDULE.0, DEFAULT_SCHEDULE.1, DEFAULT_LIMIT_TOL)
            .expect("default schedule is valid")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LimitOptions {
    /// Also report a linear extrapolation in `1 - rho` from the last two
    /// evaluations. The plain limit stays the reported `value`.
    pub extrapolate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub value: f64,
    /// `|extrapolated - plain|`.
    pub correction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoLimit {
    pub value: f64,
    pub converged: bool,
    pub history: Vec<f64>,
    pub warnings: Vec<String>,
    pub extrapolation: Option<Extrapolation>,
}

/// Evaluates the regulated sum along the schedule.
pub fn rho_limit(fc: &FourierCoefficients, theta: f64, sched: &RhoSchedule) -> RhoLimit {
    rho_limit_with(fc, theta, sched, LimitOptions::default())
}

pub fn rho_limit_with(
    fc: &FourierCoefficients,
    theta: f64,
    sched: &RhoSchedule,
    opts: LimitOptions,
) -> RhoLimit {
    let history: Vec<f64> = sched
        .rhos
        .par_iter()
        .map(|&rho| regulated_pair(fc, theta, rho).0)
        .collect();
    let limit = limit_from_history(history, fc.order(), sched, opts);
    for w in &limit.warnings {
        log::warn!("{w}");
    }
    limit
}

/// Limits of the regulated sum and of its conjugate along the schedule.
pub fn rho_limit_pair(
    fc: &FourierCoefficients,
    theta: f64,
    sched: &RhoSchedule,
    opts: LimitOptions,
) -> (RhoLimit, RhoLimit) {
    let (u, v): (Vec<f64>, Vec<f64>) = sched
        .rhos
        .par_iter()
        .map(|&rho| regulated_pair(fc, theta, rho))
        .unzip();
    let u = limit_from_history(u, fc.order(), sched, opts);
    for w in &u.warnings {
        log::warn!("{w}");
    }
    (u, limit_from_history(v, fc.order(), sched, opts))
}

fn limit_from_history(
    history: Vec<f64>,
    order: usize,
    sched: &RhoSchedule,
    opts: LimitOptions,
) -> RhoLimit {
    let n = history.len();
    let value = history[n - 1];
    let converged = (history[n - 1] - history[n - 2]).abs() < sched.tol;

    let order = order as i32;
    let warnings: Vec<String> = sched
        .rhos
        .iter()
        .filter(|&&rho| rho.powi(order + 1) / (1.0 - rho) > sched.tol)
        .map(|rho| format!("truncation at K = {order} dominates at rho = {rho}"))
        .collect();

    let extrapolation = opts.extrapolate.then(|| {
        let (h1, h2) = (1.0 - sched.rhos[n - 2], 1.0 - sched.rhos[n - 1]);
        let (v1, v2) = (history[n - 2], history[n - 1]);
        let extrapolated = (h1 * v2 - h2 * v1) / (h1 - h2);
        Extrapolation {
            value: extrapolated,
            correction: (extrapolated - value).abs(),
        }
    });

    RhoLimit {
        value,
        converged,
        history,
        warnings,
        extrapolation,
    }
}

/// Coefficients of `i z w'(z)`: `c_k -> i k c_k`, `c_0 -> 0`.
pub fn angular_derivative(tc: &TaylorCoefficients) -> TaylorCoefficients {
    let c = tc
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let k = k as f64;
                Complex64::new(-(k * c.im), k * c.re)
            }
        })
        .collect();
    TaylorCoefficients::from_raw(c)
}

/// Coefficients of `-i int_0^z (w(z') - w(0)) / z' dz'`: `c_k -> c_k / (i k)`
/// and `c_0 -> 0`.
pub fn angular_primitive(tc: &TaylorCoefficients) -> TaylorCoefficients {
    let c = tc
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let k = k as f64;
                Complex64::new(c.im / k, -(c.re / k))
            }
        })
        .collect();
    TaylorCoefficients::from_raw(c)
}

/// Writes `theta,rho,value` rows.
pub fn write_curve_csv<W: Write>(out: W, rows: &[(f64, f64, f64)]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["theta", "rho", "value"])?;
    for (theta, rho, value) in rows {
        wtr.write_record([fmt_f64(*theta), fmt_f64(*rho), fmt_f64(*value)])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::to_taylor;
    use std::f64::consts::PI;

    fn cos1() -> FourierCoefficients {
        FourierCoefficients::new(0.0, vec![1.0], vec![0.0]).unwrap()
    }

    fn sin1() -> FourierCoefficients {
        FourierCoefficients::new(0.0, vec![0.0], vec![1.0]).unwrap()
    }

    fn one() -> FourierCoefficients {
        FourierCoefficients::new(2.0, vec![0.0; 4], vec![0.0; 4]).unwrap()
    }

    #[test]
    fn eval_inner_examples() {
        let c0 =
            InnerAnalytic::Taylor(TaylorCoefficients::new(vec![Complex64::new(1.0, 0.0)]).unwrap());
        assert_eq!(
            eval_inner(&c0, PolarPoint::new(0.3, 1.0).unwrap()).unwrap(),
            Complex64::new(1.0, 0.0)
        );

        let z = InnerAnalytic::Taylor(TaylorCoefficients::monomial(1));
        let v = eval_inner(&z, PolarPoint::new(0.5, PI / 2.0).unwrap()).unwrap();
        assert!((v - Complex64::new(0.0, 0.5)).norm() < 1e-16);

        let delta = InnerAnalytic::Delta { theta1: 0.0 };
        let v = eval_inner(&delta, PolarPoint::new(0.0, 2.0).unwrap()).unwrap();
        assert!((v.re - 1.0 / (2.0 * PI)).abs() < 1e-16);

        assert!(matches!(
            eval_inner(&z, PolarPoint::new(1.0, 0.0).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn regulated_sum_examples() {
        assert!((regulated_sum(&one(), 0.4, 0.9).unwrap() - 1.0).abs() < 1e-15);
        assert!((regulated_sum(&cos1(), 0.0, 0.99).unwrap() - 0.99).abs() < 1e-15);
        assert!(regulated_sum(&cos1(), 0.0, 1.0).is_err());
        assert!(regulated_sum(&cos1(), 0.0, -0.1).is_err());
    }

    #[test]
    fn conjugate_sum_examples() {
        assert!((conjugate_sum(&cos1(), PI / 2.0, 0.9).unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(conjugate_sum(&one(), 1.1, 0.9).unwrap(), 0.0);
        assert!((conjugate_sum(&sin1(), 0.0, 0.5).unwrap() + 0.5).abs() < 1e-15);
        assert!(conjugate_sum(&sin1(), 0.0, 1.0).is_err());
    }

    #[test]
    fn regulated_sums_are_the_parts_of_w() {
        let alpha: Vec<f64> = (1..=50)
            .map(|k| ((k * 7 % 11) as f64 - 5.0) / k as f64)
            .collect();
        let beta: Vec<f64> = (1..=50)
            .map(|k| ((k * 3 % 13) as f64 - 6.0) / k as f64)
            .collect();
        let fc = FourierCoefficients::new(0.7, alpha, beta).unwrap();
        let w = InnerAnalytic::Taylor(to_taylor(&fc));
        for &(rho, theta) in &[(0.3, 0.1), (0.9, -2.0), (0.99, 3.0)] {
            let z = eval_inner(&w, PolarPoint::new(rho, theta).unwrap()).unwrap();
            let u = regulated_sum(&fc, theta, rho).unwrap();
            let v = conjugate_sum(&fc, theta, rho).unwrap();
            assert!((u - z.re).abs() <= 1e-12 * z.re.abs().max(1.0));
            assert!((v - z.im).abs() <= 1e-12 * z.im.abs().max(1.0));
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(RhoSchedule::new(vec![0.5], 1e-6).is_err());
        assert!(RhoSchedule::new(vec![0.5, 0.4], 1e-6).is_err());
        assert!(RhoSchedule::new(vec![0.5, 1.0], 1e-6).is_err());
        assert!(RhoSchedule::new(vec![0.5, 0.6], 0.0).is_err());
        let s = RhoSchedule::default();
        assert_eq!(s.rhos().len(), 14);
        assert_eq!(s.rhos()[0], 0.5);
        assert_eq!(s.tol(), DEFAULT_LIMIT_TOL);
    }

    #[test]
    fn extrapolation_is_reported_separately() {
        // u(rho) = rho for cos(theta) at theta = 0: linear in 1 - rho,
        // so the extrapolation lands on 1 exactly.
        let sched = RhoSchedule::geometric(1, 6, 1e-6).unwrap();
        let lim = rho_limit_with(&cos1(), 0.0, &sched, LimitOptions { extrapolate: true });
        assert!((lim.value - sched.rhos()[5]).abs() < 1e-15);
        let ex = lim.extrapolation.unwrap();
        assert!((ex.value - 1.0).abs() < 1e-14);
        assert!((ex.correction - 0.5f64.powi(6)).abs() < 1e-14);
    }

    #[test]
    fn truncation_warning() {
        let sched = RhoSchedule::geometric(1, 10, 1e-6).unwrap();
        let lim = rho_limit(&cos1(), 0.3, &sched);
        assert!(!lim.warnings.is_empty());
        let big = FourierCoefficients::zeros(100_000);
        assert!(rho_limit(&big, 0.3, &sched).warnings.is_empty());
    }

    #[test]
    fn angular_derivative_examples() {
        let d = angular_derivative(&TaylorCoefficients::monomial(1));
        assert_eq!(d.get(1), Complex64::new(0.0, 1.0));
        let five =
            TaylorCoefficients::new(vec![Complex64::new(5.0, 0.0), Complex64::new(0.0, 0.0)])
                .unwrap();
        assert!(angular_derivative(&five)
            .coefficients()
            .iter()
            .all(|c| *c == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn angular_primitive_examples() {
        let i1 = TaylorCoefficients::new(vec![Complex64::new(5.0, 0.0), Complex64::new(0.0, 1.0)])
            .unwrap();
        let p = angular_primitive(&i1);
        assert_eq!(p.get(0), Complex64::new(0.0, 0.0));
        assert_eq!(p.get(1), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn curve_csv_format() {
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &[(0.0, 0.5, 1.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "theta,rho,value\n0.0000000000000000e0,5.0000000000000000e-1,1.0000000000000000e0\n"
        );
    }
}
