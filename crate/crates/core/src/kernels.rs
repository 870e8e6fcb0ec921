//! Partial sums of the Taylor series and their Cauchy-integral
//! representations on a circle of radius `rho1`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{horner, TaylorCoefficients};
use crate::error::{Error, Result};
use crate::inner::{InnerAnalytic, PolarPoint};
use crate::io::fmt_f64;
use crate::quad::{compensated_sum_complex, cos_sin_multiple, Grid, UnitRoots};

/// Default number of contour nodes.
pub const DEFAULT_CONTOUR_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialSumReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub direct: Complex64,
    pub contour: Complex64,
    /// `|direct - contour|`.
    pub discrepancy: f64,
    /// The Cauchy term alone: `w(z)` inside the contour, zero outside.
    pub first_term: Complex64,
}

/// `S_N(z) = sum_{k<N} c_k z^k`, for any finite `z`.
pub fn partial_sum(tc: &TaylorCoefficients, z: PolarPoint, n: usize) -> Result<Complex64> {
    if n > tc.order() + 1 {
        return Err(Error::precondition(format!(
            "N = {n} exceeds K + 1 = {}",
            tc.order() + 1
        )));
    }
    Ok(horner(&tc.coefficients()[..n], z.z()))
}

fn check_contour(rho1: f64, points: usize) -> Result<()> {
    if !(rho1 > 0.0 && rho1 <= 1.0) {
        return Err(Error::domain(format!(
            "contour radius must lie in (0, 1], got {rho1}"
        )));
    }
    if points < 2 {
        return Err(Error::precondition("need at least 2 contour points"));
    }
    Ok(())
}

/// `w(z1)` at every node `z1 = rho1 e^{i theta_m}`.
fn contour_values(w: &InnerAnalytic, roots: &UnitRoots, rho1: f64) -> Result<Vec<Complex64>> {
    let grid = roots.grid();
    (0..grid.len())
        .into_par_iter()
        .map(|m| {
            w.eval_at(rho1 * roots.power(1, m)).map_err(|e| match e {
                Error::Pole { .. } => e,
                other => Error::Evaluation {
                    theta: grid.theta(m),
                    reason: other.to_string(),
                },
            })
        })
        .collect()
}

/// The two contour terms `(first, second)`:
/// `first = (1/2 pi i) oint w(z1) / (z1 - z) dz1` and
/// `second = (z^N / 2 pi i) oint w(z1) / (z1^N (z1 - z)) dz1`.
fn contour_terms(
    values: &[Complex64],
    roots: &UnitRoots,
    rho1: f64,
    z: Complex64,
    n: usize,
) -> (Complex64, Complex64) {
    let points = values.len();
    let (first, second): (Vec<Complex64>, Vec<Complex64>) = (0..points)
        .into_par_iter()
        .map(|m| {
            let z1 = rho1 * roots.power(1, m);
            let ratio = values[m] / (z1 - z);
            let shifted = rho1.powi(1 - n as i32) * roots.power(1 - n as i64, m);
            (ratio * z1, ratio * shifted)
        })
        .unzip();
    let scale = 1.0 / points as f64;
    let zn = z.powi(n as i32);
    (
        scale * compensated_sum_complex(first),
        zn * scale * compensated_sum_complex(second),
    )
}

/// `S_N(z)` as the difference of two contour integrals on radius `rho1`.
/// Inside the contour the first term is Cauchy's formula for `w(z)` and the
/// second is the remainder; outside, the first term vanishes. The direct
/// value needs Taylor coefficients of `w`.
pub fn contour_partial_sum(
    w: &InnerAnalytic,
    z: PolarPoint,
    n: usize,
    rho1: f64,
    points: usize,
) -> Result<PartialSumReport> {
    check_contour(rho1, points)?;
    if z.rho() == rho1 {
        return Err(Error::domain(format!(
            "z lies on the contour |z| = rho1 = {rho1}"
        )));
    }
    let tc = w.taylor_coefficients(n.saturating_sub(1)).ok_or_else(|| {
        Error::precondition(format!("no Taylor coefficients known for `{}`", w.label()))
    })?;
    let direct = partial_sum(&tc, z, n)?;
    let roots = UnitRoots::new(points);
    let values = contour_values(w, &roots, rho1)?;
    let (first, second) = contour_terms(&values, &roots, rho1, z.z(), n);
    let contour = first - second;
    Ok(PartialSumReport {
        n,
        direct,
        contour,
        discrepancy: (direct - contour).norm(),
        first_term: first,
    })
}

/// `R_N(z) = w(z) - S_N(z)` from its contour representation.
pub fn remainder(
    w: &InnerAnalytic,
    z: PolarPoint,
    n: usize,
    rho1: f64,
    points: usize,
) -> Result<Complex64> {
    check_contour(rho1, points)?;
    if z.rho() >= rho1 {
        return Err(Error::domain(format!(
            "remainder needs |z| < rho1, got |z| = {} and rho1 = {rho1}",
            z.rho()
        )));
    }
    let roots = UnitRoots::new(points);
    let values = contour_values(w, &roots, rho1)?;
    Ok(contour_terms(&values, &roots, rho1, z.z(), n).1)
}

/// Least-squares slope of `ln |R_N|` against `N`.
pub fn remainder_log_slope(
    w: &InnerAnalytic,
    z: PolarPoint,
    ns: &[usize],
    rho1: f64,
    points: usize,
) -> Result<f64> {
    if ns.len() < 2 {
        return Err(Error::precondition("slope fit needs at least two orders"));
    }
    let roots = UnitRoots::new(points);
    check_contour(rho1, points)?;
    if z.rho() >= rho1 {
        return Err(Error::domain("remainder needs |z| < rho1"));
    }
    let values = contour_values(w, &roots, rho1)?;
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            (
                n as f64,
                contour_terms(&values, &roots, rho1, z.z(), n).1.norm().ln(),
            )
        })
        .collect();
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    Ok(sxy / sxx)
}

/// `S_N(e^{i theta})` from values of `w` on the circle of radius `rho1 < 1`:
/// `-(1 / (2 pi rho1^(N-1))) int e^{-i N d} w(rho1, theta1) / (rho1 - e^{-i d}) dtheta1`
/// with `d = theta1 - theta`.
pub fn boundary_partial_sum(
    w: &InnerAnalytic,
    theta: f64,
    n: usize,
    rho1: f64,
    points: usize,
) -> Result<Complex64> {
    if !(rho1 > 0.0 && rho1 < 1.0) {
        return Err(Error::domain(format!(
            "boundary form needs 0 < rho1 < 1, got {rho1}"
        )));
    }
    if points < 2 {
        return Err(Error::precondition("need at least 2 quadrature points"));
    }
    let roots = UnitRoots::new(points);
    let values = contour_values(w, &roots, rho1)?;
    let (c, s) = cos_sin_multiple(1.0, theta);
    let turn = Complex64::new(c, s);
    let (cn, sn) = cos_sin_multiple(n as f64, theta);
    let turn_n = Complex64::new(cn, sn);
    let terms: Vec<Complex64> = (0..points)
        .into_par_iter()
        .map(|m| {
            let phase = roots.power(-(n as i64), m) * turn_n;
            let back = roots.power(-1, m) * turn;
            phase * values[m] / (rho1 - back)
        })
        .collect();
    let integral = Grid::new(points).weight() * compensated_sum_complex(terms);
    Ok(-integral / (2.0 * PI * rho1.powi(n as i32 - 1)))
}

/// `int [f + i g](theta1) K_N(theta1 - theta) dtheta1` with
/// `K_N(d) = [sin((N - 1/2) d) + i cos((N - 1/2) d)] / sin(d/2)`, by the
/// trapezoidal rule on the standard grid of the samples. A node at `theta`
/// itself is rejected.
///
/// This is a diagnostic: in the principal-value sense
/// `D / (4 pi) + w(e^{i theta}) / 2 = S_N(e^{i theta})`.
pub fn dirichlet_form(f: &[f64], g: &[f64], theta: f64, n: usize) -> Result<Complex64> {
    if f.len() != g.len() {
        return Err(Error::precondition("f and g samples differ in length"));
    }
    if f.len() < 2 {
        return Err(Error::precondition("need at least 2 samples"));
    }
    let grid = Grid::new(f.len());
    if grid.node_offset(theta).abs() < 1e-9 {
        return Err(Error::precondition(format!(
            "theta = {theta} sits on a grid node where the kernel is singular"
        )));
    }
    let terms = (0..grid.len())
        .map(|m| Complex64::new(f[m], g[m]) * dirichlet_kernel(grid.theta(m) - theta, n))
        .collect::<Vec<_>>();
    Ok(grid.weight() * compensated_sum_complex(terms))
}

/// Same integral for functions given in closed form, on `points` nodes
/// offset by half a step from `theta` so the singular node is skipped
/// symmetrically.
pub fn dirichlet_form_fn<F, G>(f: F, g: G, theta: f64, n: usize, points: usize) -> Result<Complex64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if points < 2 {
        return Err(Error::precondition("need at least 2 quadrature points"));
    }
    let h = 2.0 * PI / points as f64;
    let terms = (0..points)
        .map(|m| {
            let d = -PI + h * (m as f64 + 0.5);
            let t1 = theta + d;
            Complex64::new(f(t1), g(t1)) * dirichlet_kernel(d, n)
        })
        .collect::<Vec<_>>();
    Ok(h * compensated_sum_complex(terms))
}

fn dirichlet_kernel(d: f64, n: usize) -> Complex64 {
    let (c, s) = cos_sin_multiple(n as f64 - 0.5, d);
    Complex64::new(s, c) / (0.5 * d).sin()
}

/// Writes `N,discrepancy` rows.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[PartialSumReport]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["N", "discrepancy"])?;
    for r in rows {
        wtr.write_record([r.n.to_string(), fmt_f64(r.discrepancy)])?;
    }
    wtr.flush()?;
    Ok(())
}
