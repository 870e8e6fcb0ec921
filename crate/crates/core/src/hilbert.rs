//! Scalar product of inner analytic functions on the circle of radius
//! `rho0`, normalised so that the monomials are orthogonal with
//! `(z^k | z^k) = rho0^(2k)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::GramReport;
use crate::classify::{classify_sequence, GrowthModel, DEFAULT_RATE_TOL};
use crate::coeffs::TaylorCoefficients;
use crate::error::{Error, Result};
use crate::inner::InnerAnalytic;
use crate::quad::{compensated_sum_complex, UnitRoots};

pub const MIN_DISK_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskProductConfig {
    rho0: f64,
    points: usize,
}

impl DiskProductConfig {
    pub fn new(rho0: f64, points: usize) -> Result<Self> {
        if !(rho0 > 0.0 && rho0 <= 1.0) {
            return Err(Error::domain(format!(
                "rho0 must lie in (0, 1], got {rho0}"
            )));
        }
        if points < MIN_DISK_POINTS {
            return Err(Error::precondition(format!(
                "need at least {MIN_DISK_POINTS} points, got {points}"
            )));
        }
        Ok(DiskProductConfig { rho0, points })
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn points(&self) -> usize {
        self.points
    }
}

fn circle_values(w: &InnerAnalytic, roots: &UnitRoots, rho0: f64) -> Result<Vec<Complex64>> {
    let grid = roots.grid();
    (0..grid.len())
        .into_par_iter()
        .map(|m| {
            w.eval_at(rho0 * roots.power(1, m)).map_err(|e| match e {
                Error::Pole { .. } => e,
                other => Error::Evaluation {
                    theta: grid.theta(m),
                    reason: other.to_string(),
                },
            })
        })
        .collect()
}

/// `(1/2 pi) int conj(w1) w2 dtheta` on the circle of radius `rho0`.
pub fn inner_product_disk(
    w1: &InnerAnalytic,
    w2: &InnerAnalytic,
    cfg: &DiskProductConfig,
) -> Result<Complex64> {
    let roots = UnitRoots::new(cfg.points);
    let a = circle_values(w1, &roots, cfg.rho0)?;
    let b = circle_values(w2, &roots, cfg.rho0)?;
    let sum = compensated_sum_complex(a.iter().zip(&b).map(|(x, y)| x.conj() * y));
    Ok(sum / cfg.points as f64)
}

pub fn norm_disk(w: &InnerAnalytic, cfg: &DiskProductConfig) -> Result<f64> {
    Ok(inner_product_disk(w, w, cfg)?.re.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesProduct {
    pub value: Complex64,
    /// Set at `rho0 = 1` when the product terms do not decay fast enough to
    /// be summable; `value` is then only the truncated sum.
    pub divergent: bool,
    /// `max_k |c1_k c2_k| rho0^(2(K+1)) / (1 - rho0^2)`; absent at `rho0 = 1`.
    pub truncation_bound: Option<f64>,
}

/// `sum_k rho0^(2k) conj(c1_k) c2_k` up to the shorter order.
pub fn inner_product_series(
    tc1: &TaylorCoefficients,
    tc2: &TaylorCoefficients,
    rho0: f64,
) -> Result<SeriesProduct> {
    if !(rho0 > 0.0 && rho0 <= 1.0) {
        return Err(Error::domain(format!(
            "rho0 must lie in (0, 1], got {rho0}"
        )));
    }
    let order = tc1.order().min(tc2.order());
    let r2 = rho0 * rho0;
    let mut weight = 1.0;
    let mut terms = Vec::with_capacity(order + 1);
    let mut products = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let p = tc1.get(k).conj() * tc2.get(k);
        terms.push(weight * p);
        products.push(p.norm());
        weight *= r2;
    }
    let value = compensated_sum_complex(terms);
    let max_product = products.iter().copied().fold(0.0, f64::max);
    if rho0 < 1.0 {
        let bound = max_product * r2.powi(order as i32 + 1) / (1.0 - r2);
        return Ok(SeriesProduct {
            value,
            divergent: false,
            truncation_bound: Some(bound),
        });
    }
    let divergent = match classify_sequence(products.as_slice(), &GrowthModel::default()) {
        Ok(r) if !r.degenerate => {
            r.fitted_rate > DEFAULT_RATE_TOL
                || (r.fitted_rate >= -DEFAULT_RATE_TOL && r.fitted_power >= -1.0)
        }
        _ => false,
    };
    if divergent {
        log::warn!("product series at rho0 = 1 does not converge; returning the truncated sum");
    }
    Ok(SeriesProduct {
        value,
        divergent,
        truncation_bound: None,
    })
}

/// Gram matrix of the monomials `z^0..z^Kmax` under the disk product.
pub fn taylor_gram(k_max: usize, cfg: &DiskProductConfig) -> Result<GramReport> {
    if cfg.points < 4 * k_max + 2 {
        return Err(Error::precondition(format!(
            "Kmax = {k_max} needs at least {} points, got {}",
            4 * k_max + 2,
            cfg.points
        )));
    }
    let n = k_max + 1;
    let roots = UnitRoots::new(cfg.points);
    let columns: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            let scale = cfg.rho0.powi(k as i32);
            (0..cfg.points)
                .map(|m| scale * roots.power(k as i64, m))
                .collect()
        })
        .collect();
    let upper: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let s = compensated_sum_complex(
                        columns[i]
                            .iter()
                            .zip(&columns[j])
                            .map(|(a, b)| a.conj() * b),
                    );
                    s / cfg.points as f64
                })
                .collect()
        })
        .collect();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut imag = vec![vec![0.0; n]; n];
    for (i, row) in upper.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            let j = i + off;
            matrix[i][j] = v.re;
            matrix[j][i] = v.re;
            imag[i][j] = v.im.abs();
            imag[j][i] = v.im.abs();
        }
    }
    let diagonal: Vec<f64> = (0..n).map(|k| cfg.rho0.powi(2 * k as i32)).collect();
    Ok(GramReport::from_matrix(matrix, &diagonal, Some(&imag)))
}
