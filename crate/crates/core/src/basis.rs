//! Numerical witnesses for the orthogonality of the Fourier basis and for
//! its completeness through the regulated delta expansion.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{delta_coefficients, DeltaSpec};
use crate::error::{Error, Result};
use crate::function::PeriodicFunction;
use crate::quad::{compensated_sum, CompensatedSum, Grid, UnitRoots};
use crate::series::regulated_sum;

/// Gram matrix of a finite basis together with its worst deviations from
/// the expected diagonal and from zero off the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub size: usize,
    pub max_offdiag_error: f64,
    pub max_diag_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

impl GramReport {
    /// Builds the report from a symmetric matrix and the expected diagonal.
    /// `offdiag_extra[i][j]` adds to the off-diagonal error of that entry
    /// (used for the imaginary parts of complex Gram matrices).
    pub(crate) fn from_matrix(
        matrix: Vec<Vec<f64>>,
        diagonal: &[f64],
        offdiag_extra: Option<&[Vec<f64>]>,
    ) -> Self {
        let n = matrix.len();
        let mut max_diag_error: f64 = 0.0;
        let mut max_offdiag_error: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let extra = offdiag_extra.map_or(0.0, |e| e[i][j]);
                if i == j {
                    max_diag_error = max_diag_error.max((matrix[i][j] - diagonal[i]).abs() + extra);
                } else {
                    max_offdiag_error = max_offdiag_error.max(matrix[i][j].abs() + extra);
                }
            }
        }
        GramReport {
            size: n,
            max_offdiag_error,
            max_diag_error,
            matrix: Some(matrix),
        }
    }

    /// Same report with the matrix dropped, for compact output.
    pub fn summary(&self) -> GramReport {
        GramReport {
            matrix: None,
            ..self.clone()
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let Some(m) = &self.matrix else { return 0.0 };
        let mut worst: f64 = 0.0;
        for i in 0..m.len() {
            for j in 0..i {
                worst = worst.max((m[i][j] - m[j][i]).abs());
            }
        }
        worst
    }
}

/// Trapezoidal value of `int_{-pi}^{pi} f g`.
pub fn scalar_product(f: &PeriodicFunction, g: &PeriodicFunction, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(Error::precondition("need at least 2 quadrature points"));
    }
    let fs = f.sample(points)?;
    let gs = g.sample(points)?;
    let grid = Grid::new(points);
    Ok(grid.weight() * compensated_sum(fs.iter().zip(&gs).map(|(a, b)| a * b)))
}

/// `(1/2 pi i)` times the contour integral of `z^(p-1)` over the circle of
/// radius `rho`.
pub fn residue_identity_check(p: i64, rho: f64, points: usize) -> Result<Complex64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::domain(format!("radius must be positive, got {rho}")));
    }
    let needed = 4 * p.unsigned_abs() as usize + 8;
    if points < needed {
        return Err(Error::precondition(format!(
            "power {p} needs at least {needed} points, got {points}"
        )));
    }
    // With z = rho e^{i theta}, dz = i z dtheta, so the integral is the
    // mean of z^p over the circle.
    let roots = UnitRoots::new(points);
    let mut acc = CompensatedSum::<Complex64>::default();
    for m in 0..points {
        acc.add(roots.power(p, m));
    }
    Ok(rho.powi(p as i32) * acc.value() / points as f64)
}

/// Basis vector `index` of `(1, cos 1..K, sin 1..K)` at node `m`.
fn fourier_basis(roots: &UnitRoots, k_max: usize, index: usize, m: usize) -> f64 {
    if index == 0 {
        1.0
    } else if index <= k_max {
        roots.power(index as i64, m).re
    } else {
        roots.power((index - k_max) as i64, m).im
    }
}

/// Gram matrix of `(1, cos 1..K, sin 1..K)` under `scalar_product / pi`.
pub fn fourier_gram(k: usize, points: usize) -> Result<GramReport> {
    if points < 4 * k + 2 {
        return Err(Error::precondition(format!(
            "K = {k} needs at least {} points, got {points}",
            4 * k + 2
        )));
    }
    let n = 2 * k + 1;
    let roots = UnitRoots::new(points);
    let columns: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..points)
                .map(|m| fourier_basis(&roots, k, i, m))
                .collect()
        })
        .collect();
    let scale = 2.0 / points as f64;
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    scale * compensated_sum(columns[i].iter().zip(&columns[j]).map(|(a, b)| a * b))
                })
                .collect()
        })
        .collect();
    let mut matrix = vec![vec![0.0; n]; n];
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            matrix[i][i + off] = v;
            matrix[i + off][i] = v;
        }
    }
    let mut diagonal = vec![1.0; n];
    diagonal[0] = 2.0;
    Ok(GramReport::from_matrix(matrix, &diagonal, None))
}

/// `int psi(theta) D(theta)` where `D` is the delta expansion at `theta1`
/// truncated at `K` harmonics and regulated at radius `rho`.
pub fn completeness_probe(
    psi: &PeriodicFunction,
    theta1: f64,
    rho: f64,
    k: usize,
    points: usize,
) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(format!(
            "probe radius must lie in [0, 1), got {rho}"
        )));
    }
    let fc = delta_coefficients(&DeltaSpec::new(theta1, 0)?, k)?;
    let values = psi.sample(points)?;
    let grid = Grid::new(points);
    let products = (0..points)
        .into_par_iter()
        .map(|m| Ok(values[m] * regulated_sum(&fc, grid.theta(m), rho)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(grid.weight() * compensated_sum(products))
}

/// Truncation order at which `rho^K` drops below `eps`.
pub fn order_for_radius(rho: f64, eps: f64) -> usize {
    if rho <= 0.0 {
        return 1;
    }
    (eps.ln() / rho.ln()).ceil().max(1.0) as usize
}

/// Entry of the Fourier Gram matrix by label, for reports: `"1"`, `"cos3"`,
/// `"sin2"`.
pub fn fourier_index(label: &str, k: usize) -> Option<usize> {
    if label == "1" {
        return Some(0);
    }
    let (kind, num) = label.split_at(3.min(label.len()));
    let j: usize = num.parse().ok()?;
    if j == 0 || j > k {
        return None;
    }
    match kind {
        "cos" => Some(j),
        "sin" => Some(k + j),
        _ => None,
    }
}

/// `int_{-pi}^{pi}` of the delta expansion against the constant; one for
/// every radius because only `alpha_0` survives.
pub fn unit_mass(theta1: f64, rho: f64, k: usize, points: usize) -> Result<f64> {
    completeness_probe(
        &PeriodicFunction::from(crate::function::CatalogFunction::Const(1.0)),
        theta1,
        rho,
        k,
        points,
    )
}
