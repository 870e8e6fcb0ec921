//! Operational growth classification of coefficient sequences.
//!
//! A sequence is exponentially bounded when `|a_k| e^{-Ck} -> 0` for every
//! `C > 0`. No finite prefix decides that, so this module fits
//! `ln |a_k| ~ a + p ln k + k ln b` over an index window and calls the
//! sequence bounded when the fitted `ln b` does not exceed a small tolerance.
//! Polynomial growth of any power is therefore bounded; adversarial
//! sequences can be misclassified.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::coeffs::{to_taylor, FourierCoefficients, TaylorCoefficients};
use crate::error::{Error, Result};

/// Default tolerance on the fitted `ln b`.
pub const DEFAULT_RATE_TOL: f64 = 1e-3;

/// Shortest window accepted for a fit.
pub const MIN_WINDOW: usize = 8;

/// Symbolic family of model sequences `|c_k| = k^p b^k`.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthFamily {
    Polynomial { p: f64 },
    PolyExponential { p: f64, b: f64 },
    Explicit(Vec<f64>),
}

impl GrowthFamily {
    pub fn polynomial(p: f64) -> Self {
        GrowthFamily::Polynomial { p }
    }

    pub fn poly_exponential(p: f64, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::precondition(format!(
                "growth base must be positive, got {b}"
            )));
        }
        Ok(GrowthFamily::PolyExponential { p, b })
    }

    /// `|c_k|` for `k = 0..=order`, computed in log space; `0^0 = 1`.
    pub fn magnitudes(&self, order: usize) -> Vec<f64> {
        let (p, lnb) = match self {
            GrowthFamily::Polynomial { p } => (*p, 0.0),
            GrowthFamily::PolyExponential { p, b } => (*p, b.ln()),
            GrowthFamily::Explicit(v) => {
                let mut out = v.clone();
                out.resize(order + 1, 0.0);
                return out;
            }
        };
        (0..=order)
            .map(|k| {
                if k == 0 {
                    if p == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    let kf = k as f64;
                    (p * kf.ln() + kf * lnb).exp()
                }
            })
            .collect()
    }

    /// Real Taylor coefficients following the family.
    pub fn generate(&self, order: usize) -> Result<TaylorCoefficients> {
        TaylorCoefficients::new(
            self.magnitudes(order)
                .into_iter()
                .map(|m| Complex64::new(m, 0.0))
                .collect(),
        )
    }

    /// Ground truth of the model: bounded iff `b <= 1`.
    pub fn is_bounded(&self) -> Option<bool> {
        match self {
            GrowthFamily::Polynomial { .. } => Some(true),
            GrowthFamily::PolyExponential { b, .. } => Some(*b <= 1.0),
            GrowthFamily::Explicit(_) => None,
        }
    }
}

impl fmt::Display for GrowthFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthFamily::Polynomial { p } => write!(f, "poly(p={p})"),
            GrowthFamily::PolyExponential { p, b } => write!(f, "polyexp(p={p}, b={b})"),
            GrowthFamily::Explicit(v) => write!(f, "explicit[{}]", v.len()),
        }
    }
}

/// Family name as accepted on the command line: `poly`, `polyexp`, `exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Poly,
    PolyExp,
    Exp,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly" | "polynomial" => Ok(FamilyKind::Poly),
            "polyexp" | "poly_exponential" => Ok(FamilyKind::PolyExp),
            "exp" | "exponential" => Ok(FamilyKind::Exp),
            other => Err(Error::Parse(format!("unknown growth family `{other}`"))),
        }
    }
}

impl FamilyKind {
    pub fn family(self, p: f64, b: f64) -> Result<GrowthFamily> {
        match self {
            FamilyKind::Poly => Ok(GrowthFamily::polynomial(p)),
            FamilyKind::PolyExp => GrowthFamily::poly_exponential(p, b),
            FamilyKind::Exp => GrowthFamily::poly_exponential(0.0, b),
        }
    }
}

/// Fit window and decision threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthModel {
    /// Inclusive index range; `None` means `[K/4, K]`.
    pub window: Option<(usize, usize)>,
    pub rate_tol: f64,
}

impl Default for GrowthModel {
    fn default() -> Self {
        GrowthModel {
            window: None,
            rate_tol: DEFAULT_RATE_TOL,
        }
    }
}

impl GrowthModel {
    pub fn with_window(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || hi < lo || hi - lo + 1 < MIN_WINDOW {
            return Err(Error::precondition(format!(
                "window [{lo}, {hi}] must start at 1 or later and hold at least {MIN_WINDOW} indices"
            )));
        }
        Ok(GrowthModel {
            window: Some((lo, hi)),
            rate_tol: DEFAULT_RATE_TOL,
        })
    }

    fn resolve(&self, order: usize) -> Result<(usize, usize)> {
        let (lo, hi) = self.window.unwrap_or(((order / 4).max(1), order));
        if hi > order {
            return Err(Error::precondition(format!(
                "window end {hi} exceeds sequence order {order}"
            )));
        }
        if hi < lo || hi - lo + 1 < MIN_WINDOW {
            return Err(Error::precondition(format!(
                "window [{lo}, {hi}] holds fewer than {MIN_WINDOW} indices"
            )));
        }
        Ok((lo, hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub bounded: bool,
    /// Fitted `ln b`.
    pub fitted_rate: f64,
    pub fitted_power: f64,
    pub window: (usize, usize),
    /// More than half of the window was zero.
    pub sparsity_flag: bool,
    /// Fewer than three nonzero magnitudes; trivially bounded.
    pub degenerate: bool,
}

/// Anything whose `k`-th magnitude can be classified.
#[derive(Debug, Clone, Copy)]
pub enum CoefficientSequence<'a> {
    Taylor(&'a TaylorCoefficients),
    Fourier(&'a FourierCoefficients),
    /// `|a_k|` for `k = 0..`.
    Magnitudes(&'a [f64]),
}

impl<'a> From<&'a TaylorCoefficients> for CoefficientSequence<'a> {
    fn from(tc: &'a TaylorCoefficients) -> Self {
        CoefficientSequence::Taylor(tc)
    }
}

impl<'a> From<&'a FourierCoefficients> for CoefficientSequence<'a> {
    fn from(fc: &'a FourierCoefficients) -> Self {
        CoefficientSequence::Fourier(fc)
    }
}

impl<'a> From<&'a [f64]> for CoefficientSequence<'a> {
    fn from(m: &'a [f64]) -> Self {
        CoefficientSequence::Magnitudes(m)
    }
}

impl CoefficientSequence<'_> {
    fn magnitudes(&self) -> Vec<f64> {
        match self {
            CoefficientSequence::Taylor(tc) => tc.coefficients().iter().map(|c| c.norm()).collect(),
            CoefficientSequence::Fourier(fc) => to_taylor(fc)
                .coefficients()
                .iter()
                .map(|c| c.norm())
                .collect(),
            CoefficientSequence::Magnitudes(m) => m.iter().map(|x| x.abs()).collect(),
        }
    }
}

/// Fits `ln |a_k| ~ a + p ln k + k ln b` on the model window.
pub fn classify_sequence<'a>(
    seq: impl Into<CoefficientSequence<'a>>,
    model: &GrowthModel,
) -> Result<ClassificationReport> {
    let mags = seq.into().magnitudes();
    if mags.is_empty() {
        return Err(Error::precondition("empty sequence"));
    }
    classify_magnitudes(&mags, model)
}

fn classify_magnitudes(mags: &[f64], model: &GrowthModel) -> Result<ClassificationReport> {
    let order = mags.len() - 1;
    let (lo, hi) = model.resolve(order)?;
    let span = hi - lo + 1;
    let points: Vec<(f64, f64)> = (lo..=hi)
        .filter(|&k| mags[k] > 0.0 && mags[k].is_finite())
        .map(|k| (k as f64, mags[k].ln()))
        .collect();
    let sparsity_flag = 2 * points.len() < span;
    if points.len() < 3 {
        return Ok(ClassificationReport {
            bounded: true,
            fitted_rate: 0.0,
            fitted_power: 0.0,
            window: (lo, hi),
            sparsity_flag,
            degenerate: true,
        });
    }
    // Scale the linear column by the window end to keep the design well
    // conditioned.
    let scale = hi as f64;
    let design = DMatrix::from_fn(points.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => points[i].0.ln(),
        _ => points[i].0 / scale,
    });
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = design.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::precondition(format!("growth fit failed: {e}")))?;
    let fitted_power = sol[1];
    let fitted_rate = sol[2] / scale;
    Ok(ClassificationReport {
        bounded: fitted_rate <= model.rate_tol,
        fitted_rate,
        fitted_power,
        window: (lo, hi),
        sparsity_flag,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub c_bounded: bool,
    pub ab_bounded: bool,
    pub agree: bool,
}

/// Classifies `c = to_taylor(fc)` and the pair `(alpha, beta)` separately.
/// The pair is bounded when both of its sequences are.
pub fn equivalence_check(
    fc: &FourierCoefficients,
    model: &GrowthModel,
) -> Result<EquivalenceReport> {
    let c_bounded = classify_sequence(fc, model)?.bounded;
    let with_zero = |v: &[f64]| {
        std::iter::once(0.0)
            .chain(v.iter().copied())
            .collect::<Vec<f64>>()
    };
    let alpha = with_zero(fc.alpha());
    let beta = with_zero(fc.beta());
    let ab_bounded =
        classify_magnitudes(&alpha, model)?.bounded && classify_magnitudes(&beta, model)?.bounded;
    Ok(EquivalenceReport {
        c_bounded,
        ab_bounded,
        agree: c_bounded == ab_bounded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub rho: f64,
    /// `exp` of the fitted slope of `ln |S_2N - S_N|` against `N`.
    pub tail_rate: f64,
    /// `(N, |S_2N - S_N|)` pairs used in the fit.
    pub tails: Vec<(usize, f64)>,
    /// Largest `|S_2N - S_N|` seen.
    pub max_partial_sum_delta: f64,
}

/// `ln |sum_{k=N}^{2N-1} c_k rho^k|`, with `rho^N` factored out so that the
/// value survives underflow.
fn log_dyadic_tail(c: &[Complex64], rho: f64, n: usize) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut weight = 1.0;
    for ck in &c[n..2 * n] {
        acc += ck * weight;
        weight *= rho;
    }
    n as f64 * rho.ln() + acc.norm().ln()
}

/// Dyadic Cauchy tails `|S_2N - S_N|` at each radius for
/// `N` in `[max(1, K/8), K/2]`, and their geometric rate.
pub fn convergence_radius_check(
    tc: &TaylorCoefficients,
    rhos: &[f64],
) -> Result<Vec<TailEstimate>> {
    let order = tc.order();
    let lo = (order / 8).max(1);
    let hi = order.div_ceil(2);
    if hi < lo + 1 {
        return Err(Error::precondition(format!(
            "order {order} is too short for a tail fit"
        )));
    }
    convergence_radius_check_range(tc, rhos, lo, hi)
}

/// As [`convergence_radius_check`] over an explicit range of `N`; needs
/// `2 hi - 1 <= K`.
pub fn convergence_radius_check_range(
    tc: &TaylorCoefficients,
    rhos: &[f64],
    lo: usize,
    hi: usize,
) -> Result<Vec<TailEstimate>> {
    let c = tc.coefficients();
    if lo == 0 || hi <= lo || 2 * hi > c.len() {
        return Err(Error::precondition(format!(
            "tail range [{lo}, {hi}] does not fit order {}",
            tc.order()
        )));
    }
    let report = classify_sequence(tc, &GrowthModel::default());
    if let Ok(r) = report {
        if !r.bounded {
            return Err(Error::precondition(format!(
                "coefficients grow exponentially (fitted rate {:.3e}); the series has no unit disk of convergence",
                r.fitted_rate
            )));
        }
    }
    rhos.iter()
        .map(|&rho| {
            if !(0.0..1.0).contains(&rho) {
                return Err(Error::domain(format!(
                    "radius must lie in [0, 1), got {rho}"
                )));
            }
            let logs: Vec<(usize, f64)> =
                (lo..=hi).map(|n| (n, log_dyadic_tail(c, rho, n))).collect();
            let tails: Vec<(usize, f64)> = logs.iter().map(|&(n, l)| (n, l.exp())).collect();
            let max_partial_sum_delta = tails.iter().map(|t| t.1).fold(0.0, f64::max);
            let finite: Vec<(f64, f64)> = logs
                .iter()
                .filter(|(_, l)| l.is_finite())
                .map(|&(n, l)| (n as f64, l))
                .collect();
            let tail_rate = if finite.len() < 2 {
                0.0
            } else {
                slope(&finite).exp()
            };
            Ok(TailEstimate {
                rho,
                tail_rate,
                tails,
                max_partial_sum_delta,
            })
        })
        .collect()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampedPeak {
    pub argmax: usize,
    pub max: f64,
    /// Every value after the peak is no larger than its predecessor.
    pub decreasing_after: bool,
}

/// Peak of `|a_k| k^p e^{-Ck}` over the window `[lo, hi]`.
pub fn damped_peak(mags: &[f64], p: f64, c: f64, lo: usize, hi: usize) -> Result<DampedPeak> {
    if lo == 0 || hi < lo || hi >= mags.len() {
        return Err(Error::precondition(format!(
            "window [{lo}, {hi}] does not fit {} magnitudes",
            mags.len()
        )));
    }
    let damped: Vec<f64> = (lo..=hi)
        .map(|k| {
            let kf = k as f64;
            (mags[k].abs().ln() + p * kf.ln() - c * kf).exp()
        })
        .collect();
    let (i, &max) =
        damped.iter().enumerate().fold(
            (0, &damped[0]),
            |best, cur| if *cur.1 > *best.1 { cur } else { best },
        );
    let decreasing_after = damped[i..].windows(2).all(|w| w[1] <= w[0]);
    Ok(DampedPeak {
        argmax: lo + i,
        max,
        decreasing_after,
    })
}
