//! Built-in test functions with known coefficients and inner analytic forms.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::coeffs::{fourier_coefficients, to_taylor, FourierCoefficients, TaylorCoefficients};
use crate::distributions::{distribution_coefficients, DeltaSpec};
use crate::error::{Error, Result};
use crate::function::{CatalogFunction, PeriodicFunction};
use crate::inner::{ClosedForm, InnerAnalytic};

/// Quadrature size used by [`CatalogEntry::self_test`]; large enough that
/// the second-order error at a jump stays below the self-test tolerance.
pub const SELF_TEST_POINTS: usize = 1 << 18;

/// Agreement required between known coefficients and quadrature.
pub const SELF_TEST_TOL: f64 = 1e-8;

/// Parameters a catalog id may take.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CatalogParams {
    pub harmonic: Option<u32>,
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub theta1: Option<f64>,
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogEntry {
    Zero,
    Const { c: f64 },
    Cos { k: u32 },
    Sin { k: u32 },
    Square,
    Sawtooth,
    Triangle,
    Poisson { r: f64 },
    LogAbsSin,
    Delta { theta1: f64 },
    DeltaDerivative { theta1: f64, order: u32 },
}

pub const CATALOG_IDS: &[&str] = &[
    "zero",
    "const",
    "cos_k",
    "sin_k",
    "square",
    "sawtooth",
    "triangle",
    "poisson",
    "log_abs_sin",
    "delta",
    "delta_derivative",
];

impl CatalogEntry {
    /// Resolves an id; `cos_3` and `sin_3` are accepted as shorthand for
    /// `cos_k` and `sin_k` with harmonic 3.
    pub fn parse(id: &str, params: &CatalogParams) -> Result<Self> {
        let harmonic = |default: Option<u32>| -> Result<u32> {
            let k = params.harmonic.or(default).unwrap_or(1);
            if k == 0 {
                return Err(Error::Parse("harmonic index must be at least 1".into()));
            }
            Ok(k)
        };
        let entry = match id {
            "zero" => CatalogEntry::Zero,
            "const" => CatalogEntry::Const {
                c: params.c.unwrap_or(1.0),
            },
            "square" => CatalogEntry::Square,
            "sawtooth" => CatalogEntry::Sawtooth,
            "triangle" => CatalogEntry::Triangle,
            "log_abs_sin" => CatalogEntry::LogAbsSin,
            "poisson" => {
                let r = params.r.unwrap_or(0.5);
                if !(r.abs() < 1.0) {
                    return Err(Error::Parse(format!("poisson needs |r| < 1, got {r}")));
                }
                CatalogEntry::Poisson { r }
            }
            "delta" => CatalogEntry::Delta {
                theta1: checked_theta1(params)?,
            },
            "delta_derivative" => {
                let order = params.order.unwrap_or(1);
                if order == 0 {
                    return Err(Error::Parse("delta_derivative needs order >= 1".into()));
                }
                CatalogEntry::DeltaDerivative {
                    theta1: checked_theta1(params)?,
                    order,
                }
            }
            _ => {
                if let Some((kind, rest)) = id.split_once('_') {
                    let explicit = if rest == "k" {
                        None
                    } else {
                        Some(
                            rest.parse::<u32>()
                                .map_err(|_| Error::Parse(format!("unknown catalog id `{id}`")))?,
                        )
                    };
                    match kind {
                        "cos" => CatalogEntry::Cos {
                            k: harmonic(explicit)?,
                        },
                        "sin" => CatalogEntry::Sin {
                            k: harmonic(explicit)?,
                        },
                        _ => return Err(Error::Parse(format!("unknown catalog id `{id}`"))),
                    }
                } else {
                    return Err(Error::Parse(format!("unknown catalog id `{id}`")));
                }
            }
        };
        Ok(entry)
    }

    pub fn id(&self) -> &'static str {
        match self {
            CatalogEntry::Zero => "zero",
            CatalogEntry::Const { .. } => "const",
            CatalogEntry::Cos { .. } => "cos_k",
            CatalogEntry::Sin { .. } => "sin_k",
            CatalogEntry::Square => "square",
            CatalogEntry::Sawtooth => "sawtooth",
            CatalogEntry::Triangle => "triangle",
            CatalogEntry::Poisson { .. } => "poisson",
            CatalogEntry::LogAbsSin => "log_abs_sin",
            CatalogEntry::Delta { .. } => "delta",
            CatalogEntry::DeltaDerivative { .. } => "delta_derivative",
        }
    }

    pub fn parameters(&self) -> BTreeMap<&'static str, f64> {
        let mut map = BTreeMap::new();
        match *self {
            CatalogEntry::Const { c } => {
                map.insert("c", c);
            }
            CatalogEntry::Cos { k } | CatalogEntry::Sin { k } => {
                map.insert("k", k as f64);
            }
            CatalogEntry::Poisson { r } => {
                map.insert("r", r);
            }
            CatalogEntry::Delta { theta1 } => {
                map.insert("theta1", theta1);
            }
            CatalogEntry::DeltaDerivative { theta1, order } => {
                map.insert("theta1", theta1);
                map.insert("order", order as f64);
            }
            _ => {}
        }
        map
    }

    /// Distributions have coefficients but no pointwise values.
    pub fn is_distribution(&self) -> bool {
        matches!(
            self,
            CatalogEntry::Delta { .. } | CatalogEntry::DeltaDerivative { .. }
        )
    }

    pub fn singular_points(&self) -> Vec<f64> {
        match *self {
            CatalogEntry::LogAbsSin => vec![0.0],
            CatalogEntry::Delta { theta1 } | CatalogEntry::DeltaDerivative { theta1, .. } => {
                vec![theta1]
            }
            _ => Vec::new(),
        }
    }

    pub fn function(&self) -> Option<PeriodicFunction> {
        let f = match *self {
            CatalogEntry::Zero => CatalogFunction::Zero,
            CatalogEntry::Const { c } => CatalogFunction::Const(c),
            CatalogEntry::Cos { k } => CatalogFunction::Cos(k),
            CatalogEntry::Sin { k } => CatalogFunction::Sin(k),
            CatalogEntry::Square => CatalogFunction::Square,
            CatalogEntry::Sawtooth => CatalogFunction::Sawtooth,
            CatalogEntry::Triangle => CatalogFunction::Triangle,
            CatalogEntry::Poisson { r } => CatalogFunction::Poisson { r },
            CatalogEntry::LogAbsSin => CatalogFunction::LogAbsSin,
            CatalogEntry::Delta { .. } | CatalogEntry::DeltaDerivative { .. } => return None,
        };
        Some(f.into())
    }

    /// Closed-form coefficients up to order `k`, when known. The logarithmic
    /// entry has none: its singular point sits on every even grid and the
    /// trapezoidal rule cannot meet the self-test tolerance there.
    pub fn known_coefficients(&self, k: usize) -> Option<Result<FourierCoefficients>> {
        let fill = |alpha0: f64, a: &dyn Fn(usize) -> f64, b: &dyn Fn(usize) -> f64| {
            FourierCoefficients::new(alpha0, (1..=k).map(a).collect(), (1..=k).map(b).collect())
        };
        let sign = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
        let result = match *self {
            CatalogEntry::Zero => Ok(FourierCoefficients::zeros(k)),
            CatalogEntry::Const { c } => fill(2.0 * c, &|_| 0.0, &|_| 0.0),
            CatalogEntry::Cos { k: h } => {
                fill(0.0, &|j| if j == h as usize { 1.0 } else { 0.0 }, &|_| 0.0)
            }
            CatalogEntry::Sin { k: h } => {
                fill(0.0, &|_| 0.0, &|j| if j == h as usize { 1.0 } else { 0.0 })
            }
            CatalogEntry::Square => fill(0.0, &|_| 0.0, &|j| {
                if j % 2 == 1 {
                    4.0 / (PI * j as f64)
                } else {
                    0.0
                }
            }),
            CatalogEntry::Sawtooth => fill(0.0, &|_| 0.0, &|j| -2.0 * sign(j) / j as f64),
            CatalogEntry::Triangle => fill(
                PI,
                &|j| 2.0 * (sign(j) - 1.0) / (PI * (j * j) as f64),
                &|_| 0.0,
            ),
            CatalogEntry::Poisson { r } => fill(2.0, &|j| 2.0 * r.powi(j as i32), &|_| 0.0),
            CatalogEntry::LogAbsSin => return None,
            CatalogEntry::Delta { theta1 } => {
                distribution_coefficients(&DeltaSpec::new(theta1, 0).ok()?, k.max(1))
                    .map(|fc| truncate(&fc, k))
            }
            CatalogEntry::DeltaDerivative { theta1, order } => {
                distribution_coefficients(&DeltaSpec::new(theta1, order).ok()?, k.max(1))
                    .map(|fc| truncate(&fc, k))
            }
        };
        Some(result)
    }

    /// Coefficients: closed form for distributions or when `exact` is set,
    /// trapezoidal quadrature on `points` nodes otherwise.
    pub fn coefficients(
        &self,
        k: usize,
        points: usize,
        exact: bool,
    ) -> Result<FourierCoefficients> {
        if exact || self.is_distribution() {
            return self.known_coefficients(k).unwrap_or_else(|| {
                Err(Error::precondition(format!(
                    "no closed-form coefficients for `{}`",
                    self.id()
                )))
            });
        }
        let f = self
            .function()
            .expect("non-distribution entries have values");
        fourier_coefficients(&f, k, points)
    }

    /// Inner analytic function whose real part on the circle is this entry.
    /// Entries without a closed form use their Taylor series truncated at
    /// `k`.
    pub fn inner(&self, k: usize) -> Result<InnerAnalytic> {
        let closed = match *self {
            CatalogEntry::Square => Some(InnerAnalytic::Closed(ClosedForm::SquareWave)),
            CatalogEntry::Poisson { r } => Some(InnerAnalytic::Closed(ClosedForm::Poisson { r })),
            CatalogEntry::Delta { theta1 } => Some(InnerAnalytic::Delta { theta1 }),
            CatalogEntry::Cos { k: h } => Some(InnerAnalytic::Taylor(
                TaylorCoefficients::monomial(h as usize),
            )),
            CatalogEntry::Sin { k: h } => {
                let mut c = vec![Complex64::new(0.0, 0.0); h as usize + 1];
                c[h as usize] = Complex64::new(0.0, -1.0);
                Some(InnerAnalytic::Taylor(TaylorCoefficients::new(c)?))
            }
            _ => None,
        };
        if let Some(w) = closed {
            return Ok(w);
        }
        match self.known_coefficients(k) {
            Some(fc) => Ok(InnerAnalytic::Taylor(to_taylor(&fc?))),
            None => Err(Error::precondition(format!(
                "no inner analytic form known for `{}`",
                self.id()
            ))),
        }
    }

    /// Largest deviation between known coefficients and quadrature on
    /// [`SELF_TEST_POINTS`] nodes, for entries that have both.
    pub fn self_test(&self, k: usize) -> Option<Result<f64>> {
        if self.is_distribution() {
            return None;
        }
        let known = match self.known_coefficients(k)? {
            Ok(fc) => fc,
            Err(e) => return Some(Err(e)),
        };
        Some(
            self.coefficients(k, SELF_TEST_POINTS, false)
                .map(|q| q.max_abs_diff(&known)),
        )
    }

    /// One representative of every id, with default parameters.
    pub fn defaults() -> Vec<CatalogEntry> {
        let params = CatalogParams::default();
        CATALOG_IDS
            .iter()
            .map(|id| CatalogEntry::parse(id, &params).expect("catalog ids parse"))
            .collect()
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())?;
        let params = self.parameters();
        if !params.is_empty() {
            let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", body.join(", "))?;
        }
        Ok(())
    }
}

fn checked_theta1(params: &CatalogParams) -> Result<f64> {
    let theta1 = params.theta1.unwrap_or(0.0);
    if !(-PI..PI).contains(&theta1) {
        return Err(Error::Parse(format!(
            "theta1 must lie in [-pi, pi), got {theta1}"
        )));
    }
    Ok(theta1)
}

fn truncate(fc: &FourierCoefficients, k: usize) -> FourierCoefficients {
    if fc.order() == k {
        return fc.clone();
    }
    FourierCoefficients::new(
        fc.alpha0(),
        fc.alpha()[..k].to_vec(),
        fc.beta()[..k].to_vec(),
    )
    .expect("a prefix of finite coefficients is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::regulated_sum;

    #[test]
    fn every_id_parses() {
        for e in CatalogEntry::defaults() {
            assert_eq!(
                CatalogEntry::parse(e.id(), &CatalogParams::default()).unwrap(),
                e
            );
        }
        assert!(CatalogEntry::parse("nope", &CatalogParams::default()).is_err());
        assert_eq!(
            CatalogEntry::parse("cos_3", &CatalogParams::default()).unwrap(),
            CatalogEntry::Cos { k: 3 }
        );
        let p = CatalogParams {
            theta1: Some(4.0),
            ..Default::default()
        };
        assert!(CatalogEntry::parse("delta", &p).is_err());
    }

    #[test]
    fn known_coefficients_match_quadrature() {
        let mut entries = CatalogEntry::defaults();
        entries.push(CatalogEntry::Cos { k: 5 });
        entries.push(CatalogEntry::Sin { k: 8 });
        entries.push(CatalogEntry::Const { c: -2.5 });
        for e in entries {
            if let Some(err) = e.self_test(8) {
                let err = err.unwrap();
                assert!(err <= SELF_TEST_TOL, "{e}: {err:e}");
            }
        }
    }

    #[test]
    fn inner_forms_have_the_entry_as_real_part() {
        for e in [
            CatalogEntry::Square,
            CatalogEntry::Poisson { r: 0.3 },
            CatalogEntry::Sin { k: 2 },
            CatalogEntry::Triangle,
        ] {
            let w = e.inner(64).unwrap();
            let tc = w.taylor_coefficients(64).unwrap();
            let fc = crate::coeffs::from_taylor(&tc).unwrap();
            let known = e.known_coefficients(64).unwrap().unwrap();
            assert!(fc.max_abs_diff(&known) < 1e-14, "{e}");
        }
    }

    #[test]
    fn delta_coefficients_are_exact() {
        let e = CatalogEntry::parse(
            "delta",
            &CatalogParams {
                theta1: Some(0.0),
                ..Default::default()
            },
        )
        .unwrap();
        let fc = e.coefficients(8, 0, false).unwrap();
        assert!(fc.alpha().iter().all(|&a| a == 1.0 / PI));
        let v = regulated_sum(&fc, 0.0, 0.5).unwrap();
        assert!(v > 0.0);
    }

    #[test]
    fn log_entry_rejects_standard_grid() {
        assert!(CatalogEntry::LogAbsSin.coefficients(4, 64, false).is_err());
        assert!(CatalogEntry::LogAbsSin.coefficients(4, 65, false).is_ok());
        assert!(CatalogEntry::LogAbsSin.coefficients(4, 64, true).is_err());
    }
}
