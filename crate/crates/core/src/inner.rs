//! Inner analytic functions: analytic on the open unit disk, represented
//! either by a truncated Taylor series or by a closed form with a declared
//! pole set on the closed disk.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coeffs::{to_taylor, TaylorCoefficients};
use crate::distributions::{delta_coefficients, DeltaSpec};
use crate::error::{Error, Result};
use crate::function::wrap_angle;

/// Closed forms raise [`Error::Pole`] within this distance of a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Closed forms are not continued past the unit circle; this slack admits
/// points that sit on the circle up to rounding.
const UNIT_CIRCLE_SLACK: f64 = 1e-12;

/// `z = rho exp(i theta)` with `rho >= 0` and `theta` in `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    rho: f64,
    theta: f64,
}

impl PolarPoint {
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::domain(format!(
                "radius must be finite and non-negative, got {rho}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::domain(format!("angle must be finite, got {theta}")));
        }
        Ok(PolarPoint {
            rho,
            theta: wrap_angle(theta),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.theta)
    }
}

type EvalFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;
type TaylorFn = dyn Fn(usize) -> TaylorCoefficients + Send + Sync;

/// Caller-supplied closed form.
#[derive(Clone)]
pub struct CustomForm {
    label: String,
    eval: Arc<EvalFn>,
    poles: Vec<Complex64>,
    taylor: Option<Arc<TaylorFn>>,
}

impl CustomForm {
    pub fn new<F>(label: impl Into<String>, eval: F, poles: Vec<Complex64>) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        CustomForm {
            label: label.into(),
            eval: Arc::new(eval),
            poles,
            taylor: None,
        }
    }

    /// Attaches a generator for the Taylor coefficients `c_0..=K`.
    pub fn with_taylor<G>(mut self, generator: G) -> Self
    where
        G: Fn(usize) -> TaylorCoefficients + Send + Sync + 'static,
    {
        self.taylor = Some(Arc::new(generator));
        self
    }
}

impl fmt::Debug for CustomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomForm")
            .field("label", &self.label)
            .field("poles", &self.poles)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum ClosedForm {
    /// `1 / (1 - z)`, all `c_k = 1`.
    Geometric,
    /// `-(4i/pi) artanh(z)`; its real part tends to `sign(theta)` on the
    /// circle.
    SquareWave,
    /// `(1 + r z) / (1 - r z)`; real part on the circle is the smooth
    /// `poisson` catalog function.
    Poisson {
        r: f64,
    },
    Custom(CustomForm),
}

/// An inner analytic function `w(z) = u + i v`.
#[derive(Debug, Clone)]
pub enum InnerAnalytic {
    Taylor(TaylorCoefficients),
    /// `1/(2 pi) - (1/pi) z / (z - z1)` with `z1 = exp(i theta1)`.
    Delta {
        theta1: f64,
    },
    Closed(ClosedForm),
}

impl From<TaylorCoefficients> for InnerAnalytic {
    fn from(tc: TaylorCoefficients) -> Self {
        InnerAnalytic::Taylor(tc)
    }
}

impl InnerAnalytic {
    pub fn label(&self) -> String {
        match self {
            InnerAnalytic::Taylor(tc) => format!("taylor[K={}]", tc.order()),
            InnerAnalytic::Delta { theta1 } => format!("delta(theta1={theta1})"),
            InnerAnalytic::Closed(ClosedForm::Geometric) => "geometric".into(),
            InnerAnalytic::Closed(ClosedForm::SquareWave) => "square".into(),
            InnerAnalytic::Closed(ClosedForm::Poisson { r }) => format!("poisson(r={r})"),
            InnerAnalytic::Closed(ClosedForm::Custom(c)) => c.label.clone(),
        }
    }

    /// Singular points on the closed unit disk.
    pub fn poles(&self) -> Vec<Complex64> {
        let all = match self {
            InnerAnalytic::Taylor(_) => Vec::new(),
            InnerAnalytic::Delta { theta1 } => vec![Complex64::from_polar(1.0, *theta1)],
            InnerAnalytic::Closed(ClosedForm::Geometric) => vec![Complex64::new(1.0, 0.0)],
            InnerAnalytic::Closed(ClosedForm::SquareWave) => {
                vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
            }
            InnerAnalytic::Closed(ClosedForm::Poisson { r }) => {
                if *r == 0.0 {
                    Vec::new()
                } else {
                    vec![Complex64::new(1.0 / r, 0.0)]
                }
            }
            InnerAnalytic::Closed(ClosedForm::Custom(c)) => c.poles.clone(),
        };
        all.into_iter()
            .filter(|p| p.norm() <= 1.0 + UNIT_CIRCLE_SLACK)
            .collect()
    }

    fn check_poles(&self, z: Complex64) -> Result<()> {
        for p in self.poles() {
            let distance = (z - p).norm();
            if distance < POLE_TOL {
                return Err(Error::Pole { z, distance });
            }
        }
        Ok(())
    }

    /// Value at any `z` on the closed unit disk. Truncated Taylor series are
    /// polynomials and are evaluated anywhere.
    pub fn eval_at(&self, z: Complex64) -> Result<Complex64> {
        if let InnerAnalytic::Taylor(tc) = self {
            return Ok(tc.horner(z));
        }
        if z.norm() > 1.0 + UNIT_CIRCLE_SLACK {
            return Err(Error::domain(format!(
                "|z| = {} lies outside the closed unit disk",
                z.norm()
            )));
        }
        self.check_poles(z)?;
        let one = Complex64::new(1.0, 0.0);
        let value = match self {
            InnerAnalytic::Taylor(_) => unreachable!(),
            InnerAnalytic::Delta { theta1 } => {
                let z1 = Complex64::from_polar(1.0, *theta1);
                1.0 / (2.0 * PI) - (z / (z - z1)) / PI
            }
            InnerAnalytic::Closed(ClosedForm::Geometric) => one / (one - z),
            InnerAnalytic::Closed(ClosedForm::SquareWave) => {
                Complex64::new(0.0, -4.0 / PI) * z.atanh()
            }
            InnerAnalytic::Closed(ClosedForm::Poisson { r }) => (one + r * z) / (one - r * z),
            InnerAnalytic::Closed(ClosedForm::Custom(c)) => (c.eval)(z),
        };
        Ok(value)
    }

    /// Taylor coefficients `c_0..=order` when the representation knows them.
    pub fn taylor_coefficients(&self, order: usize) -> Option<TaylorCoefficients> {
        let zero = Complex64::new(0.0, 0.0);
        let tc = match self {
            InnerAnalytic::Taylor(tc) => tc.resized(order),
            InnerAnalytic::Delta { theta1 } => {
                let fc =
                    delta_coefficients(&DeltaSpec::new(*theta1, 0).ok()?, order.max(1)).ok()?;
                to_taylor(&fc).resized(order)
            }
            InnerAnalytic::Closed(ClosedForm::Geometric) => {
                TaylorCoefficients::new(vec![Complex64::new(1.0, 0.0); order + 1]).ok()?
            }
            InnerAnalytic::Closed(ClosedForm::SquareWave) => TaylorCoefficients::new(
                (0..=order)
                    .map(|k| {
                        if k % 2 == 1 {
                            Complex64::new(0.0, -4.0 / (PI * k as f64))
                        } else {
                            zero
                        }
                    })
                    .collect(),
            )
            .ok()?,
            InnerAnalytic::Closed(ClosedForm::Poisson { r }) => TaylorCoefficients::new(
                (0..=order)
                    .map(|k| {
                        if k == 0 {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(2.0 * r.powi(k as i32), 0.0)
                        }
                    })
                    .collect(),
            )
            .ok()?,
            InnerAnalytic::Closed(ClosedForm::Custom(c)) => {
                c.taylor.as_ref()?(order).resized(order)
            }
        };
        Some(tc)
    }
}
