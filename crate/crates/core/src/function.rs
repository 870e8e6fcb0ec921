//! Real periodic functions on `[-pi, pi)`: built-in closed forms, uniform
//! sample grids and caller-supplied closures.
//!
//! Functions with jump discontinuities (square, sawtooth) take the mean of
//! the one-sided limits at the jump, which keeps trapezoidal quadrature
//! second-order accurate there. Points where a function has no finite value
//! are declared through [`PeriodicFunction::singular_points`] and evaluating
//! at one is an error.

use std::f64::consts::PI;
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use crate::coeffs::FourierCoefficients;
use crate::error::{Error, Result};
use crate::quad::{cos_sin_multiple, Grid};

/// Distance below which a point counts as hitting a declared singularity.
pub const SINGULAR_POINT_TOL: f64 = 1e-12;

/// Tolerance when matching CSV abscissae against the uniform grid.
pub const GRID_MATCH_TOL: f64 = 1e-9;

/// Wraps any real angle into `[-pi, pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let wrapped = theta - two_pi * ((theta + PI) / two_pi).floor();
    if wrapped >= PI {
        wrapped - two_pi
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogFunction {
    Zero,
    Const(f64),
    Cos(u32),
    Sin(u32),
    /// `sign(theta)`.
    Square,
    /// `theta` on `[-pi, pi)`.
    Sawtooth,
    /// `|theta|`.
    Triangle,
    /// `(1 - r^2) / (1 - 2 r cos(theta) + r^2)`, smooth for `|r| < 1`.
    Poisson {
        r: f64,
    },
    /// `-ln|2 sin(theta / 2)|`, integrable singularity at `theta = 0`.
    LogAbsSin,
    /// Finite trigonometric polynomial with the given coefficients.
    Trig(FourierCoefficients),
}

impl CatalogFunction {
    fn eval(&self, theta: f64) -> f64 {
        match self {
            CatalogFunction::Zero => 0.0,
            CatalogFunction::Const(c) => *c,
            CatalogFunction::Cos(k) => cos_sin_multiple(*k as f64, theta).0,
            CatalogFunction::Sin(k) => cos_sin_multiple(*k as f64, theta).1,
            CatalogFunction::Square => {
                let t = wrap_angle(theta);
                if t == 0.0 || t == -PI {
                    0.0
                } else {
                    t.signum()
                }
            }
            CatalogFunction::Sawtooth => {
                let t = wrap_angle(theta);
                if t == -PI {
                    0.0
                } else {
                    t
                }
            }
            CatalogFunction::Triangle => wrap_angle(theta).abs(),
            CatalogFunction::Poisson { r } => {
                let half = (0.5 * theta).sin();
                (1.0 - r * r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * half * half)
            }
            CatalogFunction::LogAbsSin => -(2.0 * (0.5 * theta).sin()).abs().ln(),
            CatalogFunction::Trig(fc) => fc.evaluate(theta),
        }
    }

    fn singular_points(&self) -> Vec<f64> {
        match self {
            CatalogFunction::LogAbsSin => vec![0.0],
            _ => Vec::new(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CatalogFunction::Zero => "zero",
            CatalogFunction::Const(_) => "const",
            CatalogFunction::Cos(_) => "cos_k",
            CatalogFunction::Sin(_) => "sin_k",
            CatalogFunction::Square => "square",
            CatalogFunction::Sawtooth => "sawtooth",
            CatalogFunction::Triangle => "triangle",
            CatalogFunction::Poisson { .. } => "poisson",
            CatalogFunction::LogAbsSin => "log_abs_sin",
            CatalogFunction::Trig(_) => "trig",
        }
    }
}

/// Values of a function on the uniform grid `theta_m = -pi + 2 pi m / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    values: Vec<f64>,
}

impl SampleGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::precondition(format!(
                "sample grid needs at least 2 points, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("sample {i} is not finite")));
        }
        Ok(SampleGrid { values })
    }

    /// Samples `f` at the `points` uniform nodes.
    pub fn from_fn<F: Fn(f64) -> f64>(points: usize, f: F) -> Result<Self> {
        let grid = Grid::new(points.max(1));
        SampleGrid::new(grid.thetas().map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Reads a `theta,value` CSV. The header is required and the abscissae
    /// must be the uniform grid in ascending order.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["theta", "value"] {
            return Err(Error::Parse(format!(
                "expected header `theta,value`, found `{}`",
                names.join(",")
            )));
        }
        let mut thetas = Vec::new();
        let mut values = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column {i}", line + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", line + 1)))
            };
            thetas.push(parse(0)?);
            values.push(parse(1)?);
        }
        let grid_len = thetas.len();
        if grid_len < 2 {
            return Err(Error::precondition(format!(
                "sample grid needs at least 2 points, got {grid_len}"
            )));
        }
        let grid = Grid::new(grid_len);
        for (m, theta) in thetas.iter().enumerate() {
            if (theta - grid.theta(m)).abs() > GRID_MATCH_TOL {
                return Err(Error::Parse(format!(
                    "row {}: theta = {theta} is not the uniform node {}",
                    m + 1,
                    grid.theta(m)
                )));
            }
        }
        SampleGrid::new(values)
    }

    pub fn from_csv_path(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        SampleGrid::from_csv_reader(std::io::BufReader::new(file))
    }
}

/// Closure-backed function with an explicit list of singular points.
#[derive(Clone)]
pub struct CustomFunction {
    label: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    singular_points: Vec<f64>,
}

impl fmt::Debug for CustomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFunction")
            .field("label", &self.label)
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

/// A real function on the periodic interval.
#[derive(Debug, Clone)]
pub enum PeriodicFunction {
    Catalog(CatalogFunction),
    Samples(SampleGrid),
    Custom(CustomFunction),
}

impl From<CatalogFunction> for PeriodicFunction {
    fn from(c: CatalogFunction) -> Self {
        PeriodicFunction::Catalog(c)
    }
}

impl From<SampleGrid> for PeriodicFunction {
    fn from(s: SampleGrid) -> Self {
        PeriodicFunction::Samples(s)
    }
}

impl PeriodicFunction {
    pub fn from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PeriodicFunction::Custom(CustomFunction {
            label: label.into(),
            f: Arc::new(f),
            singular_points: Vec::new(),
        })
    }

    pub fn with_singular_points<F>(
        label: impl Into<String>,
        f: F,
        singular_points: Vec<f64>,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PeriodicFunction::Custom(CustomFunction {
            label: label.into(),
            f: Arc::new(f),
            singular_points,
        })
    }

    pub fn label(&self) -> String {
        match self {
            PeriodicFunction::Catalog(c) => c.name().to_string(),
            PeriodicFunction::Samples(s) => format!("samples[{}]", s.len()),
            PeriodicFunction::Custom(c) => c.label.clone(),
        }
    }

    pub fn singular_points(&self) -> Vec<f64> {
        match self {
            PeriodicFunction::Catalog(c) => c.singular_points(),
            PeriodicFunction::Samples(_) => Vec::new(),
            PeriodicFunction::Custom(c) => c.singular_points.clone(),
        }
    }

    fn check_singular(&self, theta: f64) -> Result<()> {
        for s in self.singular_points() {
            if wrap_angle(theta - s).abs() < SINGULAR_POINT_TOL {
                return Err(Error::Evaluation {
                    theta,
                    reason: format!("declared singular point of `{}`", self.label()),
                });
            }
        }
        Ok(())
    }

    /// Pointwise value. Sample grids cannot be evaluated off their nodes.
    pub fn evaluate(&self, theta: f64) -> Result<f64> {
        match self {
            PeriodicFunction::Catalog(c) => {
                self.check_singular(theta)?;
                Ok(c.eval(theta))
            }
            PeriodicFunction::Custom(c) => {
                self.check_singular(theta)?;
                Ok((c.f)(theta))
            }
            PeriodicFunction::Samples(s) => {
                let grid = Grid::new(s.len());
                let offset = grid.node_offset(theta);
                if offset.abs() > GRID_MATCH_TOL {
                    return Err(Error::Evaluation {
                        theta,
                        reason: "sampled function is only known on its grid nodes".into(),
                    });
                }
                let m = ((wrap_angle(theta) + PI) / grid.weight()).round() as usize % s.len();
                Ok(s.values[m])
            }
        }
    }

    /// Values at the `points` uniform nodes, in ascending node order.
    pub fn sample(&self, points: usize) -> Result<Vec<f64>> {
        if let PeriodicFunction::Samples(s) = self {
            if s.len() != points {
                return Err(Error::precondition(format!(
                    "sample grid has {} points but {points} were requested",
                    s.len()
                )));
            }
            return Ok(s.values.clone());
        }
        let grid = Grid::new(points);
        grid.thetas().map(|t| self.evaluate(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.25), 0.25);
    }

    #[test]
    fn jumps_take_the_mean_value() {
        let sq = PeriodicFunction::from(CatalogFunction::Square);
        assert_eq!(sq.evaluate(0.0).unwrap(), 0.0);
        assert_eq!(sq.evaluate(-PI).unwrap(), 0.0);
        assert_eq!(sq.evaluate(1.0).unwrap(), 1.0);
        let saw = PeriodicFunction::from(CatalogFunction::Sawtooth);
        assert_eq!(saw.evaluate(-PI).unwrap(), 0.0);
        assert_eq!(saw.evaluate(1.0).unwrap(), 1.0);
    }

    #[test]
    fn singular_point_is_an_error() {
        let f = PeriodicFunction::from(CatalogFunction::LogAbsSin);
        assert!(matches!(f.evaluate(0.0), Err(Error::Evaluation { .. })));
        assert!(matches!(f.sample(8), Err(Error::Evaluation { .. })));
        assert!(f.sample(7).is_ok());
    }

    #[test]
    fn samples_only_on_nodes() {
        let s = SampleGrid::from_fn(8, |t| t.cos()).unwrap();
        let f = PeriodicFunction::from(s);
        assert!((f.evaluate(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(f.evaluate(0.1).is_err());
        assert!(f.sample(16).is_err());
    }

    #[test]
    fn csv_requires_header_and_uniform_grid() {
        let good = "theta,value\n-3.141592653589793,1\n0,2\n";
        let s = SampleGrid::from_csv_reader(good.as_bytes()).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0]);

        let no_header = "-3.141592653589793,1\n0,2\n";
        assert!(SampleGrid::from_csv_reader(no_header.as_bytes()).is_err());

        let skewed = "theta,value\n-3.0,1\n0,2\n";
        assert!(SampleGrid::from_csv_reader(skewed.as_bytes()).is_err());
    }
}
