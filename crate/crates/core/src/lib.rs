//! Fourier series through inner analytic functions on the unit disk:
//! coefficient maps, regulated (Abel-Poisson) summation, the circle delta and
//! its derivatives, Cauchy-integral kernels, growth classification of
//! coefficient sequences and the disk scalar product.

pub mod basis;
pub mod catalog;
pub mod classify;
pub mod cli;
pub mod coeffs;
pub mod distributions;
pub mod error;
pub mod function;
pub mod hilbert;
pub mod inner;
pub mod io;
pub mod kernels;
pub mod quad;
pub mod series;

pub use coeffs::{from_taylor, to_taylor, FourierCoefficients, TaylorCoefficients};
pub use error::{Error, Result};
pub use function::{CatalogFunction, PeriodicFunction, SampleGrid};
pub use inner::{ClosedForm, InnerAnalytic, PolarPoint};
