//! Uniform periodic grids, exact-index roots of unity and compensated sums.
//!
//! Every quadrature in the crate runs over the same node set
//! `theta_m = -pi + 2 pi m / M`, `m = 0..M`, visited in ascending `m` with
//! Neumaier-compensated accumulation. Nodes are computed as `(2m - M) pi / M`
//! so the grid is exactly symmetric about zero.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Neumaier (improved Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl CompensatedSum<f64> {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let (sum, carry) = neumaier_step(self.sum, self.carry, x);
        self.sum = sum;
        self.carry = carry;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl CompensatedSum<Complex64> {
    #[inline]
    pub fn add(&mut self, x: Complex64) {
        let (re, re_carry) = neumaier_step(self.sum.re, self.carry.re, x.re);
        let (im, im_carry) = neumaier_step(self.sum.im, self.carry.im, x.im);
        self.sum = Complex64::new(re, im);
        self.carry = Complex64::new(re_carry, im_carry);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

#[inline]
fn neumaier_step(sum: f64, carry: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        carry + ((sum - t) + x)
    } else {
        carry + ((x - t) + sum)
    };
    (t, c)
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::<f64>::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

pub fn compensated_sum_complex<I: IntoIterator<Item = Complex64>>(values: I) -> Complex64 {
    let mut acc = CompensatedSum::<Complex64>::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// `(cos(k theta), sin(k theta))` with the rounding error of the product
/// `k * theta` folded back in, so large `k` does not lose the phase.
#[inline]
pub fn cos_sin_multiple(k: f64, theta: f64) -> (f64, f64) {
    let p = k * theta;
    let err = k.mul_add(theta, -p);
    let (s, c) = p.sin_cos();
    (c - s * err, s + c * err)
}

/// The uniform grid on `[-pi, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    points: usize,
}

impl Grid {
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "grid needs at least one node");
        Grid { points }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    #[inline]
    pub fn theta(&self, m: usize) -> f64 {
        let offset = 2 * m as i64 - self.points as i64;
        offset as f64 * PI / self.points as f64
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |m| self.theta(m))
    }

    /// Trapezoidal weight `2 pi / M`.
    #[inline]
    pub fn weight(&self) -> f64 {
        2.0 * PI / self.points as f64
    }

    /// Trapezoidal value of `int_{-pi}^{pi} f`, ascending nodes, compensated.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.weight() * compensated_sum(self.thetas().map(&mut f))
    }

    /// Offset of `theta` from the nearest node, in units of the spacing.
    pub fn node_offset(&self, theta: f64) -> f64 {
        let scaled = (theta + PI) / self.weight();
        scaled - scaled.round()
    }
}

/// Table of `exp(i pi n / M)` for `n in 0..2M`, built with exact mirror
/// symmetries so that `exp(i k theta_m)` can be looked up by integer index.
#[derive(Debug, Clone)]
pub struct UnitRoots {
    points: usize,
    table: Vec<Complex64>,
}

impl UnitRoots {
    pub fn new(points: usize) -> Self {
        assert!(points >= 1);
        let m = points;
        let mut table = vec![Complex64::new(0.0, 0.0); 2 * m];
        let step = PI / m as f64;
        for n in 0..=m / 2 {
            let (s, c) = (n as f64 * step).sin_cos();
            table[n] = Complex64::new(c, s);
        }
        for n in m / 2 + 1..=m {
            let mirror = table[m - n];
            table[n] = Complex64::new(-mirror.re, mirror.im);
        }
        for n in m + 1..2 * m {
            table[n] = table[2 * m - n].conj();
        }
        // n = 0 and n = M are exact by construction; pin the quarter turn.
        if m % 2 == 0 {
            table[m / 2] = Complex64::new(0.0, 1.0);
            table[3 * m / 2] = Complex64::new(0.0, -1.0);
        }
        UnitRoots { points, table }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        Grid::new(self.points)
    }

    /// `exp(i k theta_m)` on the grid of this table.
    #[inline]
    pub fn power(&self, k: i64, m: usize) -> Complex64 {
        let period = 2 * self.points as i64;
        let n = (k * (2 * m as i64 - self.points as i64)).rem_euclid(period);
        self.table[n as usize]
    }
}
