//! Small numeric helpers shared across modules.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

/// Relative tolerance used to identify coincident points and maps.
pub const LOCATION_TOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn check_finite(z: Complex, what: &'static str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn check_radius(radius: f64) -> Result<f64> {
    if radius.is_finite() && radius > 0.0 {
        Ok(radius)
    } else {
        Err(Error::NonPositiveRadius(radius))
    }
}

/// True when two points agree to `LOCATION_TOL` relative to their size.
pub fn same_point(a: Complex, b: Complex) -> bool {
    (a - b).norm() <= LOCATION_TOL * a.norm().max(b.norm()).max(1.0)
}

/// Distance between two complex logarithm values modulo `2πi`.
///
/// Log-type identities only hold up to the branch, so comparisons of values
/// containing logarithms go through this.
pub fn branch_distance(a: Complex, b: Complex) -> f64 {
    let d = a - b;
    let turns = (d.im / (2.0 * PI)).round();
    Complex::new(d.re, d.im - turns * 2.0 * PI).norm()
}

/// Compensated (Kahan–Babuška) accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: Complex,
    comp: Complex,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex) {
        self.sum.re = neumaier_step(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier_step(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex {
        self.sum + self.comp
    }
}

fn neumaier_step(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// Rising factorial `k (k+1) ... (k+m-1)` as a float.
pub(crate) fn rising_factorial(k: u32, m: u32) -> f64 {
    (0..m).map(|j| (k + j) as f64).product()
}
