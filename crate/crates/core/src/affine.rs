use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{check_finite, same_point, Complex, ONE};

/// Affine contraction `z ↦ s (z - z_fix) + z_fix`.
///
/// A zero rate gives the constant map onto `z_fix`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    rate: Complex,
    fixed: Complex,
}

impl AffineMap {
    pub fn new(rate: Complex, fixed: Complex) -> Result<Self> {
        check_finite(rate, "map rate")?;
        check_finite(fixed, "map fixed point")?;
        if rate.norm() >= 1.0 {
            return Err(Error::NotContractingMap { index: 0, modulus: rate.norm() });
        }
        Ok(Self { rate, fixed })
    }

    /// The map `z ↦ s z + t`.
    pub fn from_linear(rate: Complex, offset: Complex) -> Result<Self> {
        check_finite(rate, "map rate")?;
        check_finite(offset, "map offset")?;
        Self::new(rate, offset / (ONE - rate))
    }

    /// Constant map onto `value`.
    pub fn constant(value: Complex) -> Result<Self> {
        Self::new(Complex::new(0.0, 0.0), value)
    }

    pub fn rate(&self) -> Complex {
        self.rate
    }

    pub fn fixed_point(&self) -> Complex {
        self.fixed
    }

    /// `t = α(0) = z_fix (1 - s)`.
    pub fn offset(&self) -> Complex {
        self.fixed * (ONE - self.rate)
    }

    pub fn is_constant(&self) -> bool {
        self.rate.norm() == 0.0
    }

    pub fn apply(&self, z: Complex) -> Complex {
        self.rate * z + self.offset()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let rate = self.rate * inner.rate;
        let offset = self.rate * inner.offset() + self.offset();
        AffineMap { rate, fixed: offset / (ONE - rate) }
    }

    pub fn fixes(&self, z: Complex) -> bool {
        same_point(self.apply(z), z)
    }

    /// Preimage of `w`, or `None` for a constant map.
    pub fn preimage(&self, w: Complex) -> Option<Complex> {
        if self.is_constant() {
            None
        } else {
            Some((w - self.offset()) / self.rate)
        }
    }

    /// Radius of the disc about 0 that contains `α(D_r)`: `|s| r + |t|`.
    pub fn image_extent(&self, r: f64) -> f64 {
        self.rate.norm() * r + self.offset().norm()
    }

    pub(crate) fn same_as(&self, other: &AffineMap) -> bool {
        same_point(self.rate, other.rate) && same_point(self.fixed, other.fixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::c;

    #[test]
    fn offset_and_fixed_point() {
        let w = (5f64.sqrt() - 1.0) / 2.0;
        let phi2 = AffineMap::new(c(w * w, 0.0), c(1.0, 0.0)).unwrap();
        assert!((phi2.offset() - c(w, 0.0)).norm() < 1e-15);
        assert!(phi2.fixes(c(1.0, 0.0)));
        let from_lin = AffineMap::from_linear(c(w * w, 0.0), c(w, 0.0)).unwrap();
        assert!((from_lin.fixed_point() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_expanding_rate() {
        assert!(AffineMap::new(c(1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(AffineMap::new(c(0.0, 1.2), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn constant_map_fixes_its_value() {
        let m = AffineMap::constant(c(0.3, -0.2)).unwrap();
        assert!(m.is_constant());
        assert_eq!(m.apply(c(5.0, 5.0)), c(0.3, -0.2));
        assert!(m.preimage(c(0.3, -0.2)).is_none());
    }

    #[test]
    fn composition_matches_pointwise() {
        let a = AffineMap::new(c(0.3, 0.2), c(1.0, -1.0)).unwrap();
        let b = AffineMap::new(c(-0.5, 0.1), c(0.2, 0.4)).unwrap();
        let z = c(0.7, -0.3);
        assert!((a.compose(&b).apply(z) - a.apply(b.apply(z))).norm() < 1e-14);
    }
}
