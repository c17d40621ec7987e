//! The golden-mean operator `M f(z) = f(-ωz) + f(ω²z + ω)` and the
//! closed-form objects around it, used as independent oracles for the
//! general machinery.

mod sfs;
mod words;

use serde::{Deserialize, Serialize};

pub use sfs::{sfs_spectrum, SfsSpectrum};
pub use words::{
    default_figure_grid, figure_data, identity_partial_product, identity_partial_products, word_fixed_point, FigureRow,
    FigureTable, Which, WordExpansion, DEFAULT_DEPTH,
};

use crate::affine::AffineMap;
use crate::cso::AffineCso;
use crate::error::{Error, Result};
use crate::numeric::{c, same_point, Complex, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenConstants {
    pub omega: f64,
    pub phi1: AffineMap,
    pub phi2: AffineMap,
    /// `φ₁(1) = -ω`.
    pub c1: f64,
    /// `φ₂(0) = ω`.
    pub c2: f64,
}

impl GoldenConstants {
    pub fn new() -> Self {
        let omega = (5f64.sqrt() - 1.0) / 2.0;
        Self {
            omega,
            phi1: AffineMap::new(c(-omega, 0.0), ZERO).expect("|ω| < 1"),
            phi2: AffineMap::new(c(omega * omega, 0.0), ONE).expect("ω² < 1"),
            c1: -omega,
            c2: omega,
        }
    }
}

impl Default for GoldenConstants {
    fn default() -> Self {
        Self::new()
    }
}

pub fn make_m() -> AffineCso {
    let g = GoldenConstants::new();
    AffineCso::new(vec![(ONE, g.phi1), (ONE, g.phi2)]).expect("distinct contractions")
}

/// `Σ_{i<a} f(-ωx - i) + f(ω²x + aω)` with `ω² + aω = 1`.
pub fn general_a_cso(a: u32) -> Result<AffineCso> {
    if a < 1 {
        return Err(Error::InvalidParameter(format!("a must be at least 1, got {a}")));
    }
    let af = a as f64;
    let omega = (-af + (af * af + 4.0).sqrt()) / 2.0;
    let mut terms = Vec::with_capacity(a as usize + 1);
    for i in 0..a {
        terms.push((ONE, AffineMap::new(c(-omega, 0.0), c(-(i as f64) / (1.0 + omega), 0.0))?));
    }
    terms.push((ONE, AffineMap::new(c(omega * omega, 0.0), ONE)?));
    AffineCso::new(terms)
}

/// Maximum relative deviation in the multiplicative form of `M g = g` for
/// `g = log(z/(z-1))`:
/// `(-ωz)/(-ωz-1) · (ω²z+ω)/(ω²z+ω-1) = z/(z-1)`.
pub fn log_ratio_invariance(samples: &[Complex]) -> Result<f64> {
    let w = GoldenConstants::new().omega;
    let singular = [ZERO, ONE, c(-1.0 / w, 0.0)];
    let mut worst: f64 = 0.0;
    for &z in samples {
        if singular.iter().any(|&p| same_point(p, z)) {
            return Err(Error::SingularEvaluation { point: z });
        }
        let a = -w * z;
        let b = w * w * z + w;
        let lhs = a / (a - 1.0) * (b / (b - 1.0));
        let rhs = z / (z - 1.0);
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cso::{poly_fp_degrees, seed_admissibility, simplicity_check, DEFAULT_RELATION_TOL};
    use crate::singular::SingularTerm;

    #[test]
    fn constants() {
        let g = GoldenConstants::new();
        let w = g.omega;
        assert!((w * w - (1.0 - w)).abs() < 1e-15);
        assert!((w.powi(3) - (2.0 * w - 1.0)).abs() < 1e-15);
        assert!((g.phi1.apply(ONE).re - g.c1).abs() < 1e-15);
        assert!((g.phi2.apply(ZERO).re - g.c2).abs() < 1e-15);
    }

    #[test]
    fn golden_operator() {
        let m = make_m();
        let fixed: Vec<Complex> = m.terms().iter().map(|t| t.map.fixed_point()).collect();
        assert_eq!(fixed, vec![ZERO, ONE]);
        assert!(poly_fp_degrees(&m, 50, 1e-12).degrees.is_empty());
        let log0 = SingularTerm::log(ZERO, ONE).unwrap();
        assert!(seed_admissibility(&m, &log0, DEFAULT_RELATION_TOL).unwrap().admissible);
        assert!(simplicity_check(&m, &[ZERO, ONE]).iter().all(|v| v.is_simple()));
    }

    #[test]
    fn general_a() {
        assert_eq!(general_a_cso(1).unwrap(), make_m());
        let op = general_a_cso(2).unwrap();
        assert_eq!(op.len(), 3);
        let w = 2f64.sqrt() - 1.0;
        assert!((op.terms()[0].map.rate() + c(w, 0.0)).norm() < 1e-15);
        for t in op.terms() {
            let z = c(0.3, -0.1);
            let want = if t.map.rate().re < 0.0 { -w * z - t.map.offset().re.abs() } else { w * w * z + 2.0 * w };
            assert!((t.map.apply(z) - want).norm() < 1e-14);
        }
        assert!(!poly_fp_degrees(&op, 4, 1e-12).degrees.contains(&0));
        assert!(general_a_cso(0).is_err());
    }

    #[test]
    fn log_ratio_examples() {
        assert!(log_ratio_invariance(&[c(2.0, 0.0), c(-1.0, 0.0)]).unwrap() < 1e-15);
        assert!(log_ratio_invariance(&[ONE]).is_err());
    }
}
