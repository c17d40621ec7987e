//! Affine composition sum operators `T f = Σ aᵢ f∘αᵢ`.

mod contraction;
mod derived;
mod poly;
mod structure;

use serde::{Deserialize, Serialize};

pub use contraction::{
    analytic_basis_bound, analytic_ratio_bound, basis_image_norm, basis_ratios, contraction_report, ContractionReport,
    DEFAULT_N_MAX,
};
pub use derived::{induced_m, pinned, projected_j, Induced};
pub use poly::{
    poly_fixed_points, poly_fp_degrees, polynomial_image, solve_polynomial_correction, PolyDegrees, KERNEL_THRESHOLD,
};
pub use structure::{
    fixed_point_independence, seed_admissibility, simplicity_check, Admissibility, PointVerdict, SeedCondition,
    SimplicityViolation,
};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numeric::{check_finite, Complex};
use crate::series::{DiscSeries, DEFAULT_LEN};
use crate::singular::{pullback, PullbackMode, SingularFunction};

/// Default relative tolerance for the exact-equality conditions (degree
/// relation, seed admissibility).
pub const DEFAULT_RELATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsoTerm {
    pub coeff: Complex,
    pub map: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineCso {
    terms: Vec<CsoTerm>,
}

impl AffineCso {
    /// Validating constructor: nonempty, nonzero coefficients, pairwise
    /// distinct maps.
    pub fn new(terms: Vec<(Complex, AffineMap)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyOperator);
        }
        for (index, (a, map)) in terms.iter().enumerate() {
            check_finite(*a, "operator coefficient")?;
            if a.norm() == 0.0 {
                return Err(Error::ZeroCoefficient { index });
            }
            for (first, (_, other)) in terms[..index].iter().enumerate() {
                if other.same_as(map) {
                    return Err(Error::DuplicateMap { first, second: index });
                }
            }
        }
        Ok(Self { terms: terms.into_iter().map(|(coeff, map)| CsoTerm { coeff, map }).collect() })
    }

    /// Build from `(a, s, z_fix)` triples, labelling rate errors by index.
    pub fn from_triples(triples: &[(Complex, Complex, Complex)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(triples.len());
        for (index, &(a, s, fix)) in triples.iter().enumerate() {
            let map = AffineMap::new(s, fix).map_err(|e| match e {
                Error::NotContractingMap { modulus, .. } => Error::NotContractingMap { index, modulus },
                other => other,
            })?;
            terms.push((a, map));
        }
        Self::new(terms)
    }

    /// Like [`AffineCso::new`], but coincident maps are merged by adding
    /// their coefficients and cancelled terms are dropped.
    pub(crate) fn merged(terms: Vec<(Complex, AffineMap)>) -> Result<Self> {
        let scale: f64 = terms.iter().map(|(a, _)| a.norm()).sum();
        let mut out: Vec<(Complex, AffineMap)> = Vec::with_capacity(terms.len());
        for (a, map) in terms {
            match out.iter_mut().find(|(_, m)| m.same_as(&map)) {
                Some((acc, _)) => *acc += a,
                None => out.push((a, map)),
            }
        }
        out.retain(|(a, _)| a.norm() > 1e-15 * scale);
        Self::new(out)
    }

    pub fn terms(&self) -> &[CsoTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn max_rate(&self) -> f64 {
        self.terms.iter().map(|t| t.map.rate().norm()).fold(0.0, f64::max)
    }

    /// `Σ aᵢ f(αᵢ z)` pointwise.
    pub fn eval_with(&self, z: Complex, mut f: impl FnMut(Complex) -> Result<Complex>) -> Result<Complex> {
        let mut total = Complex::new(0.0, 0.0);
        for term in &self.terms {
            total += term.coeff * f(term.map.apply(z))?;
        }
        Ok(total)
    }

    pub fn apply_series(&self, f: &DiscSeries, out_radius: f64) -> Result<DiscSeries> {
        let images = self.terms.iter().map(|t| f.compose_affine(&t.map, out_radius)).collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(Complex, &DiscSeries)> = self.terms.iter().map(|t| t.coeff).zip(images.iter()).collect();
        DiscSeries::linear_combine(&pairs)
    }

    /// `T f` for a singular `f` whose unbounded set is simple under `T`.
    pub fn apply_singular(&self, f: &SingularFunction) -> Result<SingularFunction> {
        for verdict in simplicity_check(self, &f.unbounded_set()) {
            if let Some(violation) = verdict.violations.first() {
                let map = match violation {
                    SimplicityViolation::MapsIntoSet { map, .. } => *map,
                    SimplicityViolation::FixedByMany(maps) => maps[0],
                    SimplicityViolation::NotFixed => 0,
                };
                return Err(Error::NonSimple { location: verdict.point, map });
            }
        }
        self.apply_singular_with(f, PullbackMode::Strict)
    }

    /// `T f` where singularities whose preimages fall inside the disc are
    /// carried along as new singular terms instead of being rejected.
    pub fn apply_singular_relocating(&self, f: &SingularFunction) -> Result<SingularFunction> {
        self.apply_singular_with(f, PullbackMode::Relocate)
    }

    fn apply_singular_with(&self, f: &SingularFunction, mode: PullbackMode) -> Result<SingularFunction> {
        let radius = f.radius();
        let len = f.regular().len().max(DEFAULT_LEN);
        let regular = SingularFunction::regular_only(self.apply_series(f.regular(), radius)?);
        let mut parts = vec![regular];
        let mut weights = vec![Complex::new(1.0, 0.0)];
        for (index, term) in self.terms.iter().enumerate() {
            for sing in f.terms() {
                parts.push(pullback(sing, &term.map, radius, len, mode, index)?);
                weights.push(term.coeff);
            }
        }
        let pairs: Vec<(Complex, &SingularFunction)> = weights.into_iter().zip(parts.iter()).collect();
        SingularFunction::linear_combine(&pairs)
    }
}
