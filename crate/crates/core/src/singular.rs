//! Functions analytic on a disc apart from finitely many simple-log and pole
//! singularities: a symbolic singular part plus a [`DiscSeries`] regular part.
//!
//! Log identities such as `log(s(z - z₀)) = log(z - z₀) + log s` only hold
//! modulo `2πi`; pullbacks use them symbolically and absorb the branch
//! constants into the regular part.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numeric::{check_finite, rising_factorial, same_point, Complex, ONE};
use crate::series::{DiscSeries, DEFAULT_LEN};

/// Relative gap required between a generated singularity and the disc edge
/// before its expansion is accepted as regular.
pub const REGULARITY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularKind {
    /// `log(z - z₀)`, principal branch.
    Log,
    /// `(z - z₀)^{-k}`.
    Pole(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularTerm {
    pub kind: SingularKind,
    pub location: Complex,
    pub weight: Complex,
}

impl SingularTerm {
    pub fn log(location: Complex, weight: Complex) -> Result<Self> {
        check_finite(location, "singular location")?;
        check_finite(weight, "singular weight")?;
        Ok(Self { kind: SingularKind::Log, location, weight })
    }

    pub fn pole(location: Complex, order: u32, weight: Complex) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroPoleOrder);
        }
        check_finite(location, "singular location")?;
        check_finite(weight, "singular weight")?;
        Ok(Self { kind: SingularKind::Pole(order), location, weight })
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        if same_point(z, self.location) {
            return Err(Error::SingularEvaluation { point: z });
        }
        let d = z - self.location;
        Ok(match self.kind {
            SingularKind::Log => self.weight * d.ln(),
            SingularKind::Pole(k) => self.weight * d.powi(-(k as i32)),
        })
    }

    /// The `m`-th derivative, which is always a pole term for `m ≥ 1`.
    ///
    /// For a log term this is `(m-1)! (-1)^{m-1} (z - z₀)^{-m}`.
    pub fn derivative(&self, m: u32) -> SingularTerm {
        if m == 0 {
            return *self;
        }
        let sign = |p: u32| if p.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self.kind {
            SingularKind::Log => SingularTerm {
                kind: SingularKind::Pole(m),
                location: self.location,
                weight: self.weight * (rising_factorial(1, m - 1) * sign(m - 1)),
            },
            SingularKind::Pole(k) => SingularTerm {
                kind: SingularKind::Pole(k + m),
                location: self.location,
                weight: self.weight * (rising_factorial(k, m) * sign(m)),
            },
        }
    }

    fn scaled(&self, w: Complex) -> Self {
        Self { weight: self.weight * w, ..*self }
    }

    fn same_slot(&self, other: &SingularTerm) -> bool {
        self.kind == other.kind && same_point(self.location, other.location)
    }
}

/// How a pullback treats a singularity whose preimage lands inside the disc
/// without being fixed by the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PullbackMode {
    /// Reject it as a non-simple configuration.
    Strict,
    /// Carry it as a new singular term at the preimage.
    Relocate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularFunction {
    terms: Vec<SingularTerm>,
    regular: DiscSeries,
}

impl SingularFunction {
    /// Validating constructor: zero weights are dropped, duplicate slots and
    /// singularities outside the disc are errors.
    pub fn new(terms: Vec<SingularTerm>, regular: DiscSeries) -> Result<Self> {
        let radius = regular.radius();
        let mut kept: Vec<SingularTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            if term.location.norm() >= radius {
                return Err(Error::PointOutsideDisc { point: term.location, radius });
            }
            if kept.iter().any(|k| k.same_slot(&term)) {
                return Err(Error::DuplicateTerm { location: term.location });
            }
            if term.weight.norm() != 0.0 {
                kept.push(term);
            }
        }
        Ok(Self { terms: kept, regular })
    }

    pub fn regular_only(regular: DiscSeries) -> Self {
        Self { terms: Vec::new(), regular }
    }

    pub fn single(term: SingularTerm, radius: f64) -> Result<Self> {
        Self::new(vec![term], DiscSeries::zero(radius)?)
    }

    pub fn terms(&self) -> &[SingularTerm] {
        &self.terms
    }

    pub fn regular(&self) -> &DiscSeries {
        &self.regular
    }

    pub fn radius(&self) -> f64 {
        self.regular.radius()
    }

    pub fn is_regular(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_parts(self) -> (Vec<SingularTerm>, DiscSeries) {
        (self.terms, self.regular)
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let mut total = self.regular.eval_at(z)?;
        for term in &self.terms {
            total += term.eval(z)?;
        }
        Ok(total)
    }

    /// Distinct singular locations, coincident points merged, in a
    /// deterministic order.
    pub fn unbounded_set(&self) -> Vec<Complex> {
        let mut points: Vec<Complex> = Vec::new();
        for term in &self.terms {
            if !points.iter().any(|p| same_point(*p, term.location)) {
                points.push(term.location);
            }
        }
        points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        points
    }

    /// `Σ wⱼ fⱼ` with like terms merged and cancelled terms removed.
    pub fn linear_combine(pairs: &[(Complex, &SingularFunction)]) -> Result<Self> {
        let regulars: Vec<(Complex, &DiscSeries)> = pairs.iter().map(|(w, f)| (*w, &f.regular)).collect();
        let regular = DiscSeries::linear_combine(&regulars)?;
        let mut merged: Vec<(SingularTerm, f64)> = Vec::new();
        for (w, f) in pairs {
            for term in &f.terms {
                let t = term.scaled(*w);
                match merged.iter_mut().find(|(m, _)| m.same_slot(&t)) {
                    Some((m, scale)) => {
                        m.weight += t.weight;
                        *scale += t.weight.norm();
                    }
                    None => merged.push((t, t.weight.norm())),
                }
            }
        }
        let terms = merged.into_iter().filter(|(t, scale)| t.weight.norm() > 1e-12 * scale).map(|(t, _)| t).collect();
        Ok(Self { terms, regular })
    }

    pub fn scale(&self, w: Complex) -> Self {
        Self { terms: self.terms.iter().map(|t| t.scaled(w)).collect(), regular: self.regular.scale(w) }
    }

    pub fn add(&self, other: &SingularFunction) -> Result<Self> {
        Self::linear_combine(&[(ONE, self), (ONE, other)])
    }

    pub fn sub(&self, other: &SingularFunction) -> Result<Self> {
        Self::linear_combine(&[(ONE, self), (-ONE, other)])
    }

    /// Same function with the regular part zero-extended to `len`
    /// coefficients; pullbacks expand to at least the regular length.
    pub fn with_min_len(&self, len: usize) -> Self {
        Self { terms: self.terms.clone(), regular: self.regular.padded(len) }
    }

    pub fn add_regular(&self, g: &DiscSeries) -> Result<Self> {
        Ok(Self { terms: self.terms.clone(), regular: self.regular.add(g)? })
    }
}

/// Exact representation of `term ∘ map` on `D_radius`, rejecting
/// non-simple configurations.
pub fn pullback_term(term: &SingularTerm, map: &AffineMap, disc_radius: f64) -> Result<SingularFunction> {
    pullback(term, map, disc_radius, DEFAULT_LEN, PullbackMode::Strict, 0)
}

/// Pullback of a single singular term through an affine map.
///
/// * constant map: the term's value at the image point;
/// * singularity fixed by the map: the same slot, with `log s` (log) or the
///   factor `s^{-k}` (pole);
/// * preimage outside `D_{R(1+margin)}`: a regular series;
/// * preimage inside the disc: relocated term, or an error in strict mode.
///
/// `map_index` only labels errors.
pub fn pullback(
    term: &SingularTerm,
    map: &AffineMap,
    disc_radius: f64,
    len: usize,
    mode: PullbackMode,
    map_index: usize,
) -> Result<SingularFunction> {
    let s = map.rate();
    let t = map.offset();
    let z0 = term.location;

    if map.is_constant() {
        let value = term.eval(t)?;
        return Ok(SingularFunction::regular_only(DiscSeries::constant(value, disc_radius)?));
    }

    if map.fixes(z0) {
        return Ok(match term.kind {
            SingularKind::Log => SingularFunction {
                terms: vec![*term],
                regular: DiscSeries::constant(term.weight * s.ln(), disc_radius)?,
            },
            SingularKind::Pole(k) => SingularFunction {
                terms: vec![term.scaled(s.powi(-(k as i32)))],
                regular: DiscSeries::zero(disc_radius)?,
            },
        });
    }

    let preimage = map.preimage(z0).expect("non-constant map");
    if preimage.norm() > disc_radius * (1.0 + REGULARITY_MARGIN) {
        // term(s z + t) with the singularity outside the closed disc.
        let series = match term.kind {
            SingularKind::Log => DiscSeries::log_affine(t - z0, s, disc_radius, len)?,
            SingularKind::Pole(k) => DiscSeries::inverse_power_affine(t - z0, s, k, disc_radius, len)?,
        };
        return Ok(SingularFunction::regular_only(series.scale(term.weight)));
    }

    if mode == PullbackMode::Strict || preimage.norm() >= disc_radius {
        return Err(Error::NonSimple { location: z0, map: map_index });
    }

    // term(s (z - p)) with p inside the disc.
    Ok(match term.kind {
        SingularKind::Log => SingularFunction {
            terms: vec![SingularTerm { location: preimage, ..*term }],
            regular: DiscSeries::constant(term.weight * s.ln(), disc_radius)?,
        },
        SingularKind::Pole(k) => SingularFunction {
            terms: vec![SingularTerm { location: preimage, ..term.scaled(s.powi(-(k as i32))) }],
            regular: DiscSeries::zero(disc_radius)?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{branch_distance, c, ZERO};
    use std::f64::consts::PI;

    fn omega() -> f64 {
        (5f64.sqrt() - 1.0) / 2.0
    }

    #[test]
    fn construction() {
        let g = DiscSeries::new(vec![ONE, c(0.5, 0.0)], 2.0).unwrap();
        let f = SingularFunction::new(vec![], g.clone()).unwrap();
        assert!(f.is_regular());

        let f = SingularFunction::single(SingularTerm::log(ONE, ONE).unwrap(), 2.0).unwrap();
        assert_eq!(f.terms().len(), 1);

        let f = SingularFunction::single(SingularTerm::pole(ZERO, 2, ONE).unwrap(), 2.0).unwrap();
        assert!((f.eval(c(0.5, 0.0)).unwrap().re - 4.0).abs() < 1e-14);

        let dup = vec![SingularTerm::log(ONE, ONE).unwrap(), SingularTerm::log(ONE, c(2.0, 0.0)).unwrap()];
        assert!(matches!(SingularFunction::new(dup, g.clone()), Err(Error::DuplicateTerm { .. })));

        let outside = vec![SingularTerm::log(c(3.0, 0.0), ONE).unwrap()];
        assert!(SingularFunction::new(outside, g).is_err());
        assert!(matches!(SingularTerm::pole(ZERO, 0, ONE), Err(Error::ZeroPoleOrder)));
    }

    #[test]
    fn evaluation_examples() {
        let log1 = SingularFunction::single(SingularTerm::log(ONE, ONE).unwrap(), 3.0).unwrap();
        assert!(log1.eval(c(2.0, 0.0)).unwrap().norm() < 1e-16);
        let inv = SingularFunction::single(SingularTerm::pole(ZERO, 1, ONE).unwrap(), 3.0).unwrap();
        assert!((inv.eval(c(0.5, 0.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        let log0 = SingularFunction::single(SingularTerm::log(ZERO, ONE).unwrap(), 3.0).unwrap();
        assert!((log0.eval(c(-1.0, 0.0)).unwrap() - c(0.0, PI)).norm() < 1e-15);
        assert!(matches!(log0.eval(ZERO), Err(Error::SingularEvaluation { .. })));
    }

    #[test]
    fn unbounded_sets() {
        let g = DiscSeries::new(vec![ONE], 2.0).unwrap();
        let f = SingularFunction::new(vec![SingularTerm::log(ONE, ONE).unwrap()], g.clone()).unwrap();
        assert_eq!(f.unbounded_set(), vec![ONE]);
        assert!(SingularFunction::regular_only(g.clone()).unbounded_set().is_empty());
        let both = SingularFunction::new(
            vec![SingularTerm::log(ZERO, ONE).unwrap(), SingularTerm::pole(ZERO, 2, ONE).unwrap()],
            g,
        )
        .unwrap();
        assert_eq!(both.unbounded_set(), vec![ZERO]);
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = SingularFunction::single(SingularTerm::log(ONE, ONE).unwrap(), 2.0).unwrap();
        let zero = f.sub(&f).unwrap();
        assert!(zero.is_regular());
    }

    #[test]
    fn pullback_log_at_fixed_point() {
        let w = omega();
        let map = AffineMap::new(c(-w, 0.0), ZERO).unwrap();
        let term = SingularTerm::log(ZERO, ONE).unwrap();
        let out = pullback_term(&term, &map, 1.0).unwrap();
        assert_eq!(out.terms().len(), 1);
        assert_eq!(out.terms()[0].location, ZERO);
        assert!((out.regular().coeff(0) - c(-w, 0.0).ln()).norm() < 1e-15);
    }

    #[test]
    fn pullback_pole_at_fixed_point() {
        let s = c(0.4, 0.2);
        let map = AffineMap::new(s, ZERO).unwrap();
        let term = SingularTerm::pole(ZERO, 1, c(2.0, 0.0)).unwrap();
        let out = pullback_term(&term, &map, 1.0).unwrap();
        assert_eq!(out.terms()[0].kind, SingularKind::Pole(1));
        assert!((out.terms()[0].weight - c(2.0, 0.0) / s).norm() < 1e-15);
    }

    #[test]
    fn pullback_log_to_regular() {
        let w = omega();
        let phi2 = AffineMap::new(c(w * w, 0.0), ONE).unwrap();
        let term = SingularTerm::log(ZERO, ONE).unwrap();
        let out = pullback_term(&term, &phi2, 1.0).unwrap();
        assert!(out.is_regular());
        let z = c(0.3, -0.5);
        let expect = (phi2.apply(z)).ln();
        assert!(branch_distance(out.eval(z).unwrap(), expect) < 1e-13);
    }

    #[test]
    fn pullback_strict_rejects_inner_preimage() {
        let w = omega();
        let phi1 = AffineMap::new(c(-w, 0.0), ZERO).unwrap();
        let term = SingularTerm::log(ONE, ONE).unwrap();
        assert!(matches!(pullback_term(&term, &phi1, 2.0), Err(Error::NonSimple { .. })));
        let moved = pullback(&term, &phi1, 2.0, DEFAULT_LEN, PullbackMode::Relocate, 0).unwrap();
        assert!((moved.terms()[0].location - c(-1.0 / w, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_of_log_is_weighted_pole() {
        let t = SingularTerm::log(ONE, ONE).unwrap();
        let d3 = t.derivative(3);
        assert_eq!(d3.kind, SingularKind::Pole(3));
        assert_eq!(d3.weight, c(2.0, 0.0));
        let p = SingularTerm::pole(ONE, 2, ONE).unwrap().derivative(2);
        assert_eq!(p.kind, SingularKind::Pole(4));
        assert_eq!(p.weight, c(6.0, 0.0));
    }
}
