//! Structural predicates: fixed-point independence, simplicity of a
//! singularity set, and seed admissibility.

use serde::{Deserialize, Serialize};

use super::AffineCso;
use crate::error::{Error, Result};
use crate::numeric::{check_radius, same_point, Complex, ONE};
use crate::singular::{SingularKind, SingularTerm};

/// True iff the fixed point of map `i` lies outside the closed image
/// `αⱼ(D_R)` of every other map.
pub fn fixed_point_independence(op: &AffineCso, i: usize, radius: f64) -> Result<bool> {
    check_radius(radius)?;
    let len = op.len();
    if i >= len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    let z = op.terms()[i].map.fixed_point();
    Ok(op
        .terms()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .all(|(_, t)| (z - t.map.offset()).norm() > t.map.rate().norm() * radius))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SimplicityViolation {
    NotFixed,
    FixedByMany(Vec<usize>),
    /// Map `map` sends the point to `image`, which is again in the set.
    MapsIntoSet {
        map: usize,
        image: Complex,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointVerdict {
    pub point: Complex,
    pub fixed_by: Vec<usize>,
    pub violations: Vec<SimplicityViolation>,
}

impl PointVerdict {
    pub fn is_simple(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn simplicity_check(op: &AffineCso, set: &[Complex]) -> Vec<PointVerdict> {
    set.iter()
        .map(|&point| {
            let fixed_by: Vec<usize> =
                op.terms().iter().enumerate().filter(|(_, t)| t.map.fixes(point)).map(|(i, _)| i).collect();
            let mut violations = Vec::new();
            match fixed_by.len() {
                0 => violations.push(SimplicityViolation::NotFixed),
                1 => {}
                _ => violations.push(SimplicityViolation::FixedByMany(fixed_by.clone())),
            }
            for (map, t) in op.terms().iter().enumerate() {
                if fixed_by.contains(&map) {
                    continue;
                }
                let image = t.map.apply(point);
                if set.iter().any(|&q| same_point(q, image)) {
                    violations.push(SimplicityViolation::MapsIntoSet { map, image });
                }
            }
            PointVerdict { point, fixed_by, violations }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SeedCondition {
    /// Log seed: `aᵢ = 1`.
    UnitCoefficient,
    /// Pole seed of order `k`: `aᵢ = sᵢᵏ`.
    CoefficientEqualsRatePower { order: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub matched_index: usize,
    pub condition: SeedCondition,
    pub coefficient: Complex,
    pub required: Complex,
    pub admissible: bool,
}

impl Admissibility {
    pub fn describe(&self) -> String {
        let cond = match self.condition {
            SeedCondition::UnitCoefficient => "a = 1".to_string(),
            SeedCondition::CoefficientEqualsRatePower { order } => format!("a = s^{order}"),
        };
        format!("condition {cond} for map {}: a = {}, required {}", self.matched_index, self.coefficient, self.required)
    }
}

/// Checks the log condition `aᵢ = 1` or the pole condition `aᵢ = sᵢᵏ` for
/// the unique map fixing the seed location.
pub fn seed_admissibility(op: &AffineCso, term: &SingularTerm, tol: f64) -> Result<Admissibility> {
    let fixed_by: Vec<usize> =
        op.terms().iter().enumerate().filter(|(_, t)| t.map.fixes(term.location)).map(|(i, _)| i).collect();
    let matched_index = match fixed_by.as_slice() {
        [] => return Err(Error::SeedNotFixed { location: term.location }),
        [i] => *i,
        _ => return Err(Error::SeedMultiplyFixed { location: term.location, maps: fixed_by }),
    };
    let t = &op.terms()[matched_index];
    let (condition, required) = match term.kind {
        SingularKind::Log => (SeedCondition::UnitCoefficient, ONE),
        SingularKind::Pole(k) => (SeedCondition::CoefficientEqualsRatePower { order: k }, t.map.rate().powu(k)),
    };
    let admissible = (t.coeff - required).norm() <= tol * required.norm().max(t.coeff.norm()).max(1e-300);
    Ok(Admissibility { matched_index, condition, coefficient: t.coeff, required, admissible })
}
