//! Named construction routes, selectable at run time.

use std::collections::BTreeMap;

use super::{
    branch_residual_norm, derivative_route_with_seed, generalized_seed_fixed_point, seeded_fixed_point,
    FixedPointResult, SeedSpec, DEFAULT_K_MAX,
};
use crate::cso::{contraction_report, induced_m, poly_fp_degrees, projected_j, AffineCso, DEFAULT_N_MAX};
use crate::error::{Error, Result};
use crate::numeric::ONE;
use crate::singular::SingularTerm;

/// Largest derivative order tried when none is given.
const MAX_AUTO_ORDER: u32 = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointProblem {
    pub operator: AffineCso,
    pub seed: SingularTerm,
    pub radius: f64,
    pub tol: f64,
    pub k_max: usize,
    /// Derivative order for the derivative route; chosen automatically if
    /// absent.
    pub order: Option<u32>,
    /// Projection index for the generalized route; chosen automatically if
    /// absent.
    pub pin: Option<usize>,
}

impl FixedPointProblem {
    pub fn new(operator: AffineCso, seed: SingularTerm, radius: f64, tol: f64) -> Self {
        Self { operator, seed, radius, tol, k_max: DEFAULT_K_MAX, order: None, pin: None }
    }
}

pub trait FixedPointRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn construct(&self, problem: &FixedPointProblem) -> Result<FixedPointResult>;
}

pub struct DirectRoute;

impl FixedPointRoute for DirectRoute {
    fn name(&self) -> &'static str {
        "direct"
    }

    fn description(&self) -> &'static str {
        "apply the fixed-point operator to the seed; needs a regular remainder and a contraction on D_R"
    }

    fn construct(&self, problem: &FixedPointProblem) -> Result<FixedPointResult> {
        let seed = SeedSpec::new(&problem.operator, problem.seed)?;
        seeded_fixed_point(&problem.operator, &seed, problem.radius, problem.tol)
    }
}

pub struct GeneralizedSeedRoute;

impl GeneralizedSeedRoute {
    /// A projection index other than the seed's own map, preferring unit
    /// coefficients so that fixed points of `T_j` are fixed points of `T`.
    fn pick_pin(op: &AffineCso, seed_index: usize) -> Result<usize> {
        let candidates: Vec<usize> = (0..op.len()).filter(|&j| j != seed_index).collect();
        let unit = candidates.iter().copied().find(|&j| (op.terms()[j].coeff - ONE).norm() < 1e-12);
        unit.or(candidates.first().copied())
            .ok_or_else(|| Error::Inadmissible("projection needs a map other than the seed's".into()))
    }
}

impl FixedPointRoute for GeneralizedSeedRoute {
    fn name(&self) -> &'static str {
        "generalized"
    }

    fn description(&self) -> &'static str {
        "iterate the seed under the projected operator T_j until its remainder is regular, then apply the fixed-point operator"
    }

    fn construct(&self, problem: &FixedPointProblem) -> Result<FixedPointResult> {
        let op = &problem.operator;
        let parent_seed = SeedSpec::new(op, problem.seed)?;
        let j = match problem.pin {
            Some(j) => j,
            None => Self::pick_pin(op, parent_seed.matched_index())?,
        };
        if j == parent_seed.matched_index() {
            return Err(Error::Inadmissible(format!(
                "projection index {j} is the seed's own map; the seed must be analytic at z_{j}"
            )));
        }
        let projected = projected_j(op, j)?;
        let seed = SeedSpec::new(&projected, problem.seed)?;
        let mut result = generalized_seed_fixed_point(&projected, &seed, problem.radius, problem.tol, problem.k_max)?;
        result.parent_residual_norm = Some(branch_residual_norm(op, &result.fixed_point)?);
        Ok(result)
    }
}

pub struct DerivativeRoute;

impl DerivativeRoute {
    /// Smallest order whose induced operator contracts on `D_R` and below
    /// which no polynomial fixed point exists.
    fn pick_order(op: &AffineCso, radius: f64) -> Result<u32> {
        for m in 1..=MAX_AUTO_ORDER {
            let degrees = poly_fp_degrees(op, m as usize - 1, 1e-12);
            if !degrees.degrees.is_empty() {
                return Err(Error::PolynomialSystemSingular { degree: degrees.degrees[0] });
            }
            let Ok(induced) = induced_m(op, m) else { continue };
            if contraction_report(&induced.operator, 1.0, radius, DEFAULT_N_MAX)?.is_contraction {
                return Ok(m);
            }
        }
        Err(Error::InvalidParameter(format!("no derivative order up to {MAX_AUTO_ORDER} gives a contraction")))
    }
}

impl FixedPointRoute for DerivativeRoute {
    fn name(&self) -> &'static str {
        "derivative"
    }

    fn description(&self) -> &'static str {
        "differentiate the seed m times, fix it under the induced operator, integrate back and correct by a polynomial"
    }

    fn construct(&self, problem: &FixedPointProblem) -> Result<FixedPointResult> {
        let op = &problem.operator;
        let seed = SeedSpec::new(op, problem.seed)?;
        let m = match problem.order {
            Some(m) => m,
            None => Self::pick_order(op, problem.radius)?,
        };
        derivative_route_with_seed(op, &seed, m, problem.radius, problem.tol)
    }
}

/// Routes keyed by name.
pub struct RouteRegistry {
    routes: BTreeMap<&'static str, Box<dyn FixedPointRoute>>,
}

impl RouteRegistry {
    pub fn empty() -> Self {
        Self { routes: BTreeMap::new() }
    }

    /// Registry holding the direct, generalized and derivative routes.
    pub fn with_builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(DirectRoute));
        reg.register(Box::new(GeneralizedSeedRoute));
        reg.register(Box::new(DerivativeRoute));
        reg
    }

    /// Adds a route, replacing any route of the same name.
    pub fn register(&mut self, route: Box<dyn FixedPointRoute>) {
        self.routes.insert(route.name(), route);
    }

    pub fn get(&self, name: &str) -> Option<&dyn FixedPointRoute> {
        self.routes.get(name).map(|r| r.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.keys().copied().collect()
    }
}

impl Default for RouteRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}
