//! Seeded construction of singular fixed points.
//!
//! For a seed `f` with `T̄ f = (I - T) f` regular, the fixed-point operator
//! `T̂ = I - T⁺ T̄` (with `T⁺` the inverse of `I - T` on the regular space)
//! returns `f` plus a regular correction that is fixed by `T`.

mod route;

use serde::{Deserialize, Serialize};

pub use route::{
    DerivativeRoute, DirectRoute, FixedPointProblem, FixedPointRoute, GeneralizedSeedRoute, RouteRegistry,
};

use crate::cso::{
    contraction_report, fixed_point_independence, induced_m, seed_admissibility, solve_polynomial_correction,
    AffineCso, DEFAULT_N_MAX, DEFAULT_RELATION_TOL,
};
use crate::error::{Error, Result};
use crate::numeric::{check_radius, Complex, ONE, ZERO};
use crate::series::{DiscSeries, DEFAULT_LEN};
use crate::singular::{SingularFunction, SingularKind, SingularTerm, REGULARITY_MARGIN};

pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_K_MAX: usize = 16;

/// Longest regular part the engine will allocate for a series expansion.
const MAX_SERIES_LEN: usize = 8192;

/// Target size of the first discarded term in automatic length selection.
const EXPANSION_EPS: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Direct,
    GeneralizedSeed(usize),
    DerivativeRoute(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub fixed_point: SingularFunction,
    /// ℓ₁ norm of `T f - f`, tail bounds included.
    pub residual_norm: f64,
    pub iterations: usize,
    pub route: Route,
    /// Certified contraction rate of the operator that was inverted, when an
    /// inversion took place.
    pub rate: Option<f64>,
    /// Residual against the original operator, when the construction went
    /// through an auxiliary one. Constants are compared modulo `2πi`.
    pub parent_residual_norm: Option<f64>,
}

/// An admissible seed term for a particular operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedSpec {
    term: SingularTerm,
    matched_index: usize,
}

impl SeedSpec {
    pub fn new(op: &AffineCso, term: SingularTerm) -> Result<Self> {
        Self::with_tol(op, term, DEFAULT_RELATION_TOL)
    }

    pub fn with_tol(op: &AffineCso, term: SingularTerm, tol: f64) -> Result<Self> {
        let verdict = seed_admissibility(op, &term, tol)?;
        if !verdict.admissible {
            return Err(Error::Inadmissible(verdict.describe()));
        }
        Ok(Self { term, matched_index: verdict.matched_index })
    }

    pub fn term(&self) -> &SingularTerm {
        &self.term
    }

    pub fn matched_index(&self) -> usize {
        self.matched_index
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannSolution {
    pub solution: DiscSeries,
    pub iterations: usize,
    pub rate: f64,
}

/// `h = Σ Tⁿ g`, stopped once `‖Tⁿ g‖ < tol (1 - K)` for the certified rate K.
pub fn neumann_inverse(op: &AffineCso, g: &DiscSeries, radius: f64, tol: f64, max_iter: usize) -> Result<DiscSeries> {
    if g.radius() != radius {
        return Err(Error::RadiusMismatch { left: g.radius(), right: radius });
    }
    Ok(neumann_solve(op, g, tol, max_iter)?.solution)
}

pub fn neumann_solve(op: &AffineCso, g: &DiscSeries, tol: f64, max_iter: usize) -> Result<NeumannSolution> {
    check_tol(tol)?;
    let radius = g.radius();
    let report = contraction_report(op, 1.0, radius, DEFAULT_N_MAX)?;
    if !report.is_contraction {
        return Err(Error::NotAContraction { rate: report.rate });
    }
    let k = report.rate;
    let threshold = tol * (1.0 - k);

    // Iterate on the retained polynomial only; the tail of g contributes at
    // most tail/(1-K) to the sum since T contracts.
    let poly = DiscSeries::new(g.coeffs().to_vec(), radius)?;
    let mut term = poly.clone();
    let mut sum = poly;
    let mut iterations = 0;
    loop {
        let size = term.l1_norm();
        if size < threshold {
            let tail = (g.tail_bound() + k * size) / (1.0 - k);
            let solution = sum.with_tail_bound(tail);
            return Ok(NeumannSolution { solution, iterations, rate: k });
        }
        if iterations >= max_iter {
            return Err(Error::MaxIterations { iterations, increment: size });
        }
        term = op.apply_series(&term, radius)?;
        sum = sum.add(&term)?;
        iterations += 1;
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")))
    }
}

/// `‖T f - f‖` when the singular parts cancel.
pub fn residual_norm(op: &AffineCso, f: &SingularFunction) -> Result<f64> {
    let diff = op.apply_singular_relocating(f)?.sub(f)?;
    if !diff.is_regular() {
        return Err(Error::RemainderNotRegular { radius: f.radius() });
    }
    Ok(diff.regular().l1_norm())
}

/// As [`residual_norm`], with the constant coefficient reduced modulo `2πi`
/// when `f` has log terms.
pub fn branch_residual_norm(op: &AffineCso, f: &SingularFunction) -> Result<f64> {
    let diff = op.apply_singular_relocating(f)?.sub(f)?;
    if !diff.is_regular() {
        return Err(Error::RemainderNotRegular { radius: f.radius() });
    }
    let reg = diff.regular();
    let has_log = f.terms().iter().any(|t| t.kind == SingularKind::Log);
    let c0 = reg.coeff(0);
    let reduced = if has_log { crate::numeric::branch_distance(c0, ZERO) } else { c0.norm() };
    Ok(reg.l1_norm() - c0.norm() + reduced)
}

/// Inner Neumann tolerance so that the final residual, which also picks up
/// `(1 + Σ|aᵢ|)` times the solution's tail, stays under `tol`.
fn inner_tol(op: &AffineCso, tol: f64) -> f64 {
    tol * 1e-2 / (1.0 + op.coeff_abs_sum())
}

/// Coefficient count needed so that every regular expansion created when
/// `op` acts on `f` is resolved to about `EXPANSION_EPS`.
pub fn expansion_len(op: &AffineCso, f: &SingularFunction) -> usize {
    let radius = f.radius();
    let mut len = f.regular().len().max(DEFAULT_LEN);
    for term in f.terms() {
        let order = match term.kind {
            SingularKind::Log => 0,
            SingularKind::Pole(k) => k,
        };
        for t in op.terms() {
            if t.map.is_constant() || t.map.fixes(term.location) {
                continue;
            }
            let Some(p) = t.map.preimage(term.location) else { continue };
            if p.norm() <= radius * (1.0 + REGULARITY_MARGIN) {
                continue;
            }
            let q = radius / p.norm();
            let mut n = len;
            while n < MAX_SERIES_LEN && q.powi(n as i32) * (n as f64 + 1.0).powi(order as i32) > EXPANSION_EPS {
                n += n / 4;
            }
            len = len.max(n.min(MAX_SERIES_LEN));
        }
    }
    len
}

/// `T̂ f = f - T⁺ T̄ f`. Returns the fixed point and the Neumann record, or
/// `None` for the record when `T̄ f` already vanishes.
pub fn fixed_point_operator(
    op: &AffineCso,
    f: &SingularFunction,
    tol: f64,
    max_iter: usize,
) -> Result<(SingularFunction, Option<NeumannSolution>)> {
    check_tol(tol)?;
    let f = f.with_min_len(expansion_len(op, f));
    let remainder = f.sub(&op.apply_singular_relocating(&f)?)?;
    if !remainder.is_regular() {
        return Err(Error::RemainderNotRegular { radius: f.radius() });
    }
    let inner = inner_tol(op, tol);
    if remainder.regular().l1_norm() <= inner {
        return Ok((f, None));
    }
    let solved = neumann_solve(op, remainder.regular(), inner, max_iter)?;
    let fixed = f.add_regular(&solved.solution.scale(-ONE))?;
    Ok((fixed, Some(solved)))
}

fn seed_function(term: &SingularTerm, radius: f64) -> Result<SingularFunction> {
    check_radius(radius)?;
    SingularFunction::single(*term, radius)
}

fn finish(
    op: &AffineCso,
    fixed: SingularFunction,
    record: Option<NeumannSolution>,
    tol: f64,
    route: Route,
) -> Result<FixedPointResult> {
    let residual = residual_norm(op, &fixed)?;
    if residual > tol {
        return Err(Error::ResidualTooLarge { residual, tol });
    }
    Ok(FixedPointResult {
        fixed_point: fixed,
        residual_norm: residual,
        iterations: record.as_ref().map_or(0, |r| r.iterations),
        route,
        rate: record.map(|r| r.rate),
        parent_residual_norm: None,
    })
}

/// Direct route: the seed's remainder must already be regular on `D_R`.
pub fn seeded_fixed_point(op: &AffineCso, seed: &SeedSpec, radius: f64, tol: f64) -> Result<FixedPointResult> {
    let f = seed_function(seed.term(), radius)?;
    let (fixed, record) = fixed_point_operator(op, &f, tol, DEFAULT_MAX_ITER)?;
    finish(op, fixed, record, tol, Route::Direct)
}

/// Least `k ≤ k_max` for which `T̄ (Tᵏ seed)` is regular on `D_R`, with
/// `Tᵏ seed`.
pub fn find_generalized_seed(
    op: &AffineCso,
    seed: &SeedSpec,
    radius: f64,
    k_max: usize,
) -> Result<(usize, SingularFunction)> {
    let mut g = seed_function(seed.term(), radius)?;
    for k in 0..=k_max {
        g = g.with_min_len(expansion_len(op, &g));
        let next = op.apply_singular_relocating(&g)?;
        if g.sub(&next)?.is_regular() {
            return Ok((k, g));
        }
        g = next;
    }
    Err(Error::NoAdmissibleK { k_max })
}

/// Generalized-seed route: `T̂ (Tᵏ seed)` for the least admissible `k`.
/// `Tᵏ seed` differs from the seed by `Σ_{i<k} T̄ Tⁱ seed`, so this equals
/// `T̂` applied to the corrected seed.
pub fn generalized_seed_fixed_point(
    op: &AffineCso,
    seed: &SeedSpec,
    radius: f64,
    tol: f64,
    k_max: usize,
) -> Result<FixedPointResult> {
    let (k, g) = find_generalized_seed(op, seed, radius, k_max)?;
    let (fixed, record) = fixed_point_operator(op, &g, tol, DEFAULT_MAX_ITER)?;
    finish(op, fixed, record, tol, Route::GeneralizedSeed(k))
}

/// Generalized-seed route with a prescribed `k`, which must itself be
/// admissible. Used to check independence of the choice of `k`.
pub fn generalized_seed_fixed_point_at(
    op: &AffineCso,
    seed: &SeedSpec,
    radius: f64,
    tol: f64,
    k: usize,
) -> Result<FixedPointResult> {
    let mut g = seed_function(seed.term(), radius)?;
    for _ in 0..k {
        g = g.with_min_len(expansion_len(op, &g));
        g = op.apply_singular_relocating(&g)?;
    }
    let (fixed, record) = fixed_point_operator(op, &g, tol, DEFAULT_MAX_ITER)?;
    finish(op, fixed, record, tol, Route::GeneralizedSeed(k))
}

/// Derivative route for the log seed at the fixed point of map `i`.
pub fn derivative_route_fixed_point(
    op: &AffineCso,
    i: usize,
    m: u32,
    radius: f64,
    tol: f64,
) -> Result<FixedPointResult> {
    let len = op.len();
    if i >= len {
        return Err(Error::IndexOutOfRange { index: i, len });
    }
    let term = SingularTerm::log(op.terms()[i].map.fixed_point(), ONE)?;
    let seed = SeedSpec::new(op, term)?;
    derivative_route_with_seed(op, &seed, m, radius, tol)
}

/// Differentiate the seed `m` times, fix the result under `T⁽ᵐ⁾`, integrate
/// back and remove the polynomial defect of degree `< m`.
pub fn derivative_route_with_seed(
    op: &AffineCso,
    seed: &SeedSpec,
    m: u32,
    radius: f64,
    tol: f64,
) -> Result<FixedPointResult> {
    check_tol(tol)?;
    check_radius(radius)?;
    if m == 0 {
        return Err(Error::InvalidParameter("derivative order must be at least 1".into()));
    }
    let i = seed.matched_index();
    if !fixed_point_independence(op, i, radius)? {
        return Err(Error::NotIndependent { index: i, radius });
    }
    let induced = induced_m(op, m)?.operator;
    let report = contraction_report(&induced, 1.0, radius, DEFAULT_N_MAX)?;
    if !report.is_contraction {
        return Err(Error::NotAContraction { rate: report.rate });
    }

    let integration_gain = radius.max(1.0).powi(m as i32);
    let inner = tol / integration_gain;
    let pole_seed = seed_function(&seed.term().derivative(m), radius)?;
    let (pole_fixed, record) = fixed_point_operator(&induced, &pole_seed, inner, DEFAULT_MAX_ITER)?;

    // The m-fold antiderivative of the singular part is the seed term itself;
    // the regular part is integrated from 0.
    let mut regular = pole_fixed.regular().clone();
    for _ in 0..m {
        regular = regular.integrate_from_zero();
    }
    let lifted = SingularFunction::new(vec![*seed.term()], regular)?;
    let lifted = lifted.with_min_len(expansion_len(op, &lifted));

    // q = T F - F has vanishing m-th derivative, so only degrees < m matter.
    let defect = op.apply_singular_relocating(&lifted)?.sub(&lifted)?;
    if !defect.is_regular() {
        return Err(Error::RemainderNotRegular { radius });
    }
    let q: Vec<Complex> = (0..m as usize).map(|n| defect.regular().coeff(n)).collect();
    let p = solve_polynomial_correction(op, &q, DEFAULT_RELATION_TOL)?;
    let fixed = lifted.add_regular(&DiscSeries::new(p, radius)?)?;
    finish(op, fixed, record, tol, Route::DerivativeRoute(m))
}

#[cfg(test)]
mod tests;
