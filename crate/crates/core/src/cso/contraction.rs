use serde::{Deserialize, Serialize};

use super::AffineCso;
use crate::error::{Error, Result};
use crate::numeric::{check_radius, Complex, ZERO};

pub const DEFAULT_N_MAX: usize = 200;

/// Search limit for the cutoff index N.
const CUTOFF_SEARCH_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub mu: f64,
    pub radius: f64,
    /// `maxᵢ |tᵢ| / (μ - |sᵢ|)`.
    pub r0: f64,
    /// Least `N` with `‖T Zₙ‖_R < μⁿ Rⁿ` guaranteed by the analytic bound for
    /// every `n ≥ N`; `None` when `R ≤ R0`.
    pub cutoff: Option<usize>,
    /// `‖T Zₙ‖_R / Rⁿ` for `n = 0..=n_max`.
    pub ratios: Vec<f64>,
    /// Supremum of the analytic ratio bound over `n > n_max`; infinite if it
    /// does not decay.
    pub tail_ratio_bound: f64,
    /// Certified operator-norm bound: the larger of the exact ratios and the
    /// tail bound.
    pub rate: f64,
    pub is_contraction: bool,
}

/// `‖T Zₙ‖_R / Rⁿ` for `n = 0..=n_max`, from the coefficients of
/// `Σᵢ aᵢ (sᵢ u + tᵢ/R)ⁿ`.
pub fn basis_ratios(op: &AffineCso, n_max: usize, radius: f64) -> Result<Vec<f64>> {
    check_radius(radius)?;
    let lin: Vec<(Complex, Complex, Complex)> =
        op.terms().iter().map(|t| (t.coeff, t.map.rate(), t.map.offset() / radius)).collect();
    let mut powers: Vec<Vec<Complex>> = vec![vec![Complex::new(1.0, 0.0)]; lin.len()];
    let mut ratios = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            for (p, &(_, s, t)) in powers.iter_mut().zip(&lin) {
                p.push(ZERO);
                for r in (1..p.len()).rev() {
                    p[r] = p[r] * t + p[r - 1] * s;
                }
                p[0] *= t;
            }
        }
        let mut total = 0.0;
        for r in 0..=n {
            let mut coeff = ZERO;
            for (p, &(a, _, _)) in powers.iter().zip(&lin) {
                coeff += a * p[r];
            }
            total += coeff.norm();
        }
        ratios.push(total);
    }
    Ok(ratios)
}

/// Exact `‖T Zₙ‖_R = Σ_r |Σᵢ aᵢ C(n,r) sᵢ^r tᵢ^{n-r}| R^r`.
pub fn basis_image_norm(op: &AffineCso, n: usize, radius: f64) -> Result<f64> {
    let ratios = basis_ratios(op, n, radius)?;
    Ok(ratios[n] * radius.powi(n as i32))
}

/// `Σᵢ |aᵢ| (|sᵢ| + |tᵢ|/R)ⁿ`, which dominates `‖T Zₙ‖_R / Rⁿ`.
pub fn analytic_ratio_bound(op: &AffineCso, n: usize, radius: f64) -> f64 {
    op.terms()
        .iter()
        .map(|t| t.coeff.norm() * (t.map.rate().norm() + t.map.offset().norm() / radius).powi(n as i32))
        .sum()
}

/// `Rⁿ Σᵢ |aᵢ| (|sᵢ| + |tᵢ|/R)ⁿ`.
pub fn analytic_basis_bound(op: &AffineCso, n: usize, radius: f64) -> f64 {
    radius.powi(n as i32) * analytic_ratio_bound(op, n, radius)
}

pub fn contraction_report(op: &AffineCso, mu: f64, radius: f64, n_max: usize) -> Result<ContractionReport> {
    check_radius(radius)?;
    let max_rate = op.max_rate();
    if !(mu.is_finite() && mu > max_rate && mu <= 1.0) {
        return Err(Error::InvalidMu { mu, max_rate });
    }
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let r0 = op.terms().iter().map(|t| t.map.offset().norm() / (mu - t.map.rate().norm())).fold(0.0, f64::max);

    let cutoff = if radius > r0 {
        // Every base (|sᵢ| + |tᵢ|/R)/μ is below 1, so the bound decreases in n.
        (1..CUTOFF_SEARCH_LIMIT).find(|&n| {
            let scaled: f64 = op
                .terms()
                .iter()
                .map(|t| {
                    let base = (t.map.rate().norm() + t.map.offset().norm() / radius) / mu;
                    t.coeff.norm() * base.powi(n as i32)
                })
                .sum();
            scaled < 1.0
        })
    } else {
        None
    };

    let ratios = basis_ratios(op, n_max, radius)?;
    let decays = op.terms().iter().all(|t| t.map.rate().norm() + t.map.offset().norm() / radius < 1.0);
    let tail_ratio_bound = if decays { analytic_ratio_bound(op, n_max + 1, radius) } else { f64::INFINITY };
    let rate = ratios.iter().copied().fold(tail_ratio_bound, f64::max);
    Ok(ContractionReport { mu, radius, r0, cutoff, ratios, tail_ratio_bound, rate, is_contraction: rate < 1.0 })
}
