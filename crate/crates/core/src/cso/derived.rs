//! Operators derived from a CSO: the induced operator on derivatives, the
//! pinned operator `T_c` and the projected operator `T_j`.

use serde::{Deserialize, Serialize};

use super::AffineCso;
use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numeric::{check_finite, Complex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Induced {
    pub operator: AffineCso,
    /// `Σᵢ |aᵢ| |sᵢ|^m`, a bound on the operator norm on every `G_R`
    /// wherever the compositions are defined.
    pub norm_bound: f64,
}

/// `T⁽ᵐ⁾ g = Σᵢ aᵢ sᵢᵐ g∘αᵢ`, which satisfies `(T f)⁽ᵐ⁾ = T⁽ᵐ⁾ f⁽ᵐ⁾`.
/// Terms whose coefficient vanishes (constant maps for `m ≥ 1`) are dropped.
pub fn induced_m(op: &AffineCso, m: u32) -> Result<Induced> {
    let terms: Vec<(Complex, AffineMap)> =
        op.terms().iter().map(|t| (t.coeff * t.map.rate().powu(m), t.map)).filter(|(a, _)| a.norm() != 0.0).collect();
    let norm_bound = terms.iter().map(|(a, _)| a.norm()).sum();
    Ok(Induced { operator: AffineCso::new(terms)?, norm_bound })
}

/// `T_c f = T f - (T f)(c)`, as the original terms plus constant maps.
pub fn pinned(op: &AffineCso, c: Complex) -> Result<AffineCso> {
    check_finite(c, "pinning point")?;
    let mut terms: Vec<(Complex, AffineMap)> = op.terms().iter().map(|t| (t.coeff, t.map)).collect();
    for t in op.terms() {
        terms.push((-t.coeff, AffineMap::constant(t.map.apply(c))?));
    }
    AffineCso::merged(terms)
}

/// `T_j f = T f - (1/L) Σ_{i≠j} aᵢ (T f)(αᵢ(z_j))` with `L = Σ_{i≠j} aᵢ`.
pub fn projected_j(op: &AffineCso, j: usize) -> Result<AffineCso> {
    let len = op.len();
    if j >= len {
        return Err(Error::IndexOutOfRange { index: j, len });
    }
    let z_j = op.terms()[j].map.fixed_point();
    let others: Vec<_> = op.terms().iter().enumerate().filter(|(i, _)| *i != j).map(|(_, t)| *t).collect();
    let l: Complex = others.iter().map(|t| t.coeff).sum();
    let scale: f64 = others.iter().map(|t| t.coeff.norm()).sum();
    if others.is_empty() || l.norm() <= 1e-14 * scale {
        return Err(Error::DegenerateProjection { index: j });
    }
    let mut terms: Vec<(Complex, AffineMap)> = op.terms().iter().map(|t| (t.coeff, t.map)).collect();
    for outer in &others {
        let point = outer.map.apply(z_j);
        for inner in op.terms() {
            terms.push((-outer.coeff * inner.coeff / l, AffineMap::constant(inner.map.apply(point))?));
        }
    }
    AffineCso::merged(terms)
}
