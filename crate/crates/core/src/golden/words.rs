//! Word expansions of the two log-type fixed points of `M`:
//!
//! `f₁(z) = log(z/(-ω)) + Σₙ Σ_{|i|=n} log((1 + ωφᵢz)/(1 + ωφᵢ(-ω)))`
//! `f₂(z) = log((z-1)/(ω-1)) + Σₙ Σ_{|i|=n} log((1 + ωφᵢz)/(1 + ωφᵢ(ω)))`
//!
//! with `φᵢ = φ_{i₁} ∘ … ∘ φ_{iₙ}` over all words in `{1,2}ⁿ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GoldenConstants;
use crate::error::{Error, Result};
use crate::numeric::{c, same_point, Complex, KahanSum, ONE, ZERO};

pub const DEFAULT_DEPTH: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    /// Log singularity at 0, vanishing at `-ω`.
    F1,
    /// Log singularity at 1, vanishing at `ω`.
    F2,
}

impl Which {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Which::F1),
            2 => Ok(Which::F2),
            _ => Err(Error::InvalidParameter(format!("fixed point index must be 1 or 2, got {i}"))),
        }
    }
}

/// All word maps up to a fixed depth, enumerated depth first. Words are not
/// stored; each sweep recomposes them, which costs two multiplications per
/// word against one logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct WordExpansion {
    depth: usize,
    omega: f64,
    maps: [(f64, f64); 2],
    /// `Σ_{|i|=n} log(1 + ωφᵢ(c))` per level for `c = -ω` and `c = ω`.
    reference: [Vec<f64>; 2],
}

impl WordExpansion {
    pub fn new(depth: usize) -> Self {
        let g = GoldenConstants::new();
        let w = g.omega;
        let maps = [(-w, 0.0), (w * w, w)];
        let mut exp = Self { depth, omega: w, maps, reference: [Vec::new(), Vec::new()] };
        exp.reference = [exp.real_level_sums(-w), exp.real_level_sums(w)];
        exp
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Visit every word up to the depth as `(level, s, t)` with
    /// `φᵢ(z) = s z + t`.
    pub fn visit(&self, mut f: impl FnMut(usize, f64, f64)) {
        self.visit_from(0, 1.0, 0.0, &mut f);
    }

    fn visit_from(&self, level: usize, s: f64, t: f64, f: &mut impl FnMut(usize, f64, f64)) {
        f(level, s, t);
        if level == self.depth {
            return;
        }
        for &(sj, tj) in &self.maps {
            // φ_w ∘ φ_j
            self.visit_from(level + 1, s * sj, s * tj + t, f);
        }
    }

    /// The words of one level as `(s, t)` pairs.
    pub fn level_words(&self, level: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        self.visit(|n, s, t| {
            if n == level {
                out.push((s, t));
            }
        });
        out
    }

    fn real_level_sums(&self, x: f64) -> Vec<f64> {
        let w = self.omega;
        let mut sums = vec![KahanSum::new(); self.depth + 1];
        self.visit(|n, s, t| sums[n].add(c((1.0 + w * (s * x + t)).ln(), 0.0)));
        sums.iter().map(|s| s.value().re).collect()
    }

    /// `Σ_{|i|=n} log(1 + ωφᵢ z)` for each level `n`, principal branch
    /// termwise. Real points with every factor positive use the real
    /// logarithm.
    pub fn level_sums(&self, z: Complex) -> Result<Vec<Complex>> {
        let w = self.omega;
        let mut sums = vec![KahanSum::new(); self.depth + 1];
        let mut bad = None;
        if z.im == 0.0 {
            let x = z.re;
            self.visit(|n, s, t| {
                let arg = 1.0 + w * (s * x + t);
                let v = if arg > 0.0 {
                    c(arg.ln(), 0.0)
                } else if arg < 0.0 {
                    c(arg.abs().ln(), std::f64::consts::PI)
                } else {
                    bad = Some(z);
                    ZERO
                };
                sums[n].add(v);
            });
        } else {
            self.visit(|n, s, t| {
                let arg = ONE + (z * s + t) * w;
                if arg.norm() == 0.0 {
                    bad = Some(z);
                }
                sums[n].add(arg.ln());
            });
        }
        match bad {
            Some(point) => Err(Error::SingularEvaluation { point }),
            None => Ok(sums.iter().map(|s| s.value()).collect()),
        }
    }

    fn leading(&self, which: Which, z: Complex) -> Result<Complex> {
        let w = self.omega;
        let (sing, value) = match which {
            Which::F1 => (ZERO, (z / (-w)).ln()),
            Which::F2 => (ONE, ((z - 1.0) / (w - 1.0)).ln()),
        };
        if same_point(z, sing) {
            return Err(Error::SingularEvaluation { point: z });
        }
        Ok(value)
    }

    fn reference_sums(&self, which: Which) -> &[f64] {
        match which {
            Which::F1 => &self.reference[0],
            Which::F2 => &self.reference[1],
        }
    }

    /// Partial sums of the expansion at `z` for depths `0..=depth`.
    pub fn partial_sums(&self, which: Which, z: Complex) -> Result<Vec<Complex>> {
        let lead = self.leading(which, z)?;
        let levels = self.level_sums(z)?;
        let refs = self.reference_sums(which);
        let mut acc = KahanSum::new();
        acc.add(lead);
        Ok(levels
            .iter()
            .zip(refs)
            .map(|(v, r)| {
                acc.add(v - r);
                acc.value()
            })
            .collect())
    }

    pub fn eval(&self, which: Which, z: Complex) -> Result<Complex> {
        Ok(*self.partial_sums(which, z)?.last().expect("depth + 1 levels"))
    }

    /// Both fixed points at `z`, sharing the word sweep.
    pub fn eval_both(&self, z: Complex) -> Result<(Option<Complex>, Option<Complex>)> {
        let levels = self.level_sums(z)?;
        let mut shared = KahanSum::new();
        for v in &levels {
            shared.add(*v);
        }
        let s = shared.value();
        let r1: f64 = self.reference[0].iter().sum();
        let r2: f64 = self.reference[1].iter().sum();
        let f1 = self.leading(Which::F1, z).ok().map(|l| l + s - r1);
        let f2 = self.leading(Which::F2, z).ok().map(|l| l + s - r2);
        Ok((f1, f2))
    }

    /// `P_d = Π_{n≤d} Π_{|i|=n} (1 + ωφᵢ(ω)) / (1 + ωφᵢ(-ω))` for every
    /// `d ≤ depth`.
    pub fn identity_products(&self) -> Vec<f64> {
        let mut acc = KahanSum::new();
        let products = self.reference[1]
            .iter()
            .zip(&self.reference[0])
            .map(|(a, b)| {
                acc.add(c(a - b, 0.0));
                acc.value().re.exp()
            })
            .collect();
        products
    }
}

/// Depth-truncated `f₁(z)` or `f₂(z)`.
pub fn word_fixed_point(which: Which, depth: usize, z: Complex) -> Result<Complex> {
    WordExpansion::new(depth).eval(which, z)
}

pub fn identity_partial_product(depth: usize) -> f64 {
    *WordExpansion::new(depth).identity_products().last().expect("at least depth 0")
}

pub fn identity_partial_products(depth: usize) -> Vec<f64> {
    WordExpansion::new(depth).identity_products()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub x: f64,
    pub re_exp_f1: f64,
    pub re_exp_f2: f64,
    /// Relative deviation of `exp f₁ · (x-1)` from `κ x exp f₂`.
    pub ratio_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureTable {
    pub depth: usize,
    pub rows: Vec<FigureRow>,
    /// `κ = ω P_d`, the exact constant in `exp f₁ / exp f₂ = κ x/(x-1)` at
    /// this depth; it tends to 1.
    pub normalization: f64,
    pub max_ratio_dev: f64,
}

/// 401 evenly spaced points on `[-1.5, 1.5]`.
pub fn default_figure_grid() -> Vec<f64> {
    (0..=400).map(|k| -1.5 + 3.0 * k as f64 / 400.0).collect()
}

/// Real parts of `exp f₁` and `exp f₂` on a real grid, with the removable
/// singularities at 0 and 1 replaced by zeros.
pub fn figure_data(grid: &[f64], depth: usize, parallel: bool) -> Result<FigureTable> {
    let exp = WordExpansion::new(depth);
    let kappa = exp.omega * exp.identity_products().last().expect("at least depth 0");
    let row = |&x: &f64| -> Result<FigureRow> {
        let (f1, f2) = exp.eval_both(c(x, 0.0))?;
        let e1 = f1.map_or(ZERO, |v| v.exp());
        let e2 = f2.map_or(ZERO, |v| v.exp());
        let lhs = e1 * (x - 1.0);
        let rhs = e2 * (kappa * x);
        let scale = lhs.norm() + rhs.norm();
        let ratio_dev = if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale };
        Ok(FigureRow { x, re_exp_f1: e1.re, re_exp_f2: e2.re, ratio_dev })
    };
    let rows: Vec<FigureRow> = if parallel {
        grid.par_iter().map(row).collect::<Result<_>>()?
    } else {
        grid.iter().map(row).collect::<Result<_>>()?
    };
    let max_ratio_dev = rows.iter().map(|r| r.ratio_dev).fold(0.0, f64::max);
    Ok(FigureTable { depth, rows, normalization: kappa, max_ratio_dev })
}
