//! The zero-shear operator `T c(x) = c((x-1)/2) - c((1-x)/2)` on polynomials
//! of degree `< 2n`. It sends `xᵐ` to `2^{1-m} (x-1)ᵐ` for odd `m` and to 0
//! for even `m`, so its monomial matrix is upper triangular.

use nalgebra::DMatrix;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Complex;

#[derive(Debug, Clone, PartialEq)]
pub struct SfsSpectrum {
    /// `matrix[r][m]`: coefficient of `xʳ` in `T xᵐ`.
    pub matrix: Vec<Vec<Ratio<i64>>>,
    /// Exact eigenvalues read off the diagonal, ascending degree order.
    pub diagonal: Vec<Ratio<i64>>,
    /// Eigenvalues of the floating-point matrix from a general solver,
    /// sorted by decreasing real part.
    pub numeric: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfsSummary {
    pub dimension: usize,
    pub diagonal: Vec<f64>,
    pub numeric: Vec<[f64; 2]>,
}

impl SfsSpectrum {
    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    /// Exact image of a polynomial given by its coefficients.
    pub fn apply(&self, p: &[Ratio<i64>]) -> Vec<Ratio<i64>> {
        let n = self.dimension();
        (0..n)
            .map(|r| (0..n.min(p.len())).fold(Ratio::from_integer(0), |acc, m| acc + self.matrix[r][m] * p[m]))
            .collect()
    }

    pub fn summary(&self) -> SfsSummary {
        SfsSummary {
            dimension: self.dimension(),
            diagonal: self.diagonal.iter().map(to_f64).collect(),
            numeric: self.numeric.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

fn to_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

pub fn sfs_spectrum(n: usize) -> Result<SfsSpectrum> {
    if n < 1 {
        return Err(Error::InvalidParameter("SFS size must be at least 1".into()));
    }
    if n > 15 {
        return Err(Error::InvalidParameter(format!("SFS size {n} overflows exact 64-bit arithmetic")));
    }
    let dim = 2 * n;
    let zero = Ratio::from_integer(0);
    let mut matrix = vec![vec![zero; dim]; dim];
    for m in (1..dim).step_by(2) {
        let scale = Ratio::new(1, 1i64 << (m - 1));
        for (r, row) in matrix.iter_mut().enumerate().take(m + 1) {
            let sign = if (m - r) % 2 == 0 { 1 } else { -1 };
            row[m] = scale * (sign * binomial(m as i64, r as i64));
        }
    }
    let diagonal: Vec<Ratio<i64>> = (0..dim).map(|k| matrix[k][k]).collect();
    let float = DMatrix::from_fn(dim, dim, |r, m| to_f64(&matrix[r][m]));
    let mut numeric: Vec<Complex> = float.complex_eigenvalues().iter().copied().collect();
    numeric.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    Ok(SfsSpectrum { matrix, diagonal, numeric })
}
