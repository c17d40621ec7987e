//! Polynomial fixed points. `T` maps polynomials of degree `≤ m` to
//! themselves with an upper-triangular matrix whose diagonal is
//! `λ_n = Σᵢ aᵢ sᵢⁿ`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::AffineCso;
use crate::error::{Error, Result};
use crate::numeric::{Complex, ONE, ZERO};
use crate::series::compose_poly;

/// Relative singular-value threshold for the numerical kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyDegrees {
    /// Degrees `m ≤ m_max` with `Σᵢ aᵢ sᵢᵐ = 1` within tolerance.
    pub degrees: Vec<usize>,
    /// From this degree on `Σᵢ |aᵢ| |sᵢ|ᵐ < 1`, so no larger degree can
    /// satisfy the relation.
    pub cutoff: usize,
}

pub fn poly_fp_degrees(op: &AffineCso, m_max: usize, tol: f64) -> PolyDegrees {
    let mut degrees = Vec::new();
    for m in 0..=m_max {
        let mut lambda = ZERO;
        let mut scale = 0.0;
        for t in op.terms() {
            let v = t.coeff * t.map.rate().powu(m as u32);
            lambda += v;
            scale += v.norm();
        }
        if (lambda - ONE).norm() < tol * scale.max(1.0) {
            degrees.push(m);
        }
    }
    // Σ|aᵢ||sᵢ|ᵐ is nonincreasing in m, so the first degree below 1 is a cutoff.
    let cutoff = (0..)
        .find(|&m| op.terms().iter().map(|t| t.coeff.norm() * t.map.rate().norm().powi(m as i32)).sum::<f64>() < 1.0)
        .expect("rates are below one");
    PolyDegrees { degrees, cutoff }
}

/// Matrix of `T` on `{(z/ρ)ⁿ : n ≤ m}`; column `n` holds the coefficients of
/// `Σᵢ aᵢ (sᵢ u + tᵢ/ρ)ⁿ`.
fn scaled_matrix(op: &AffineCso, m: usize, rho: f64) -> DMatrix<Complex> {
    let mut mat = DMatrix::from_element(m + 1, m + 1, ZERO);
    for t in op.terms() {
        let s = t.map.rate();
        let off = t.map.offset() / rho;
        let mut power = vec![ONE];
        for n in 0..=m {
            if n > 0 {
                power.push(ZERO);
                for r in (1..power.len()).rev() {
                    power[r] = power[r] * off + power[r - 1] * s;
                }
                power[0] *= off;
            }
            for (r, p) in power.iter().enumerate() {
                mat[(r, n)] += t.coeff * p;
            }
        }
    }
    mat
}

/// A basis of the polynomial fixed points of degree `≤ m`, in row-echelon
/// form with unit leading coefficients (highest degree first). Each entry
/// lists coefficients from degree 0 upwards.
pub fn poly_fixed_points(op: &AffineCso, m: usize) -> Vec<Vec<Complex>> {
    let spread = op.terms().iter().map(|t| t.map.offset().norm() / (1.0 - t.map.rate().norm())).fold(0.0, f64::max);
    let rho = 2.0 * spread.max(1.0);
    let n = m + 1;
    let b = DMatrix::<Complex>::identity(n, n) - scaled_matrix(op, m, rho);
    let svd = b.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = KERNEL_THRESHOLD * sigma_max.max(1.0);

    let mut rows: Vec<Vec<Complex>> = Vec::new();
    for (k, sigma) in svd.singular_values.iter().enumerate() {
        if *sigma <= threshold {
            let mut scale = 1.0;
            let row = (0..n)
                .map(|i| {
                    let v = v_t[(k, i)].conj() / scale;
                    scale *= rho;
                    v
                })
                .collect();
            rows.push(row);
        }
    }
    echelon(rows)
}

/// Reduce to echelon form, pivoting on the highest degree.
fn echelon(mut rows: Vec<Vec<Complex>>) -> Vec<Vec<Complex>> {
    let mut out: Vec<Vec<Complex>> = Vec::new();
    let Some(n) = rows.first().map(|r| r.len()) else {
        return out;
    };
    for col in (0..n).rev() {
        let Some((pick, _)) = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r[col].norm()))
            .filter(|(_, v)| *v > 1e-12)
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            continue;
        };
        let mut pivot = rows.swap_remove(pick);
        let lead = pivot[col];
        for v in pivot.iter_mut() {
            *v /= lead;
        }
        pivot[col] = ONE;
        for r in rows.iter_mut().chain(out.iter_mut()) {
            let f = r[col];
            for (x, p) in r.iter_mut().zip(&pivot) {
                *x -= f * p;
            }
        }
        out.push(pivot);
        if rows.is_empty() {
            break;
        }
    }
    for row in out.iter_mut() {
        let scale = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for v in row.iter_mut() {
            if v.norm() <= 1e-14 * scale {
                *v = ZERO;
            }
        }
    }
    out
}

/// Coefficients of `T p` for a polynomial `p`.
pub fn polynomial_image(op: &AffineCso, p: &[Complex]) -> Vec<Complex> {
    let mut out = vec![ZERO; p.len()];
    for t in op.terms() {
        for (acc, v) in out.iter_mut().zip(compose_poly(p, t.map.rate(), t.map.offset())) {
            *acc += t.coeff * v;
        }
    }
    out
}

/// Solve `(I - T) p = q` over polynomials of degree `≤ deg q` by back
/// substitution on the upper-triangular monomial matrix.
pub fn solve_polynomial_correction(op: &AffineCso, q: &[Complex], tol: f64) -> Result<Vec<Complex>> {
    let n = q.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = scaled_matrix(op, n - 1, 1.0);
    let mut p = vec![ZERO; n];
    for r in (0..n).rev() {
        let diag = ONE - a[(r, r)];
        if diag.norm() < tol.max(f64::EPSILON) {
            return Err(Error::PolynomialSystemSingular { degree: r });
        }
        let mut rhs = q[r];
        for c in r + 1..n {
            rhs += a[(r, c)] * p[c];
        }
        p[r] = rhs / diag;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cso::tests::golden_m;
    use crate::numeric::c;

    fn dyadic() -> AffineCso {
        AffineCso::from_triples(&[(ONE, c(0.5, 0.0), ZERO), (ONE, c(0.5, 0.0), ONE)]).unwrap()
    }

    #[test]
    fn degrees() {
        let m = poly_fp_degrees(&golden_m(), 50, 1e-12);
        assert!(m.degrees.is_empty());
        assert_eq!(m.cutoff, 2);
        assert_eq!(poly_fp_degrees(&dyadic(), 50, 1e-12).degrees, vec![1]);
        let avg =
            AffineCso::from_triples(&[(c(0.5, 0.0), c(0.5, 0.0), ZERO), (c(0.5, 0.0), c(0.3, 0.0), ONE)]).unwrap();
        assert!(poly_fp_degrees(&avg, 5, 1e-12).degrees.contains(&0));
    }

    #[test]
    fn dyadic_kernel() {
        let basis = poly_fixed_points(&dyadic(), 1);
        assert_eq!(basis.len(), 1);
        assert!((basis[0][0] - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((basis[0][1] - ONE).norm() < 1e-12);
        let image = polynomial_image(&dyadic(), &basis[0]);
        let res: f64 = image.iter().zip(&basis[0]).map(|(a, b)| (a - b).norm()).sum();
        assert!(res < 1e-12);
        assert_eq!(poly_fixed_points(&dyadic(), 6).len(), 1);
    }

    #[test]
    fn golden_has_no_polynomial_fixed_points() {
        for m in [0, 5, 50] {
            assert!(poly_fixed_points(&golden_m(), m).is_empty());
        }
    }

    #[test]
    fn constants_fixed_when_coefficients_sum_to_one() {
        let avg =
            AffineCso::from_triples(&[(c(0.5, 0.0), c(0.5, 0.0), ZERO), (c(0.5, 0.0), c(0.3, 0.0), ONE)]).unwrap();
        let basis = poly_fixed_points(&avg, 0);
        assert_eq!(basis, vec![vec![ONE]]);
    }

    #[test]
    fn correction_solve() {
        let m = golden_m();
        let q = vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.2, 0.1)];
        let p = solve_polynomial_correction(&m, &q, 1e-12).unwrap();
        let tp = polynomial_image(&m, &p);
        for i in 0..3 {
            assert!((p[i] - tp[i] - q[i]).norm() < 1e-13);
        }
        assert!(matches!(
            solve_polynomial_correction(&dyadic(), &q, 1e-12),
            Err(Error::PolynomialSystemSingular { degree: 1 })
        ));
    }
}
