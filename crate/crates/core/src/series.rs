//! Truncated power series on the open disc `D_R` with the weighted ℓ₁ norm
//! `‖Σ cₙ zⁿ‖_R = Σ |cₙ| Rⁿ`.
//!
//! Every series carries a `tail_bound`: an upper bound on the ℓ₁ norm of the
//! coefficients that were discarded when the series was truncated. Operations
//! propagate it conservatively, so `l1_norm` is always an upper bound on the
//! norm of the function being represented.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::numeric::{check_finite, check_radius, Complex, ONE, ZERO};

/// Default number of retained coefficients.
pub const DEFAULT_LEN: usize = 128;

/// Inner margin for derivative tail estimates, as a fraction of the radius.
pub const DEFAULT_DERIVATIVE_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscSeries {
    radius: f64,
    coeffs: Vec<Complex>,
    tail_bound: f64,
}

impl DiscSeries {
    pub fn new(coeffs: Vec<Complex>, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        for c in &coeffs {
            check_finite(*c, "series coefficient")?;
        }
        Ok(Self { radius, coeffs, tail_bound: 0.0 })
    }

    pub fn zero(radius: f64) -> Result<Self> {
        Self::new(Vec::new(), radius)
    }

    pub fn constant(value: Complex, radius: f64) -> Result<Self> {
        Self::new(vec![value], radius)
    }

    /// The basis function `Zₙ : z ↦ zⁿ`.
    pub fn monomial(n: usize, radius: f64) -> Result<Self> {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self::new(coeffs, radius)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub(crate) fn with_tail_bound(mut self, tail_bound: f64) -> Self {
        self.tail_bound = tail_bound;
        self
    }

    /// Zero-extend to at least `len` coefficients.
    pub(crate) fn padded(&self, len: usize) -> Self {
        let mut out = self.clone();
        if out.coeffs.len() < len {
            out.coeffs.resize(len, ZERO);
        }
        out
    }

    /// ℓ₁ norm of the retained coefficients only.
    pub fn poly_norm(&self) -> f64 {
        let mut weight = 1.0;
        let mut total = 0.0;
        for c in &self.coeffs {
            total += c.norm() * weight;
            weight *= self.radius;
        }
        total
    }

    /// `Σ |cₙ| Rⁿ + tail_bound`.
    pub fn l1_norm(&self) -> f64 {
        self.poly_norm() + self.tail_bound
    }

    /// Coefficientwise combination `Σ wⱼ fⱼ` of series on a common disc.
    pub fn linear_combine(pairs: &[(Complex, &DiscSeries)]) -> Result<Self> {
        let Some((_, first)) = pairs.first() else {
            return Err(Error::InvalidParameter("empty linear combination".into()));
        };
        let radius = first.radius;
        let len = pairs.iter().map(|(_, f)| f.len()).max().unwrap_or(0);
        let mut coeffs = vec![ZERO; len];
        let mut tail = 0.0;
        for (w, f) in pairs {
            if f.radius != radius {
                return Err(Error::RadiusMismatch { left: radius, right: f.radius });
            }
            check_finite(*w, "combination weight")?;
            for (acc, c) in coeffs.iter_mut().zip(&f.coeffs) {
                *acc += w * c;
            }
            tail += w.norm() * f.tail_bound;
        }
        Ok(Self { radius, coeffs, tail_bound: tail })
    }

    pub fn scale(&self, w: Complex) -> Self {
        Self {
            radius: self.radius,
            coeffs: self.coeffs.iter().map(|c| c * w).collect(),
            tail_bound: self.tail_bound * w.norm(),
        }
    }

    pub fn add(&self, other: &DiscSeries) -> Result<Self> {
        Self::linear_combine(&[(ONE, self), (ONE, other)])
    }

    pub fn sub(&self, other: &DiscSeries) -> Result<Self> {
        Self::linear_combine(&[(ONE, self), (-ONE, other)])
    }

    /// Keep only the first `len` coefficients; the dropped ℓ₁ mass moves into
    /// the tail bound.
    pub fn truncate(&self, len: usize) -> Self {
        if len >= self.coeffs.len() {
            return self.clone();
        }
        let mut dropped = 0.0;
        let mut weight = self.radius.powi(len as i32);
        for c in &self.coeffs[len..] {
            dropped += c.norm() * weight;
            weight *= self.radius;
        }
        Self { radius: self.radius, coeffs: self.coeffs[..len].to_vec(), tail_bound: self.tail_bound + dropped }
    }

    /// Series of `f ∘ α` about 0 on `D_{out_radius}`.
    ///
    /// Horner's scheme in the polynomial ring keeps the result exact for the
    /// retained coefficients. The tail bound is inherited unchanged, which is
    /// valid because `α(D_out)` lies inside `D_R`.
    pub fn compose_affine(&self, map: &AffineMap, out_radius: f64) -> Result<Self> {
        check_radius(out_radius)?;
        let extent = map.image_extent(out_radius);
        let constant = self.coeffs.len() <= 1 && self.tail_bound == 0.0;
        if extent >= self.radius && !constant {
            return Err(Error::ImageNotContained { image_extent: extent, radius: self.radius });
        }
        let coeffs = compose_poly(&self.coeffs, map.rate(), map.offset());
        Ok(Self { radius: out_radius, coeffs, tail_bound: self.tail_bound }.flush_subnormal())
    }

    /// Zero out subnormal coefficients, which slow arithmetic down by orders
    /// of magnitude, and charge their weighted size to the tail.
    fn flush_subnormal(mut self) -> Self {
        let mut weight = 1.0;
        for c in self.coeffs.iter_mut() {
            if c.norm() < f64::MIN_POSITIVE && *c != ZERO {
                self.tail_bound += c.norm() * weight;
                *c = ZERO;
            }
            weight *= self.radius;
        }
        self
    }

    /// Derivative, with the tail scaled by the Cauchy factor for an inner
    /// margin of `DEFAULT_DERIVATIVE_MARGIN · R`.
    pub fn differentiate(&self) -> Self {
        self.differentiate_with_margin(DEFAULT_DERIVATIVE_MARGIN * self.radius)
    }

    /// Derivative with an explicit inner margin `δ`; the tail picks up the
    /// factor `K = 1! δ⁻²`.
    pub fn differentiate_with_margin(&self, delta: f64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect();
        let tail_bound = if self.tail_bound == 0.0 { 0.0 } else { self.tail_bound / (delta * delta) };
        Self { radius: self.radius, coeffs, tail_bound }
    }

    /// `z ↦ ∫₀ᶻ f(w) dw`. Since `‖I f‖_R ≤ R ‖f‖_R`, the tail scales by R.
    pub fn integrate_from_zero(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(n, c)| c / (n + 1) as f64));
        Self { radius: self.radius, coeffs, tail_bound: self.tail_bound * self.radius }
    }

    /// Principal-branch series of `log(a + b z)` on `D_radius`.
    pub fn log_affine(a: Complex, b: Complex, radius: f64, len: usize) -> Result<Self> {
        check_radius(radius)?;
        check_finite(a, "log offset")?;
        check_finite(b, "log slope")?;
        if b.norm() * radius >= a.norm() {
            return Err(Error::SingularityInsideDisc { location: -a / b, radius });
        }
        let len = len.max(1);
        let ratio = b / a;
        let mut coeffs = Vec::with_capacity(len);
        coeffs.push(a.ln());
        let mut power = ONE;
        for n in 1..len {
            power *= ratio;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            coeffs.push(power * (sign / n as f64));
        }
        let q = ratio.norm() * radius;
        let tail_bound = if q == 0.0 { 0.0 } else { q.powi(len as i32) / (len as f64 * (1.0 - q)) };
        Ok(Self { radius, coeffs, tail_bound })
    }

    /// Series of `(a + b z)^{-k}` on `D_radius`.
    pub fn inverse_power_affine(a: Complex, b: Complex, order: u32, radius: f64, len: usize) -> Result<Self> {
        check_radius(radius)?;
        check_finite(a, "pole offset")?;
        check_finite(b, "pole slope")?;
        if order == 0 {
            return Err(Error::ZeroPoleOrder);
        }
        if b.norm() * radius >= a.norm() {
            return Err(Error::SingularityInsideDisc { location: -a / b, radius });
        }
        let len = len.max(1);
        let step = -b / a;
        let k = order as f64;
        let mut coeffs = Vec::with_capacity(len);
        let mut c = a.powi(-(order as i32));
        for n in 0..len {
            coeffs.push(c);
            c *= step * ((n as f64 + k) / (n as f64 + 1.0));
        }
        // `c` is now the first discarded coefficient; later ratios shrink
        // monotonically towards q.
        let q = step.norm() * radius;
        let tail_bound = if q == 0.0 {
            0.0
        } else {
            let rho = q * (len as f64 + k) / (len as f64 + 1.0);
            if rho >= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "truncation length {len} too short for a pole of order {order} at ratio {q}"
                )));
            }
            c.norm() * radius.powi(len as i32) / (1.0 - rho)
        };
        Ok(Self { radius, coeffs, tail_bound })
    }

    /// Horner evaluation of the retained polynomial at `|z| < R`.
    pub fn eval_at(&self, z: Complex) -> Result<Complex> {
        Ok(self.eval_with_bound(z)?.0)
    }

    /// Value together with a bound on the truncation error (the tail bound,
    /// since `|z| < R`).
    pub fn eval_with_bound(&self, z: Complex) -> Result<(Complex, f64)> {
        check_finite(z, "evaluation point")?;
        if z.norm() >= self.radius {
            return Err(Error::PointOutsideDisc { point: z, radius: self.radius });
        }
        let value = self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c);
        Ok((value, self.tail_bound))
    }
}

/// Coefficients of `p(s z + t)` by Horner's scheme over polynomials.
pub(crate) fn compose_poly(p: &[Complex], s: Complex, t: Complex) -> Vec<Complex> {
    let mut acc: Vec<Complex> = Vec::with_capacity(p.len());
    for &c in p.iter().rev() {
        // acc <- acc * (s z + t) + c
        acc.push(ZERO);
        for k in (1..acc.len()).rev() {
            acc[k] = acc[k] * t + acc[k - 1] * s;
        }
        acc[0] = acc[0] * t + c;
    }
    acc
}
