//! Random generators shared by the acceptance runner and the property tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use cso_core::numeric::{c, Complex};
use cso_core::{AffineCso, AffineMap, DiscSeries};
use rand::Rng;

pub fn omega() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

pub fn polar(rng: &mut impl Rng, lo: f64, hi: f64) -> Complex {
    Complex::from_polar(rng.gen_range(lo..=hi), rng.gen_range(-PI..PI))
}

pub fn in_box(rng: &mut impl Rng, half: f64) -> Complex {
    c(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

/// Uniform point in the open disc of the given radius.
pub fn in_disc(rng: &mut impl Rng, radius: f64) -> Complex {
    Complex::from_polar(radius * rng.gen_range(0.0f64..1.0).sqrt(), rng.gen_range(-PI..PI))
}

/// Series with `|cₙ| Rⁿ ≤ √2`, so every coefficient carries weight.
pub fn series(rng: &mut impl Rng, radius: f64, max_len: usize) -> DiscSeries {
    let len = rng.gen_range(1..=max_len);
    let coeffs = (0..len).map(|n| in_box(rng, 1.0) / radius.powi(n as i32)).collect();
    DiscSeries::new(coeffs, radius).unwrap()
}

pub fn map(rng: &mut impl Rng, max_rate: f64, fix_half: f64) -> AffineMap {
    AffineMap::new(polar(rng, 0.0, max_rate), in_box(rng, fix_half)).unwrap()
}

/// Random operator with 1..=3 terms.
pub fn operator(rng: &mut impl Rng) -> AffineCso {
    let len = rng.gen_range(1..=3);
    let terms = (0..len).map(|_| (polar(rng, 0.1, 1.0), map(rng, 0.8, 1.0))).collect();
    AffineCso::new(terms).unwrap()
}

/// Smallest radius mapped into itself by every map, times a margin.
pub fn self_map_radius(op: &AffineCso, margin: f64) -> f64 {
    let r0 = op.terms().iter().map(|t| t.map.offset().norm() / (1.0 - t.map.rate().norm())).fold(0.0, f64::max);
    (r0 * margin).max(0.5)
}
