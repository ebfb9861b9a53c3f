//! Shape representations and their measures.
//!
//! Two families are supported: [`RadialSet`], a union of concentric shells in
//! dimension `n`, and [`StarSurface`], a star-shaped body in three dimensions
//! whose radius is a finite real spherical-harmonic expansion.

mod grid;
mod harmonics;
mod io;
mod radial;
mod star;

pub use grid::{HarmonicTable, SphereGrid};
pub use harmonics::{harmonic_count, harmonic_index, RealHarmonics, MAX_SUM_DEGREE};
pub use io::{read_shape, shape_from_json, shape_to_json, Shape};
pub use radial::{annulus_family, RadialSet};
pub use star::{perturbed_ball, StarSurface, SurfaceNode};
pub(crate) use star::dot;

use crate::error::{domain, Result};

pub const MIN_DIMENSION: usize = 3;
pub const MAX_DIMENSION: usize = 10;

/// Volume `ω_n` of the unit ball in `R^n`, for any `n ≥ 0`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // ω_n = 2π/n · ω_{n-2}
    let mut w = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        w *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    w
}

/// Area `n ω_n` of the unit sphere in `R^n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Ambient dimension of a radial set, restricted to `[3, 10]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
            return domain(format!(
                "dimension {n} outside [{MIN_DIMENSION}, {MAX_DIMENSION}]"
            ));
        }
        Ok(Self(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    pub fn unit_ball_volume(self) -> f64 {
        unit_ball_volume(self.0)
    }

    pub fn unit_sphere_area(self) -> f64 {
        unit_sphere_area(self.0)
    }
}

/// Operations shared by every shape representation.
pub trait Measured: Sized {
    fn dimension(&self) -> usize;
    fn volume(&self) -> f64;
    fn perimeter(&self) -> f64;
    /// Homothety by `s > 0` about the shape's own center.
    fn scaled(&self, s: f64) -> Self;

    /// Returns the homothetic copy with the volume of the unit ball.
    fn rescale_to_unit_volume(&self) -> Result<Self> {
        let v = self.volume();
        if !(v > 0.0) || !v.is_finite() {
            return domain(format!("cannot rescale a set of volume {v}"));
        }
        let n = self.dimension();
        let s = (unit_ball_volume(n) / v).powf(1.0 / n as f64);
        Ok(self.scaled(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_formula(n: usize) -> f64 {
        std::f64::consts::PI.powf(n as f64 / 2.0) / libm::tgamma(n as f64 / 2.0 + 1.0)
    }

    #[test]
    fn ball_volume_matches_gamma_closed_form() {
        for n in 0..=12 {
            let rel = (unit_ball_volume(n) / gamma_formula(n) - 1.0).abs();
            assert!(rel < 1e-12, "n={n} rel={rel}");
        }
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_range_is_enforced() {
        assert!(Dimension::new(2).is_err());
        assert!(Dimension::new(11).is_err());
        let d = Dimension::new(3).unwrap();
        assert!((d.unit_sphere_area() - 4.0 * std::f64::consts::PI).abs() < 1e-14);
    }
}
