//! The energy `P(E) + λ NL(E)` at unit-ball volume, the mass-to-coupling
//! scaling, the ball versus two-balls threshold, the second-variation sweep
//! at the ball and volume-constrained gradient descent over star shapes.

mod descent;
mod sweep;

use std::io::Write;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::potentials::{
    nonlocal_energy, nonlocal_energy_boundary_estimate, nonlocal_energy_mc, nonlocal_energy_radial, two_ball_union,
    NonlocalEstimate, NonlocalMethod,
};
use crate::shapes::{unit_ball_volume, unit_sphere_area, Dimension, Measured, RadialSet, Shape, SphereGrid, StarSurface};
use crate::verify::VerdictRecord;

pub use descent::{gradient_descent_shape, DescentOptions, DescentResult, DescentStep, Termination};
pub use sweep::{mode_stability_sweep, ModeStability, StabilityReport, SweepConfig};

/// Relative tolerance on the unit-volume constraint.
pub const VOLUME_TOL: f64 = 1e-8;
/// Separation of the two half balls in [`two_ball_threshold_explicit`].
pub const FAR_SEPARATION: f64 = 1000.0;

/// `λ_m = (m/ω_n)^{3/n}`.
pub fn lambda_from_mass(m: f64, n: usize) -> Result<f64> {
    Dimension::new(n)?;
    if !(m > 0.0) || !m.is_finite() {
        return domain(format!("mass {m} must be positive"));
    }
    Ok((m / unit_ball_volume(n)).powf(3.0 / n as f64))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBreakdown {
    pub perimeter: f64,
    pub nonlocal: f64,
    pub lambda: f64,
    /// `perimeter + lambda · nonlocal`.
    pub total: f64,
    /// `lambda` times the error estimate of the nonlocal term.
    pub error_estimate: f64,
}

impl EnergyBreakdown {
    pub fn new(perimeter: f64, nonlocal: NonlocalEstimate, lambda: f64) -> Self {
        Self {
            perimeter,
            nonlocal: nonlocal.value,
            lambda,
            total: perimeter + lambda * nonlocal.value,
            error_estimate: lambda * nonlocal.std_error,
        }
    }

    /// Same shape at another coupling.
    pub fn at_lambda(&self, lambda: f64) -> Self {
        Self {
            lambda,
            total: self.perimeter + lambda * self.nonlocal,
            error_estimate: if self.lambda > 0.0 { self.error_estimate * lambda / self.lambda } else { 0.0 },
            ..*self
        }
    }

    pub const CSV_HEADER: [&'static str; 5] = ["perimeter", "nonlocal", "lambda", "total", "error_estimate"];

    pub fn csv_row(&self) -> [String; 5] {
        [self.perimeter, self.nonlocal, self.lambda, self.total, self.error_estimate].map(|x| format!("{x:e}"))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        w.write_record(self.csv_row())?;
        w.flush()?;
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("coupling {lambda} must be a non-negative number"));
    }
    Ok(())
}

fn check_volume(volume: f64, n: usize) -> Result<()> {
    let w = unit_ball_volume(n);
    if (volume - w).abs() > VOLUME_TOL * w {
        return domain(format!("volume {volume} differs from the unit ball volume {w}"));
    }
    Ok(())
}

/// Energy of a unit-volume shape. Radial sets are exact; star shapes use
/// `method` for the nonlocal term.
pub fn total_energy(shape: &Shape, lambda: f64, method: &NonlocalMethod) -> Result<EnergyBreakdown> {
    check_lambda(lambda)?;
    let (volume, perimeter, n) = match shape {
        Shape::Radial(s) => (s.volume(), s.perimeter(), s.n()),
        Shape::Star(s) => (s.volume(), s.perimeter(), 3),
    };
    check_volume(volume, n)?;
    Ok(EnergyBreakdown::new(perimeter, nonlocal_energy(shape, method)?, lambda))
}

/// Energy of a disjoint union of star-shaped bodies of total unit volume.
pub fn union_energy(bodies: &[&StarSurface], lambda: f64, method: &NonlocalMethod) -> Result<EnergyBreakdown> {
    check_lambda(lambda)?;
    check_volume(bodies.iter().map(|b| b.volume()).sum(), 3)?;
    let perimeter = bodies.iter().map(|b| b.perimeter()).sum();
    let nl = match method {
        NonlocalMethod::MonteCarlo { samples, seed } => nonlocal_energy_mc(bodies, *samples, *seed)?,
        NonlocalMethod::Boundary { grid } => nonlocal_energy_boundary_estimate(bodies, grid)?,
    };
    Ok(EnergyBreakdown::new(perimeter, nl, lambda))
}

/// Checks `P(rE) + NL(rE) = r^{n−1} (P(E) + λ_m NL(E))` for
/// `r = (m/ω_n)^{1/n}`, both sides evaluated directly.
pub fn scaling_consistency(m: f64, set: &RadialSet) -> Result<VerdictRecord> {
    let n = set.n();
    let lambda = lambda_from_mass(m, n)?;
    check_volume(set.volume(), n)?;
    let r = (m / unit_ball_volume(n)).powf(1.0 / n as f64);
    let big = set.homothety(r);
    let lhs = big.perimeter() + nonlocal_energy_radial(&big).value;
    let unit = EnergyBreakdown::new(set.perimeter(), nonlocal_energy_radial(set), lambda);
    let rhs = r.powi(n as i32 - 1) * unit.total;
    let tol = 1e-8 * lhs.abs().max(rhs.abs());
    Ok(VerdictRecord::identity(
        "scaling_consistency",
        "P(rE) + NL(rE) = r^{n-1} (P(E) + λ_m NL(E))",
        lhs,
        rhs,
        tol,
        &format!("m={m} {}", crate::verify::describe(set)),
    ))
}

/// Coupling at which the unit ball and two far-apart balls of half its
/// volume have equal energy:
/// `λ* = nω_n (2^{1/n} − 1) / (NL(B_1) (1 − 2^{−2/n}))`.
pub fn two_ball_threshold(n: usize) -> Result<f64> {
    Dimension::new(n)?;
    let nf = n as f64;
    let nl = nonlocal_energy_radial(&RadialSet::unit_ball(n)?).value;
    Ok(unit_sphere_area(n) * (2f64.powf(1.0 / nf) - 1.0) / (nl * (1.0 - 2f64.powf(-2.0 / nf))))
}

/// Threshold from explicit energies in three dimensions: the unit ball and
/// two half-volume balls `distance` apart, both evaluated by `method`.
pub fn two_ball_threshold_explicit(distance: f64, method: &NonlocalMethod) -> Result<f64> {
    let grid = match method {
        NonlocalMethod::Boundary { grid } => grid.clone(),
        NonlocalMethod::MonteCarlo { .. } => SphereGrid::default_grid(),
    };
    let ball = StarSurface::ball(1.0, [0.0; 3], grid.clone())?;
    let one = union_energy(&[&ball], 0.0, method)?;
    let pair = two_ball_union(distance, grid)?;
    let two = union_energy(&[&pair[0], &pair[1]], 0.0, method)?;
    let drop = one.nonlocal - two.nonlocal;
    if !(drop > 0.0) {
        return Err(Error::Numerical(format!("two balls do not lower the nonlocal term: {drop:e}")));
    }
    Ok((two.perimeter - one.perimeter) / drop)
}

/// The default grid of star-shaped evaluations, `grid_res × 2 grid_res`.
pub fn sphere_grid(grid_res: usize) -> Result<Arc<SphereGrid>> {
    if grid_res < 4 {
        return Err(Error::Config(format!("sphere grid resolution {grid_res} below 4")));
    }
    Ok(SphereGrid::new(grid_res, 2 * grid_res))
}
