use std::io::Write;

use rayon::prelude::*;

use super::{check_lambda, check_volume, EnergyBreakdown};
use crate::asymmetry::beta_at_center;
use crate::error::{Error, Result};
use crate::potentials::{nonlocal_energy_boundary, NonlocalEstimate};
use crate::shapes::{harmonic_index, Measured, StarSurface};

/// Parameters of [`gradient_descent_shape`].
#[derive(Clone, Debug, PartialEq)]
pub struct DescentOptions {
    pub steps: usize,
    /// First trial step length of every line search.
    pub step_size: f64,
    /// Central-difference step in coefficient space.
    pub fd_step: f64,
    /// Stop when the gradient norm falls below this.
    pub grad_tol: f64,
    /// Sufficient decrease constant of the backtracking line search.
    pub armijo: f64,
    pub max_halvings: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self { steps: 500, step_size: 0.05, fd_step: 1e-4, grad_tol: 1e-6, armijo: 1e-4, max_halvings: 30 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Gradient norm below tolerance.
    Converged,
    StepBudget,
    /// No step length gave sufficient decrease.
    LineSearchFailed,
}

/// One accepted iterate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentStep {
    pub step: usize,
    pub energy: EnergyBreakdown,
    /// Gradient norm at this iterate.
    pub grad_norm: f64,
    /// Step length that produced this iterate (zero for the start).
    pub step_length: f64,
    /// `β²` about the barycenter.
    pub beta_squared: f64,
}

#[derive(Clone, Debug)]
pub struct DescentResult {
    pub trajectory: Vec<DescentStep>,
    pub shape: StarSurface,
    pub termination: Termination,
}

impl DescentResult {
    pub const CSV_HEADER: [&'static str; 8] =
        ["step", "perimeter", "nonlocal", "lambda", "total", "grad_norm", "step_length", "beta2"];

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        for s in &self.trajectory {
            let e = s.energy;
            w.write_record(
                std::iter::once(s.step.to_string()).chain(
                    [e.perimeter, e.nonlocal, e.lambda, e.total, s.grad_norm, s.step_length, s.beta_squared]
                        .map(|x| format!("{x:e}")),
                ),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn final_step(&self) -> &DescentStep {
        self.trajectory.last().expect("trajectory holds the start")
    }
}

struct Problem<'a> {
    base: &'a StarSurface,
    lambda: f64,
    /// Flat indices of the modes with `l ≥ 2`.
    free: Vec<usize>,
}

impl Problem<'_> {
    /// The unit-volume shape with the given coefficients, if it is a valid
    /// star shape.
    fn shape(&self, coeffs: &[f64]) -> Option<StarSurface> {
        self.base.with_coeffs(coeffs.to_vec()).ok()?.rescale_to_unit_volume().ok()
    }

    fn energy_of(&self, shape: &StarSurface) -> EnergyBreakdown {
        let nl = NonlocalEstimate { value: nonlocal_energy_boundary(&[shape]), std_error: 0.0 };
        EnergyBreakdown::new(shape.perimeter(), nl, self.lambda)
    }

    fn total(&self, coeffs: &[f64]) -> f64 {
        self.shape(coeffs).map_or(f64::INFINITY, |s| self.energy_of(&s).total)
    }

    fn gradient(&self, coeffs: &[f64], h: f64) -> Result<Vec<f64>> {
        let g: Vec<f64> = self
            .free
            .par_iter()
            .map(|&i| {
                let mut c = coeffs.to_vec();
                c[i] = coeffs[i] + h;
                let up = self.total(&c);
                c[i] = coeffs[i] - h;
                let down = self.total(&c);
                (up - down) / (2.0 * h)
            })
            .collect();
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("finite-difference gradient left the star-shaped class".into()));
        }
        Ok(g)
    }
}

fn record(step: usize, shape: &StarSurface, energy: EnergyBreakdown, grad_norm: f64, step_length: f64) -> Result<DescentStep> {
    let beta_squared = beta_at_center(shape, shape.barycenter())?;
    Ok(DescentStep { step, energy, grad_norm, step_length, beta_squared })
}

/// Steepest descent of `P + λ NL` over the coefficients of degree `l ≥ 2`
/// of a star shape, with the boundary rule for `NL` on the shape's grid.
/// Gradients are central differences; each trial point is rescaled to unit
/// volume before evaluation and accepted under the Armijo condition, so the
/// recorded energies never increase. A failed line search ends the run with
/// the trajectory so far.
pub fn gradient_descent_shape(start: &StarSurface, lambda: f64, options: &DescentOptions) -> Result<DescentResult> {
    check_lambda(lambda)?;
    check_volume(start.volume(), 3)?;
    if !(options.step_size > 0.0 && options.fd_step > 0.0) {
        return Err(Error::Config("step sizes must be positive".into()));
    }
    let lmax = start.max_degree();
    let free: Vec<usize> = (2..=lmax).flat_map(|l| (-(l as i64)..=l as i64).map(move |m| harmonic_index(l, m))).collect();
    let problem = Problem { base: start, lambda, free };

    let mut coeffs = start.flat_coeffs().to_vec();
    let mut shape = start.clone();
    let mut energy = problem.energy_of(&shape);
    let mut grad = problem.gradient(&coeffs, options.fd_step)?;
    let norm = |g: &[f64]| g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut trajectory = vec![record(0, &shape, energy, norm(&grad), 0.0)?];
    let mut termination = Termination::StepBudget;

    for step in 1..=options.steps {
        let gn = norm(&grad);
        if gn < options.grad_tol {
            termination = Termination::Converged;
            break;
        }
        let mut t = options.step_size;
        let mut accepted = None;
        for _ in 0..=options.max_halvings {
            let mut trial = coeffs.clone();
            for (&i, g) in problem.free.iter().zip(&grad) {
                trial[i] -= t * g;
            }
            if let Some(s) = problem.shape(&trial) {
                let e = problem.energy_of(&s);
                if e.total <= energy.total - options.armijo * t * gn * gn {
                    accepted = Some((trial, s, e));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((trial, s, e)) = accepted else {
            termination = Termination::LineSearchFailed;
            break;
        };
        coeffs = trial;
        shape = s;
        energy = e;
        grad = problem.gradient(&coeffs, options.fd_step)?;
        trajectory.push(record(step, &shape, energy, norm(&grad), t * gn)?);
    }
    if termination == Termination::StepBudget && norm(&grad) < options.grad_tol {
        termination = Termination::Converged;
    }
    Ok(DescentResult { trajectory, shape, termination })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{perturbed_ball, SphereGrid};

    #[test]
    fn ball_stays_put() {
        // The boundary rule breaks the symmetry at the level of its own
        // discretization error, so the discrete minimizer sits next to the ball.
        let ball = perturbed_ball(2, 0.0, 2, 16).unwrap();
        let res = gradient_descent_shape(&ball, 0.3, &DescentOptions::default()).unwrap();
        assert!(res.trajectory[0].grad_norm < 2e-3);
        assert_eq!(res.termination, Termination::Converged);
        assert!(res.shape.flat_coeffs().iter().all(|c| c.abs() < 1e-3));
        assert!(res.final_step().beta_squared < 1e-6);
        let drop = res.trajectory[0].energy.total - res.final_step().energy.total;
        assert!((0.0..1e-6).contains(&drop));
    }

    #[test]
    fn perturbation_relaxes_to_the_ball() {
        let start = perturbed_ball(2, 0.1, 2, 16).unwrap();
        let opts = DescentOptions { steps: 200, ..DescentOptions::default() };
        let res = gradient_descent_shape(&start, 0.1, &opts).unwrap();
        let first = res.trajectory[0];
        let last = res.final_step();
        assert!(first.beta_squared > 1e-2);
        assert!(last.beta_squared < 1e-3, "{:?} after {} steps", last, res.trajectory.len());
        assert!(res.trajectory.windows(2).all(|w| w[1].energy.total <= w[0].energy.total));
        assert!((res.shape.volume() / crate::shapes::unit_ball_volume(3) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn energy_decreases_below_threshold() {
        let start = perturbed_ball(2, 0.1, 2, 16).unwrap();
        let opts = DescentOptions { steps: 10, ..DescentOptions::default() };
        let res = gradient_descent_shape(&start, 0.39, &opts).unwrap();
        assert!(res.trajectory.len() > 2);
        assert!(res.trajectory.windows(2).all(|w| w[1].energy.total <= w[0].energy.total));
        let mut buf = Vec::new();
        res.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), res.trajectory.len() + 1);
    }

    #[test]
    fn rejects_wrong_volume() {
        let big = StarSurface::ball(1.2, [0.0; 3], SphereGrid::new(8, 16)).unwrap();
        assert!(gradient_descent_shape(&big, 0.1, &DescentOptions::default()).is_err());
    }
}
