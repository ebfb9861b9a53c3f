//! Volume-constrained steepest descent from an elongated ball back to the
//! round one at small coupling.

use liquiddrop::energy_opt::{gradient_descent_shape, DescentOptions};
use liquiddrop::shapes::perturbed_ball;

fn main() -> liquiddrop::Result<()> {
    let start = perturbed_ball(2, 0.1, 2, 16)?;
    let res = gradient_descent_shape(&start, 0.1, &DescentOptions { steps: 100, ..DescentOptions::default() })?;
    for s in res.trajectory.iter().step_by(5) {
        println!("{:4} E={:.8} |g|={:.2e} beta2={:.2e}", s.step, s.energy.total, s.grad_norm, s.beta_squared);
    }
    println!("{:?} after {} steps", res.termination, res.final_step().step);
    Ok(())
}
