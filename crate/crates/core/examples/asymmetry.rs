//! Oscillation asymmetry `β²` and potential asymmetry `γ` of a shifted,
//! perturbed ball, minimized over centers.

use liquiddrop::asymmetry::{divergence_identity_residual, minimize_center, Functional};
use liquiddrop::shapes::{perturbed_ball, Shape};

fn main() -> liquiddrop::Result<()> {
    let shape = perturbed_ball(2, 0.1, 2, 32)?.translated([0.3, -0.1, 0.2]);
    for y in [[0.3, -0.1, 0.2], [0.0; 3]] {
        println!("divergence identity residual at {y:?}: {:.1e}", divergence_identity_residual(&shape, y)?);
    }
    let shape = Shape::Star(shape);
    for f in [Functional::Beta, Functional::Gamma] {
        let a = minimize_center(&shape, f)?;
        println!(
            "{f:?}: center {:?} beta2={:.6e} gamma={:.6e} converged={}",
            a.center.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>(),
            a.beta_squared.unwrap_or(f64::NAN),
            a.gamma,
            a.converged
        );
    }
    Ok(())
}
