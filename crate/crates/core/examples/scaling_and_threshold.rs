//! Mass scaling `λ_m = (m/ω_n)^{3/n}` and the coupling at which two far
//! apart half balls beat one ball.

use liquiddrop::energy_opt::{lambda_from_mass, scaling_consistency, two_ball_threshold, two_ball_threshold_explicit};
use liquiddrop::potentials::NonlocalMethod;
use liquiddrop::shapes::annulus_family;

fn main() -> liquiddrop::Result<()> {
    for n in [3, 4, 5] {
        let set = annulus_family(0.3, n)?;
        for m in [0.5, 2.0, 10.0] {
            let rec = scaling_consistency(m, &set)?;
            println!("n={n} m={m:<4} λ_m={:.6} residual={:.1e} {}", lambda_from_mass(m, n)?, rec.value, rec.status);
        }
    }
    for n in 3..=6 {
        println!("λ*(n={n}) = {:.6}", two_ball_threshold(n)?);
    }
    let explicit = two_ball_threshold_explicit(1000.0, &NonlocalMethod::boundary_default())?;
    println!("explicit two-ball evaluation in 3D: {explicit:.6}");
    Ok(())
}
