//! Riesz potentials `I_α f_E` of the deficit `f_E = χ_{B1} − χ_E` for an
//! annulus, with the spherical and ball averages `φ_α`, `Φ_α`.

use std::sync::Arc;

use liquiddrop::potentials::{phi_profiles, riesz_potential_at, sigma_constant, RadialGrid};
use liquiddrop::shapes::annulus_family;

fn main() -> liquiddrop::Result<()> {
    let n = 5;
    let set = annulus_family(0.4, n)?;
    println!("E = {:?} in R^{n}", set.intervals());
    for alpha in [1.0, 2.0, 4.0] {
        println!("σ_{{{n},{alpha}}} = {:.6e}", sigma_constant(n, alpha)?);
    }

    println!("\n   r      I_2 f       I_4 f");
    for r in [0.0, 0.2, 0.4, 0.8, 1.0, 1.5, 3.0] {
        println!("{r:5.2}  {:10.3e}  {:10.3e}", riesz_potential_at(&set, 2.0, r)?, riesz_potential_at(&set, 4.0, r)?);
    }

    let grid = Arc::new(RadialGrid::for_set(&set, RadialGrid::DEFAULT_POINTS)?);
    let (phi, big_phi) = phi_profiles(&set, 2.0, grid)?;
    println!("\n   r      φ_2        Φ_2");
    for r in [0.1, 0.5, 1.0, 2.0] {
        println!("{r:5.2}  {:10.3e}  {:10.3e}", phi.eval(r), big_phi.eval(r));
    }
    Ok(())
}
