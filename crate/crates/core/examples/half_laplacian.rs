//! The ½-Laplacian of `I_1 g` recovers `g`, once through the singular
//! integral and once through the harmonic extension.

use std::sync::Arc;

use liquiddrop::potentials::{
    half_laplacian_radial, harmonic_extension_slope, riesz_of_profile_on, RadialGrid, RadialProfile, DEFAULT_CORE,
    DEFAULT_HEIGHT,
};

fn main() -> liquiddrop::Result<()> {
    let grid = Arc::new(RadialGrid::new(&[1.0], 600, 6.0)?);
    let g = RadialProfile::from_fn(3, grid.clone(), |r| if r < 1.0 { (1.0 - r * r).powi(4) } else { 0.0 })?;
    let i1 = riesz_of_profile_on(&g, 1.0, grid)?;
    println!("   r     g(r)     singular   extension");
    for r in [0.0, 0.25, 0.5, 0.75, 0.9] {
        println!(
            "{r:5.2}  {:8.5}  {:9.5}  {:9.5}",
            g.eval(r),
            half_laplacian_radial(&i1, r, DEFAULT_CORE)?,
            harmonic_extension_slope(&i1, r, DEFAULT_HEIGHT)?
        );
    }
    Ok(())
}
