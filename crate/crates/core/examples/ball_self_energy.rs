//! Newton self energy of the unit ball in three dimensions by the three
//! available routes, against the closed form `32π²/15`.

use std::f64::consts::PI;
use std::time::Instant;

use liquiddrop::potentials::{nonlocal_energy_boundary, nonlocal_energy_mc, nonlocal_energy_radial};
use liquiddrop::shapes::{RadialSet, SphereGrid, StarSurface};

fn main() -> liquiddrop::Result<()> {
    let exact = 32.0 * PI * PI / 15.0;
    println!("closed form        {exact:.10}");

    let radial = nonlocal_energy_radial(&RadialSet::unit_ball(3)?);
    println!("radial             {:.10}  rel err {:.1e}", radial.value, (radial.value / exact - 1.0).abs());

    let ball = StarSurface::ball(1.0, [0.0; 3], SphereGrid::new(32, 64))?;
    let b = nonlocal_energy_boundary(&[&ball]);
    println!("boundary 32x64     {b:.10}  rel err {:.1e}", (b / exact - 1.0).abs());

    let t = Instant::now();
    let mc = nonlocal_energy_mc(&[&ball], 1_000_000, 42)?;
    println!(
        "monte carlo 1e6    {:.10}  ± {:.1e}  ({:.2?})",
        mc.value,
        mc.std_error,
        t.elapsed()
    );
    Ok(())
}
