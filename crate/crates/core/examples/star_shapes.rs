//! Star-shaped surfaces from spherical harmonics: volume, perimeter,
//! barycenter and the JSON shape format.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use liquiddrop::shapes::{perturbed_ball, shape_from_json, shape_to_json, Measured, Shape, SphereGrid, StarSurface};

fn main() -> liquiddrop::Result<()> {
    let area = 4.0 * std::f64::consts::PI;
    for (l, a) in [(2, 0.05), (2, 0.1), (3, 0.1), (4, 0.1)] {
        let s = perturbed_ball(l, a, 4, 48)?;
        println!("l={l} a={a:<5} volume={:.10} P - 4π = {:.6e}", s.volume(), s.perimeter() - area);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = StarSurface::random(4, 0.15, SphereGrid::new(48, 96), &mut rng)?;
    println!("\nrandom: barycenter {:?}", s.barycenter().map(|x| (x * 1e6).round() / 1e6));

    let json = shape_to_json(&Shape::Star(s.clone()));
    println!("{}...", &json[..json.len().min(120)]);
    let Shape::Star(back) = shape_from_json(&json)? else { unreachable!() };
    println!("round trip perimeter change {:.1e}", (back.perimeter() - s.perimeter()).abs());
    Ok(())
}
