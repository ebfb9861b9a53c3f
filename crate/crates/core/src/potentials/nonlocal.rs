use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::shapes::{unit_ball_volume, Measured, RadialSet, Shape, SphereGrid, StarSurface};

/// A nonlocal energy value with its estimated error. For deterministic
/// methods `std_error` is a discretization error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlocalEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// How the nonlocal energy of a star-shaped body is evaluated.
#[derive(Clone, Debug)]
pub enum NonlocalMethod {
    /// Seeded Monte Carlo over `E × E`.
    MonteCarlo { samples: u64, seed: u64 },
    /// The boundary double integral `−½ ∫∫ (ν_x·ν_y)|x − y|` on the given grid.
    Boundary { grid: Arc<SphereGrid> },
}

impl NonlocalMethod {
    pub const DEFAULT_SAMPLES: u64 = 10_000_000;
    pub const MIN_SAMPLES: u64 = 10_000;

    pub fn boundary_default() -> Self {
        Self::Boundary {
            grid: SphereGrid::new(32, 64),
        }
    }
}

/// `∫_{B_1} |x − y|^{2−n} dx` at `|y| = r`.
pub fn ball_newton_potential(n: usize, r: f64) -> f64 {
    newton_ball(n, r, 1.0)
}

/// `∫_{B_R} |x − y|^{2−n} dx` at `|y| = r`.
pub fn newton_ball(n: usize, r: f64, big_r: f64) -> f64 {
    if big_r <= 0.0 {
        return 0.0;
    }
    let w = unit_ball_volume(n);
    let nf = n as f64;
    if r <= big_r {
        0.5 * w * (nf * big_r * big_r - (nf - 2.0) * r * r)
    } else {
        w * big_r.powi(n as i32) * r.powi(2 - n as i32)
    }
}

/// `∫_a^b N(s, R) s^{n−1} ds` with `N` from [`newton_ball`].
fn newton_shell_moment(n: usize, a: f64, b: f64, big_r: f64) -> f64 {
    if big_r <= 0.0 || b <= a {
        return 0.0;
    }
    let w = unit_ball_volume(n);
    let nf = n as f64;
    let ni = n as i32;
    let mut total = 0.0;
    let hi = b.min(big_r);
    if hi > a {
        total += 0.5 * w * big_r * big_r * (hi.powi(ni) - a.powi(ni))
            - 0.5 * (nf - 2.0) * w * (hi.powi(ni + 2) - a.powi(ni + 2)) / (nf + 2.0);
    }
    let lo = a.max(big_r);
    if b > lo {
        total += 0.5 * w * big_r.powi(ni) * (b * b - lo * lo);
    }
    total
}

/// `∫∫ ρ₁(x) ρ₂(y) |x − y|^{2−n} dx dy` for piecewise-constant radial
/// densities given as `(a, b, weight)` shells, in closed form.
pub fn newton_pair_energy(n: usize, p: &[(f64, f64, f64)], q: &[(f64, f64, f64)]) -> f64 {
    let area = n as f64 * unit_ball_volume(n);
    let mut total = 0.0;
    for &(a, b, w) in p {
        for &(c, d, u) in q {
            total += w * u * (newton_shell_moment(n, a, b, d) - newton_shell_moment(n, a, b, c));
        }
    }
    area * total
}

/// Newton potential `v(y) = ∫ f_E(x) |x − y|^{2−n} dx` at `|y| = r`.
pub fn deficit_newton_potential(set: &RadialSet, r: f64) -> f64 {
    set.deficit_density()
        .iter()
        .map(|&(a, b, w)| w * (newton_ball(set.n(), r, b) - newton_ball(set.n(), r, a)))
        .sum()
}

/// `∫_{B_1} v`.
pub fn deficit_ball_integral(set: &RadialSet) -> f64 {
    newton_pair_energy(set.n(), &[(0.0, 1.0, 1.0)], &set.deficit_density())
}

/// `∫∫ f_E(x) f_E(y) |x − y|^{2−n} dx dy`.
pub fn deficit_quadratic_form(set: &RadialSet) -> f64 {
    let f = set.deficit_density();
    newton_pair_energy(set.n(), &f, &f)
}

/// `NL(E)` of a radial set.
pub fn nonlocal_energy_radial(set: &RadialSet) -> NonlocalEstimate {
    let pieces: Vec<_> = set.intervals().iter().map(|&(a, b)| (a, b, 1.0)).collect();
    let value = newton_pair_energy(set.n(), &pieces, &pieces);
    NonlocalEstimate {
        value,
        std_error: 4.0 * f64::EPSILON * value.abs() * pieces.len() as f64,
    }
}

/// `NL` of a disjoint union of star-shaped bodies by seeded Monte Carlo.
///
/// Self terms sample a uniform point `x` in the body and a uniform segment
/// `x + tω`, `t ∈ [0, T]`, so the `1/|x − y|` singularity is absorbed by the
/// polar Jacobian. Cross terms use independent uniform pairs. Work is split
/// into fixed chunks with their own random streams and reduced in chunk
/// order, so the result does not depend on the thread count.
pub fn nonlocal_energy_mc(bodies: &[&StarSurface], samples: u64, seed: u64) -> Result<NonlocalEstimate> {
    if samples < NonlocalMethod::MIN_SAMPLES {
        return Err(Error::Config(format!(
            "Monte Carlo budget {samples} below the minimum {}",
            NonlocalMethod::MIN_SAMPLES
        )));
    }
    if bodies.is_empty() {
        return Ok(NonlocalEstimate {
            value: 0.0,
            std_error: 0.0,
        });
    }
    let mut terms = Vec::new();
    for i in 0..bodies.len() {
        for j in i..bodies.len() {
            terms.push((i, j));
        }
    }
    let per_term = samples / terms.len() as u64;
    let chunks_per_term = per_term.div_ceil(CHUNK);
    let tasks: Vec<(usize, u64)> = (0..terms.len())
        .flat_map(|t| (0..chunks_per_term).map(move |c| (t, c)))
        .collect();
    let partial: Vec<(usize, Moments)> = tasks
        .par_iter()
        .map(|&(t, c)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((t as u64) << 40) | c);
            let count = CHUNK.min(per_term - c * CHUNK);
            let (i, j) = terms[t];
            (t, sample_term(bodies[i], bodies[j], i == j, count, &mut rng))
        })
        .collect();
    let mut moments = vec![Moments::default(); terms.len()];
    for (t, m) in partial {
        moments[t].merge(&m);
    }
    let mut value = 0.0;
    let mut var = 0.0;
    for (&(i, j), m) in terms.iter().zip(&moments) {
        let scale = if i == j { 1.0 } else { 2.0 } * bodies[i].volume() * bodies[j].volume();
        let mean = m.sum / m.count as f64;
        let v = (m.sum_sq / m.count as f64 - mean * mean).max(0.0) / m.count as f64;
        value += scale * mean;
        var += scale * scale * v;
    }
    Ok(NonlocalEstimate {
        value,
        std_error: var.sqrt(),
    })
}

const CHUNK: u64 = 1 << 15;

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
    count: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
        self.count += 1;
    }

    fn merge(&mut self, o: &Self) {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.count += o.count;
    }
}

/// Samples whose mean times `|E_i| |E_j|` estimates `∫_{E_i}∫_{E_j} |x − y|^{−1}`.
fn sample_term(a: &StarSurface, b: &StarSurface, same: bool, count: u64, rng: &mut ChaCha8Rng) -> Moments {
    let mut m = Moments::default();
    if same {
        let reach = 2.0 * a.radius_bound();
        let vol = a.volume();
        for _ in 0..count {
            let x = uniform_point(a, rng);
            let w = unit_vector(rng);
            let t = rng.random::<f64>() * reach;
            let y = std::array::from_fn(|k| x[k] + t * w[k]);
            let hit = if a.contains(y) { 4.0 * PI * reach * t } else { 0.0 };
            m.push(hit / vol);
        }
    } else {
        for _ in 0..count {
            let x = uniform_point(a, rng);
            let y = uniform_point(b, rng);
            let d = (0..3).map(|k| (x[k] - y[k]).powi(2)).sum::<f64>().sqrt();
            m.push(1.0 / d);
        }
    }
    m
}

fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if r2 > 1e-12 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.map(|x| x / r);
        }
    }
}

fn uniform_point(s: &StarSurface, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let bound = s.radius_bound();
    let c = s.center();
    loop {
        let w = unit_vector(rng);
        let r = s.radius_at(w);
        let u: f64 = rng.random();
        if u * bound.powi(3) < r.powi(3) {
            let t = r * rng.random::<f64>().cbrt();
            return std::array::from_fn(|k| c[k] + t * w[k]);
        }
    }
}

/// `NL` of a disjoint union of star-shaped bodies from the boundary double
/// integral `−½ ∫_{∂E}∫_{∂E} (ν_x·ν_y) |x − y| dσ_x dσ_y`, on each body's
/// own grid.
pub fn nonlocal_energy_boundary(bodies: &[&StarSurface]) -> f64 {
    let mut pts = Vec::new();
    let mut vecs = Vec::new();
    for b in bodies {
        let c = b.center();
        for node in b.nodes() {
            let p = node.point();
            pts.push(std::array::from_fn::<f64, 3, _>(|k| c[k] + p[k]));
            let scale = node.weight * node.area_factor();
            vecs.push(node.outward_normal().map(|v| v * scale));
        }
    }
    let rows: Vec<f64> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let (p, a) = (pts[i], vecs[i]);
            let mut s = 0.0;
            for (q, b) in pts.iter().zip(&vecs) {
                let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                s += (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) * d;
            }
            s
        })
        .collect();
    -0.5 * rows.iter().sum::<f64>()
}

/// [`nonlocal_energy_boundary`] on `grid`, with the change from a grid of half
/// the resolution as error estimate.
pub fn nonlocal_energy_boundary_estimate(bodies: &[&StarSurface], grid: &Arc<SphereGrid>) -> Result<NonlocalEstimate> {
    let coarse = SphereGrid::new((grid.n_polar() / 2).max(4), (grid.n_azimuth() / 2).max(8));
    let on = |g: &Arc<SphereGrid>| -> Result<f64> {
        let moved: Vec<StarSurface> = bodies.iter().map(|b| b.with_grid(g.clone())).collect::<Result<_>>()?;
        let refs: Vec<&StarSurface> = moved.iter().collect();
        Ok(nonlocal_energy_boundary(&refs))
    };
    let fine = on(grid)?;
    let rough = on(&coarse)?;
    Ok(NonlocalEstimate {
        value: fine,
        std_error: (fine - rough).abs(),
    })
}

/// `NL(E)` for any supported shape. Radial sets are evaluated in closed form;
/// star-shaped bodies use `method`.
pub fn nonlocal_energy(shape: &Shape, method: &NonlocalMethod) -> Result<NonlocalEstimate> {
    match shape {
        Shape::Radial(set) => Ok(nonlocal_energy_radial(set)),
        Shape::Star(s) => match method {
            NonlocalMethod::MonteCarlo { samples, seed } => nonlocal_energy_mc(&[s], *samples, *seed),
            NonlocalMethod::Boundary { grid } => nonlocal_energy_boundary_estimate(&[s], grid),
        },
    }
}

/// Two balls of half the unit-ball volume each, centers `distance` apart on
/// the first axis.
pub fn two_ball_union(distance: f64, grid: Arc<SphereGrid>) -> Result<[StarSurface; 2]> {
    let r = 0.5f64.cbrt();
    if !(distance > 2.0 * r) {
        return Err(Error::Domain(format!(
            "centers {distance} apart overlap for radius {r}"
        )));
    }
    let h = 0.5 * distance;
    Ok([
        StarSurface::ball(r, [-h, 0.0, 0.0], grid.clone())?,
        StarSurface::ball(r, [h, 0.0, 0.0], grid)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::radial::ball_riesz_integral;
    use crate::shapes::{annulus_family, perturbed_ball};

    const NL_BALL3: f64 = 32.0 * PI * PI / 15.0;

    #[test]
    fn newton_ball_examples() {
        assert!((ball_newton_potential(3, 0.0) - 2.0 * PI).abs() < 1e-14);
        assert!((ball_newton_potential(3, 2.0) - 2.0 * PI / 3.0).abs() < 1e-14);
        let w = unit_ball_volume(3);
        assert!((ball_newton_potential(3, 1.0) - w).abs() < 1e-14);
        for n in 3..=10 {
            for r in [0.0, 0.3, 0.99, 1.0, 1.5, 3.0] {
                let want = ball_riesz_integral(n, 2.0, r, 1.0);
                assert!((ball_newton_potential(n, r) / want - 1.0).abs() < 1e-11, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn radial_energy_examples() {
        let b = RadialSet::unit_ball(3).unwrap();
        assert!((nonlocal_energy_radial(&b).value - NL_BALL3).abs() < 1e-12);
        let s = 1.7;
        let sb = RadialSet::ball(3, s).unwrap();
        assert!((nonlocal_energy_radial(&sb).value / (s.powi(5) * NL_BALL3) - 1.0).abs() < 1e-13);
        for n in 3..=10 {
            let e = annulus_family(0.4, n).unwrap();
            let ratio = nonlocal_energy_radial(&e.homothety(1.3)).value / nonlocal_energy_radial(&e).value;
            assert!((ratio / 1.3f64.powi(n as i32 + 2) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_energy_matches_shell_quadrature() {
        // ∫_E ∫_E = nω_n ∫_E-radii s^{n−1} ∫_E |x − ξ|^{2−n} dξ ds by nested quadrature.
        let e = RadialSet::new(5, vec![(0.0, 0.3), (0.5, 0.9), (1.2, 1.3)]).unwrap();
        let pieces: Vec<_> = e.intervals().iter().map(|&(a, b)| (a, b, 1.0)).collect();
        let gl = crate::quad::GaussLegendre::new(40);
        let mut want = 0.0;
        for &(a, b) in e.intervals() {
            let mut brk = vec![a];
            brk.extend(e.intervals().iter().flat_map(|&(c, d)| [c, d]).filter(|&x| x > a && x < b));
            brk.push(b);
            want += gl.integrate_pieces(&brk, |s| {
                crate::potentials::radial::shell_potential(5, 2.0, &pieces, s) * s.powi(4)
            });
        }
        want *= 5.0 * unit_ball_volume(5);
        let got = nonlocal_energy_radial(&e).value;
        assert!((got / want - 1.0).abs() < 1e-11, "{got} vs {want}");
    }

    #[test]
    fn gap_identity_holds() {
        for n in 3..=8 {
            let e = RadialSet::new(n, vec![(0.1, 0.6), (0.8, 1.4)]).unwrap().rescale_to_unit_volume().unwrap();
            let b = RadialSet::unit_ball(n).unwrap();
            let gap = nonlocal_energy_radial(&b).value - nonlocal_energy_radial(&e).value;
            let rhs = 2.0 * deficit_ball_integral(&e) - deficit_quadratic_form(&e);
            assert!((gap - rhs).abs() < 1e-10 * gap.abs().max(1.0), "n={n}");
            assert!(deficit_quadratic_form(&e) > 0.0);
        }
    }

    #[test]
    fn boundary_integral_on_ball() {
        let g = SphereGrid::new(32, 64);
        let b = StarSurface::ball(1.0, [0.0; 3], g).unwrap();
        let v = nonlocal_energy_boundary(&[&b]);
        assert!((v / NL_BALL3 - 1.0).abs() < 1e-4, "{v} vs {NL_BALL3}");
    }

    #[test]
    fn boundary_integral_converges_on_perturbed_shape() {
        let s = perturbed_ball(2, 0.2, 2, 16).unwrap();
        let g1 = SphereGrid::new(16, 32);
        let g2 = SphereGrid::new(32, 64);
        let g3 = SphereGrid::new(48, 96);
        let e = |g: &Arc<SphereGrid>| nonlocal_energy_boundary(&[&s.with_grid(g.clone()).unwrap()]);
        let (a, b, c) = (e(&g1), e(&g2), e(&g3));
        assert!((b - c).abs() < 1e-3 * c.abs(), "{a} {b} {c}");
        assert!((b - c).abs() < (a - c).abs());
        // Volume-preserving perturbations of the ball lower NL.
        assert!(c < NL_BALL3);
    }

    #[test]
    fn monte_carlo_on_ball_and_determinism() {
        let g = SphereGrid::new(16, 32);
        let b = StarSurface::ball(1.0, [0.0; 3], g).unwrap();
        let est = nonlocal_energy_mc(&[&b], 400_000, 7).unwrap();
        assert!((est.value - NL_BALL3).abs() < 5.0 * est.std_error, "{est:?}");
        assert!(est.std_error < 0.01 * NL_BALL3);
        let again = nonlocal_energy_mc(&[&b], 400_000, 7).unwrap();
        assert_eq!(est.value.to_bits(), again.value.to_bits());
        let other = nonlocal_energy_mc(&[&b], 400_000, 8).unwrap();
        assert_ne!(est.value, other.value);
        assert!(matches!(nonlocal_energy_mc(&[&b], 9_999, 1), Err(Error::Config(_))));
    }

    #[test]
    fn separated_balls_approach_twice_the_half_ball_energy() {
        let g = SphereGrid::new(16, 32);
        let limit = 2.0 * 2f64.powf(-5.0 / 3.0) * NL_BALL3;
        let v = unit_ball_volume(3) / 2.0;
        for d in [4.0, 20.0] {
            let [a, b] = two_ball_union(d, g.clone()).unwrap();
            let est = nonlocal_energy_mc(&[&a, &b], 400_000, 3).unwrap();
            let cross = 2.0 * v * v / d;
            assert!((est.value - limit - cross).abs() < 5.0 * est.std_error + 0.01 * cross, "d={d} {est:?}");
            let quad = nonlocal_energy_boundary(&[&a, &b]);
            assert!((quad - limit - cross).abs() < 1e-3 * limit, "d={d} {quad}");
        }
    }
}
