use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::grid::SphereGrid;
use super::harmonics::{harmonic_count, harmonic_index, harmonic_sum, MAX_SUM_DEGREE};
use super::{unit_ball_volume, Measured};
use crate::error::{domain, Error, Result};

/// Geometry of the boundary at one quadrature node.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceNode {
    /// Unit direction from the shape center.
    pub dir: [f64; 3],
    /// Sphere quadrature weight.
    pub weight: f64,
    pub radius: f64,
    /// Tangential gradient of the radius function, `∇_S r`.
    pub gradient: [f64; 3],
}

impl SurfaceNode {
    /// Boundary point relative to the shape center.
    pub fn point(&self) -> [f64; 3] {
        self.dir.map(|d| d * self.radius)
    }

    /// `√(r² + |∇_S r|²)`.
    pub fn slant(&self) -> f64 {
        (self.radius * self.radius + dot(self.gradient, self.gradient)).sqrt()
    }

    /// Surface element per unit solid angle.
    pub fn area_factor(&self) -> f64 {
        self.radius * self.slant()
    }

    pub fn outward_normal(&self) -> [f64; 3] {
        let s = self.slant();
        std::array::from_fn(|i| (self.radius * self.dir[i] - self.gradient[i]) / s)
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A star-shaped body in `R^3` with boundary
/// `center + r(ω) ω`, `r(ω) = r₀ (1 + Σ c_{l,m} Y_{l,m}(ω))`.
#[derive(Clone, Debug)]
pub struct StarSurface {
    max_degree: usize,
    r0: f64,
    coeffs: Vec<f64>,
    center: [f64; 3],
    grid: Arc<SphereGrid>,
    nodes: Vec<SurfaceNode>,
}

impl StarSurface {
    /// Builds the shape from a coefficient map keyed by `(l, m)`.
    pub fn new(
        max_degree: usize,
        r0: f64,
        coeffs: &BTreeMap<(usize, i64), f64>,
        center: [f64; 3],
        grid: Arc<SphereGrid>,
    ) -> Result<Self> {
        if max_degree > MAX_SUM_DEGREE {
            return Err(Error::Construction(format!(
                "degree {max_degree} above the supported maximum {MAX_SUM_DEGREE}"
            )));
        }
        let mut flat = vec![0.0; harmonic_count(max_degree)];
        for (&(l, m), &c) in coeffs {
            if l > max_degree || m.unsigned_abs() as usize > l {
                return Err(Error::Construction(format!(
                    "coefficient ({l},{m}) outside degree {max_degree}"
                )));
            }
            if !c.is_finite() {
                return Err(Error::Construction(format!("coefficient ({l},{m}) is not finite")));
            }
            flat[harmonic_index(l, m)] = c;
        }
        Self::from_flat(max_degree, r0, flat, center, grid)
    }

    pub(crate) fn from_flat(
        max_degree: usize,
        r0: f64,
        coeffs: Vec<f64>,
        center: [f64; 3],
        grid: Arc<SphereGrid>,
    ) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Construction(format!("base radius {r0} must be positive")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Construction("center is not finite".into()));
        }
        debug_assert_eq!(coeffs.len(), harmonic_count(max_degree));
        let nodes = build_nodes(max_degree, r0, &coeffs, &grid)?;
        Ok(Self {
            max_degree,
            r0,
            coeffs,
            center,
            grid,
            nodes,
        })
    }

    /// The ball of radius `r0` centered at `center`.
    pub fn ball(r0: f64, center: [f64; 3], grid: Arc<SphereGrid>) -> Result<Self> {
        Self::from_flat(0, r0, vec![0.0], center, grid)
    }

    /// Random shape with modes `1 ≤ l ≤ max_degree`, scaled so that
    /// `max |r/r₀ − 1|` over the grid equals `amplitude`, then rescaled to
    /// unit volume.
    pub fn random<R: Rng + ?Sized>(
        max_degree: usize,
        amplitude: f64,
        grid: Arc<SphereGrid>,
        rng: &mut R,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&amplitude) {
            return domain(format!("amplitude {amplitude} outside [0, 1)"));
        }
        let mut coeffs = vec![0.0; harmonic_count(max_degree)];
        for c in coeffs.iter_mut().skip(1) {
            *c = rng.random_range(-1.0..1.0);
        }
        let peak = grid
            .directions()
            .iter()
            .map(|&d| harmonic_sum(max_degree, &coeffs, d).abs())
            .fold(0.0, f64::max);
        if peak > 0.0 {
            coeffs.iter_mut().for_each(|c| *c *= amplitude / peak);
        }
        Self::from_flat(max_degree, 1.0, coeffs, [0.0; 3], grid)?.rescale_to_unit_volume()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[SurfaceNode] {
        &self.nodes
    }

    /// Flat coefficient vector indexed by [`harmonic_index`].
    pub fn flat_coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize, m: i64) -> f64 {
        if l > self.max_degree {
            0.0
        } else {
            self.coeffs[harmonic_index(l, m)]
        }
    }

    /// Nonzero coefficients keyed by `(l, m)`.
    pub fn coeff_map(&self) -> BTreeMap<(usize, i64), f64> {
        let mut map = BTreeMap::new();
        for l in 0..=self.max_degree {
            for m in -(l as i64)..=(l as i64) {
                let c = self.coeffs[harmonic_index(l, m)];
                if c != 0.0 {
                    map.insert((l, m), c);
                }
            }
        }
        map
    }

    /// Same shape with a different coefficient vector (same degree, radius,
    /// center and grid).
    pub fn with_coeffs(&self, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != self.coeffs.len() {
            return domain("coefficient vector has the wrong length");
        }
        Self::from_flat(self.max_degree, self.r0, coeffs, self.center, self.grid.clone())
    }

    /// Same shape sampled on another grid.
    pub fn with_grid(&self, grid: Arc<SphereGrid>) -> Result<Self> {
        Self::from_flat(self.max_degree, self.r0, self.coeffs.clone(), self.center, grid)
    }

    /// Same shape with the harmonic expansion raised to `max_degree`.
    pub fn with_max_degree(&self, max_degree: usize) -> Result<Self> {
        if max_degree < self.max_degree {
            return domain("cannot lower the degree without truncating modes");
        }
        let map = self.coeff_map();
        Self::new(max_degree, self.r0, &map, self.center, self.grid.clone())
    }

    pub fn translated(&self, v: [f64; 3]) -> Self {
        let mut out = self.clone();
        out.center = std::array::from_fn(|i| self.center[i] + v[i]);
        out
    }

    /// Radius function at a unit direction.
    pub fn radius_at(&self, dir: [f64; 3]) -> f64 {
        self.r0 * (1.0 + harmonic_sum(self.max_degree, &self.coeffs, dir))
    }

    /// Largest radius over the grid nodes.
    pub fn max_node_radius(&self) -> f64 {
        self.nodes.iter().map(|n| n.radius).fold(0.0, f64::max)
    }

    /// Upper bound on the radius function everywhere on the sphere.
    pub fn radius_bound(&self) -> f64 {
        // |Y_{l,m}| ≤ √((2l+1)/4π); index i belongs to degree ⌊√i⌋.
        let coeff_norm: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let l = (i as f64).sqrt().floor();
                c.abs() * ((2.0 * l + 1.0) / (4.0 * std::f64::consts::PI)).sqrt()
            })
            .sum();
        self.r0 * (1.0 + coeff_norm)
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        let d: [f64; 3] = std::array::from_fn(|i| p[i] - self.center[i]);
        let t = dot(d, d).sqrt();
        if t == 0.0 {
            return true;
        }
        t < self.radius_at(d.map(|x| x / t))
    }

    /// `∫_E x dx / |E|`.
    pub fn barycenter(&self) -> [f64; 3] {
        let mut m = [0.0; 3];
        for node in &self.nodes {
            let w = node.weight * node.radius.powi(4) / 4.0;
            for (mi, di) in m.iter_mut().zip(node.dir) {
                *mi += w * di;
            }
        }
        let v = self.volume();
        std::array::from_fn(|i| self.center[i] + m[i] / v)
    }
}

fn build_nodes(max_degree: usize, r0: f64, coeffs: &[f64], grid: &SphereGrid) -> Result<Vec<SurfaceNode>> {
    let table = grid.harmonic_table(max_degree);
    let k = table.count;
    let mut nodes = Vec::with_capacity(grid.len());
    for (j, ((&dir, &(ct, st, phi)), &weight)) in
        grid.directions().iter().zip(grid.angles()).zip(grid.weights()).enumerate()
    {
        let row = j * k..(j + 1) * k;
        let combine = |t: &[f64]| coeffs.iter().zip(t).map(|(c, y)| c * y).sum::<f64>();
        let s = combine(&table.values[row.clone()]);
        let radius = r0 * (1.0 + s);
        if !(radius > 0.0) {
            return Err(Error::Construction(format!(
                "radius {radius} is not positive at direction {dir:?}"
            )));
        }
        let r_theta = r0 * combine(&table.d_theta[row.clone()]);
        let r_phi = r0 * combine(&table.d_phi[row]);
        let (sp, cp) = phi.sin_cos();
        let e_theta = [ct * cp, ct * sp, -st];
        let e_phi = [-sp, cp, 0.0];
        let gradient = std::array::from_fn(|i| r_theta * e_theta[i] + r_phi / st * e_phi[i]);
        nodes.push(SurfaceNode {
            dir,
            weight,
            radius,
            gradient,
        });
    }
    Ok(nodes)
}

impl Measured for StarSurface {
    fn dimension(&self) -> usize {
        3
    }

    fn volume(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight * n.radius.powi(3) / 3.0).sum()
    }

    fn perimeter(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight * n.area_factor()).sum()
    }

    fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.r0 *= s;
        for node in &mut out.nodes {
            node.radius *= s;
            node.gradient = node.gradient.map(|g| g * s);
        }
        out
    }
}

/// The ball perturbed by the single axisymmetric mode `c_{l,0} = amplitude`,
/// rescaled to unit volume, on a `grid_res × 2 grid_res` grid.
pub fn perturbed_ball(l: usize, amplitude: f64, max_degree: usize, grid_res: usize) -> Result<StarSurface> {
    if l < 2 || l > max_degree {
        return domain(format!("mode {l} must satisfy 2 ≤ l ≤ {max_degree}"));
    }
    if grid_res == 0 {
        return domain("grid resolution must be positive");
    }
    let grid = SphereGrid::new(grid_res, 2 * grid_res);
    let mut coeffs = vec![0.0; harmonic_count(max_degree)];
    coeffs[harmonic_index(l, 0)] = amplitude;
    let shape = StarSurface::from_flat(max_degree, 1.0, coeffs, [0.0; 3], grid)?;
    let unit = shape.rescale_to_unit_volume()?;
    debug_assert!((unit.volume() / unit_ball_volume(3) - 1.0).abs() < 1e-10);
    Ok(unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn unit_ball() -> StarSurface {
        StarSurface::ball(1.0, [0.0; 3], SphereGrid::default_grid()).unwrap()
    }

    #[test]
    fn ball_limit_measures() {
        let b = unit_ball();
        assert!((b.volume() - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((b.perimeter() - 4.0 * PI).abs() < 1e-8);
        let g: f64 = b.grid().weights().iter().sum();
        assert!((g / (4.0 * PI) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_ball_examples() {
        let b = perturbed_ball(2, 0.0, 2, 64).unwrap();
        assert!((b.perimeter() - 4.0 * PI).abs() < 1e-8);

        let p = perturbed_ball(2, 0.1, 2, 64).unwrap();
        assert!((p.volume() - 4.0 * PI / 3.0).abs() < 1e-10);

        let q = perturbed_ball(3, 0.05, 3, 64).unwrap();
        let fine = q.with_grid(SphereGrid::new(128, 256)).unwrap();
        assert!(q.perimeter() > 4.0 * PI);
        assert!(fine.perimeter() > 4.0 * PI);
        assert!((q.perimeter() - fine.perimeter()).abs() < 1e-10);

        assert!(perturbed_ball(1, 0.1, 2, 64).is_err());
        assert!(perturbed_ball(3, 0.1, 2, 64).is_err());
        // 1 + a·Y_20 vanishes at the poles for a = 1/Y_20(0).
        assert!(perturbed_ball(2, -2.0, 2, 64).is_err());
    }

    #[test]
    fn rescale_any_star_to_unit_volume() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let s = StarSurface::random(4, 0.15, SphereGrid::new(32, 64), &mut rng).unwrap();
            let s = s.scaled(1.7).rescale_to_unit_volume().unwrap();
            assert!((s.volume() / unit_ball_volume(3) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn quadrature_converges_under_grid_doubling() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = StarSurface::random(8, 0.2, SphereGrid::default_grid(), &mut rng).unwrap();
        let d = s.with_grid(SphereGrid::new(128, 256)).unwrap();
        assert!((s.volume() / d.volume() - 1.0).abs() < 1e-6);
        assert!((s.perimeter() / d.perimeter() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn homothety_and_isoperimetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let s = StarSurface::random(4, 0.2, SphereGrid::new(48, 96), &mut rng).unwrap();
            assert!(s.perimeter() >= 4.0 * PI - 1e-8);
            let t = s.scaled(1.3);
            assert!((t.volume() / s.volume() - 1.3f64.powi(3)).abs() < 1e-12);
            assert!((t.perimeter() / s.perimeter() - 1.3f64.powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn normals_of_ball_are_radial() {
        let b = unit_ball().translated([0.3, -0.2, 0.5]);
        for node in b.nodes().iter().step_by(97) {
            let nu = node.outward_normal();
            for i in 0..3 {
                assert!((nu[i] - node.dir[i]).abs() < 1e-14);
            }
        }
        assert!(b.contains([0.3, -0.2, 1.4]));
        assert!(!b.contains([0.3, -0.2, 1.6]));
    }

    #[test]
    fn barycenter_of_translated_ball() {
        let b = unit_ball().translated([1.0, 0.0, 0.0]);
        let c = b.barycenter();
        assert!((c[0] - 1.0).abs() < 1e-12 && c[1].abs() < 1e-12 && c[2].abs() < 1e-12);
    }

    #[test]
    fn radius_bound_dominates_nodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = StarSurface::random(5, 0.3, SphereGrid::new(32, 64), &mut rng).unwrap();
        assert!(s.radius_bound() >= s.max_node_radius());
        for node in s.nodes().iter().step_by(31) {
            assert!((s.radius_at(node.dir) - node.radius).abs() < 1e-13);
        }
    }
}
