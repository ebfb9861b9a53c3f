use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use super::kernel::{check_order, sigma_constant, sphere_average_kernel};
use crate::error::{domain, Error, Result};
use crate::quad::{adaptive, GaussLegendre, Tolerance};
use crate::shapes::{unit_ball_volume, unit_sphere_area, Dimension, RadialSet};

/// `∫_{B_R} |x − ξ|^{α−n} dξ` at `|x| = r`, integrated along rays from `x`.
pub fn ball_riesz_integral(n: usize, alpha: f64, r: f64, big_r: f64) -> f64 {
    if big_r <= 0.0 {
        return 0.0;
    }
    if r == 0.0 {
        return unit_sphere_area(n) * big_r.powf(alpha) / alpha;
    }
    let pref = (n - 1) as f64 * unit_ball_volume(n - 1) / alpha;
    let k = n as i32 - 2;
    let tol = Tolerance::new(0.0, 1e-13);
    if r <= big_r {
        // Ray length ρ(θ) = √(R² − r² sin²θ) − r cos θ.
        let d = (big_r - r) * (big_r + r);
        let mut breaks = vec![0.0, 0.5 * PI, PI];
        let scale = d.sqrt() / r;
        let mut t = scale.max(1e-14);
        while t < 0.5 {
            breaks.push(0.5 * PI - t);
            breaks.push(0.5 * PI + t);
            t *= 4.0;
        }
        breaks.sort_by(f64::total_cmp);
        let res = adaptive(
            |theta| {
                let (s, c) = theta.sin_cos();
                let root = (d + r * r * c * c).sqrt();
                let rho = if c > 0.0 {
                    let den = root + r * c;
                    if den > 0.0 {
                        d / den
                    } else {
                        0.0
                    }
                } else {
                    root - r * c
                };
                rho.powf(alpha) * s.powi(k)
            },
            &breaks,
            tol,
        );
        pref * res.value
    } else {
        // Substituting sin θ = (R/r) sin u; the ray enters and leaves the
        // ball at distances ρ₋ < ρ₊ with ρ₊ρ₋ = r² − R².
        let q = big_r / r;
        let one_minus_q2 = (1.0 - q) * (1.0 + q);
        let far = (r - big_r) * (r + big_r);
        let mut breaks = vec![0.0, 0.5 * PI];
        let mut t = one_minus_q2.sqrt().max(1e-14);
        while t < 0.5 {
            breaks.push(0.5 * PI - t);
            t *= 4.0;
        }
        breaks.sort_by(f64::total_cmp);
        let res = adaptive(
            |u| {
                let (su, cu) = u.sin_cos();
                let cos_theta = (cu * cu + one_minus_q2 * su * su).sqrt();
                let plus = r * cos_theta + big_r * cu;
                let minus = far / plus;
                (plus.powf(alpha) - minus.powf(alpha)) * (q * su).powi(k) * q * cu / cos_theta
            },
            &breaks,
            tol,
        );
        pref * res.value
    }
}

/// Unnormalized potential `∫ ρ(ξ) |x − ξ|^{α−n} dξ` at `|x| = r` of the
/// piecewise-constant radial density given as `(a, b, weight)` shells.
pub fn shell_potential(n: usize, alpha: f64, pieces: &[(f64, f64, f64)], r: f64) -> f64 {
    pieces
        .iter()
        .map(|&(a, b, w)| w * (ball_riesz_integral(n, alpha, r, b) - ball_riesz_integral(n, alpha, r, a)))
        .sum()
}

/// `(I_α f_E)(r)` for `f_E = χ_{B_1} − χ_E`.
pub fn riesz_potential_at(set: &RadialSet, alpha: f64, r: f64) -> Result<f64> {
    let n = set.n();
    let sigma = sigma_constant(n, alpha)?;
    if !(r >= 0.0) {
        return domain(format!("radius {r} must be non-negative"));
    }
    Ok(sigma * shell_potential(n, alpha, &set.deficit_density(), r))
}

/// `⨍_{B_ρ} I_α f_E`, from `∫_{B_ρ} I_α f_E = σ ∫ f_E(ξ) ∫_{B_ρ}|x − ξ|^{α−n} dx dξ`.
pub fn riesz_ball_average(set: &RadialSet, alpha: f64, rho: f64) -> Result<f64> {
    let n = set.n();
    let sigma = sigma_constant(n, alpha)?;
    if !(rho > 0.0) {
        return domain(format!("ball radius {rho} must be positive"));
    }
    let tol = Tolerance::new(1e-15, 1e-12);
    let mut total = 0.0;
    for (a, b, w) in set.deficit_density() {
        let breaks = crate::quad::breakpoints(a, b, [rho]);
        let res = adaptive(
            |s| ball_riesz_integral(n, alpha, s, rho) * s.powi(n as i32 - 1),
            &breaks,
            tol,
        );
        total += w * res.value;
    }
    Ok(sigma * n as f64 * total / rho.powi(n as i32))
}

/// Radius grid on `[0, r_max]` made of pieces between prescribed breakpoints.
/// Nodes inside each piece follow a smooth map that concentrates them near
/// both ends; every breakpoint is a node.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    radii: Vec<f64>,
    breaks: Vec<f64>,
    cells: Vec<usize>,
    starts: Vec<usize>,
}

impl RadialGrid {
    pub const DEFAULT_POINTS: usize = 600;
    pub const DEFAULT_R_MAX: f64 = 6.0;
    const MIN_CELLS: usize = 4;
    const CLUSTER: f64 = 0.75;

    /// Grid with roughly `points` nodes and interior breakpoints `interior`.
    pub fn new(interior: &[f64], points: usize, r_max: f64) -> Result<Self> {
        if !(r_max >= 3.0) || !r_max.is_finite() {
            return domain(format!("r_max = {r_max} must be at least 3"));
        }
        if points < 16 {
            return domain(format!("{points} grid points are too few"));
        }
        let breaks = crate::quad::breakpoints(0.0, r_max, interior.iter().copied());
        let cells = breaks
            .windows(2)
            .map(|w| ((points as f64 * (w[1] - w[0]) / r_max).round() as usize).max(Self::MIN_CELLS))
            .collect();
        Ok(Self::from_cells(breaks, cells))
    }

    /// Default grid for the potential of `f_E`: breakpoints at every jump.
    pub fn for_set(set: &RadialSet, points: usize) -> Result<Self> {
        let jumps: Vec<f64> = set
            .jump_radii()
            .into_iter()
            .filter(|&r| r < Self::DEFAULT_R_MAX)
            .collect();
        Self::new(&jumps, points, Self::DEFAULT_R_MAX)
    }

    fn from_cells(breaks: Vec<f64>, cells: Vec<usize>) -> Self {
        let mut radii = vec![breaks[0]];
        let mut starts = Vec::with_capacity(cells.len() + 1);
        for (w, &m) in breaks.windows(2).zip(&cells) {
            starts.push(radii.len() - 1);
            let (a, b) = (w[0], w[1]);
            for j in 1..m {
                let t = j as f64 / m as f64;
                let u = t - Self::CLUSTER * (2.0 * PI * t).sin() / (2.0 * PI);
                radii.push(a + (b - a) * u);
            }
            radii.push(b);
        }
        starts.push(radii.len() - 1);
        Self {
            radii,
            breaks,
            cells,
            starts,
        }
    }

    /// The grid with every cell split in two.
    pub fn refined(&self) -> Self {
        Self::from_cells(self.breaks.clone(), self.cells.iter().map(|m| 2 * m).collect())
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Indices of the four nodes used to interpolate at `r`, all in the
    /// piece containing `r`.
    fn stencil(&self, r: f64) -> usize {
        let i = self.radii.partition_point(|&x| x <= r).saturating_sub(1).min(self.radii.len() - 2);
        let p = self.starts.partition_point(|&s| s <= i) - 1;
        let (lo, hi) = (self.starts[p], self.starts[p + 1]);
        (i.saturating_sub(1)).clamp(lo, hi - 3)
    }
}

/// Values of a radial function on a [`RadialGrid`], with `α` recorded for
/// Riesz potentials and their averages.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    n: usize,
    alpha: Option<f64>,
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(n: usize, alpha: Option<f64>, grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        Dimension::new(n)?;
        if values.len() != grid.len() {
            return domain("profile needs one value per grid node");
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("profile value at r = {} is not finite", grid.radii[i])));
        }
        Ok(Self { n, alpha, grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F: Fn(f64) -> f64 + Sync>(n: usize, grid: Arc<RadialGrid>, f: F) -> Result<Self> {
        let values = grid.radii.par_iter().map(|&r| f(r)).collect();
        Self::new(n, None, grid, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn radii(&self) -> &[f64] {
        &self.grid.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn r_max(&self) -> f64 {
        self.grid.r_max()
    }

    /// Piecewise-cubic interpolation inside the piece containing `r`; zero
    /// beyond `r_max`.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r > self.r_max() {
            return 0.0;
        }
        let j = self.grid.stencil(r);
        lagrange4(&self.grid.radii[j..j + 4], &self.values[j..j + 4], r)
    }

    /// Radial Laplacian `f'' + (n−1) f'/r` by fourth-order differences of the
    /// interpolant, with step `h`. At the origin it is `n f''(0)`.
    pub fn laplacian(&self, r: f64, h: f64) -> f64 {
        let f = |x: f64| self.eval(x);
        let d2 = (-f(r + 2.0 * h) + 16.0 * f(r + h) - 30.0 * f(r) + 16.0 * f(r - h) - f(r - 2.0 * h))
            / (12.0 * h * h);
        if r < 1e-12 {
            return self.n as f64 * d2;
        }
        let d1 = (-f(r + 2.0 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2.0 * h)) / (12.0 * h);
        d2 + (self.n as f64 - 1.0) * d1 / r
    }

    /// Ball averages `⨍_{B_r} f = n r^{−n} ∫_0^r s^{n−1} f(s) ds` at every
    /// node, integrating the interpolant exactly cell by cell.
    pub fn ball_average(&self) -> Self {
        let gl = GaussLegendre::new(7);
        let k = self.n as i32 - 1;
        let radii = &self.grid.radii;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(radii.len());
        out.push(self.values[0]);
        for i in 0..radii.len() - 1 {
            let (a, b) = (radii[i], radii[i + 1]);
            let j = self.grid.stencil(0.5 * (a + b));
            let xs = &radii[j..j + 4];
            let ys = &self.values[j..j + 4];
            acc += gl.integrate(a, b, |s| s.powi(k) * lagrange4(xs, ys, s));
            out.push(self.n as f64 * acc / b.powi(self.n as i32));
        }
        Self {
            n: self.n,
            alpha: self.alpha,
            grid: self.grid.clone(),
            values: out,
        }
    }

    /// `sup |f − g|` over the nodes of `self`.
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.grid
            .radii
            .iter()
            .zip(&self.values)
            .map(|(&r, v)| (v - other.eval(r)).abs())
            .fold(0.0, f64::max)
    }

    /// `|f(r_max)| ≤ |f(r_max/2)|`, or `f(r_max)` negligible against the peak.
    pub fn decays(&self) -> bool {
        let far = self.values.last().copied().unwrap_or(0.0).abs();
        let peak = self.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        far <= self.eval(0.5 * self.r_max()).abs().max(1e-12 * peak)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "value"])?;
        for (r, v) in self.grid.radii.iter().zip(&self.values) {
            w.write_record([format!("{r:.17e}"), format!("{v:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn lagrange4(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        let mut l = 1.0;
        for j in 0..4 {
            if i != j {
                l *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += l * ys[i];
    }
    sum
}

/// Profile of `I_α f_E` on `grid`.
pub fn riesz_potential_radial(set: &RadialSet, alpha: f64, grid: Arc<RadialGrid>) -> Result<RadialProfile> {
    let n = set.n();
    let sigma = sigma_constant(n, alpha)?;
    let pieces = set.deficit_density();
    let values = grid
        .radii
        .par_iter()
        .map(|&r| sigma * shell_potential(n, alpha, &pieces, r))
        .collect();
    let profile = RadialProfile::new(n, Some(alpha), grid, values)?;
    if !profile.decays() {
        return Err(Error::Numerical(format!(
            "potential of order {alpha} does not decay toward r_max = {}",
            profile.r_max()
        )));
    }
    Ok(profile)
}

/// The spherical averages `φ_α` (the potential itself, by symmetry) and the
/// ball averages `Φ_α`.
pub fn phi_profiles(set: &RadialSet, alpha: f64, grid: Arc<RadialGrid>) -> Result<(RadialProfile, RadialProfile)> {
    let phi = riesz_potential_radial(set, alpha, grid)?;
    let big_phi = phi.ball_average();
    Ok((phi, big_phi))
}

/// Average of `|x − y|^{α−n}` over the sphere of radius `s`, `|x| = r`, with
/// closed forms for the Newton kernel and for `n = 3`.
pub(crate) fn kernel_average(n: usize, alpha: f64, r: f64, s: f64) -> f64 {
    if alpha == 2.0 {
        return r.max(s).powi(2 - n as i32);
    }
    if n == 3 && r > 0.0 && s > 0.0 {
        let a1 = alpha - 1.0;
        let (p, m) = (r + s, (r - s).abs());
        let num = if a1 == 0.0 { p.ln() - m.ln() } else { (p.powf(a1) - m.powf(a1)) / a1 };
        return num / (2.0 * r * s);
    }
    sphere_average_kernel(n, alpha, r, s).unwrap_or(f64::INFINITY)
}

/// `(I_α g)(r)` for the radial function `g` interpolated by `profile`
/// (zero beyond its last node).
pub fn riesz_of_profile(profile: &RadialProfile, alpha: f64, r: f64) -> Result<f64> {
    let n = profile.n;
    check_order(n, alpha)?;
    let sigma = sigma_constant(n, alpha)?;
    let k = n as i32 - 1;
    let mut breaks = profile.grid.radii.clone();
    breaks.push(r);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.retain(|&b| b <= profile.r_max());
    let res = adaptive(
        |s| profile.eval(s) * kernel_average(n, alpha, r, s) * s.powi(k),
        &breaks,
        Tolerance::new(1e-16, 1e-12),
    );
    if !res.converged {
        return Err(Error::Numerical(format!("Riesz integral of a profile did not converge at r = {r}")));
    }
    Ok(sigma * unit_sphere_area(n) * res.value)
}

/// Profile of `I_α g` on `grid`.
pub fn riesz_of_profile_on(profile: &RadialProfile, alpha: f64, grid: Arc<RadialGrid>) -> Result<RadialProfile> {
    let values: Result<Vec<f64>> = grid
        .radii
        .par_iter()
        .map(|&r| riesz_of_profile(profile, alpha, r))
        .collect();
    RadialProfile::new(profile.n, Some(alpha), grid, values?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::annulus_family;

    fn ball_oracle(n: usize, alpha: f64, r: f64, big_r: f64) -> f64 {
        // ∫_0^R ⨍_{∂B_s} |x − y|^{α−n} nω_n s^{n−1} ds.
        let breaks = crate::quad::breakpoints(0.0, big_r, [r]);
        let res = adaptive(
            |s| sphere_average_kernel(n, alpha, r, s).unwrap() * s.powi(n as i32 - 1),
            &breaks,
            Tolerance::new(0.0, 1e-11),
        );
        unit_sphere_area(n) * res.value
    }

    #[test]
    fn ball_integral_matches_sphere_average_oracle() {
        for n in [3usize, 4, 5, 7, 10] {
            for alpha in [1.0, 2.0, 2.5, n as f64 - 1.0] {
                if alpha >= n as f64 {
                    continue;
                }
                for (r, big_r) in [(0.3, 1.0), (1.0, 1.0), (0.999, 1.0), (1.001, 1.0), (2.5, 1.0), (0.5, 0.2)] {
                    let got = ball_riesz_integral(n, alpha, r, big_r);
                    let want = ball_oracle(n, alpha, r, big_r);
                    assert!((got / want - 1.0).abs() < 1e-9, "n={n} α={alpha} r={r} R={big_r}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn newton_ball_closed_form() {
        // n = 3: ∫_{B_1}|x − y|^{−1} = 2π − 2πr²/3 inside, 4π/(3r) outside.
        for r in [0.0, 0.4, 1.0, 2.0] {
            let want = if r <= 1.0 { 2.0 * PI - 2.0 * PI * r * r / 3.0 } else { 4.0 * PI / (3.0 * r) };
            assert!((ball_riesz_integral(3, 2.0, r, 1.0) - want).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn annulus_potential_at_origin() {
        let e = annulus_family(0.5, 3).unwrap();
        let big_r = e.intervals()[0].1;
        let want = (0.25 - big_r * big_r + 1.0) / 2.0;
        assert!((riesz_potential_at(&e, 2.0, 0.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn ball_alone_shell_theorem() {
        let v = sigma_constant(3, 2.0).unwrap() * shell_potential(3, 2.0, &[(0.0, 1.0, 1.0)], 2.0);
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn unit_ball_potential_vanishes() {
        let b = RadialSet::unit_ball(4).unwrap();
        let g = Arc::new(RadialGrid::for_set(&b, 200).unwrap());
        let p = riesz_potential_radial(&b, 1.5, g).unwrap();
        assert!(p.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn grid_structure() {
        let g = RadialGrid::new(&[0.5, 1.0, 1.2], 600, 6.0).unwrap();
        assert!(g.radii().windows(2).all(|w| w[1] > w[0]));
        for b in [0.5, 1.0, 1.2, 6.0] {
            assert!(g.radii().contains(&b));
        }
        assert_eq!(g.radii()[0], 0.0);
        let f = g.refined();
        assert_eq!(f.len() - 1, 2 * (g.len() - 1));
        assert!(RadialGrid::new(&[], 600, 2.0).is_err());
    }

    #[test]
    fn interpolation_and_ball_average_converge() {
        // f(r) = exp(−r²): ⨍_{B_r} f in n = 3 has a closed form via erf.
        let errors = |g: Arc<RadialGrid>| {
            let p = RadialProfile::from_fn(3, g, |r| (-r * r).exp()).unwrap();
            let interp = [0.01, 0.37, 1.0, 2.2]
                .iter()
                .map(|&r: &f64| (p.eval(r) - (-r * r).exp()).abs())
                .fold(0.0, f64::max);
            let avg = p.ball_average();
            let average = avg
                .radii()
                .iter()
                .zip(avg.values())
                .skip(1)
                .map(|(&r, &v)| {
                    let int = PI.sqrt() / 4.0 * libm::erf(r) - r * (-r * r).exp() / 2.0;
                    (v - 3.0 * int / r.powi(3)).abs()
                })
                .fold(0.0, f64::max);
            let r: f64 = 0.8;
            let lap = (p.laplacian(r, 0.02) - (4.0 * r * r - 6.0) * (-r * r).exp()).abs();
            (interp, average, lap)
        };
        let g = RadialGrid::new(&[1.0], 300, 6.0).unwrap();
        let (i1, a1, l1) = errors(Arc::new(g.clone()));
        let (i2, a2, l2) = errors(Arc::new(g.refined()));
        assert!(i1 < 1e-5 && a1 < 1e-6 && l1 < 1e-3, "{i1} {a1} {l1}");
        assert!(i2 < i1 / 8.0 && a2 < a1 / 8.0, "{i2} {a2}");
        assert!(l2 < l1, "{l2}");
    }

    #[test]
    fn ball_average_of_potential_matches_fubini() {
        let e = annulus_family(0.3, 5).unwrap();
        let g = Arc::new(RadialGrid::for_set(&e, 600).unwrap());
        let (phi, big_phi) = phi_profiles(&e, 2.0, g).unwrap();
        for rho in [0.5, 1.0, 2.0] {
            let want = riesz_ball_average(&e, 2.0, rho).unwrap();
            assert!((big_phi.eval(rho) - want).abs() < 1e-8, "ρ={rho}");
        }
        assert!(big_phi.values().iter().all(|v| *v >= -1e-12));
        assert!(phi.values().windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn potential_profiles_decay() {
        let e = annulus_family(0.4, 4).unwrap();
        let g = Arc::new(RadialGrid::for_set(&e, 300).unwrap());
        for alpha in [1.0, 2.0, 3.0] {
            let p = riesz_potential_radial(&e, alpha, g.clone()).unwrap();
            assert!(p.eval(3.0).abs() < p.eval(1.5).abs());
        }
    }

    #[test]
    fn csv_export() {
        let g = Arc::new(RadialGrid::new(&[], 20, 3.0).unwrap());
        let p = RadialProfile::from_fn(3, g.clone(), |r| r).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,value\n"));
        assert_eq!(text.lines().count(), g.len() + 1);
    }
}
