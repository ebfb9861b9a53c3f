//! Oscillation asymmetry `β`, potential asymmetry `γ`, the search for optimal
//! centers and the divergence identity `β_y² = P(E) − P(B_1) + γ_y(E)`.

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::potentials::ball_riesz_integral;
use crate::shapes::{dot, unit_sphere_area, Measured, RadialSet, Shape, SphereGrid, StarSurface};
use crate::simplex::nelder_mead;

/// Half-width of the center search box around the barycenter.
pub const SEARCH_HALF_WIDTH: f64 = 1.5;
/// Points per axis of the coarse center grid.
pub const SEARCH_POINTS: usize = 7;
/// Target accuracy of the optimal center.
pub const CENTER_TOL: f64 = 1e-5;
const MAX_SIMPLEX_ITER: usize = 400;

/// `β_y²(E) = ½ ∫_{∂E} |ν_E(x) − (x − y)/|x − y||² dH²(x)`.
pub fn beta_at_center(shape: &StarSurface, y: [f64; 3]) -> Result<f64> {
    if !shape.contains(y) {
        return domain(format!("center {y:?} is not inside the shape"));
    }
    let c = shape.center();
    let mut total = 0.0;
    for node in shape.nodes() {
        let p = node.point();
        let d: [f64; 3] = std::array::from_fn(|k| c[k] + p[k] - y[k]);
        let len = dot(d, d).sqrt();
        let nu = node.outward_normal();
        // ½|ν − u|² = 1 − ν·u for unit vectors.
        let val = 1.0 - dot(nu, d) / len;
        total += node.weight * node.area_factor() * val;
    }
    Ok(total)
}

/// `γ_y(E) = (n−1) ∫_{B_1(y)} |x − y|^{−1} dx − (n−1) ∫_E |x − y|^{−1} dx`.
/// The first term equals `n ω_n` for every `y`.
pub fn gamma_at_center_radial(set: &RadialSet, y: &[f64]) -> Result<f64> {
    let n = set.n();
    if y.len() != n {
        return domain(format!("center has {} coordinates, expected {n}", y.len()));
    }
    let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(gamma_radial_at_distance(set, r))
}

fn gamma_radial_at_distance(set: &RadialSet, r: f64) -> f64 {
    let n = set.n();
    let alpha = n as f64 - 1.0;
    let inner: f64 = set
        .intervals()
        .iter()
        .map(|&(a, b)| ball_riesz_integral(n, alpha, r, b) - ball_riesz_integral(n, alpha, r, a))
        .sum();
    unit_sphere_area(n) - alpha * inner
}

/// [`gamma_at_center`] for a star-shaped body, integrating `∫_E |x − y|^{−1}`
/// in polar coordinates around `y` on the body's grid. Each ray is scanned
/// for every boundary crossing, so the body need not be star-shaped with
/// respect to `y`.
pub fn gamma_at_center_star(shape: &StarSurface, y: [f64; 3]) -> f64 {
    gamma_star_on(shape, y, shape.grid())
}

fn gamma_star_on(shape: &StarSurface, y: [f64; 3], grid: &SphereGrid) -> f64 {
    let c = shape.center();
    let off: [f64; 3] = std::array::from_fn(|k| y[k] - c[k]);
    let reach = dot(off, off).sqrt() + 1.01 * shape.radius_bound();
    let dirs = grid.directions();
    let integrals: Vec<f64> = dirs
        .par_iter()
        .map(|&w| ray_moment(shape, off, w, reach))
        .collect();
    let inner: f64 = integrals.iter().zip(grid.weights()).map(|(v, w)| v * w).sum();
    unit_sphere_area(3) - 2.0 * inner
}

/// `∫_0^∞ χ_E(y + tω) t dt`, with `off = y − center`.
fn ray_moment(shape: &StarSurface, off: [f64; 3], w: [f64; 3], reach: f64) -> f64 {
    const STEPS: usize = 16;
    let h = |t: f64| {
        let p: [f64; 3] = std::array::from_fn(|k| off[k] + t * w[k]);
        let len = dot(p, p).sqrt();
        if len == 0.0 {
            return -shape.r0();
        }
        len - shape.radius_at(p.map(|x| x / len))
    };
    let mut total = 0.0;
    let mut t0 = 0.0;
    let mut h0 = h(0.0);
    let mut entered = if h0 < 0.0 { Some(0.0) } else { None };
    for i in 1..=STEPS {
        let t1 = reach * i as f64 / STEPS as f64;
        let h1 = h(t1);
        if (h0 < 0.0) != (h1 < 0.0) {
            let root = illinois(&h, t0, t1, h0, h1);
            match entered.take() {
                Some(s) => total += 0.5 * (root * root - s * s),
                None => entered = Some(root),
            }
        }
        t0 = t1;
        h0 = h1;
    }
    if let Some(s) = entered {
        total += 0.5 * (reach * reach - s * s);
    }
    total
}

fn illinois<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    let mut side = 0;
    for _ in 0..100 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < 1e-15 * b.abs().max(1.0) {
            return c;
        }
        if (fc < 0.0) == (fb < 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() < 1e-14 * b.abs().max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

/// `γ_y(E)` for either representation; `y` has `n` coordinates.
pub fn gamma_at_center(shape: &Shape, y: &[f64]) -> Result<f64> {
    match shape {
        Shape::Radial(set) => gamma_at_center_radial(set, y),
        Shape::Star(s) => {
            if y.len() != 3 {
                return domain("star-shaped bodies need a center with 3 coordinates");
            }
            Ok(gamma_at_center_star(s, [y[0], y[1], y[2]]))
        }
    }
}

/// `|β_y² − (P(E) − P(B_1) + γ_y(E))|`.
pub fn divergence_identity_residual(shape: &StarSurface, y: [f64; 3]) -> Result<f64> {
    let beta = beta_at_center(shape, y)?;
    let rhs = shape.perimeter() - unit_sphere_area(3) + gamma_at_center_star(shape, y);
    Ok((beta - rhs).abs())
}

/// Which asymmetry is minimized over the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    Beta,
    Gamma,
}

/// Asymmetries at an optimized center.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenteredAsymmetry {
    pub functional: Functional,
    pub center: Vec<f64>,
    pub beta_squared: Option<f64>,
    pub gamma: f64,
    pub identity_residual: Option<f64>,
    pub converged: bool,
}

impl CenteredAsymmetry {
    /// The minimized value.
    pub fn value(&self) -> f64 {
        match self.functional {
            Functional::Beta => self.beta_squared.unwrap_or(f64::NAN),
            Functional::Gamma => self.gamma,
        }
    }

    pub const CSV_HEADER: [&'static str; 7] = ["cx", "cy", "cz", "beta2", "gamma", "residual", "converged"];

    /// One CSV row; the center is padded or truncated to three coordinates.
    pub fn csv_row(&self) -> [String; 7] {
        let coord = |i: usize| format!("{:.12e}", self.center.get(i).copied().unwrap_or(0.0));
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
        [
            coord(0),
            coord(1),
            coord(2),
            opt(self.beta_squared),
            format!("{:.12e}", self.gamma),
            opt(self.identity_residual),
            self.converged.to_string(),
        ]
    }

    pub fn write_csv<W: Write>(rows: &[Self], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        for r in rows {
            w.write_record(r.csv_row())?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Minimizes `β_y²` or `γ_y` over the center `y`: coarse grid search over the
/// box `barycenter ± 1.5`, then simplex descent to [`CENTER_TOL`].
pub fn minimize_center(shape: &Shape, functional: Functional) -> Result<CenteredAsymmetry> {
    match shape {
        Shape::Radial(set) => minimize_center_radial(set, functional),
        Shape::Star(s) => minimize_center_star(s, functional),
    }
}

/// For radial sets `γ_y` depends on `|y|` only, so the search runs along the
/// first axis.
pub fn minimize_center_radial(set: &RadialSet, functional: Functional) -> Result<CenteredAsymmetry> {
    if functional == Functional::Beta {
        return domain("β needs the boundary normal of a star-shaped body in three dimensions");
    }
    check_unit_volume(set.volume(), set.n())?;
    let f = |t: f64| gamma_radial_at_distance(set, t.abs());
    let candidates: Vec<f64> = (0..=2 * SEARCH_POINTS)
        .map(|i| SEARCH_HALF_WIDTH * i as f64 / (2 * SEARCH_POINTS) as f64)
        .collect();
    let values: Vec<f64> = candidates.par_iter().map(|&t| f(t)).collect();
    let start = argmin(&values);
    let step = SEARCH_HALF_WIDTH / (2 * SEARCH_POINTS) as f64;
    let res = nelder_mead(|x| f(x[0]), &[candidates[start]], step, CENTER_TOL, 1e-15, MAX_SIMPLEX_ITER);
    let mut center = vec![0.0; set.n()];
    center[0] = res.point[0].abs();
    Ok(CenteredAsymmetry {
        functional,
        center,
        beta_squared: None,
        gamma: res.value,
        identity_residual: None,
        converged: res.converged,
    })
}

pub fn minimize_center_star(shape: &StarSurface, functional: Functional) -> Result<CenteredAsymmetry> {
    check_unit_volume(shape.volume(), 3)?;
    let search_grid: Arc<SphereGrid> = SphereGrid::new(24, 48);
    let objective = |y: [f64; 3]| -> f64 {
        match functional {
            Functional::Beta => beta_at_center(shape, y).unwrap_or(f64::INFINITY),
            Functional::Gamma => gamma_star_on(shape, y, &search_grid),
        }
    };
    let b = shape.barycenter();
    let step = 2.0 * SEARCH_HALF_WIDTH / (SEARCH_POINTS - 1) as f64;
    let axis = |i: usize, k: usize| b[k] - SEARCH_HALF_WIDTH + step * i as f64;
    let points: Vec<[f64; 3]> = (0..SEARCH_POINTS.pow(3))
        .map(|idx| {
            let (i, j, l) = (idx / (SEARCH_POINTS * SEARCH_POINTS), (idx / SEARCH_POINTS) % SEARCH_POINTS, idx % SEARCH_POINTS);
            [axis(i, 0), axis(j, 1), axis(l, 2)]
        })
        .chain(std::iter::once(b))
        .collect();
    let values: Vec<f64> = points.iter().map(|&p| objective(p)).collect();
    let start = points[argmin(&values)];
    // Refine on the search grid, then polish on the body's own grid.
    let coarse = nelder_mead(
        |x| objective([x[0], x[1], x[2]]),
        &start,
        0.25 * step,
        10.0 * CENTER_TOL,
        1e-13,
        MAX_SIMPLEX_ITER,
    );
    let fine_objective = |x: &[f64]| -> f64 {
        let y = [x[0], x[1], x[2]];
        match functional {
            Functional::Beta => beta_at_center(shape, y).unwrap_or(f64::INFINITY),
            Functional::Gamma => gamma_at_center_star(shape, y),
        }
    };
    let res = nelder_mead(fine_objective, &coarse.point, 20.0 * CENTER_TOL, CENTER_TOL, 1e-14, MAX_SIMPLEX_ITER);
    let y = [res.point[0], res.point[1], res.point[2]];
    let beta_squared = beta_at_center(shape, y).ok();
    let gamma = gamma_at_center_star(shape, y);
    let identity_residual = beta_squared.map(|b2| (b2 - (shape.perimeter() - unit_sphere_area(3) + gamma)).abs());
    Ok(CenteredAsymmetry {
        functional,
        center: y.to_vec(),
        beta_squared,
        gamma,
        identity_residual,
        converged: coarse.converged && res.converged,
    })
}

fn argmin(values: &[f64]) -> usize {
    (0..values.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap()
}

fn check_unit_volume(volume: f64, n: usize) -> Result<()> {
    let w = crate::shapes::unit_ball_volume(n);
    if (volume / w - 1.0).abs() > 1e-6 {
        return domain(format!("volume {volume} differs from the unit-ball volume {w}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::riesz_potential_at;
    use crate::shapes::{annulus_family, perturbed_ball};
    use std::f64::consts::PI;

    fn ball() -> StarSurface {
        StarSurface::ball(1.0, [0.0; 3], SphereGrid::new(32, 64)).unwrap()
    }

    #[test]
    fn beta_on_the_ball() {
        let b = ball();
        assert!(beta_at_center(&b, [0.0; 3]).unwrap().abs() < 1e-13);
        let off = beta_at_center(&b, [0.3, 0.0, 0.0]).unwrap();
        assert!(off > 0.0);
        let fine = StarSurface::ball(1.0, [0.0; 3], SphereGrid::new(64, 128)).unwrap();
        assert!((beta_at_center(&fine, [0.3, 0.0, 0.0]).unwrap() - off).abs() < 1e-10);
        assert!(beta_at_center(&b, [1.0, 0.0, 0.0]).is_err());
        assert!(beta_at_center(&b, [2.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn beta_is_quadratic_in_the_amplitude() {
        let vals: Vec<f64> = [0.02, 0.04, 0.08]
            .iter()
            .map(|&a| beta_at_center(&perturbed_ball(2, a, 2, 32).unwrap(), [0.0; 3]).unwrap())
            .collect();
        let s1 = (vals[1] / vals[0]).log2();
        let s2 = (vals[2] / vals[1]).log2();
        assert!((s1 - 2.0).abs() < 0.1 && (s2 - 2.0).abs() < 0.1, "{s1} {s2}");
    }

    #[test]
    fn gamma_radial_examples() {
        let b = RadialSet::unit_ball(3).unwrap();
        assert!(gamma_at_center_radial(&b, &[0.0; 3]).unwrap().abs() < 1e-13);
        assert!(gamma_at_center_radial(&b, &[0.2, 0.0, 0.0]).unwrap() > 0.0);
        let e = annulus_family(0.5, 3).unwrap();
        let big_r = e.intervals()[0].1;
        let want = 4.0 * PI * (0.25 - big_r * big_r + 1.0);
        assert!((gamma_at_center_radial(&e, &[0.0; 3]).unwrap() - want).abs() < 1e-12);
        // γ_0 = 2 v(0) in three dimensions, and 2 v(0) = 8π I_2 f_E(0).
        let v0 = riesz_potential_at(&e, 2.0, 0.0).unwrap() * 4.0 * PI;
        assert!((want - 2.0 * v0).abs() < 1e-12);
    }

    #[test]
    fn gamma_is_nonnegative_at_every_center() {
        let e = annulus_family(0.3, 4).unwrap();
        for t in [0.0, 0.3, 0.9, 1.4, 3.0] {
            assert!(gamma_at_center_radial(&e, &[t, 0.0, 0.0, 0.0]).unwrap() >= -1e-9);
        }
        let s = perturbed_ball(3, 0.1, 3, 32).unwrap();
        for y in [[0.0; 3], [0.2, -0.1, 0.3], [1.5, 0.0, 0.0]] {
            assert!(gamma_at_center_star(&s, y) >= -1e-9);
        }
    }

    #[test]
    fn star_gamma_matches_radial_on_the_ball() {
        let b = ball();
        let r = RadialSet::unit_ball(3).unwrap();
        for y in [[0.0; 3], [0.4, 0.0, 0.0], [0.0, -0.7, 0.2]] {
            let s = gamma_at_center_star(&b, y);
            let t = gamma_at_center_radial(&r, &y).unwrap();
            assert!((s - t).abs() < 1e-9, "{y:?}: {s} vs {t}");
        }
        // From outside, the ray moment has a square-root edge at the tangent
        // cone and the sphere rule converges slowly.
        let y = [0.0, 1.3, 0.0];
        let s = gamma_at_center_star(&b, y);
        let t = gamma_at_center_radial(&r, &y).unwrap();
        assert!((s / t - 1.0).abs() < 1e-2, "{s} vs {t}");
    }

    #[test]
    fn divergence_identity_examples() {
        assert!(divergence_identity_residual(&ball(), [0.0; 3]).unwrap() < 1e-10);
        let s = perturbed_ball(2, 0.1, 2, 64).unwrap();
        assert!(divergence_identity_residual(&s, [0.0; 3]).unwrap() < 1e-6);
        let s2 = perturbed_ball(2, 0.1, 2, 128).unwrap();
        assert!(divergence_identity_residual(&s2, [0.0; 3]).unwrap() < 1e-8);
        let s3 = perturbed_ball(3, 0.05, 3, 64).unwrap();
        assert!(divergence_identity_residual(&s3, [0.1, 0.0, 0.0]).unwrap() < 1e-6);
    }

    #[test]
    fn translation_equivariance() {
        let s = perturbed_ball(3, 0.1, 3, 32).unwrap();
        let v = [0.7, -0.2, 0.1];
        let t = s.translated(v);
        let y = [0.05, 0.1, -0.02];
        let ty = std::array::from_fn(|k| y[k] + v[k]);
        assert!((beta_at_center(&s, y).unwrap() - beta_at_center(&t, ty).unwrap()).abs() < 1e-12);
        assert!((gamma_at_center_star(&s, y) - gamma_at_center_star(&t, ty)).abs() < 1e-10);
    }

    #[test]
    fn optimal_centers() {
        let shifted = Shape::Star(ball().translated([1.0, 0.0, 0.0]));
        for f in [Functional::Beta, Functional::Gamma] {
            let c = minimize_center(&shifted, f).unwrap();
            assert!((c.center[0] - 1.0).abs() < 1e-4 && c.center[1].abs() < 1e-4, "{c:?}");
            assert!(c.value().abs() < 1e-8);
        }
        let p = Shape::Star(perturbed_ball(2, 0.1, 2, 32).unwrap());
        let c = minimize_center(&p, Functional::Gamma).unwrap();
        assert!(c.center.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-3, "{c:?}");
        assert!(c.identity_residual.unwrap() < 1e-6);
        let a = Shape::Radial(annulus_family(0.3, 4).unwrap());
        let c = minimize_center(&a, Functional::Gamma).unwrap();
        assert!(c.center[0].abs() < 1e-4 && c.converged, "{c:?}");
        assert!(minimize_center(&a, Functional::Beta).is_err());
    }

    #[test]
    fn csv_row_layout() {
        let c = CenteredAsymmetry {
            functional: Functional::Gamma,
            center: vec![0.5, 0.0, 0.0, 0.0],
            beta_squared: None,
            gamma: 1.25,
            identity_residual: None,
            converged: true,
        };
        let mut buf = Vec::new();
        CenteredAsymmetry::write_csv(&[c], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("cx,cy,cz,beta2,gamma,residual,converged\n"));
        assert!(text.lines().nth(1).unwrap().ends_with(",,1.250000000000e0,,true"));
    }
}
