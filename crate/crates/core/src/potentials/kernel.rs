use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quad::{adaptive, Tolerance};
use crate::shapes::{unit_ball_volume, Dimension};

/// Largest admissible Riesz order is `n − ALPHA_MARGIN`.
pub const ALPHA_MARGIN: f64 = 1e-6;

/// Normalization `σ_{n,α}` of the Riesz potential
/// `I_α f(x) = σ_{n,α} ∫ f(y) |x − y|^{α−n} dy`.
pub fn sigma_constant(n: usize, alpha: f64) -> Result<f64> {
    check_order(n, alpha)?;
    let nf = n as f64;
    let inv = PI.powf(nf / 2.0) * 2f64.powf(alpha) * libm::tgamma(alpha / 2.0)
        / libm::tgamma((nf - alpha) / 2.0);
    Ok(1.0 / inv)
}

pub(crate) fn check_order(n: usize, alpha: f64) -> Result<()> {
    Dimension::new(n)?;
    if !(alpha > 0.0 && alpha <= n as f64 - ALPHA_MARGIN) {
        return domain(format!("Riesz order {alpha} outside (0, {n}) in dimension {n}"));
    }
    Ok(())
}

/// Constant in front of the singular integral defining `(−Δ)^{1/2}` in `R^n`,
/// `Γ((n+1)/2) / π^{(n+1)/2}`. The same constant normalizes the half-space
/// Poisson kernel.
pub fn half_laplacian_constant(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    libm::tgamma(h) / PI.powf(h)
}

/// A Riesz kernel `σ_{n,α} |x|^{α−n}` with its normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub n: usize,
    pub alpha: f64,
    pub sigma: f64,
}

impl KernelSpec {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        Ok(Self {
            n,
            alpha,
            sigma: sigma_constant(n, alpha)?,
        })
    }

    /// The Newton kernel `|x|^{2−n}` without normalization.
    pub fn newton(n: usize) -> Result<Self> {
        Dimension::new(n)?;
        Ok(Self {
            n,
            alpha: 2.0,
            sigma: 1.0,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.alpha - self.n as f64
    }

    pub fn eval(&self, dist: f64) -> f64 {
        self.sigma * dist.powf(self.exponent())
    }
}

/// `|S^{n−2}| / |S^{n−1}|`, the density of the polar angle on `S^{n−1}`
/// against `sin^{n−2} θ dθ`.
pub(crate) fn polar_density(n: usize) -> f64 {
    (n - 1) as f64 * unit_ball_volume(n - 1) / (n as f64 * unit_ball_volume(n))
}

/// Average of `g(|x − y|²)` over `y` on the sphere of radius `s` in `R^n`,
/// `|x| = r`. `extra` lists polar angles where `g` is not smooth.
pub(crate) fn sphere_average<G: FnMut(f64) -> f64>(
    n: usize,
    r: f64,
    s: f64,
    mut g: G,
    extra: &[f64],
    tol: Tolerance,
) -> Integral1 {
    if r == 0.0 || s == 0.0 {
        let d = r.max(s);
        return Integral1 {
            value: g(d * d),
            converged: true,
        };
    }
    let c = polar_density(n);
    let k = n as i32 - 2;
    let diff2 = (r - s) * (r - s);
    let rs4 = 4.0 * r * s;
    let mut breaks = vec![0.0, PI];
    // Geometric refinement toward θ = 0 where the two spheres are closest.
    let scale = (r - s).abs() / (r * s).sqrt();
    if scale < 0.5 {
        let mut t = scale.max(1e-12);
        while t < 1.0 {
            breaks.push(t);
            t *= 4.0;
        }
    }
    breaks.extend(extra.iter().copied().filter(|t| *t > 0.0 && *t < PI));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let res = adaptive(
        |theta| {
            let h = (0.5 * theta).sin();
            g(diff2 + rs4 * h * h) * theta.sin().powi(k)
        },
        &breaks,
        tol,
    );
    Integral1 {
        value: c * res.value,
        converged: res.converged,
    }
}

pub(crate) struct Integral1 {
    pub value: f64,
    pub converged: bool,
}

/// Average of `|x − y|^{α−n}` over `y` on the sphere of radius `s`, `|x| = r`.
pub fn sphere_average_kernel(n: usize, alpha: f64, r: f64, s: f64) -> Result<f64> {
    Dimension::new(n)?;
    if !(r >= 0.0 && s >= 0.0) || !r.is_finite() || !s.is_finite() {
        return domain(format!("radii ({r}, {s}) must be finite and non-negative"));
    }
    if !(alpha > 0.0) {
        return domain(format!("kernel order {alpha} must be positive"));
    }
    let p = 0.5 * (alpha - n as f64);
    if r == 0.0 && s == 0.0 {
        if p < 0.0 {
            return domain("kernel singular at r = s = 0");
        }
        return Ok(if p == 0.0 { 1.0 } else { 0.0 });
    }
    if r == s && alpha <= 1.0 {
        return domain(format!("average diverges for r = s and order {alpha} ≤ 1"));
    }
    let res = sphere_average(n, r, s, |d2| d2.powf(p), &[], Tolerance::new(0.0, 1e-12));
    if !res.converged {
        return Err(Error::Numerical(format!(
            "sphere average did not converge at n={n}, α={alpha}, r={r}, s={s}"
        )));
    }
    Ok(res.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let s = sigma_constant(3, 2.0).unwrap();
        assert!((s - 1.0 / (4.0 * PI)).abs() < 1e-15);
        let inv = PI.powf(2.5) * 4.0 / libm::tgamma(1.5);
        assert!((sigma_constant(5, 2.0).unwrap() * inv - 1.0).abs() < 1e-12);
        assert!(sigma_constant(4, 3.9999).unwrap().is_finite());
        assert!(sigma_constant(4, 4.0 - 1e-7).is_err());
        assert!(sigma_constant(4, 0.0).is_err());
        assert!(sigma_constant(4, 5.0).is_err());
    }

    #[test]
    fn newton_normalization_matches_laplacian_fundamental_solution() {
        // σ_{n,2} = 1 / ((n−2) n ω_n).
        for n in 3..=10 {
            let expect = 1.0 / ((n - 2) as f64 * n as f64 * unit_ball_volume(n));
            let rel = sigma_constant(n, 2.0).unwrap() / expect - 1.0;
            assert!(rel.abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn shell_theorem_examples() {
        let a = sphere_average_kernel(3, 2.0, 0.5, 2.0).unwrap();
        let b = sphere_average_kernel(3, 2.0, 2.0, 0.5).unwrap();
        assert!((a - 0.5).abs() < 1e-13 && (b - 0.5).abs() < 1e-13);
        assert_eq!(sphere_average_kernel(5, 2.0, 0.0, 1.0).unwrap(), 1.0);
        for n in 3..=10 {
            for (r, s) in [(0.3, 0.9), (1.7, 1.1), (1.0, 1.0 + 1e-9), (0.999, 1.0)] {
                let got = sphere_average_kernel(n, 2.0, r, s).unwrap();
                let expect = f64::max(r, s).powi(2 - n as i32);
                assert!((got / expect - 1.0).abs() < 1e-10, "n={n} r={r} s={s}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn coincident_radii() {
        // n = 3, α = 2 at r = s: 1/r.
        let v = sphere_average_kernel(3, 2.0, 0.7, 0.7).unwrap();
        assert!((v - 1.0 / 0.7).abs() < 1e-9, "{v}");
        // n = 3 average of |x−y|^{α−3} at r = s = 1 is 2^{α−2}/(α−1).
        let alpha = 1.5;
        let v = sphere_average_kernel(3, alpha, 1.0, 1.0).unwrap();
        let expect = 2f64.powf(alpha - 2.0) / (alpha - 1.0);
        assert!((v / expect - 1.0).abs() < 1e-8, "{v} vs {expect}");
        assert!(sphere_average_kernel(3, 1.0, 1.0, 1.0).is_err());
        assert!(sphere_average_kernel(3, 0.5, 2.0, 2.0).is_err());
        assert!(sphere_average_kernel(3, 1.0, 1.0, 1.1).is_ok());
    }

    #[test]
    fn n3_closed_form_for_general_order() {
        // ⨍ |x−y|^{α−3} = ((r+s)^{α−1} − |r−s|^{α−1}) / (2 r s (α−1)).
        for alpha in [0.5, 1.5, 2.5] {
            for (r, s) in [(0.2, 1.0), (1.3, 0.4), (0.95, 1.0)] {
                let got = sphere_average_kernel(3, alpha, r, s).unwrap();
                let a1 = alpha - 1.0;
                let expect = (f64::powf(r + s, a1) - f64::powf((r - s).abs(), a1)) / (2.0 * r * s * a1);
                assert!((got / expect - 1.0).abs() < 1e-10, "α={alpha} r={r} s={s}");
            }
        }
    }

    #[test]
    fn half_laplacian_constant_values() {
        assert!((half_laplacian_constant(3) - 1.0 / (PI * PI)).abs() < 1e-15);
        assert!((half_laplacian_constant(1) - 1.0 / PI).abs() < 1e-15);
    }
}
