use std::f64::consts::PI;

use super::kernel::{half_laplacian_constant, sphere_average};
use super::radial::RadialProfile;
use crate::error::{domain, Error, Result};
use crate::quad::{adaptive, breakpoints, GaussLegendre, Tolerance};
use crate::shapes::{unit_ball_volume, unit_sphere_area};

/// Default radius of the excluded core in [`half_laplacian_radial`].
pub const DEFAULT_CORE: f64 = 1e-3;
/// Default smallest height used by [`harmonic_extension_slope`].
pub const DEFAULT_HEIGHT: f64 = 5e-3;

/// Average of the profile over the sphere of radius `t` centered at a point
/// at distance `r` from the origin.
fn shifted_average(profile: &RadialProfile, r: f64, t: f64) -> f64 {
    let n = profile.n();
    let mut extra = Vec::new();
    if r > 0.0 && t > 0.0 {
        for &rho in profile.grid().breaks() {
            let c = (r * r + t * t - rho * rho) / (2.0 * r * t);
            if c.abs() < 1.0 {
                extra.push(c.acos());
            }
        }
    }
    sphere_average(n, r, t, |d2| profile.eval(d2.sqrt()), &extra, Tolerance::new(1e-15, 1e-10)).value
}

/// Distances from a point at radius `r` where spheres around it cross a
/// breakpoint of the profile.
fn crossing_distances(profile: &RadialProfile, r: f64) -> Vec<f64> {
    profile
        .grid()
        .breaks()
        .iter()
        .flat_map(|&rho| [(r - rho).abs(), r + rho])
        .collect()
}

fn check_decay(profile: &RadialProfile) -> Result<()> {
    if !profile.decays() {
        return domain("profile does not decay toward r_max; the singular integral may diverge");
    }
    Ok(())
}

/// `(−Δ)^{1/2} f` at radius `r` for the radial function `f` given by
/// `profile`, from the singular integral
/// `σ̄_n ∫ (f(x) − f(ξ)) / |x − ξ|^{n+1} dξ`. The ball of radius `delta`
/// around `x` is replaced by its second-order Taylor contribution; the
/// result is compared with the one for `delta/2`.
pub fn half_laplacian_radial(profile: &RadialProfile, r: f64, delta: f64) -> Result<f64> {
    check_decay(profile)?;
    if !(delta > 0.0) {
        return domain(format!("core radius {delta} must be positive"));
    }
    let coarse = half_laplacian_split(profile, r, delta)?;
    let fine = half_laplacian_split(profile, r, 0.5 * delta)?;
    let tol = 1e-4 * profile.eval(r).abs().max(coarse.abs()).max(1e-3);
    if (coarse - fine).abs() > tol {
        return Err(Error::Numerical(format!(
            "½-Laplacian at r = {r} changes by {:.3e} when the core is halved",
            (coarse - fine).abs()
        )));
    }
    Ok(coarse)
}

fn half_laplacian_split(profile: &RadialProfile, r: f64, delta: f64) -> Result<f64> {
    let n = profile.n();
    let fx = profile.eval(r);
    let reach = r + profile.r_max();
    let mut brk = crossing_distances(profile, r);
    brk.extend([2.0 * delta, 4.0 * delta, 16.0 * delta]);
    let breaks = breakpoints(delta, reach, brk);
    let res = adaptive(
        |t| (fx - shifted_average(profile, r, t)) / (t * t),
        &breaks,
        Tolerance::new(1e-12, 1e-9),
    );
    if !res.converged {
        return Err(Error::Numerical(format!("½-Laplacian integral did not converge at r = {r}")));
    }
    let outer = unit_sphere_area(n) * (res.value + fx / reach);
    let h = (0.01f64).max(4.0 * delta);
    let inner = -0.5 * unit_ball_volume(n) * delta * profile.laplacian(r, h);
    Ok(half_laplacian_constant(n) * (outer + inner))
}

/// `−(u(y, z) − f(y)) / z` where `u` is the Poisson extension of `f` to the
/// upper half space.
fn extension_quotient(profile: &RadialProfile, r: f64, z: f64) -> Result<f64> {
    let n = profile.n();
    let ni = n as i32;
    let fx = profile.eval(r);
    let reach = r + profile.r_max();
    let mut brk = crossing_distances(profile, r);
    brk.extend([0.25 * z, z, 4.0 * z, 16.0 * z]);
    let breaks = breakpoints(0.0, reach, brk);
    let p = 0.5 * (n as f64 + 1.0);
    let res = adaptive(
        |t| t.powi(ni - 1) * (t * t + z * z).powf(-p) * (fx - shifted_average(profile, r, t)),
        &breaks,
        Tolerance::new(1e-12, 1e-9),
    );
    if !res.converged {
        return Err(Error::Numerical(format!("Poisson integral did not converge at r = {r}, z = {z}")));
    }
    // Beyond the support only f(y) remains: ∫_T^∞ t^{n−1}(t² + z²)^{−(n+1)/2} dt
    // = (1/z) ∫_{atan(T/z)}^{π/2} sin^{n−1}ψ dψ.
    let gl = GaussLegendre::new(20);
    let tail = gl.integrate((reach / z).atan(), 0.5 * PI, |psi| psi.sin().powi(ni - 1)) / z;
    Ok(half_laplacian_constant(n) * unit_sphere_area(n) * (res.value + fx * tail))
}

/// Poisson extension `u(y, z)` of the radial profile at `|y| = r`, height `z`.
pub fn poisson_extension(profile: &RadialProfile, r: f64, z: f64) -> Result<f64> {
    check_decay(profile)?;
    if !(z > 0.0) {
        return domain(format!("height {z} must be positive"));
    }
    Ok(profile.eval(r) - z * extension_quotient(profile, r, z)?)
}

/// `−∂_z u(y, 0)` for the Poisson extension `u` of the profile, at `|y| = r`.
/// The difference quotient at heights `z` and `z/2` is extrapolated to zero
/// height; the same extrapolation from `2z` and `z` must agree.
pub fn harmonic_extension_slope(profile: &RadialProfile, r: f64, z: f64) -> Result<f64> {
    check_decay(profile)?;
    if !(z > 0.0) {
        return domain(format!("height {z} must be positive"));
    }
    let d: Vec<f64> = [2.0 * z, z, 0.5 * z]
        .iter()
        .map(|&h| extension_quotient(profile, r, h))
        .collect::<Result<_>>()?;
    let fine = 2.0 * d[2] - d[1];
    let coarse = 2.0 * d[1] - d[0];
    let tol = 1e-3 * fine.abs().max(profile.eval(r).abs()).max(1e-3);
    if (fine - coarse).abs() > tol {
        return Err(Error::Numerical(format!(
            "extension slope at r = {r} not converged: {fine} vs {coarse}"
        )));
    }
    Ok(fine)
}
