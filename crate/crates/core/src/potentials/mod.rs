//! Riesz potentials of radial data, the Newton-kernel nonlocal energy and the
//! ½-Laplacian.

mod fractional;
mod kernel;
mod nonlocal;
mod radial;

pub use kernel::{half_laplacian_constant, sigma_constant, sphere_average_kernel, KernelSpec, ALPHA_MARGIN};
pub use radial::{
    ball_riesz_integral, phi_profiles, riesz_ball_average, riesz_of_profile, riesz_of_profile_on,
    riesz_potential_at, riesz_potential_radial, shell_potential, RadialGrid, RadialProfile,
};
pub use nonlocal::{
    ball_newton_potential, deficit_ball_integral, deficit_newton_potential, deficit_quadratic_form,
    newton_ball, newton_pair_energy, nonlocal_energy, nonlocal_energy_boundary,
    nonlocal_energy_boundary_estimate, nonlocal_energy_mc, nonlocal_energy_radial, two_ball_union,
    NonlocalEstimate, NonlocalMethod,
};
pub use fractional::{
    half_laplacian_radial, harmonic_extension_slope, poisson_extension, DEFAULT_CORE, DEFAULT_HEIGHT,
};
