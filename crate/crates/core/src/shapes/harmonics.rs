//! Real orthonormal spherical harmonics on the unit sphere in `R^3`.
//!
//! `Y_{l,0} = Q_l^0`, `Y_{l,m} = √2 Q_l^m cos(mφ)` and
//! `Y_{l,-m} = √2 Q_l^m sin(mφ)` for `m > 0`, where `Q_l^m` is the associated
//! Legendre function scaled to unit `L²` norm over the sphere (no
//! Condon-Shortley phase).

/// Flat index of `(l, m)` with `|m| ≤ l`.
pub fn harmonic_index(l: usize, m: i64) -> usize {
    debug_assert!(m.unsigned_abs() as usize <= l);
    ((l * l + l) as i64 + m) as usize
}

/// Number of harmonics with degree at most `max_degree`.
pub fn harmonic_count(max_degree: usize) -> usize {
    (max_degree + 1) * (max_degree + 1)
}

/// Largest degree supported by [`harmonic_sum`].
pub const MAX_SUM_DEGREE: usize = 16;

/// `Σ c_{l,m} Y_{l,m}(dir)` for coefficients laid out by [`harmonic_index`],
/// without heap allocation. Degree is capped at [`MAX_SUM_DEGREE`].
pub fn harmonic_sum(max_degree: usize, coeffs: &[f64], dir: [f64; 3]) -> f64 {
    assert!(max_degree <= MAX_SUM_DEGREE);
    const S: usize = MAX_SUM_DEGREE + 1;
    let cos_t = dir[2].clamp(-1.0, 1.0);
    let sin_t = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    let rho = sin_t;
    // cos(mφ), sin(mφ) by recurrence from the unit vector.
    let (c1, s1) = if rho > 0.0 { (dir[0] / rho, dir[1] / rho) } else { (1.0, 0.0) };
    let mut cm = [0.0; S];
    let mut sm = [0.0; S];
    cm[0] = 1.0;
    for m in 1..=max_degree {
        cm[m] = cm[m - 1] * c1 - sm[m - 1] * s1;
        sm[m] = sm[m - 1] * c1 + cm[m - 1] * s1;
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut total = 0.0;
    let mut qmm = 0.5 / std::f64::consts::PI.sqrt();
    for m in 0..=max_degree {
        let mf = m as f64;
        if m > 0 {
            qmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t;
        }
        let angular = |l: usize| {
            if m == 0 {
                coeffs[harmonic_index(l, 0)]
            } else {
                sqrt2 * (coeffs[harmonic_index(l, m as i64)] * cm[m] + coeffs[harmonic_index(l, -(m as i64))] * sm[m])
            }
        };
        let mut q_prev = qmm;
        total += q_prev * angular(m);
        if m == max_degree {
            break;
        }
        let mut q = (2.0 * mf + 3.0).sqrt() * cos_t * qmm;
        total += q * angular(m + 1);
        for l in (m + 2)..=max_degree {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            let next = a * (cos_t * q - b * q_prev);
            q_prev = q;
            q = next;
            total += q * angular(l);
        }
    }
    total
}

/// Values and angular derivatives of every real harmonic up to a fixed degree
/// at one direction.
#[derive(Clone, Debug)]
pub struct RealHarmonics {
    pub max_degree: usize,
    pub values: Vec<f64>,
    /// `∂Y/∂θ`, only filled when requested.
    pub d_theta: Vec<f64>,
    /// `∂Y/∂φ`, only filled when requested.
    pub d_phi: Vec<f64>,
}

/// Normalized associated Legendre values `Q_l^m(cos θ)` laid out as
/// `q[l * (L + 1) + m]`.
fn normalized_legendre(max_degree: usize, cos_t: f64, sin_t: f64) -> Vec<f64> {
    let stride = max_degree + 1;
    let mut q = vec![0.0; stride * stride];
    q[0] = 0.5 / std::f64::consts::PI.sqrt();
    for m in 0..=max_degree {
        if m > 0 {
            let mf = m as f64;
            q[m * stride + m] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t * q[(m - 1) * stride + m - 1];
        }
        if m < max_degree {
            q[(m + 1) * stride + m] = (2.0 * m as f64 + 3.0).sqrt() * cos_t * q[m * stride + m];
        }
        for l in (m + 2)..=max_degree {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            q[l * stride + m] = a * (cos_t * q[(l - 1) * stride + m] - b * q[(l - 2) * stride + m]);
        }
    }
    q
}

impl RealHarmonics {
    /// Evaluates at polar angle `θ` (given as `cos θ`, `sin θ ≥ 0`) and
    /// azimuth `φ`. Derivatives need `sin θ > 0`.
    pub fn evaluate(max_degree: usize, cos_t: f64, sin_t: f64, phi: f64, derivatives: bool) -> Self {
        let stride = max_degree + 1;
        let q = normalized_legendre(max_degree, cos_t, sin_t);
        let count = harmonic_count(max_degree);
        let mut values = vec![0.0; count];
        let mut d_theta = if derivatives { vec![0.0; count] } else { Vec::new() };
        let mut d_phi = if derivatives { vec![0.0; count] } else { Vec::new() };
        let sqrt2 = std::f64::consts::SQRT_2;
        for l in 0..=max_degree {
            let lf = l as f64;
            for m in 0..=l {
                let mf = m as f64;
                let qlm = q[l * stride + m];
                // sin θ dQ_l^m/dθ = l cos θ Q_l^m − √((2l+1)(l²−m²)/(2l−1)) Q_{l−1}^m
                let dq = if derivatives {
                    let lower = if l > m {
                        ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt()
                            * q[(l - 1) * stride + m]
                    } else {
                        0.0
                    };
                    (lf * cos_t * qlm - lower) / sin_t
                } else {
                    0.0
                };
                if m == 0 {
                    let i = harmonic_index(l, 0);
                    values[i] = qlm;
                    if derivatives {
                        d_theta[i] = dq;
                    }
                } else {
                    let (s, c) = (mf * phi).sin_cos();
                    let ip = harmonic_index(l, m as i64);
                    let im = harmonic_index(l, -(m as i64));
                    values[ip] = sqrt2 * qlm * c;
                    values[im] = sqrt2 * qlm * s;
                    if derivatives {
                        d_theta[ip] = sqrt2 * dq * c;
                        d_theta[im] = sqrt2 * dq * s;
                        d_phi[ip] = -sqrt2 * qlm * mf * s;
                        d_phi[im] = sqrt2 * qlm * mf * c;
                    }
                }
            }
        }
        Self {
            max_degree,
            values,
            d_theta,
            d_phi,
        }
    }

    /// Evaluates at a unit vector.
    pub fn at_direction(max_degree: usize, dir: [f64; 3], derivatives: bool) -> Self {
        let cos_t = dir[2].clamp(-1.0, 1.0);
        let sin_t = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
        let phi = dir[1].atan2(dir[0]);
        Self::evaluate(max_degree, cos_t, sin_t, phi, derivatives)
    }
}
