use std::sync::{Arc, OnceLock};

use super::harmonics::{harmonic_count, RealHarmonics, MAX_SUM_DEGREE};
use crate::quad::GaussLegendre;

/// Tensor quadrature on the unit sphere: Gauss-Legendre in `cos θ` times the
/// uniform rule in azimuth. Exact for spherical harmonics of degree below
/// `min(2 n_polar, n_azimuth)`.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    n_polar: usize,
    n_azimuth: usize,
    dirs: Vec<[f64; 3]>,
    angles: Vec<(f64, f64, f64)>,
    weights: Vec<f64>,
    tables: Vec<OnceLock<Arc<HarmonicTable>>>,
}

/// Real harmonics and their angular derivatives tabulated at every grid node,
/// node-major with `harmonic_count(max_degree)` entries per node.
#[derive(Debug)]
pub struct HarmonicTable {
    pub count: usize,
    pub values: Vec<f64>,
    pub d_theta: Vec<f64>,
    pub d_phi: Vec<f64>,
}

impl SphereGrid {
    pub const DEFAULT_POLAR: usize = 64;
    pub const DEFAULT_AZIMUTH: usize = 128;

    pub fn new(n_polar: usize, n_azimuth: usize) -> Arc<Self> {
        assert!(n_polar > 0 && n_azimuth > 0);
        let gl = GaussLegendre::new(n_polar);
        let dphi = 2.0 * std::f64::consts::PI / n_azimuth as f64;
        let mut dirs = Vec::with_capacity(n_polar * n_azimuth);
        let mut angles = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for (ct, w) in gl.nodes.iter().zip(&gl.weights) {
            let st = (1.0 - ct * ct).sqrt();
            for j in 0..n_azimuth {
                let phi = dphi * j as f64;
                dirs.push([st * phi.cos(), st * phi.sin(), *ct]);
                angles.push((*ct, st, phi));
                weights.push(w * dphi);
            }
        }
        Arc::new(Self {
            n_polar,
            n_azimuth,
            dirs,
            angles,
            weights,
            tables: (0..=MAX_SUM_DEGREE).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Cached harmonic table up to `max_degree`.
    pub fn harmonic_table(&self, max_degree: usize) -> Arc<HarmonicTable> {
        self.tables[max_degree]
            .get_or_init(|| {
                let count = harmonic_count(max_degree);
                let mut values = Vec::with_capacity(count * self.len());
                let mut d_theta = Vec::with_capacity(count * self.len());
                let mut d_phi = Vec::with_capacity(count * self.len());
                for &(ct, st, phi) in &self.angles {
                    let h = RealHarmonics::evaluate(max_degree, ct, st, phi, true);
                    values.extend_from_slice(&h.values);
                    d_theta.extend_from_slice(&h.d_theta);
                    d_phi.extend_from_slice(&h.d_phi);
                }
                Arc::new(HarmonicTable {
                    count,
                    values,
                    d_theta,
                    d_phi,
                })
            })
            .clone()
    }

    pub fn default_grid() -> Arc<Self> {
        Self::new(Self::DEFAULT_POLAR, Self::DEFAULT_AZIMUTH)
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn directions(&self) -> &[[f64; 3]] {
        &self.dirs
    }

    /// `(cos θ, sin θ, φ)` per node.
    pub fn angles(&self) -> &[(f64, f64, f64)] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut([f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.dirs.iter().zip(&self.weights).map(|(d, w)| w * f(*d)).sum()
    }

    /// Gram matrix of the real harmonics up to `max_degree` under this rule,
    /// row-major.
    pub fn harmonic_gram(&self, max_degree: usize) -> Vec<f64> {
        let k = harmonic_count(max_degree);
        let mut gram = vec![0.0; k * k];
        for (&(ct, st, phi), &w) in self.angles.iter().zip(&self.weights) {
            let y = RealHarmonics::evaluate(max_degree, ct, st, phi, false).values;
            for i in 0..k {
                for j in 0..k {
                    gram[i * k + j] += w * y[i] * y[j];
                }
            }
        }
        gram
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sphere_area() {
        for (p, a) in [(8, 16), (64, 128), (17, 40)] {
            let g = SphereGrid::new(p, a);
            let total: f64 = g.weights().iter().sum();
            assert!((total / (4.0 * std::f64::consts::PI) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonics_are_orthonormal_on_default_grid() {
        let g = SphereGrid::default_grid();
        let lmax = 8;
        let k = harmonic_count(lmax);
        let gram = g.harmonic_gram(lmax);
        for i in 0..k {
            for j in 0..k {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * k + j] - expect).abs() < 1e-8, "({i},{j}) = {}", gram[i * k + j]);
            }
        }
    }
}
