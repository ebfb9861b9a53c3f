use rand::Rng;

use super::{unit_ball_volume, unit_sphere_area, Dimension, Measured};
use crate::error::{domain, Error, Result};

/// A radially symmetric set in `R^n`: the union of the shells
/// `{a_i ≤ |x| < b_i}` for strictly increasing disjoint intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSet {
    dim: Dimension,
    intervals: Vec<(f64, f64)>,
}

impl RadialSet {
    pub fn new(n: usize, intervals: Vec<(f64, f64)>) -> Result<Self> {
        let dim = Dimension::new(n)?;
        let mut prev_end = None::<f64>;
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Construction(format!("interval {i} has a non-finite radius")));
            }
            if a < 0.0 {
                return Err(Error::Construction(format!("interval {i} starts at negative radius {a}")));
            }
            if a >= b {
                return Err(Error::Construction(format!("interval {i} is empty: ({a}, {b})")));
            }
            if let Some(p) = prev_end {
                if a <= p {
                    return Err(Error::Construction(format!(
                        "interval {i} starts at {a}, not after the previous end {p}"
                    )));
                }
            }
            prev_end = Some(b);
        }
        Ok(Self { dim, intervals })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        Self::new(n, vec![(0.0, radius)])
    }

    pub fn unit_ball(n: usize) -> Result<Self> {
        Self::ball(n, 1.0)
    }

    pub fn n(&self) -> usize {
        self.dim.n()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn outer_radius(&self) -> f64 {
        self.intervals.last().map_or(0.0, |&(_, b)| b)
    }

    pub fn contains_radius(&self, r: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| r >= a && r < b)
    }

    /// Radii where the indicator of the set or of the unit ball jumps,
    /// sorted and without duplicates. Zero is excluded.
    pub fn jump_radii(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .intervals
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(std::iter::once(1.0))
            .filter(|&r| r > 0.0)
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Piecewise-constant radial density `χ_{B_1} − χ_E` as `(a, b, weight)`
    /// pieces. Overlapping pieces add.
    pub fn deficit_density(&self) -> Vec<(f64, f64, f64)> {
        let mut pieces = vec![(0.0, 1.0, 1.0)];
        pieces.extend(self.intervals.iter().map(|&(a, b)| (a, b, -1.0)));
        pieces
    }

    /// Homothety about the origin.
    pub fn homothety(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            intervals: self.intervals.iter().map(|&(a, b)| (a * s, b * s)).collect(),
        }
    }

    /// Draws `k` shells from `rng` and rescales them to the volume of the unit
    /// ball. Endpoints are uniform on `(0, 2)`; with probability ½ the
    /// innermost shell is a ball.
    pub fn random_unit_volume<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 {
            return domain("a random radial set needs at least one interval");
        }
        loop {
            let mut ends: Vec<f64> = (0..2 * k).map(|_| rng.random_range(0.0..2.0)).collect();
            ends.sort_by(f64::total_cmp);
            if rng.random_bool(0.5) {
                ends[0] = 0.0;
            }
            // Reject near-degenerate draws so the shells stay resolvable.
            let gaps_ok = ends.windows(2).all(|w| w[1] - w[0] > 0.02);
            if !gaps_ok {
                continue;
            }
            let intervals = ends.chunks(2).map(|c| (c[0], c[1])).collect();
            let set = Self::new(n, intervals)?;
            return set.rescale_to_unit_volume();
        }
    }
}

impl Measured for RadialSet {
    fn dimension(&self) -> usize {
        self.n()
    }

    fn volume(&self) -> f64 {
        let n = self.n() as i32;
        unit_ball_volume(self.n())
            * self
                .intervals
                .iter()
                .map(|&(a, b)| b.powi(n) - a.powi(n))
                .sum::<f64>()
    }

    fn perimeter(&self) -> f64 {
        let k = self.n() as i32 - 1;
        unit_sphere_area(self.n())
            * self
                .intervals
                .iter()
                .map(|&(a, b)| a.powi(k) + b.powi(k))
                .sum::<f64>()
    }

    fn scaled(&self, s: f64) -> Self {
        self.homothety(s)
    }
}

/// The annulus `B_R \ B_ε` with `R = (1 + εⁿ)^{1/n}`, which has the volume of
/// the unit ball.
pub fn annulus_family(eps: f64, n: usize) -> Result<RadialSet> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("annulus parameter {eps} outside (0, 1)"));
    }
    let outer = (1.0 + eps.powi(n as i32)).powf(1.0 / n as f64);
    RadialSet::new(n, vec![(eps, outer)])
}
