use std::io::Write;

use rayon::prelude::*;

use super::{sphere_grid, two_ball_threshold};
use crate::error::{Error, Result};
use crate::potentials::{nonlocal_energy_boundary, nonlocal_energy_mc, NonlocalMethod};
use crate::shapes::{perturbed_ball, Measured, StarSurface};

/// Parameters of [`mode_stability_sweep`].
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Highest mode `L`; modes `2..=L` are swept.
    pub max_mode: usize,
    pub lambdas: Vec<f64>,
    /// Amplitude `h` of the symmetric stencil.
    pub amplitude: f64,
    /// Polar resolution of the sphere grid.
    pub grid_res: usize,
    /// Nonlocal evaluation. For the boundary rule only the grid resolution
    /// `grid_res` matters; the noise estimate repeats the stencil on a grid
    /// 1.5 times finer.
    pub method: NonlocalMethod,
}

impl SweepConfig {
    pub const DEFAULT_MAX_MODE: usize = 4;
    pub const DEFAULT_AMPLITUDE: f64 = 0.02;
    pub const DEFAULT_GRID_RES: usize = 32;

    /// `count` evenly spaced couplings on `[lo, hi]`.
    pub fn lambda_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        if count < 2 {
            return vec![lo];
        }
        (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            max_mode: Self::DEFAULT_MAX_MODE,
            lambdas: Self::lambda_grid(0.0, 0.6, 21),
            amplitude: Self::DEFAULT_AMPLITUDE,
            grid_res: Self::DEFAULT_GRID_RES,
            method: NonlocalMethod::boundary_default(),
        }
    }
}

/// Second differences of one mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeStability {
    pub l: usize,
    /// `[P(+h) − 2P(0) + P(−h)] / h²`.
    pub d2_perimeter: f64,
    /// Same for the nonlocal term.
    pub d2_nonlocal: f64,
    /// Error estimate of `d2_nonlocal`.
    pub noise: f64,
    /// `d2_perimeter + λ d2_nonlocal` on the coupling grid.
    pub d2: Vec<f64>,
    /// Cells where `λ · noise > |D²| / 3`.
    pub inconclusive: Vec<bool>,
    /// Adjacent grid couplings between which `D²` changes sign.
    pub bracket: Option<(f64, f64)>,
}

impl ModeStability {
    /// The zero of the affine `D²(λ)` when it lies inside the bracket.
    pub fn crossing(&self) -> Option<f64> {
        let (lo, hi) = self.bracket?;
        let z = -self.d2_perimeter / self.d2_nonlocal;
        (lo..=hi).contains(&z).then_some(z)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub lambdas: Vec<f64>,
    pub amplitude: f64,
    pub modes: Vec<ModeStability>,
    /// `λ*` of the two-ball competitor.
    pub two_ball_lambda: f64,
}

impl StabilityReport {
    pub const CSV_HEADER: [&'static str; 8] =
        ["record", "l", "lambda", "d2", "noise", "inconclusive", "bracket_lo", "bracket_hi"];

    /// One `cell` row per `(l, λ)`, one `mode` row per mode with its sign
    /// change bracket (empty when `D²` keeps its sign), and a final
    /// `two_ball_threshold` row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        let e = |x: f64| format!("{x:e}");
        for m in &self.modes {
            for (i, &lam) in self.lambdas.iter().enumerate() {
                w.write_record([
                    "cell".into(),
                    m.l.to_string(),
                    e(lam),
                    e(m.d2[i]),
                    e(lam * m.noise),
                    m.inconclusive[i].to_string(),
                    String::new(),
                    String::new(),
                ])?;
            }
        }
        for m in &self.modes {
            let (lo, hi) = m.bracket.map_or((String::new(), String::new()), |(a, b)| (e(a), e(b)));
            let crossing = m.crossing().map_or(String::new(), e);
            w.write_record([
                "mode".into(),
                m.l.to_string(),
                crossing,
                String::new(),
                e(m.noise),
                m.inconclusive.iter().any(|&b| b).to_string(),
                lo,
                hi,
            ])?;
        }
        w.write_record([
            "two_ball_threshold".into(),
            String::new(),
            e(self.two_ball_lambda),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ])?;
        w.flush()?;
        Ok(())
    }

    /// One line per mode plus the threshold, for terminal output.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for m in &self.modes {
            let at_first = m.d2.first().copied().unwrap_or(f64::NAN);
            match m.bracket {
                Some((lo, hi)) => s += &format!("mode {}: D² changes sign in [{lo}, {hi}]", m.l),
                None => s += &format!("mode {}: no sign change on the grid (D² = {at_first:.4} at first λ)", m.l),
            }
            if m.inconclusive.iter().any(|&b| b) {
                s += ", some cells inconclusive";
            }
            s.push('\n');
        }
        s += &format!("two-ball threshold λ* = {:.6}\n", self.two_ball_lambda);
        s
    }
}

/// Perimeter and nonlocal term of `perturbed_ball(l, a)`.
fn mode_terms(l: usize, a: f64, cfg: &SweepConfig, grid_res: usize) -> Result<(f64, f64)> {
    let shape: StarSurface = perturbed_ball(l, a, cfg.max_mode, grid_res)?;
    let nl = match &cfg.method {
        NonlocalMethod::Boundary { .. } => nonlocal_energy_boundary(&[&shape]),
        NonlocalMethod::MonteCarlo { samples, seed } => nonlocal_energy_mc(&[&shape], *samples, *seed)?.value,
    };
    Ok((shape.perimeter(), nl))
}

fn second_difference(l: usize, cfg: &SweepConfig, grid_res: usize) -> Result<(f64, f64)> {
    let h = cfg.amplitude;
    let plus = mode_terms(l, h, cfg, grid_res)?;
    let zero = mode_terms(l, 0.0, cfg, grid_res)?;
    let minus = mode_terms(l, -h, cfg, grid_res)?;
    let d = |p: f64, z: f64, m: f64| (p - 2.0 * z + m) / (h * h);
    Ok((d(plus.0, zero.0, minus.0), d(plus.1, zero.1, minus.1)))
}

/// Second differences of the energy at the ball along each axisymmetric
/// mode `l = 2..=L`, on a coupling grid. `D²(λ)` is affine in `λ`, so the
/// perimeter and nonlocal parts are computed once per mode. Monte Carlo
/// evaluations reuse one seed for the whole stencil.
pub fn mode_stability_sweep(cfg: &SweepConfig) -> Result<StabilityReport> {
    let capacity = (cfg.grid_res / 2).saturating_sub(1).min(crate::shapes::MAX_SUM_DEGREE);
    if cfg.max_mode < 2 || cfg.max_mode > capacity {
        return Err(Error::Config(format!(
            "highest mode {} outside [2, {capacity}] for grid resolution {}",
            cfg.max_mode, cfg.grid_res
        )));
    }
    if !(cfg.amplitude > 0.0 && cfg.amplitude < 0.5) {
        return Err(Error::Config(format!("amplitude {} outside (0, 0.5)", cfg.amplitude)));
    }
    if cfg.lambdas.is_empty() || cfg.lambdas.iter().any(|l| !(*l >= 0.0)) || cfg.lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("coupling grid must be non-negative and increasing".into()));
    }
    sphere_grid(cfg.grid_res)?;
    let fine_res = 2 * ((3 * cfg.grid_res) / 4);
    let modes = (2..=cfg.max_mode)
        .into_par_iter()
        .map(|l| {
            let (dp, dn) = second_difference(l, cfg, cfg.grid_res)?;
            let noise = match &cfg.method {
                NonlocalMethod::Boundary { .. } => (second_difference(l, cfg, fine_res)?.1 - dn).abs(),
                NonlocalMethod::MonteCarlo { samples, .. } => {
                    // Without correlation between the three evaluations.
                    let per = 2.0 * dn.abs().max(1.0) / (*samples as f64).sqrt();
                    6f64.sqrt() * per / (cfg.amplitude * cfg.amplitude)
                }
            };
            let d2: Vec<f64> = cfg.lambdas.iter().map(|&lam| dp + lam * dn).collect();
            let inconclusive = cfg.lambdas.iter().zip(&d2).map(|(&lam, d)| lam * noise > d.abs() / 3.0).collect();
            let bracket = cfg
                .lambdas
                .windows(2)
                .zip(d2.windows(2))
                .find(|(_, d)| d[0].signum() != d[1].signum())
                .map(|(lam, _)| (lam[0], lam[1]));
            Ok(ModeStability { l, d2_perimeter: dp, d2_nonlocal: dn, noise, d2, inconclusive, bracket })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport {
        lambdas: cfg.lambdas.clone(),
        amplitude: cfg.amplitude,
        modes,
        two_ball_lambda: two_ball_threshold(3)?,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn small() -> SweepConfig {
        SweepConfig { max_mode: 3, grid_res: 16, ..SweepConfig::default() }
    }

    #[test]
    fn ball_is_stable_at_small_coupling() {
        let rep = mode_stability_sweep(&small()).unwrap();
        assert_eq!(rep.modes.len(), 2);
        for m in &rep.modes {
            assert!(m.d2[0] > 0.0 && m.d2_perimeter > 0.0 && m.d2_nonlocal < 0.0);
            assert!(m.bracket.is_none());
            assert!(m.d2.windows(2).all(|w| w[1] < w[0]));
        }
        let i = rep.lambdas.iter().position(|&l| (l - 0.06).abs() < 1e-12).unwrap();
        assert!(rep.modes[0].d2[i] > 0.0);
        assert!((rep.two_ball_lambda - 0.419).abs() < 1e-3);
    }

    #[test]
    fn sign_change_of_the_classical_fission_mode() {
        // The ball loses stability along mode l at λ = 3(l+2)(2l+1)/(16π).
        let cfg = SweepConfig { lambdas: SweepConfig::lambda_grid(0.0, 5.0, 51), ..small() };
        let rep = mode_stability_sweep(&cfg).unwrap();
        for m in &rep.modes {
            let want = 3.0 * (m.l as f64 + 2.0) * (2.0 * m.l as f64 + 1.0) / (16.0 * PI);
            let (lo, hi) = m.bracket.unwrap();
            assert!(lo - 0.1 <= want && want <= hi + 0.1, "l={} [{lo}, {hi}] vs {want}", m.l);
            assert!((m.crossing().unwrap() / want - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn config_conflicts_are_rejected() {
        assert!(matches!(mode_stability_sweep(&SweepConfig { max_mode: 8, ..small() }), Err(Error::Config(_))));
        assert!(mode_stability_sweep(&SweepConfig { max_mode: 1, ..small() }).is_err());
        assert!(mode_stability_sweep(&SweepConfig { lambdas: vec![0.2, 0.1], ..small() }).is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = SweepConfig { lambdas: vec![0.0, 0.05], max_mode: 2, ..small() };
        let rep = mode_stability_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 2 + 1 + 1);
        assert!(lines[1].starts_with("cell,2,0e0,"));
        assert!(lines[4].starts_with("two_ball_threshold,,4.19"));
        assert!(rep.summary().contains("mode 2: no sign change"));
    }
}
