use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checks::{Verifier, EXTENSION_RADII};
use super::record::VerdictRecord;
use crate::error::{domain, Error, Result};
use crate::shapes::{annulus_family, RadialSet};

/// `ε` values of the default annulus scan.
pub const COUNTEREXAMPLE_EPS: [f64; 3] = [0.1, 0.05, 0.025];
/// Random sets per dimension in a suite run.
pub const DEFAULT_BATTERY: usize = 20;

/// A seeded radial test set with its descriptor.
#[derive(Clone, Debug)]
pub struct BatteryItem {
    pub label: String,
    pub set: RadialSet,
}

/// `count` random unit-volume radial sets in dimension `n` with 2 to 4
/// shells. Draw `i` uses stream `i` of the generator seeded with `seed`.
pub fn random_battery(n: usize, count: usize, seed: u64) -> Result<Vec<BatteryItem>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let shells = 2 + i % 3;
            Ok(BatteryItem {
                label: format!("seed={seed} draw={i}"),
                set: RadialSet::random_unit_volume(n, shells, &mut rng)?,
            })
        })
        .collect()
}

/// Fixed sets: the unit ball and members of the annulus family.
fn fixed_sets(n: usize) -> Result<Vec<BatteryItem>> {
    let mut out = vec![BatteryItem { label: "ball".into(), set: RadialSet::unit_ball(n)? }];
    for eps in [0.3, 0.5] {
        out.push(BatteryItem { label: format!("annulus eps={eps}"), set: annulus_family(eps, n)? });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    N3,
    Odd,
    Even,
    Lemma,
    Counterexample,
    Riesz,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["n3", "odd", "even", "lemma", "counterexample", "riesz", "all"];

    /// Dimensions used when none is given.
    pub fn default_dimensions(self) -> Vec<usize> {
        match self {
            Self::N3 => vec![3],
            Self::Odd | Self::Lemma => vec![5, 7],
            Self::Even => vec![4, 6],
            Self::Counterexample => vec![3, 4, 6],
            Self::Riesz => vec![4, 5, 6],
            Self::All => vec![],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n3" => Self::N3,
            "odd" => Self::Odd,
            "even" => Self::Even,
            "lemma" => Self::Lemma,
            "counterexample" => Self::Counterexample,
            "riesz" => Self::Riesz,
            "all" => Self::All,
            _ => return Err(Error::Config(format!("unknown suite '{s}', expected one of {:?}", Self::NAMES))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Self::N3, Self::Odd, Self::Even, Self::Lemma, Self::Counterexample, Self::Riesz, Self::All]
            .iter()
            .position(|s| s == self)
            .unwrap();
        f.write_str(Self::NAMES[i])
    }
}

/// Inputs of a suite run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Restricts the run to one dimension; `None` uses the suite defaults.
    pub n: Option<usize>,
    pub seed: u64,
    /// Random sets per dimension.
    pub count: usize,
    pub verifier: Verifier,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { n: None, seed: 0, count: DEFAULT_BATTERY, verifier: Verifier::default() }
    }
}

fn labelled(mut records: Vec<VerdictRecord>, label: &str) -> Vec<VerdictRecord> {
    for r in &mut records {
        r.input = format!("{label} {}", r.input);
    }
    records
}

/// Applies `check` to every set, in parallel, keeping the input order.
fn over_sets<F>(items: &[BatteryItem], check: F) -> Result<Vec<VerdictRecord>>
where
    F: Fn(&RadialSet) -> Result<Vec<VerdictRecord>> + Sync,
{
    let per: Vec<Vec<VerdictRecord>> =
        items.par_iter().map(|it| check(&it.set).map(|r| labelled(r, &it.label))).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn sets(n: usize, cfg: &SuiteConfig) -> Result<Vec<BatteryItem>> {
    let mut items = fixed_sets(n)?;
    items.extend(random_battery(n, cfg.count, cfg.seed)?);
    Ok(items)
}

/// Runs a suite and returns its records in a fixed order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerdictRecord>> {
    if suite == Suite::All {
        let mut all = Vec::new();
        let each = SuiteConfig { n: None, ..cfg.clone() };
        for s in [Suite::N3, Suite::Lemma, Suite::Odd, Suite::Even, Suite::Counterexample, Suite::Riesz] {
            all.extend(run_suite(s, &each)?);
        }
        return Ok(all);
    }
    let dims = cfg.n.map_or_else(|| suite.default_dimensions(), |n| vec![n]);
    let v = &cfg.verifier;
    let mut out = Vec::new();
    for n in dims {
        match suite {
            Suite::N3 => {
                if n != 3 {
                    return domain(format!("suite n3 runs in dimension 3, got {n}"));
                }
                out.extend(over_sets(&sets(3, cfg)?, |s| {
                    Ok(vec![
                        v.quadratic_positivity(s)?,
                        v.nl_upper_bound(s)?,
                        v.mean_value_n3(s)?,
                        v.main_route_n3(s)?,
                        v.phi2_monotone(s)?,
                    ])
                })?);
            }
            Suite::Lemma => {
                if n < 5 {
                    return domain(format!("suite lemma needs n ≥ 5, got {n}"));
                }
                let orders: Vec<f64> = (1..).map(|k| 2.0 * k as f64).take_while(|&a| a <= n as f64 - 3.0).collect();
                out.extend(over_sets(&sets(n, cfg)?, |s| {
                    let mut recs = vec![v.phi2_monotone(s)?];
                    for &a in &orders {
                        recs.extend(v.lemma(s, a)?);
                    }
                    Ok(recs)
                })?);
            }
            Suite::Odd => {
                out.extend(over_sets(&sets(n, cfg)?, |s| Ok(vec![v.odd_chain(s)?]))?);
            }
            Suite::Even => {
                let annulus = annulus_family(0.3, n)?;
                out.extend(labelled(v.even_chain(&annulus, &EXTENSION_RADII)?, "annulus eps=0.3"));
                out.extend(over_sets(&sets(n, cfg)?, |s| v.even_chain(s, &[]))?);
            }
            Suite::Counterexample => out.extend(v.counterexample_scan(n, &COUNTEREXAMPLE_EPS)?),
            Suite::Riesz => {
                let annulus = annulus_family(0.4, n)?;
                out.extend(labelled(v.laplace_and_semigroup(&annulus, 1.0, 2.0)?, "annulus eps=0.4"));
            }
            Suite::All => unreachable!(),
        }
    }
    Ok(out)
}
