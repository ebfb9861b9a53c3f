//! Batch front end: `liquiddrop <energy|verify|sweep|descent|asym>`.
//!
//! Every option can come from a flag, from a flat `key = value` file passed
//! with `--config`, or from its default, in that order of precedence. The
//! seed may also be set through `LIQUIDDROP_SEED`, which ranks below the flag
//! and above the file. Tabular output is CSV, written to `--out` or stdout;
//! human-readable summaries go to stderr.
//!
//! Exit codes: 0 success, 1 failed checks or a numerical failure, 2 usage,
//! config or parse errors.
//!
//! | key | default | used by |
//! |---|---|---|
//! | `seed` | 0 | verify, Monte Carlo evaluations |
//! | `grid` | shape file grid, else 32 | energy, sweep, descent, asym |
//! | `samples` | none (boundary rule) | energy, sweep |
//! | `out` | stdout | all |
//! | `threads` | all cores | all |
//! | `tol` | 1e-6 | verify (identity tolerance), descent (gradient norm) |
//! | `lambda` | 1 | energy, descent |
//! | `n` | suite defaults | verify |
//! | `suite` | `all` | verify |
//! | `count` | 20 | verify |
//! | `max-mode` | 4 | sweep |
//! | `lambda-min`, `lambda-max`, `lambda-count` | 0, 0.6, 21 | sweep |
//! | `amplitude` | 0.02 | sweep |
//! | `shape` | none | energy, asym (required), descent (optional) |
//! | `mode`, `perturbation`, `max-degree` | 2, 0.1, 4 | descent start |
//! | `steps`, `step-size` | 500, 0.05 | descent |
//! | `functional` | `both` | asym |

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::asymmetry::{minimize_center, CenteredAsymmetry, Functional};
use crate::energy_opt::{
    gradient_descent_shape, mode_stability_sweep, sphere_grid, total_energy, DescentOptions, SweepConfig,
};
use crate::error::{Error, Result};
use crate::potentials::NonlocalMethod;
use crate::shapes::{perturbed_ball, read_shape, Shape};
use crate::verify::{run_suite, write_records, Suite, SuiteConfig, Summary, Verifier, DEFAULT_BATTERY};

pub const SEED_ENV: &str = "LIQUIDDROP_SEED";

#[derive(Parser, Debug)]
#[command(name = "liquiddrop", version, about = "Liquid drop energy, asymmetries and verification checks")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Seed of every random draw.
    #[arg(long, global = true, env = SEED_ENV)]
    seed: Option<u64>,
    /// Polar resolution of sphere grids.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Monte Carlo samples; switches star-shaped nonlocal terms to Monte Carlo.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// CSV destination instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Flat `key = value` file with defaults for any option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy breakdown of a shape file.
    Energy {
        shape: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run a verification suite and emit one record per check.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Random sets per dimension.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Second-difference stability sweep of the ball along each mode.
    Sweep {
        #[arg(long)]
        max_mode: Option<usize>,
        #[arg(long)]
        lambda_min: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        lambda_count: Option<usize>,
        #[arg(long)]
        amplitude: Option<f64>,
    },
    /// Gradient descent of the energy over star-shaped coefficients.
    Descent {
        /// Start shape; a perturbed ball when omitted.
        #[arg(long)]
        shape: Option<PathBuf>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        mode: Option<usize>,
        #[arg(long)]
        perturbation: Option<f64>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        step_size: Option<f64>,
    },
    /// Center-optimized asymmetries of a shape file.
    Asym {
        shape: Option<PathBuf>,
        /// `beta`, `gamma` or `both`.
        #[arg(long)]
        functional: Option<String>,
    },
}

/// Which asymmetries `asym` minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionalChoice {
    Beta,
    Gamma,
    Both,
}

impl FromStr for FunctionalChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(Self::Beta),
            "gamma" => Ok(Self::Gamma),
            "both" => Ok(Self::Both),
            _ => Err(Error::Config(format!("field `functional`: expected beta, gamma or both, got {s:?}"))),
        }
    }
}

/// Resolved options of a run. See the module table for defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub grid: Option<usize>,
    pub samples: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub tol: f64,
    pub lambda: f64,
    pub n: Option<usize>,
    pub suite: Suite,
    pub count: usize,
    pub max_mode: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_count: usize,
    pub amplitude: f64,
    pub shape: Option<PathBuf>,
    pub mode: usize,
    pub perturbation: f64,
    pub max_degree: usize,
    pub steps: usize,
    pub step_size: f64,
    pub functional: FunctionalChoice,
}

impl Default for RunConfig {
    fn default() -> Self {
        let descent = DescentOptions::default();
        Self {
            seed: 0,
            grid: None,
            samples: None,
            out: None,
            threads: None,
            tol: 1e-6,
            lambda: 1.0,
            n: None,
            suite: Suite::All,
            count: DEFAULT_BATTERY,
            max_mode: SweepConfig::DEFAULT_MAX_MODE,
            lambda_min: 0.0,
            lambda_max: 0.6,
            lambda_count: 21,
            amplitude: SweepConfig::DEFAULT_AMPLITUDE,
            shape: None,
            mode: 2,
            perturbation: 0.1,
            max_degree: 4,
            steps: descent.steps,
            step_size: descent.step_size,
            functional: FunctionalChoice::Both,
        }
    }
}

fn parse_field<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Config(format!("field `{key}`: cannot parse {value:?}: {e}")))
}

impl RunConfig {
    pub const KEYS: [&'static str; 22] = [
        "seed",
        "grid",
        "samples",
        "out",
        "threads",
        "tol",
        "lambda",
        "n",
        "suite",
        "count",
        "max-mode",
        "lambda-min",
        "lambda-max",
        "lambda-count",
        "amplitude",
        "shape",
        "mode",
        "perturbation",
        "max-degree",
        "steps",
        "step-size",
        "functional",
    ];

    /// Sets one field from its textual value. Keys may use `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('_', "-");
        let k = key.as_str();
        match k {
            "seed" => self.seed = parse_field(k, value)?,
            "grid" => self.grid = Some(parse_field(k, value)?),
            "samples" => self.samples = Some(parse_field(k, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(parse_field(k, value)?),
            "tol" => self.tol = parse_field(k, value)?,
            "lambda" => self.lambda = parse_field(k, value)?,
            "n" => self.n = Some(parse_field(k, value)?),
            "suite" => self.suite = value.parse()?,
            "count" => self.count = parse_field(k, value)?,
            "max-mode" => self.max_mode = parse_field(k, value)?,
            "lambda-min" => self.lambda_min = parse_field(k, value)?,
            "lambda-max" => self.lambda_max = parse_field(k, value)?,
            "lambda-count" => self.lambda_count = parse_field(k, value)?,
            "amplitude" => self.amplitude = parse_field(k, value)?,
            "shape" => self.shape = Some(PathBuf::from(value)),
            "mode" => self.mode = parse_field(k, value)?,
            "perturbation" => self.perturbation = parse_field(k, value)?,
            "max-degree" => self.max_degree = parse_field(k, value)?,
            "steps" => self.steps = parse_field(k, value)?,
            "step-size" => self.step_size = parse_field(k, value)?,
            "functional" => self.functional = value.parse()?,
            _ => return Err(Error::Config(format!("unknown key `{key}`, expected one of {:?}", Self::KEYS))),
        }
        Ok(())
    }

    /// Applies a `key = value` file. Blank lines and `#` comments are ignored.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("config line {}: expected `key = value`", i + 1)))?;
            self.set(k.trim(), v.trim().trim_matches('"'))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("field `config`: cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_file_text(&text)?;
        Ok(cfg)
    }

    fn verifier(&self) -> Verifier {
        Verifier { identity_tol: self.tol, ..Verifier::default() }
    }

    fn method(&self) -> Result<Option<NonlocalMethod>> {
        Ok(match (self.samples, self.grid) {
            (Some(samples), _) => Some(NonlocalMethod::MonteCarlo { samples, seed: self.seed }),
            (None, Some(g)) => Some(NonlocalMethod::Boundary { grid: sphere_grid(g)? }),
            (None, None) => None,
        })
    }

    fn require_shape(&self) -> Result<Shape> {
        let path = self.shape.as_ref().ok_or_else(|| Error::Config("field `shape`: a shape file is required".into()))?;
        read_shape(path)
    }
}

fn merge(cli: Cli) -> Result<(RunConfig, Cmd)> {
    let c = cli.common;
    let mut cfg = match &c.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    macro_rules! over {
        ($($field:ident <- $src:expr),* $(,)?) => {
            $(if let Some(v) = $src { cfg.$field = v; })*
        };
    }
    over!(seed <- c.seed, tol <- c.tol);
    if c.grid.is_some() {
        cfg.grid = c.grid;
    }
    if c.samples.is_some() {
        cfg.samples = c.samples;
    }
    if c.out.is_some() {
        cfg.out = c.out;
    }
    if c.threads.is_some() {
        cfg.threads = c.threads;
    }
    let cmd = match cli.command {
        Command::Energy { shape, lambda } => {
            if shape.is_some() {
                cfg.shape = shape;
            }
            over!(lambda <- lambda);
            Cmd::Energy
        }
        Command::Verify { suite, n, count } => {
            if let Some(s) = suite {
                cfg.suite = s.parse()?;
            }
            if n.is_some() {
                cfg.n = n;
            }
            over!(count <- count);
            Cmd::Verify
        }
        Command::Sweep { max_mode, lambda_min, lambda_max, lambda_count, amplitude } => {
            over!(max_mode <- max_mode, lambda_min <- lambda_min, lambda_max <- lambda_max,
                  lambda_count <- lambda_count, amplitude <- amplitude);
            Cmd::Sweep
        }
        Command::Descent { shape, lambda, mode, perturbation, max_degree, steps, step_size } => {
            if shape.is_some() {
                cfg.shape = shape;
            }
            over!(lambda <- lambda, mode <- mode, perturbation <- perturbation, max_degree <- max_degree,
                  steps <- steps, step_size <- step_size);
            Cmd::Descent
        }
        Command::Asym { shape, functional } => {
            if shape.is_some() {
                cfg.shape = shape;
            }
            if let Some(f) = functional {
                cfg.functional = f.parse()?;
            }
            Cmd::Asym
        }
    };
    Ok((cfg, cmd))
}

/// A subcommand after option resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmd {
    Energy,
    Verify,
    Sweep,
    Descent,
    Asym,
}

/// Writes CSV to the configured file or to `stdout`.
fn with_sink(cfg: &RunConfig, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::Config(format!("field `out`: cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

pub fn cmd_energy(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut shape = cfg.require_shape()?;
    let method = match cfg.method()? {
        Some(m) => m,
        None => match &shape {
            Shape::Star(s) => NonlocalMethod::Boundary { grid: s.grid().clone() },
            Shape::Radial(_) => NonlocalMethod::boundary_default(),
        },
    };
    if let (Shape::Star(s), NonlocalMethod::Boundary { grid }) = (&shape, &method) {
        shape = Shape::Star(s.with_grid(grid.clone())?);
    }
    let e = total_energy(&shape, cfg.lambda, &method)?;
    writeln!(
        stderr,
        "perimeter = {:.10}  nonlocal = {:.10}  lambda = {}  total = {:.10}  (± {:.2e})",
        e.perimeter, e.nonlocal, e.lambda, e.total, e.error_estimate
    )?;
    with_sink(cfg, stdout, |w| e.write_csv(w))?;
    Ok(0)
}

pub fn cmd_verify(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let suite_cfg = SuiteConfig { n: cfg.n, seed: cfg.seed, count: cfg.count, verifier: cfg.verifier() };
    let records = run_suite(cfg.suite, &suite_cfg)?;
    with_sink(cfg, stdout, |w| write_records(&records, w))?;
    let summary = Summary::of(&records);
    writeln!(stderr, "suite {}: {summary}", cfg.suite)?;
    Ok(if summary.all_passed() { 0 } else { 1 })
}

pub fn cmd_sweep(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let grid_res = cfg.grid.unwrap_or(SweepConfig::DEFAULT_GRID_RES);
    let method = match cfg.samples {
        Some(samples) => NonlocalMethod::MonteCarlo { samples, seed: cfg.seed },
        None => NonlocalMethod::Boundary { grid: sphere_grid(grid_res)? },
    };
    if cfg.lambda_count == 0 || !(cfg.lambda_max > cfg.lambda_min || cfg.lambda_count == 1) {
        return Err(Error::Config("field `lambda-max`: coupling range is empty".into()));
    }
    let sweep = SweepConfig {
        max_mode: cfg.max_mode,
        lambdas: SweepConfig::lambda_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_count),
        amplitude: cfg.amplitude,
        grid_res,
        method,
    };
    let report = mode_stability_sweep(&sweep)?;
    with_sink(cfg, stdout, |w| report.write_csv(w))?;
    write!(stderr, "{}", report.summary())?;
    Ok(0)
}

pub fn cmd_descent(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let start = match &cfg.shape {
        Some(path) => match read_shape(path)? {
            Shape::Star(s) => match cfg.grid {
                Some(g) => s.with_grid(sphere_grid(g)?)?,
                None => s,
            },
            Shape::Radial(_) => return Err(Error::Config("field `shape`: descent needs a star-shaped body".into())),
        },
        None => perturbed_ball(cfg.mode, cfg.perturbation, cfg.max_degree, cfg.grid.unwrap_or(SweepConfig::DEFAULT_GRID_RES))
            .map_err(|e| Error::Config(format!("field `mode`: {e}")))?,
    };
    let opts = DescentOptions { steps: cfg.steps, step_size: cfg.step_size, grad_tol: cfg.tol, ..DescentOptions::default() };
    let res = gradient_descent_shape(&start, cfg.lambda, &opts)?;
    with_sink(cfg, stdout, |w| res.write_csv(w))?;
    let last = res.final_step();
    writeln!(
        stderr,
        "{:?} after {} steps: energy = {:.10}, |grad| = {:.3e}, beta2 = {:.3e}",
        res.termination, last.step, last.energy.total, last.grad_norm, last.beta_squared
    )?;
    Ok(0)
}

pub fn cmd_asym(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut shape = cfg.require_shape()?;
    if let (Shape::Star(s), Some(g)) = (&shape, cfg.grid) {
        shape = Shape::Star(s.with_grid(sphere_grid(g)?)?);
    }
    let functionals: Vec<Functional> = match (cfg.functional, &shape) {
        (FunctionalChoice::Beta, _) => vec![Functional::Beta],
        (FunctionalChoice::Gamma, _) | (FunctionalChoice::Both, Shape::Radial(_)) => vec![Functional::Gamma],
        (FunctionalChoice::Both, Shape::Star(_)) => vec![Functional::Beta, Functional::Gamma],
    };
    let rows: Vec<CenteredAsymmetry> = functionals.iter().map(|&f| minimize_center(&shape, f)).collect::<Result<_>>()?;
    with_sink(cfg, stdout, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(std::iter::once("functional").chain(CenteredAsymmetry::CSV_HEADER))?;
        for r in &rows {
            let name = match r.functional {
                Functional::Beta => "beta",
                Functional::Gamma => "gamma",
            };
            csv.write_record(std::iter::once(name.to_string()).chain(r.csv_row()))?;
        }
        csv.flush()?;
        Ok(())
    })?;
    for r in &rows {
        writeln!(stderr, "{:?} minimized at {:?}: {:.6e}", r.functional, r.center, r.value())?;
    }
    Ok(0)
}

fn execute(cfg: &RunConfig, cmd: Cmd, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let go = |stdout: &mut dyn Write, stderr: &mut dyn Write| match cmd {
        Cmd::Energy => cmd_energy(cfg, stdout, stderr),
        Cmd::Verify => cmd_verify(cfg, stdout, stderr),
        Cmd::Sweep => cmd_sweep(cfg, stdout, stderr),
        Cmd::Descent => cmd_descent(cfg, stdout, stderr),
        Cmd::Asym => cmd_asym(cfg, stdout, stderr),
    };
    match cfg.threads {
        Some(0) => Err(Error::Config("field `threads`: must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("field `threads`: {e}")))?;
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let res = pool.install(|| go(&mut out, &mut err));
            stdout.write_all(&out)?;
            stderr.write_all(&err)?;
            res
        }
        None => go(stdout, stderr),
    }
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) => 1,
        _ => 2,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = merge(cli).and_then(|(cfg, cmd)| execute(&cfg, cmd, stdout, stderr));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = run_from(std::env::args_os(), &mut stdout, &mut stderr);
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_from(std::iter::once("liquiddrop").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_file_keys() {
        let mut cfg = RunConfig::default();
        cfg.apply_file_text("# sweep\nmax_mode = 3\nlambda-max=0.5\n\nsuite = \"lemma\"\n").unwrap();
        assert_eq!((cfg.max_mode, cfg.lambda_max, cfg.suite), (3, 0.5, Suite::Lemma));
        let err = cfg.apply_file_text("colour = red").unwrap_err();
        assert!(err.to_string().contains("colour"));
        let err = cfg.apply_file_text("grid = many").unwrap_err();
        assert!(err.to_string().contains("`grid`"));
        assert!(cfg.apply_file_text("just words").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["verify", "--suite", "bogus"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["energy"]).0, 2);
        assert_eq!(run_args(&["sweep", "--max-mode", "40"]).0, 2);
        assert_eq!(run_args(&["verify", "--threads", "0"]).0, 2);
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }

    #[test]
    fn energy_of_radial_ball_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ball.json");
        std::fs::write(&path, "{\"kind\":\"radial\",\"n\":3,\"intervals\":[[0.0,1.0]]}").unwrap();
        let (code, out, err) = run_args(&["energy", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        let pi = std::f64::consts::PI;
        assert!((row[3] - (4.0 * pi + 32.0 * pi * pi / 15.0)).abs() < 1e-8);
        assert_eq!(row[2], 1.0);

        std::fs::write(&path, "{\"kind\":\"radial\",\"n\":3,\"intervals\":[[0.5,0.2]]}").unwrap();
        let (code, _, err) = run_args(&["energy", path.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(err.contains("intervals"), "{err}");
    }

    #[test]
    fn seed_flag_beats_config() {
        let dir = tempfile::tempdir().unwrap();
        let conf = dir.path().join("run.conf");
        std::fs::write(&conf, "seed = 3\ncount = 2\n").unwrap();
        let cli = Cli::try_parse_from(["liquiddrop", "verify", "--config", conf.to_str().unwrap(), "--seed", "9"]).unwrap();
        let (cfg, cmd) = merge(cli).unwrap();
        assert_eq!((cfg.seed, cfg.count, cmd), (9, 2, Cmd::Verify));
    }
}
