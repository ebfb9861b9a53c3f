//! Second differences of the energy at the ball along modes 2 and 3, swept
//! in the coupling, with the CSV report on stdout.

use liquiddrop::energy_opt::{mode_stability_sweep, SweepConfig};
use liquiddrop::potentials::NonlocalMethod;
use liquiddrop::shapes::SphereGrid;

fn main() -> liquiddrop::Result<()> {
    let cfg = SweepConfig {
        max_mode: 3,
        lambdas: SweepConfig::lambda_grid(0.0, 2.5, 11),
        grid_res: 16,
        method: NonlocalMethod::Boundary { grid: SphereGrid::new(16, 32) },
        ..SweepConfig::default()
    };
    let report = mode_stability_sweep(&cfg)?;
    report.write_csv(std::io::stdout().lock())?;
    eprint!("{}", report.summary());
    for m in &report.modes {
        eprintln!("mode {} crosses zero at λ ≈ {:?}", m.l, m.crossing());
    }
    Ok(())
}
