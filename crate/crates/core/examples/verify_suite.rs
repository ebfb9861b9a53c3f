//! Runs the three-dimensional chain of checks on a seeded battery and
//! prints the records as CSV.

use liquiddrop::verify::{run_suite, write_records, Suite, SuiteConfig, Summary};

fn main() -> liquiddrop::Result<()> {
    let cfg = SuiteConfig { seed: 11, count: 6, ..SuiteConfig::default() };
    let records = run_suite(Suite::N3, &cfg)?;
    write_records(&records, std::io::stdout().lock())?;
    eprintln!("{}", Summary::of(&records));
    Ok(())
}
