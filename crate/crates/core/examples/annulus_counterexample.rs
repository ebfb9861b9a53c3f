//! The annuli `B_R \ B_ε` of unit volume: `v(0) / (P(E) − P(B1))` blows up
//! like `ε^{3−n}` in dimension four and above and stays bounded for n = 3.

use liquiddrop::verify::{check_counterexample_scan, COUNTEREXAMPLE_EPS};

fn main() -> liquiddrop::Result<()> {
    for n in [3, 4, 6] {
        for r in check_counterexample_scan(n, &COUNTEREXAMPLE_EPS)? {
            println!("{:<22} {:<28} {:>12.5e} {}", r.check, r.input, r.lhs, r.status);
        }
    }
    Ok(())
}
