//! Minimal fractional-part sums over unit orbits: c_min, c_min^red and mc.

use ballquot::qfield::fmt_rational;
use ballquot::reidtai::{c_min, c_min_red, mc, CONTRIBUTING_D};

fn main() -> ballquot::Result<()> {
    println!("{:>4} {:>8} {:>10}", "d", "c_min", "c_min^red");
    for d in CONTRIBUTING_D {
        let red = c_min_red(d, &|_| true).map(|m| fmt_rational(&m.value)).unwrap_or_else(|_| "-".into());
        println!("{d:>4} {:>8} {red:>10}", fmt_rational(&c_min(d).value));
    }
    for r in [5, 8, 9, 10, 12, 16, 18] {
        let all = mc(r, &|_| true)?;
        let restricted = mc(r, &|f| f.d() < -3)?;
        println!("mc({r}) = {} (all D), {} (D < -3)", fmt_rational(&all.value), fmt_rational(&restricted.value));
    }
    Ok(())
}
