//! Per-case contribution tables and the dimension thresholds they imply.

use ballquot::qfield::{fmt_rational, int};
use ballquot::reidtai::{case_analysis, CaseId};

fn main() -> ballquot::Result<()> {
    for case in CaseId::ALL {
        let rep = case_analysis(case, 12)?;
        let small: Vec<String> = rep
            .per_d_contribution
            .iter()
            .filter(|(_, v)| **v < int(1))
            .map(|(d, v)| format!("{d}: {}", fmt_rational(v)))
            .collect();
        println!("{case}: orders {:?}, field {:?}", rep.orders, rep.field.map(|f| f.d()));
        println!("  contributions below 1: {}", small.join(", "));
        println!("  omega term {}, threshold n >= {:?}", fmt_rational(&rep.omega.value), rep.threshold);
        if let Some(s) = &rep.min_sigma {
            println!("  least sum at n = 12: {}", fmt_rational(s));
        }
    }
    Ok(())
}
