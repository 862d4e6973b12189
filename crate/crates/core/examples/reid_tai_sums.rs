//! Reid-Tai sums of a few finite-order linear maps.

use ballquot::qfield::{fmt_rational, int};
use ballquot::reidtai::{is_quasi_reflection, reid_tai_sum, sigma_prime, EigenSystem};

fn main() -> ballquot::Result<()> {
    let maps = [(2, vec![1, 1, 0, 0]), (6, vec![1, 1, 5, 0]), (7, vec![1, 2, 4]), (4, vec![0, 0, 3])];
    for (order, exps) in maps {
        let es = EigenSystem::new(order, exps.clone())?;
        let sum = reid_tai_sum(&es);
        let tag = if is_quasi_reflection(&es) { "quasi-reflection" } else if sum >= int(1) { "sum >= 1" } else { "sum < 1" };
        println!("order {order} exponents {exps:?}: sum = {}  ({tag})", fmt_rational(&sum));
    }
    // the modified sum for powers of an element whose k-th power is a reflection
    for f in 1..3 {
        println!("sigma'(g^{f}) with l = 2, k = 3: {}", fmt_rational(&sigma_prime(&[1, 1, 1], 2, 3, f)?));
    }
    Ok(())
}
