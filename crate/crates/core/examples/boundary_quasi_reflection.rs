//! Random order-two elements of a cusp stabiliser: tangent eigenvalues,
//! Reid-Tai sums and the quasi-reflection congruences.

use ballquot::cusp::random::{order_two_element, random_frame, seeded_rng};
use ballquot::cusp::{boundary_divisor_fixed, boundary_tangent_exponents, check_qr_congruences};
use ballquot::qfield::fmt_rational;
use ballquot::reidtai::{is_quasi_reflection, reid_tai_sum};
use ballquot::QuadField;

fn main() -> ballquot::Result<()> {
    for d in [-5, -7, -15] {
        let k = QuadField::new(d)?;
        for i in 0..3 {
            let mut rng = seeded_rng(1, d, i);
            let frame = random_frame(&mut rng, k, 3);
            let (g, w0) = order_two_element(&mut rng, &frame);
            let sigma = frame.lattice_generator();
            let es = boundary_tangent_exponents(&g, &w0, &frame, &sigma)?;
            println!(
                "D = {d}: exponents {:?} mod {}, sum {}, quasi-reflection {}, congruences {}, fixes divisor {}",
                es.exponents(),
                es.order(),
                fmt_rational(&reid_tai_sum(&es)),
                is_quasi_reflection(&es),
                check_qr_congruences(&g, &frame, &sigma)?,
                boundary_divisor_fixed(&g, &frame)?,
            );
        }
    }
    Ok(())
}
