//! Bring a hermitian form with an isotropic first basis vector into the
//! anti-diagonal cusp shape.

use ballquot::cusp::normalize_cusp_basis;
use ballquot::qfield::{int, rat};
use ballquot::{QMatrix, QuadField};

fn main() -> ballquot::Result<()> {
    let k = QuadField::new(-5)?;
    let e = |a: i64, b: i64| k.elem(int(a), int(b));
    // first vector isotropic; off-diagonal entries everywhere else
    let q = QMatrix::from_rows(
        k,
        vec![
            vec![e(0, 0), e(0, 0), e(1, 1)],
            vec![e(0, 0), e(2, 0), e(1, 0)],
            vec![e(1, -1), e(1, 0), k.elem(rat(3, 2), int(0))],
        ],
    )?;
    let (n, frame) = normalize_cusp_basis(&q, 2)?;
    println!("basis change:\n{n}");
    println!("normalized form:\n{}", frame.gram());
    println!("a = {}, period = {}, lattice generator = {}", frame.a(), frame.period(), frame.lattice_generator());
    Ok(())
}
