//! Seeded random frames and stabiliser elements for property sweeps.
//!
//! Elements are built by solving the `N(F)` relations directly, so every
//! generator output is a member by construction.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BoundaryElement, CuspFrame};
use crate::qfield::{int, rat, QElem, QMatrix, QuadField, Rational};

/// Deterministic stream for `(seed, D, index)`.
pub fn seeded_rng(seed: u64, d: i64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((d.unsigned_abs() << 32) ^ index);
    rng
}

pub fn random_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn random_elem<R: Rng>(rng: &mut R, field: QuadField) -> QElem {
    field.elem(random_rational(rng, 4, 3), random_rational(rng, 4, 3))
}

pub fn random_nonzero<R: Rng>(rng: &mut R, field: QuadField) -> QElem {
    loop {
        let x = random_elem(rng, field);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: QuadField, rows: usize, cols: usize) -> QMatrix {
    QMatrix::from_fn(field, rows, cols, |_, _| random_elem(rng, field)).expect("one field")
}

/// Random frame of dimension `n ≥ 2` with `B = CᴴC + I`.
pub fn random_frame<R: Rng>(rng: &mut R, field: QuadField, n: usize) -> CuspFrame {
    assert!(n >= 2);
    let c = random_matrix(rng, field, n - 1, n - 1);
    let b = c.adjoint().mul(&c).and_then(|m| m.add(&QMatrix::identity(field, n - 1))).expect("square");
    CuspFrame::new(random_nonzero(rng, field), b).expect("positive definite by construction")
}

/// `Mᴴ Q M` for a random change of basis that keeps the first basis vector,
/// so the result has the input shape of the normalisation.
pub fn random_gram<R: Rng>(rng: &mut R, frame: &CuspFrame) -> QMatrix {
    let field = frame.field();
    let n = frame.n();
    let mut m = QMatrix::identity(field, n + 1);
    for i in 0..n {
        for j in (i + 1)..=n {
            m[(i, j)] = random_elem(rng, field);
        }
    }
    m.adjoint().mul(&frame.gram()).and_then(|q| q.mul(&m)).expect("square")
}

fn inner(b: &QMatrix, x: &QMatrix, y: &QMatrix) -> QElem {
    x.adjoint().mul(b).and_then(|m| m.mul(y)).expect("column vectors")[(0, 0)].clone()
}

/// `I − 2 e (eᴴB) / (eᴴBe)`, an involution preserving `B`.
pub fn b_reflection(b: &QMatrix, e: &QMatrix) -> QMatrix {
    let field = b.field();
    let s = inner(b, e, e).inv().expect("B definite, e nonzero");
    let p = e.mul(&e.adjoint().mul(b).expect("sizes")).expect("sizes");
    QMatrix::identity(field, b.rows()).sub(&p.scale(&(&s + &s))).expect("sizes")
}

fn random_nonzero_vector<R: Rng>(rng: &mut R, field: QuadField, m: usize) -> QMatrix {
    loop {
        let v = random_matrix(rng, field, m, 1);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Completes `(z, X, y)` to an `N(F)` element by solving for `u`, `v`, `w`;
/// `t` is the free real parameter in `z̄āw = −yᴴBy/2 + t√D`.
pub fn complete_element(frame: &CuspFrame, z: QElem, x: QMatrix, y: QMatrix, t: &Rational) -> BoundaryElement {
    let field = frame.field();
    let (a, b) = (frame.a(), frame.b());
    let za = z.conj() * a.conj();
    let u = z.conj().inv().expect("z nonzero");
    let v = y.adjoint().mul(b).and_then(|m| m.mul(&x)).expect("sizes").scale(&(-za.inv().expect("nonzero")));
    let q = inner(b, &y, &y);
    let big_w = q.scale(&rat(-1, 2)) + field.sqrt_d().scale(t);
    let w = big_w / za;
    BoundaryElement { u, v, w, x, y, z }
}

/// Random element of `N(F)`: `X` is a product of up to three `B`-reflections.
pub fn random_nf<R: Rng>(rng: &mut R, frame: &CuspFrame) -> BoundaryElement {
    let field = frame.field();
    let m = frame.n() - 1;
    let mut x = QMatrix::identity(field, m);
    for _ in 0..rng.gen_range(0..=3) {
        let e = random_nonzero_vector(rng, field, m);
        x = x.mul(&b_reflection(frame.b(), &e)).expect("sizes");
    }
    let z = random_nonzero(rng, field);
    let y = random_matrix(rng, field, m, 1);
    let t = random_rational(rng, 5, 4);
    complete_element(frame, z, x, y, &t)
}

/// Random element of `W(F)`.
pub fn random_wf<R: Rng>(rng: &mut R, frame: &CuspFrame) -> BoundaryElement {
    let field = frame.field();
    let m = frame.n() - 1;
    let y = random_matrix(rng, field, m, 1);
    let t = random_rational(rng, 5, 4);
    complete_element(frame, field.one(), QMatrix::identity(field, m), y, &t)
}

/// Random element of `U(F)`.
pub fn random_uf<R: Rng>(rng: &mut R, frame: &CuspFrame) -> BoundaryElement {
    BoundaryElement::central(frame, &random_rational(rng, 6, 5))
}

/// `B`-orthogonal basis from a random unit lower triangular basis.
fn b_orthogonal_basis<R: Rng>(rng: &mut R, frame: &CuspFrame) -> Vec<QMatrix> {
    let field = frame.field();
    let m = frame.n() - 1;
    let mut basis: Vec<QMatrix> = Vec::with_capacity(m);
    for i in 0..m {
        let mut e = QMatrix::from_fn(field, m, 1, |r, _| match r.cmp(&i) {
            std::cmp::Ordering::Less => field.zero(),
            std::cmp::Ordering::Equal => field.one(),
            std::cmp::Ordering::Greater => random_elem(rng, field),
        })
        .expect("one field");
        for f in &basis {
            let c = inner(frame.b(), f, &e) / inner(frame.b(), f, f);
            e = e.sub(&f.scale(&c)).expect("sizes");
        }
        basis.push(e);
    }
    basis
}

/// Random `g` with `X² = I`, `X ≠ I` and `g² ∈ U(F)_Z`, together with a
/// boundary point `w0` it fixes. The sign of `g` is random.
pub fn order_two_element<R: Rng>(rng: &mut R, frame: &CuspFrame) -> (BoundaryElement, QMatrix) {
    let field = frame.field();
    let m = frame.n() - 1;
    let basis = b_orthogonal_basis(rng, frame);
    let mut minus: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
    if !minus.iter().any(|&s| s) {
        let i = rng.gen_range(0..m);
        minus[i] = true;
    }
    let mut x = QMatrix::identity(field, m);
    let mut y = QMatrix::zeros(field, m, 1);
    let mut plus_part = QMatrix::zeros(field, m, 1);
    for (e, &neg) in basis.iter().zip(&minus) {
        let c = random_elem(rng, field);
        if neg {
            x = x.mul(&b_reflection(frame.b(), e)).expect("sizes");
            y = y.add(&e.scale(&c)).expect("sizes");
        } else {
            plus_part = plus_part.add(&e.scale(&c)).expect("sizes");
        }
    }
    // z = 1 and 2w + vy = kσ with vy = yᴴBy/ā
    let k = int(rng.gen_range(-3..=3));
    let mut g = complete_element(frame, field.one(), x, y.clone(), &int(0));
    let q = inner(frame.b(), &y, &y);
    let vy = q / frame.a().conj();
    g.w = (frame.period().scale(&k) - vy).scale(&rat(1, 2));
    let w0 = y.scale(&field.from_rational(rat(1, 2))).add(&plus_part).expect("sizes");
    if rng.gen_bool(0.5) {
        g = g.negate();
    }
    (g, w0)
}
