//! Exact arithmetic in cyclotomic fields Q(ζ_L), the embedding of Q(√D)
//! through a Gauss sum, and eigenvalue exponents of finite-order matrices.
//!
//! Conventions: `ζ_L = e^{2πi/L}` and `√D = i·√|D|`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclo::{is_reducible, kronecker, orbit_sets, OrbitSet};
use crate::error::{Error, Result};
use crate::qfield::{QElem, QMatrix, QuadField, Rational};
use crate::reidtai::EigenSystem;

/// Largest order probed when looking for `M^m = I`.
pub const MAX_ORDER: u64 = 512;

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term
/// first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n − 1 divided by Φ_d for all proper divisors d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div(&num, &cyclotomic_polynomial(d));
    }
    num
}

/// Division of monic integer polynomials with zero remainder.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len() - 1;
    let mut q = vec![0i64; rem.len() - dl];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// An element of Q(ζ_L) as a polynomial in `ζ_L` of degree `< φ(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycElem {
    l: u64,
    coeffs: Vec<Rational>,
}

impl CycElem {
    pub fn zero(l: u64) -> Self {
        CycElem { l, coeffs: Vec::new() }
    }

    pub fn from_rational(l: u64, q: Rational) -> Self {
        CycElem { l, coeffs: vec![q] }.reduced()
    }

    /// `ζ_L^k`.
    pub fn zeta(l: u64, k: i64) -> Self {
        let k = k.rem_euclid(l as i64) as usize;
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        CycElem { l, coeffs }.reduced()
    }

    pub fn order(&self) -> u64 {
        self.l
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn reduced(mut self) -> Self {
        let phi = cyclotomic_polynomial(self.l);
        let deg = phi.len() - 1;
        while self.coeffs.len() > deg {
            let top = self.coeffs.pop().expect("nonempty");
            let shift = self.coeffs.len() - deg;
            for (j, &b) in phi[..deg].iter().enumerate() {
                self.coeffs[shift + j] -= &top * Rational::from_integer(b.into());
            }
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, o: &CycElem) -> CycElem {
        assert_eq!(self.l, o.l);
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                let b = o.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                a + b
            })
            .collect();
        CycElem { l: self.l, coeffs }.reduced()
    }

    pub fn neg(&self) -> CycElem {
        CycElem {
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, o: &CycElem) -> CycElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CycElem) -> CycElem {
        assert_eq!(self.l, o.l);
        if self.is_zero() || o.is_zero() {
            return CycElem::zero(self.l);
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        CycElem { l: self.l, coeffs }.reduced()
    }

    pub fn scale(&self, q: &Rational) -> CycElem {
        CycElem {
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
        .reduced()
    }
}

/// `|disc(Q(√D))|`.
pub fn conductor(field: QuadField) -> u64 {
    field.discriminant().unsigned_abs()
}

/// `√D` inside Q(ζ_L); `L` must be a multiple of the conductor.
///
/// The Gauss sum `Σ_a (disc/a) ζ_f^a` of the odd character of conductor `f`
/// equals `i√f`; it is `√D` for `D ≡ 1 mod 4` and `2√D` otherwise.
pub fn sqrt_d_embedding(field: QuadField, l: u64) -> Result<CycElem> {
    let f = conductor(field);
    if !l.is_multiple_of(f) {
        return Err(Error::InvalidArgument(format!("conductor {f} does not divide {l}")));
    }
    let step = (l / f) as i64;
    let mut g = CycElem::zero(l);
    for (a, chi) in gauss_sum_terms(field) {
        let term = CycElem::zeta(l, a as i64 * step);
        g = if chi > 0 { g.add(&term) } else { g.sub(&term) };
    }
    if field.d().rem_euclid(4) != 1 {
        g = g.scale(&Rational::new(1.into(), 2.into()));
    }
    Ok(g)
}

/// Image of `x ∈ Q(√D)` in Q(ζ_L).
pub fn embed(x: &QElem, l: u64) -> Result<CycElem> {
    let s = sqrt_d_embedding(x.field(), l)?;
    Ok(CycElem::from_rational(l, x.re().clone()).add(&s.scale(x.rt())))
}

/// Inverse of [`embed`]: `Some(u + v√D)` when `c` lies in Q(√D).
pub fn to_quadratic(c: &CycElem, field: QuadField) -> Result<Option<QElem>> {
    let s = sqrt_d_embedding(field, c.order())?;
    let get = |e: &CycElem, i: usize| e.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
    let Some(i) = (1..s.coeffs.len()).find(|&i| !get(&s, i).is_zero()) else {
        return Err(Error::Inconsistency("sqrt(D) embedded as a rational".into()));
    };
    // u·1 has only a constant term, so coordinate i determines v
    let v = get(c, i) / get(&s, i);
    let rest = c.sub(&s.scale(&v));
    if rest.coeffs.len() > 1 {
        return Ok(None);
    }
    let u = get(&rest, 0);
    Ok(Some(field.elem(u, v)))
}

/// `Π_{a ∈ A} (x − ζ_d^a)` with coefficients in Q(√D), constant term first.
fn orbit_polynomial(orbit: &OrbitSet, field: QuadField) -> Result<Vec<QElem>> {
    let d = orbit.d();
    let l = d.lcm(&conductor(field));
    let mut poly = vec![CycElem::from_rational(l, Rational::one())];
    for &a in orbit.members() {
        let root = CycElem::zeta(l, (a * (l / d)) as i64);
        let mut next = vec![CycElem::zero(l); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(&root));
        }
        poly = next;
    }
    poly.iter()
        .map(|c| {
            to_quadratic(c, field)?
                .ok_or_else(|| Error::Inconsistency(format!("orbit polynomial of order {d} not over {field}")))
        })
        .collect()
}

fn poly_at_matrix(coeffs: &[QElem], m: &QMatrix) -> Result<QMatrix> {
    let n = m.rows();
    let mut acc = QMatrix::zeros(m.field(), n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(m)?.add(&QMatrix::identity(m.field(), n).scale(c))?;
    }
    Ok(acc)
}

/// Least `m ≤ MAX_ORDER` with `M^m = I`.
pub fn matrix_order(m: &QMatrix) -> Result<u64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("order of non-square matrix".into()));
    }
    let mut p = m.clone();
    for k in 1..=MAX_ORDER {
        if p.is_identity() {
            return Ok(k);
        }
        p = p.mul(m)?;
    }
    Err(Error::NonTorsion(format!("no power up to {MAX_ORDER} is the identity")))
}

/// Eigenvalue exponents of a finite-order square matrix over Q(√D).
///
/// For each `e` dividing the order, `V_e` is the kernel of `Φ_e(M)`, or of
/// the two Kronecker factors of `Φ_e` when it splits over the field. The
/// Galois group of Q(ζ_e)/Q(√D) permutes the roots of each factor, so all of
/// them occur with the same multiplicity.
pub fn eigen_exponents(m: &QMatrix) -> Result<EigenSystem> {
    let order = matrix_order(m)?;
    let field = m.field();
    let n = m.rows();
    let mut exps: Vec<i64> = Vec::with_capacity(n);
    for e in (1..=order).filter(|e| order % e == 0) {
        let pieces: Vec<(OrbitSet, Vec<QElem>)> = if e >= 3 && is_reducible(e, field) {
            let (p, q) = orbit_sets(e, field)?;
            let fp = orbit_polynomial(&p, field)?;
            let fq = orbit_polynomial(&q, field)?;
            vec![(p, fp), (q, fq)]
        } else {
            let coeffs = cyclotomic_polynomial(e)
                .into_iter()
                .map(|c| field.from_int(c))
                .collect();
            vec![(OrbitSet::full(e), coeffs)]
        };
        for (orbit, poly) in pieces {
            let kernel = n - poly_at_matrix(&poly, m)?.rank();
            if !kernel.is_multiple_of(orbit.len()) {
                return Err(Error::Inconsistency(format!(
                    "kernel of dimension {kernel} for an orbit of size {}",
                    orbit.len()
                )));
            }
            for _ in 0..kernel / orbit.len() {
                exps.extend(orbit.members().iter().map(|&a| (a * (order / e)) as i64));
            }
        }
    }
    if exps.len() != n {
        return Err(Error::Inconsistency(format!("found {} of {n} eigenvalues", exps.len())));
    }
    exps.sort_unstable();
    EigenSystem::new(order, exps)
}

/// Nonzero terms `(a, (disc/a))` of the Gauss sum behind [`sqrt_d_embedding`].
pub fn gauss_sum_terms(field: QuadField) -> Vec<(u64, i8)> {
    let f = conductor(field);
    let disc = field.discriminant();
    (1..f)
        .map(|a| (a, kronecker(disc, a as i64)))
        .filter(|&(_, c)| c != 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{int, rat};

    fn f(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn cyclotomic_polynomial_examples() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60u64 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, crate::cyclo::euler_phi(n));
        }
    }

    #[test]
    fn zeta_has_the_right_order() {
        for l in [3u64, 4, 7, 12, 20] {
            let z = CycElem::zeta(l, 1);
            let mut p = CycElem::from_rational(l, Rational::one());
            for _ in 0..l {
                p = p.mul(&z);
            }
            assert_eq!(p, CycElem::from_rational(l, Rational::one()));
        }
    }

    #[test]
    fn sqrt_d_squares_to_d() {
        for d in [-1i64, -2, -3, -5, -6, -7, -10, -11, -15, -19] {
            let field = f(d);
            let l = conductor(field) * 3;
            let s = sqrt_d_embedding(field, l).unwrap();
            assert_eq!(s.mul(&s), CycElem::from_rational(l, int(d)), "D = {d}");
        }
    }

    #[test]
    fn gauss_sum_sign_numerically() {
        // Σ (disc/a) e^{2πia/f} should be +i√f
        for d in [-1i64, -2, -3, -5, -6, -7, -10, -11, -13, -15, -23] {
            let field = f(d);
            let fc = conductor(field) as f64;
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (a, c) in gauss_sum_terms(field) {
                let t = 2.0 * std::f64::consts::PI * a as f64 / fc;
                re += c as f64 * t.cos();
                im += c as f64 * t.sin();
            }
            assert!(re.abs() < 1e-9, "D = {d}");
            assert!((im - fc.sqrt()).abs() < 1e-9, "D = {d}");
        }
    }

    #[test]
    fn embed_round_trip() {
        let field = f(-7);
        let x = field.elem(rat(3, 2), rat(-5, 3));
        let l = 28;
        let c = embed(&x, l).unwrap();
        assert_eq!(to_quadratic(&c, field).unwrap(), Some(x.clone()));
        let y = field.elem(rat(1, 7), rat(2, 1));
        let prod = embed(&(&x * &y), l).unwrap();
        assert_eq!(prod, c.mul(&embed(&y, l).unwrap()));
        assert_eq!(to_quadratic(&CycElem::zeta(28, 1), field).unwrap(), None);
    }

    #[test]
    fn eigen_exponents_of_roots_of_unity() {
        let field = f(-3);
        // (−1 + √−3)/2 = e^{2πi/3}
        let omega = field.elem(rat(-1, 2), rat(1, 2));
        let m = QMatrix::from_rows(field, vec![vec![omega.clone()]]).unwrap();
        let es = eigen_exponents(&m).unwrap();
        assert_eq!((es.order(), es.exponents().to_vec()), (3, vec![1]));
        let m = QMatrix::from_rows(field, vec![vec![omega.conj()]]).unwrap();
        assert_eq!(eigen_exponents(&m).unwrap().exponents(), &[2]);

        let field = f(-1);
        let m = QMatrix::from_rows(field, vec![vec![field.sqrt_d()]]).unwrap();
        let es = eigen_exponents(&m).unwrap();
        assert_eq!((es.order(), es.exponents().to_vec()), (4, vec![1]));
    }

    #[test]
    fn eigen_exponents_of_rational_rotation() {
        let field = f(-5);
        let z = field.zero();
        let one = field.one();
        // companion matrix of x^2 + x + 1
        let m = QMatrix::from_rows(
            field,
            vec![vec![z.clone(), -one.clone()], vec![one.clone(), -one.clone()]],
        )
        .unwrap();
        let es = eigen_exponents(&m).unwrap();
        assert_eq!((es.order(), es.exponents().to_vec()), (3, vec![1, 2]));
        let refl = QMatrix::from_rows(field, vec![vec![-one.clone(), z.clone()], vec![z, one]]).unwrap();
        assert_eq!(eigen_exponents(&refl).unwrap().exponents(), &[0, 1]);
    }

    #[test]
    fn non_torsion_is_reported() {
        let field = f(-5);
        let m = QMatrix::from_rows(field, vec![vec![field.from_int(2)]]).unwrap();
        assert!(matches!(eigen_exponents(&m), Err(Error::NonTorsion(_))));
    }
}
