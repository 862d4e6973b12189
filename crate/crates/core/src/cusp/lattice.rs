use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::qfield::{QElem, Rational};

/// Positive generator of `x Z + y Z` for positive rationals (the rational lcm
/// of the groups `xZ` and `yZ` when intersected: `xZ ∩ yZ`).
fn rational_lcm(x: &Rational, y: &Rational) -> Rational {
    let num = x.numer().lcm(y.numer());
    let den = x.denom().gcd(y.denom());
    Rational::new(num, den)
}

/// Positive generator of the intersection of `(1/c) Z` over the nonzero `c`.
fn intersect_reciprocals(cs: &[Rational]) -> Option<Rational> {
    cs.iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.abs().recip())
        .reduce(|a, b| rational_lcm(&a, &b))
}

/// Positive generator `x̃0` of `{x̃ ∈ Q : a·x̃·√D ∈ O}`.
///
/// With `a = e + f√D` the element is `x̃ f D + x̃ e √D`. For `D ≡ 2, 3 mod 4`
/// both coordinates must be integers. For `D ≡ 1 mod 4` both must be
/// half-integers of equal parity after doubling.
pub fn uf_lattice_generator(a: &QElem) -> Result<Rational> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("a = 0".into()));
    }
    let d = Rational::from_integer(a.field().d().into());
    let c_re = a.rt() * &d;
    let c_rt = a.re().clone();
    if a.field().d().rem_euclid(4) != 1 {
        return Ok(intersect_reciprocals(&[c_re, c_rt]).expect("a nonzero"));
    }
    let two = Rational::from_integer(2.into());
    let g = intersect_reciprocals(&[&c_re * &two, &c_rt * &two]).expect("a nonzero");
    let m0 = (&g * &c_re * &two).to_integer();
    let k0 = (&g * &c_rt * &two).to_integer();
    if (m0 - k0).is_even() {
        Ok(g)
    } else {
        Ok(g * two)
    }
}

/// The closed form `lcm(sp, rD′q) / (rD′p)` for `a = p/q + (r/s)√D`,
/// `D ≡ 2, 3 mod 4`, `p, r ≠ 0`; `None` outside that range.
pub fn uf_lattice_lcm_formula(a: &QElem) -> Option<Rational> {
    let dd = a.field().d();
    if dd.rem_euclid(4) == 1 || a.re().is_zero() || a.rt().is_zero() {
        return None;
    }
    Some(lcm_formula(a))
}

fn lcm_formula(a: &QElem) -> Rational {
    let dp = BigInt::from(-a.field().d());
    let (p, q) = (a.re().numer().abs(), a.re().denom().clone());
    let (r, s) = (a.rt().numer().abs(), a.rt().denom().clone());
    let l = (&s * &p).lcm(&(&r * &dp * &q));
    Rational::new(l, r * dp * p)
}

/// The generator implied by the `4π` normalisation of the torus coordinate
/// for `D ≡ 1 mod 4` (half the `D ≡ 2, 3` closed form); `None` outside that
/// range. Kept as a cross-check only.
pub fn uf_lattice_half_formula(a: &QElem) -> Option<Rational> {
    let dd = a.field().d();
    if dd.rem_euclid(4) != 1 || a.re().is_zero() || a.rt().is_zero() {
        return None;
    }
    Some(lcm_formula(a) / Rational::from_integer(2.into()))
}

/// Least positive `x̃` with `a·x̃·√D ∈ O` found by scanning the first
/// coordinate of `a·x̃·√D` over `(1/2)Z` (or `Z`) up to `bound`.
pub fn uf_lattice_generator_scan(a: &QElem, bound: u64) -> Option<Rational> {
    let field = a.field();
    let beta = a * field.sqrt_d();
    let half = field.d().rem_euclid(4) == 1;
    let step = if half { Rational::new(1.into(), 2.into()) } else { Rational::from_integer(1.into()) };
    let lead = if beta.re().is_zero() { beta.rt() } else { beta.re() };
    (1..=bound).find_map(|c| {
        let target = &step * Rational::from_integer(c.into());
        let x = &target / lead.abs();
        let w = beta.scale(&x);
        w.in_ring_of_integers().then_some(x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{int, rat, QuadField};

    fn f(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn generator_examples() {
        assert_eq!(uf_lattice_generator(&f(-5).one()).unwrap(), int(1));
        assert_eq!(uf_lattice_generator(&f(-5).sqrt_d()).unwrap(), rat(1, 5));
        assert_eq!(uf_lattice_generator(&f(-7).elem(int(1), int(1))).unwrap(), rat(1, 2));
        assert_eq!(uf_lattice_generator(&f(-7).elem(int(2), int(1))).unwrap(), int(1));
        assert!(uf_lattice_generator(&f(-7).zero()).is_err());
    }

    #[test]
    fn closed_form_agrees_on_generic_a() {
        for d in [-1i64, -2, -5, -6, -10, -13, -14] {
            for (p, q, r, s) in [(1, 1, 1, 1), (3, 2, -5, 7), (-4, 9, 2, 3), (6, 5, 10, 3)] {
                let a = f(d).elem(rat(p, q), rat(r, s));
                assert_eq!(uf_lattice_lcm_formula(&a), Some(uf_lattice_generator(&a).unwrap()), "{a}");
            }
        }
    }

    #[test]
    fn scan_agrees_on_small_grid() {
        for d in [-1i64, -2, -3, -5, -7, -11, -15] {
            for (p, q, r, s) in [(0, 1, 1, 1), (1, 1, 0, 1), (2, 3, -1, 2), (5, 4, 3, 7), (-1, 2, 1, 2)] {
                let a = f(d).elem(rat(p, q), rat(r, s));
                assert_eq!(uf_lattice_generator_scan(&a, 10_000), Some(uf_lattice_generator(&a).unwrap()), "{a}");
            }
        }
    }

    #[test]
    fn half_formula_can_disagree() {
        let a = f(-7).elem(int(2), int(1));
        assert_eq!(uf_lattice_half_formula(&a), Some(rat(1, 2)));
        assert_ne!(uf_lattice_half_formula(&a), Some(uf_lattice_generator(&a).unwrap()));
    }
}
