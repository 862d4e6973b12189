//! Exact arithmetic over Q and over imaginary quadratic fields Q(sqrt(D)).
//!
//! Every quantity in this crate is exact. Rationals are arbitrary precision
//! and always kept in lowest terms with a positive denominator; quadratic
//! field elements carry the field tag `D` and refuse to mix with elements
//! of a different field.

mod matrix;

pub use matrix::QMatrix;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational number in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds `num / den`. Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fractional part `q - floor(q)`, always in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Lowest-terms `"p/q"`, or `"n"` for integers.
pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

/// Serde adapters writing rationals as lowest-terms `"p/q"` strings.
pub mod rational_str {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, De: Deserializer<'de>>(d: De) -> Result<Rational, De::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&fmt_rational(q)),
                None => s.serialize_none(),
            }
        }
    }

    pub mod map {
        use super::*;

        pub fn serialize<K, S>(m: &BTreeMap<K, Rational>, s: S) -> Result<S::Ok, S::Error>
        where
            K: serde::Serialize + Ord,
            S: Serializer,
        {
            s.collect_map(m.iter().map(|(k, v)| (k, fmt_rational(v))))
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::InvalidArgument(format!("not a rational: {s:?}")))
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An imaginary quadratic field Q(sqrt(D)), `D < 0` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct QuadField(i64);

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d < 0 && is_squarefree(d.unsigned_abs()) {
            Ok(QuadField(d))
        } else {
            Err(Error::InvalidField(d))
        }
    }

    #[inline]
    pub fn d(self) -> i64 {
        self.0
    }

    /// Field discriminant: `D` when `D ≡ 1 mod 4`, else `4D`.
    pub fn discriminant(self) -> i64 {
        if self.0.rem_euclid(4) == 1 {
            self.0
        } else {
            4 * self.0
        }
    }

    pub fn zero(self) -> QElem {
        QElem::zero(self)
    }

    pub fn one(self) -> QElem {
        QElem::one(self)
    }

    pub fn sqrt_d(self) -> QElem {
        QElem::new(self, Rational::zero(), Rational::one())
    }

    pub fn elem(self, re: Rational, rt: Rational) -> QElem {
        QElem::new(self, re, rt)
    }

    pub fn from_int(self, n: i64) -> QElem {
        QElem::new(self, int(n), Rational::zero())
    }

    pub fn from_rational(self, q: Rational) -> QElem {
        QElem::new(self, q, Rational::zero())
    }
}

impl<'de> Deserialize<'de> for QuadField {
    fn deserialize<De: Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        let d = i64::deserialize(de)?;
        QuadField::new(d).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.0)
    }
}

/// Element `re + rt * sqrt(D)` of an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QElem {
    field: QuadField,
    re: Rational,
    rt: Rational,
}

impl QElem {
    pub fn new(field: QuadField, re: Rational, rt: Rational) -> Self {
        QElem { field, re, rt }
    }

    pub fn zero(field: QuadField) -> Self {
        QElem::new(field, Rational::zero(), Rational::zero())
    }

    pub fn one(field: QuadField) -> Self {
        QElem::new(field, Rational::one(), Rational::zero())
    }

    #[inline]
    pub fn field(&self) -> QuadField {
        self.field
    }

    #[inline]
    pub fn re(&self) -> &Rational {
        &self.re
    }

    #[inline]
    pub fn rt(&self) -> &Rational {
        &self.rt
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.rt.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.rt.is_zero()
    }

    /// True when the element lies in Q (zero sqrt(D)-part).
    pub fn is_rational(&self) -> bool {
        self.rt.is_zero()
    }

    /// Complex conjugation `re + rt√D ↦ re − rt√D`.
    pub fn conj(&self) -> QElem {
        QElem::new(self.field, self.re.clone(), -&self.rt)
    }

    /// Field norm `re² − D·rt²`, which is `|x|²` since `D < 0`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re - Rational::from_integer(BigInt::from(self.field.0)) * &self.rt * &self.rt
    }

    /// `2·Re(x)` as a rational: the trace `x + conj(x)`.
    pub fn trace(&self) -> Rational {
        &self.re + &self.re
    }

    pub fn scale(&self, q: &Rational) -> QElem {
        QElem::new(self.field, &self.re * q, &self.rt * q)
    }

    pub fn inv(&self) -> Result<QElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(QElem::new(self.field, c.re / &n, c.rt / &n))
    }

    fn same_field(&self, other: &QElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.0, other.field.0))
        }
    }

    pub fn checked_add(&self, other: &QElem) -> Result<QElem> {
        self.same_field(other)?;
        Ok(QElem::new(self.field, &self.re + &other.re, &self.rt + &other.rt))
    }

    pub fn checked_sub(&self, other: &QElem) -> Result<QElem> {
        self.same_field(other)?;
        Ok(QElem::new(self.field, &self.re - &other.re, &self.rt - &other.rt))
    }

    pub fn checked_mul(&self, other: &QElem) -> Result<QElem> {
        self.same_field(other)?;
        let d = Rational::from_integer(BigInt::from(self.field.0));
        let re = &self.re * &other.re + d * &self.rt * &other.rt;
        let rt = &self.re * &other.rt + &self.rt * &other.re;
        Ok(QElem::new(self.field, re, rt))
    }

    pub fn checked_div(&self, other: &QElem) -> Result<QElem> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Membership in the ring of integers of Q(sqrt(D)).
    ///
    /// For `D ≡ 2, 3 mod 4` the ring is `Z[√D]`; for `D ≡ 1 mod 4` it is
    /// `Z[(1+√D)/2]`, i.e. `2·rt ∈ Z` and `re − rt ∈ Z`.
    pub fn in_ring_of_integers(&self) -> bool {
        if self.field.0.rem_euclid(4) == 1 {
            let two = int(2);
            (&self.rt * &two).is_integer() && (&self.re - &self.rt).is_integer()
        } else {
            self.re.is_integer() && self.rt.is_integer()
        }
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sq = format!("sqrt({})", self.field.0);
        match (self.re.is_zero(), self.rt.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.rt.is_one() {
                    write!(f, "{sq}")
                } else if (-&self.rt).is_one() {
                    write!(f, "-{sq}")
                } else {
                    write!(f, "{}*{sq}", self.rt)
                }
            }
            (false, false) => {
                let sign = if self.rt.is_negative() { '-' } else { '+' };
                let mag = self.rt.abs();
                if mag.is_one() {
                    write!(f, "{} {sign} {sq}", self.re)
                } else {
                    write!(f, "{} {sign} {}*{sq}", self.re, mag)
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QElemRepr {
    d: i64,
    re: String,
    rt: String,
}

impl Serialize for QElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QElemRepr {
            d: self.field.0,
            re: fmt_rational(&self.re),
            rt: fmt_rational(&self.rt),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QElem {
    fn deserialize<De: Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        let r = QElemRepr::deserialize(de)?;
        let field = QuadField::new(r.d).map_err(serde::de::Error::custom)?;
        let re = parse_rational(&r.re).map_err(serde::de::Error::custom)?;
        let rt = parse_rational(&r.rt).map_err(serde::de::Error::custom)?;
        Ok(QElem::new(field, re, rt))
    }
}

// Operator impls panic on mixed fields; use the `checked_*` methods to get
// an error value instead.
macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $checked:ident) => {
        impl $Trait<&QElem> for &QElem {
            type Output = QElem;
            fn $method(self, rhs: &QElem) -> QElem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $Trait<QElem> for QElem {
            type Output = QElem;
            fn $method(self, rhs: QElem) -> QElem {
                (&self).$method(&rhs)
            }
        }
        impl $Trait<&QElem> for QElem {
            type Output = QElem;
            fn $method(self, rhs: &QElem) -> QElem {
                (&self).$method(rhs)
            }
        }
        impl $Trait<QElem> for &QElem {
            type Output = QElem;
            fn $method(self, rhs: QElem) -> QElem {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem::new(self.field, -&self.re, -&self.rt)
    }
}

impl Neg for QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        -&self
    }
}

impl AddAssign<&QElem> for QElem {
    fn add_assign(&mut self, rhs: &QElem) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QElem> for QElem {
    fn sub_assign(&mut self, rhs: &QElem) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QElem> for QElem {
    fn mul_assign(&mut self, rhs: &QElem) {
        *self = &*self * rhs;
    }
}
