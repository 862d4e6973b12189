//! Totients, the Kronecker symbol, and the splitting of cyclotomic
//! polynomials over imaginary quadratic fields.
//!
//! The primitive `d`-th roots of unity `ζ_d^a`, `a ∈ (Z/dZ)^*`, form one
//! Galois orbit over Q. Over Q(√D) they stay one orbit unless Q(√D) sits
//! inside Q(ζ_d), which happens exactly when the field discriminant divides
//! `d`. In that case the orbit breaks into the two halves on which the
//! character `a ↦ (D/a)` takes the values `+1` and `−1`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::{is_squarefree, QuadField};

/// Prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn of(n: u64) -> Self {
        assert!(n >= 1, "factorization of 0");
        let mut out = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p) {
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            out.push((m, 1));
        }
        Factorization(out)
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Euler's totient `φ(n)` via the prime factorization.
pub fn euler_phi(n: u64) -> u64 {
    Factorization::of(n)
        .pairs()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Totients of `0..=limit` by sieve; index 0 holds 0.
pub fn phi_table(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for i in 2..=limit {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= limit {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    phi
}

/// Residues in `[0, d)` coprime to `d`. For `d = 1` this is `{0}`.
pub fn units(d: u64) -> Vec<u64> {
    (0..d).filter(|&a| a.gcd(&d) == 1).collect()
}

const KRONECKER_TWO: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/b)` for arbitrary integers.
pub fn kronecker(a: i64, b: i64) -> i8 {
    let (mut a, mut b) = (a as i128, b as i128);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { KRONECKER_TWO[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= KRONECKER_TWO[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// `χ_D(a) = (D/a)` for the field's squarefree `D`.
pub fn field_character(field: QuadField, a: u64) -> i8 {
    kronecker(field.d(), a as i64)
}

/// True iff the `d`-th cyclotomic polynomial factors over Q(√D).
///
/// Decided by the conductor condition `|disc(Q(√D))| divides d`.
pub fn is_reducible(d: u64, field: QuadField) -> bool {
    d.is_multiple_of(field.discriminant().unsigned_abs())
}

/// Independent test of splitting: `a ↦ (D/a)` must be a well defined,
/// nowhere-zero, nontrivial function on unit classes mod `d`. Scans
/// representatives `a ∈ [1, 10d]`.
pub fn character_is_well_defined(d: u64, field: QuadField) -> bool {
    if d == 0 {
        return false;
    }
    let mut seen: Vec<Option<i8>> = vec![None; d as usize];
    for a in 1..=10 * d {
        if a.gcd(&d) != 1 {
            continue;
        }
        let v = field_character(field, a);
        if v == 0 {
            return false;
        }
        let slot = &mut seen[(a % d) as usize];
        match *slot {
            None => *slot = Some(v),
            Some(w) if w != v => return false,
            Some(_) => {}
        }
    }
    seen.iter().flatten().any(|&v| v == -1)
}

/// `is_reducible` confirmed by the character scan; a disagreement is an
/// internal inconsistency.
pub fn checked_reducible(d: u64, field: QuadField) -> Result<bool> {
    let by_conductor = is_reducible(d, field);
    let by_character = character_is_well_defined(d, field);
    if by_conductor != by_character {
        return Err(Error::Inconsistency(format!(
            "splitting of order {d} over {field}: conductor test says {by_conductor}, character scan says {by_character}"
        )));
    }
    Ok(by_conductor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum OrbitLabel {
    Full,
    Plus,
    Minus,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitLabel::Full => "FULL",
            OrbitLabel::Plus => "PLUS",
            OrbitLabel::Minus => "MINUS",
        })
    }
}

/// Exponent set of one irreducible factor's eigenvalues `ζ_d^a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitSet {
    d: u64,
    members: Vec<u64>,
    label: OrbitLabel,
    field: Option<QuadField>,
}

impl OrbitSet {
    /// All units mod `d`.
    pub fn full(d: u64) -> Self {
        OrbitSet {
            d,
            members: units(d),
            label: OrbitLabel::Full,
            field: None,
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn label(&self) -> OrbitLabel {
        self.label
    }

    pub fn field(&self) -> Option<QuadField> {
        self.field
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.members.binary_search(&(a % self.d.max(1))).is_ok()
    }
}

/// The two Kronecker orbits `(PLUS, MINUS)` of a split cyclotomic polynomial.
pub fn orbit_sets(d: u64, field: QuadField) -> Result<(OrbitSet, OrbitSet)> {
    if !checked_reducible(d, field)? {
        return Err(Error::NoSplitting { d, field: field.d() });
    }
    let (plus, minus): (Vec<u64>, Vec<u64>) =
        units(d).into_iter().partition(|&a| field_character(field, a) == 1);
    let mk = |members, label| OrbitSet {
        d,
        members,
        label,
        field: Some(field),
    };
    Ok((mk(plus, OrbitLabel::Plus), mk(minus, OrbitLabel::Minus)))
}

/// Every squarefree `D < 0` over which the `d`-th cyclotomic polynomial
/// splits, ordered by `|D|`.
pub fn suitable_fields(d: u64) -> Result<Vec<QuadField>> {
    if d < 3 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for m in (1..=d).filter(|m| d.is_multiple_of(*m)) {
        // |disc| = m with D ≡ 1 mod 4, or |disc| = 4|D| with D ≡ 2, 3 mod 4
        if m % 4 == 3 && is_squarefree(m) {
            out.push(-(m as i64));
        }
        if m % 4 == 0 {
            let q = m / 4;
            if is_squarefree(q) && matches!(q % 4, 1 | 2) {
                out.push(-(q as i64));
            }
        }
    }
    out.sort_by_key(|d| d.unsigned_abs());
    out.dedup();
    let fields: Vec<QuadField> = out.into_iter().map(|x| QuadField::new(x).expect("squarefree")).collect();
    for &f in &fields {
        if !checked_reducible(d, f)? {
            return Err(Error::Inconsistency(format!("{f} listed as suitable for {d}")));
        }
    }
    Ok(fields)
}

/// The orbit of `{d − a : a ∈ A}`: complex conjugates of the eigenvalues.
pub fn complex_conjugate_orbit(orbit: &OrbitSet) -> OrbitSet {
    let d = orbit.d;
    let mut members: Vec<u64> = orbit.members.iter().map(|&a| (d - a) % d.max(1)).collect();
    members.sort_unstable();
    let label = match (orbit.label, orbit.field) {
        (OrbitLabel::Full, _) | (_, None) => OrbitLabel::Full,
        (_, Some(f)) => match members.first().map(|&a| field_character(f, a)) {
            Some(1) => OrbitLabel::Plus,
            _ => OrbitLabel::Minus,
        },
    };
    OrbitSet {
        d,
        members,
        label,
        field: orbit.field,
    }
}
