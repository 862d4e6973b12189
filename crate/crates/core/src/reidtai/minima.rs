use num_integer::Integer;
use serde::Serialize;

use crate::cyclo::{
    checked_reducible, field_character, orbit_sets, suitable_fields, units, OrbitLabel, OrbitSet,
};
use crate::error::{Error, Result};
use crate::qfield::{rat, QuadField, Rational};

/// A minimum together with the argument that attains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Minimum<W> {
    #[serde(with = "crate::qfield::rational_str")]
    pub value: Rational,
    pub witness: W,
}

impl<W> Minimum<W> {
    fn offer(best: &mut Option<Self>, value: Rational, witness: impl FnOnce() -> W) {
        if best.as_ref().is_none_or(|b| value < b.value) {
            *best = Some(Minimum { value, witness: witness() });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McWitness {
    pub field: Option<QuadField>,
    pub orbit: OrbitLabel,
    pub k1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CMinRedWitness {
    pub field: QuadField,
    pub orbit: OrbitLabel,
    pub a: u64,
}

/// `Σ_{k ∈ A, k ≠ k1} {(k2 + k)/r}` with `k2 = r − k1`.
pub fn mc_sum(orbit: &OrbitSet, k1: u64) -> Rational {
    let r = orbit.d();
    let total: u64 = orbit
        .members()
        .iter()
        .filter(|&&k| k != k1)
        .map(|&k| (k + r - k1 % r) % r)
        .sum();
    rat(total as i64, r as i64)
}

/// Orbits over which the `W`-eigenvalue exponent may range: both halves
/// for every admissible split field, and the full unit group.
fn mc_orbits(r: u64, filter: &dyn Fn(QuadField) -> bool) -> Result<Vec<OrbitSet>> {
    if r < 3 {
        return Err(Error::InvalidArgument(format!("mc needs r >= 3, got {r}")));
    }
    let mut out = Vec::new();
    for field in suitable_fields(r)? {
        if filter(field) {
            let (p, m) = orbit_sets(r, field)?;
            out.push(p);
            out.push(m);
        }
    }
    out.push(OrbitSet::full(r));
    Ok(out)
}

/// `mc(r)`: the least contribution of `Hom(W, V_r^ω / W)` to the sum.
pub fn mc(r: u64, filter: &dyn Fn(QuadField) -> bool) -> Result<Minimum<McWitness>> {
    let mut best = None;
    for orbit in mc_orbits(r, filter)? {
        for &k1 in orbit.members() {
            Minimum::offer(&mut best, mc_sum(&orbit, k1), || McWitness {
                field: orbit.field(),
                orbit: orbit.label(),
                k1,
            });
        }
    }
    Ok(best.expect("full orbit is nonempty"))
}

/// `mc(r)` with `k2` ranging over `A` and the summation restricted to
/// `(D/k) = (D/(r − k2))`. For an imaginary field this restriction selects
/// the conjugate orbit, so split orbits give an empty sum.
pub fn mc_literal(r: u64, filter: &dyn Fn(QuadField) -> bool) -> Result<Minimum<McWitness>> {
    let mut best = None;
    for orbit in mc_orbits(r, filter)? {
        for &k2 in orbit.members() {
            let k1 = (r - k2) % r;
            let total: u64 = orbit
                .members()
                .iter()
                .filter(|&&k| k != k1)
                .filter(|&&k| match orbit.field() {
                    Some(f) => field_character(f, k) == field_character(f, k1),
                    None => true,
                })
                .map(|&k| (k2 + k) % r)
                .sum();
            Minimum::offer(&mut best, rat(total as i64, r as i64), || McWitness {
                field: orbit.field(),
                orbit: orbit.label(),
                k1,
            });
        }
    }
    Ok(best.expect("full orbit is nonempty"))
}

fn shifted_sum(d: u64, members: impl Iterator<Item = u64>, a: u64) -> u64 {
    members.map(|b| (b + a) % d).sum()
}

/// `c_min(d) = min_a Σ_{0<b<d, (b,d)=1} {(b + a)/d}`, witness `a`.
pub fn c_min(d: u64) -> Minimum<u64> {
    assert!(d >= 1);
    let bs: Vec<u64> = units(d).into_iter().filter(|&b| b > 0).collect();
    let mut best = None;
    for a in 0..d {
        let s = shifted_sum(d, bs.iter().copied(), a);
        Minimum::offer(&mut best, rat(s as i64, d as i64), || a);
    }
    best.expect("d >= 1")
}

/// `c_min^red(d)`: as `c_min` but summing over one Kronecker orbit, minimised
/// over orbits and admissible split fields.
pub fn c_min_red(d: u64, filter: &dyn Fn(QuadField) -> bool) -> Result<Minimum<CMinRedWitness>> {
    let fields: Vec<QuadField> = suitable_fields(d)?.into_iter().filter(|&f| filter(f)).collect();
    if fields.is_empty() {
        return Err(Error::UseCMin(d));
    }
    let mut best = None;
    for field in fields {
        let (p, m) = orbit_sets(d, field)?;
        for orbit in [p, m] {
            for a in 0..d {
                let s = shifted_sum(d, orbit.members().iter().copied(), a);
                Minimum::offer(&mut best, rat(s as i64, d as i64), || CMinRedWitness {
                    field,
                    orbit: orbit.label(),
                    a,
                });
            }
        }
    }
    Ok(best.expect("nonempty"))
}

/// Least contribution of `Hom(W, V_d)` when `W` carries `ζ_r^{k1}`:
/// `Σ {a/d + k1/r}` over the units, or over the cheaper Kronecker orbit
/// when the `d`-th cyclotomic polynomial splits over the field.
pub fn hom_contribution(d: u64, r: u64, k1: u64, field: QuadField) -> Result<Rational> {
    if d == 0 || r == 0 || k1.gcd(&r) != 1 {
        return Err(Error::InvalidArgument(format!("k1 = {k1} is not a unit mod {r}")));
    }
    if checked_reducible(d, field)? {
        let (p, m) = orbit_sets(d, field)?;
        Ok(std::cmp::min(shifted_orbit_sum(&p, r, k1), shifted_orbit_sum(&m, r, k1)))
    } else {
        Ok(shifted_orbit_sum(&OrbitSet::full(d), r, k1))
    }
}

/// `Σ_{a ∈ A} {a/d + k1/r}` for one orbit `A` mod `d`.
pub fn shifted_orbit_sum(orbit: &OrbitSet, r: u64, k1: u64) -> Rational {
    let d = orbit.d();
    let dr = d * r;
    let total: u64 = orbit.members().iter().map(|&a| (a * r + k1 * d) % dr).sum();
    rat(total as i64, dr as i64)
}
