//! Reid–Tai sums, their minima over cyclotomic orbits, and the finite
//! searches that bound them.

mod cases;
mod enumerate;
mod minima;
mod patterns;

pub use cases::{
    case_analysis, dimension_coefficient, dimension_count, CaseId, CaseReport, DecompositionProfile,
    ProfileItem, CONTRIBUTING_D,
};
pub use enumerate::{
    enumerate_exceptional_orders, enumerate_small_d, exceptional_lower_bound, small_d_lower_bound,
    tabulated_exceptional_orders, tabulated_small_d, ExceptionalRow, EXCEPTIONAL_TABLE_A, EXCEPTIONAL_TABLE_B,
    EXCEPTIONAL_TABLE_C,
};
pub use minima::{
    c_min, c_min_red, hom_contribution, mc, shifted_orbit_sum, mc_literal, mc_sum, CMinRedWitness, McWitness, Minimum,
};
pub use patterns::{qr_allowed_patterns, QrPatterns, RootOfUnity};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::{frac, int, rat, Rational};

/// Eigenvalues `ζ_m^{a_i}` of a finite-order linear map, as exponents mod `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EigenSystem {
    order: u64,
    exponents: Vec<u64>,
}

impl EigenSystem {
    /// Exponents are reduced mod `order`; the multiset must be nonempty.
    pub fn new(order: u64, exponents: impl IntoIterator<Item = i64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("eigen system of order 0".into()));
        }
        let exponents: Vec<u64> = exponents
            .into_iter()
            .map(|a| a.rem_euclid(order as i64) as u64)
            .collect();
        if exponents.is_empty() {
            return Err(Error::InvalidArgument("empty eigen system".into()));
        }
        Ok(EigenSystem { order, exponents })
    }

    /// From exact exponents in `[0,1)`: the order is the lcm of denominators.
    pub fn from_fractions(fracs: &[Rational]) -> Result<Self> {
        let order = fracs.iter().fold(1u64, |acc, q| {
            let den: u64 = q.denom().try_into().unwrap_or(0);
            acc.lcm(&den.max(1))
        });
        let exps = fracs.iter().map(|q| {
            let q = frac(q) * int(order as i64);
            i64::try_from(q.to_integer()).expect("exponent fits")
        });
        Self::new(order, exps.collect::<Vec<_>>())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// Eigenvalues of the inverse map.
    pub fn inverse(&self) -> Self {
        let m = self.order;
        EigenSystem {
            order: m,
            exponents: self.exponents.iter().map(|&a| (m - a) % m).collect(),
        }
    }

    /// Eigenvalues of the `f`-th power.
    pub fn power(&self, f: u64) -> Self {
        let m = self.order;
        EigenSystem {
            order: m,
            exponents: self.exponents.iter().map(|&a| a * f % m).collect(),
        }
    }

    /// Same eigenvalues written over `ζ_{cm}`.
    pub fn rescaled(&self, c: u64) -> Self {
        assert!(c > 0);
        EigenSystem {
            order: self.order * c,
            exponents: self.exponents.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn nontrivial_count(&self) -> usize {
        self.exponents.iter().filter(|&&a| a != 0).count()
    }
}

/// `Σ a_i / m`.
pub fn reid_tai_sum(es: &EigenSystem) -> Rational {
    let total: u64 = es.exponents.iter().sum();
    rat(total as i64, es.order as i64)
}

/// `Σ′(g^f) = {f a_n / k} + Σ_{i<n} {f a_i / (l k)}`; the last exponent is
/// the exceptional one.
pub fn sigma_prime(exponents: &[i64], l: u64, k: u64, f: u64) -> Result<Rational> {
    if l == 0 || k == 0 {
        return Err(Error::InvalidArgument("l and k must be positive".into()));
    }
    if f == 0 || f >= k {
        return Err(Error::InvalidArgument(format!("power f = {f} outside [1, {k})")));
    }
    let (last, rest) = exponents
        .split_last()
        .ok_or_else(|| Error::InvalidArgument("no exponents".into()))?;
    let (f, l, k) = (f as i64, l as i64, k as i64);
    let mut total = frac(&rat(f * last, k));
    for a in rest {
        total += frac(&rat(f * a, l * k));
    }
    Ok(total)
}

/// Exactly one eigenvalue differs from 1.
pub fn is_quasi_reflection(es: &EigenSystem) -> bool {
    es.nontrivial_count() == 1
}
