//! The case split of the interior estimate: which `r = ord α(g)` and which
//! fields still allow `Σ(g) < 1`, and from which dimension on no
//! decomposition of `S_C` can keep the sum below 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use super::minima::{mc_sum, shifted_orbit_sum, McWitness};
use crate::cyclo::{euler_phi, is_reducible, orbit_sets, suitable_fields, units, OrbitSet};
use crate::error::{Error, Result};
use crate::qfield::{QuadField, Rational};

/// The `d` for which `V_d` may still contribute less than 1.
pub const CONTRIBUTING_D: [u64; 13] = [1, 2, 3, 4, 6, 7, 8, 12, 14, 15, 20, 24, 30];

/// Coefficient of `ν_d` in the dimension count: `φ(d)` for the orders
/// whose cyclotomic polynomial has degree at most 2, `φ(d)/2` otherwise.
pub fn dimension_coefficient(d: u64) -> Result<u64> {
    match d {
        1 | 2 | 3 | 4 | 6 => Ok(euler_phi(d)),
        7 | 8 | 12 | 14 | 15 | 20 | 24 | 30 => Ok(euler_phi(d) / 2),
        _ => Err(Error::InvalidArgument(format!("no dimension coefficient for d = {d}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionProfile {
    pub n: u64,
    pub r: u64,
    pub lambda: u64,
    pub nu: BTreeMap<u64, u64>,
    pub dim_vr: u64,
}

impl DecompositionProfile {
    pub fn is_consistent(&self) -> Result<bool> {
        Ok(dimension_count(self)? == self.n + 1)
    }
}

/// `dim V_r · λ + Σ coeff(d) ν_d`.
pub fn dimension_count(profile: &DecompositionProfile) -> Result<u64> {
    let mut total = profile.dim_vr * profile.lambda;
    for (&d, &nu) in &profile.nu {
        total += dimension_coefficient(d)? * nu;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseId {
    #[serde(rename = "PHI2")]
    Phi2,
    #[serde(rename = "R7_14")]
    R7_14,
    #[serde(rename = "D_MINUS5")]
    DMinus5,
    #[serde(rename = "D_MINUS6")]
    DMinus6,
    #[serde(rename = "D_MINUS15")]
    DMinus15,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [
        CaseId::Phi2,
        CaseId::R7_14,
        CaseId::DMinus5,
        CaseId::DMinus6,
        CaseId::DMinus15,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Phi2 => "PHI2",
            CaseId::R7_14 => "R7_14",
            CaseId::DMinus5 => "D_MINUS5",
            CaseId::DMinus6 => "D_MINUS6",
            CaseId::DMinus15 => "D_MINUS15",
        }
    }

    /// Orders `r` of `α(g)` covered by the case.
    pub fn orders(self) -> &'static [u64] {
        match self {
            CaseId::Phi2 => &[3, 4, 6],
            CaseId::R7_14 => &[7, 14],
            _ => &[15, 20, 24, 30],
        }
    }

    /// The fixed field, or `None` when every `D < −3` is allowed.
    pub fn field(self) -> Option<QuadField> {
        let d = match self {
            CaseId::Phi2 => return None,
            CaseId::R7_14 => -7,
            CaseId::DMinus5 => -5,
            CaseId::DMinus6 => -6,
            CaseId::DMinus15 => -15,
        };
        Some(QuadField::new(d).expect("squarefree"))
    }

    /// `dim V_r` of the summand containing the isotropic line.
    pub fn dim_vr(self) -> u64 {
        match self {
            CaseId::Phi2 => 2,
            CaseId::R7_14 => 3,
            _ => 4,
        }
    }

    /// Whether the threshold counts the `ω`-component. For `φ(r) = 2` the
    /// published threshold uses the `S_C` part alone.
    pub fn omega_credited(self) -> bool {
        self != CaseId::Phi2
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case {s}")))
    }
}

/// One way a copy of `V_d` can sit in `S_C`: its share of the dimension
/// and its least contribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileItem {
    pub d: u64,
    /// Field over which `V_d` splits, `None` for the irreducible summand.
    pub field: Option<QuadField>,
    pub coefficient: u64,
    #[serde(with = "crate::qfield::rational_str")]
    pub contribution: Rational,
    pub r: u64,
    pub k1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaTerm {
    #[serde(with = "crate::qfield::rational_str")]
    pub value: Rational,
    pub r: u64,
    pub witness: McWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case_id: CaseId,
    pub orders: Vec<u64>,
    pub field: Option<QuadField>,
    pub dim_vr: u64,
    #[serde(serialize_with = "crate::qfield::rational_str::map::serialize")]
    pub per_d_contribution: BTreeMap<u64, Rational>,
    pub items: Vec<ProfileItem>,
    pub omega: OmegaTerm,
    pub omega_credited: bool,
    /// Least `n` from which every profile gives `Σ(g) ≥ 1`.
    pub threshold: Option<u64>,
    /// Same, always crediting the `ω`-component.
    pub threshold_with_omega: Option<u64>,
    pub n: u64,
    /// Least attainable sum at `n`, `None` when `n + 1 < dim V_r`.
    #[serde(serialize_with = "crate::qfield::rational_str::option::serialize")]
    pub min_sigma: Option<Rational>,
    pub worst_profile: Option<DecompositionProfile>,
    /// The summands realising `min_sigma`.
    pub worst_choice: Vec<ProfileItem>,
    pub forced: bool,
}

fn case_items(case: CaseId) -> Result<Vec<ProfileItem>> {
    let mut items = Vec::new();
    for d in CONTRIBUTING_D {
        // the splitting options for this d: a list of (field, orbits)
        let mut options: Vec<(Option<QuadField>, Vec<OrbitSet>)> = Vec::new();
        match case.field() {
            Some(field) if is_reducible(d, field) => {
                let (p, m) = orbit_sets(d, field)?;
                options.push((Some(field), vec![p, m]));
            }
            Some(_) => options.push((None, vec![OrbitSet::full(d)])),
            None => {
                options.push((None, vec![OrbitSet::full(d)]));
                for field in suitable_fields(d)?.into_iter().filter(|f| f.d() < -3) {
                    let (p, m) = orbit_sets(d, field)?;
                    options.push((Some(field), vec![p, m]));
                }
            }
        }
        for (field, orbits) in options {
            let coefficient = if field.is_some() { euler_phi(d) / 2 } else { euler_phi(d) };
            let mut best: Option<ProfileItem> = None;
            for &r in case.orders() {
                for k1 in units(r) {
                    for orbit in &orbits {
                        let c = shifted_orbit_sum(orbit, r, k1);
                        if best.as_ref().is_none_or(|b| c < b.contribution) {
                            best = Some(ProfileItem { d, field, coefficient, contribution: c, r, k1 });
                        }
                    }
                }
            }
            items.push(best.expect("nonempty"));
        }
    }
    Ok(items)
}

fn omega_term(case: CaseId) -> Result<OmegaTerm> {
    let mut best: Option<OmegaTerm> = None;
    for &r in case.orders() {
        let orbits = match case.field() {
            Some(field) if is_reducible(r, field) => {
                let (p, m) = orbit_sets(r, field)?;
                vec![p, m]
            }
            Some(_) => continue,
            None => vec![OrbitSet::full(r)],
        };
        for orbit in &orbits {
            for &k1 in orbit.members() {
                let v = mc_sum(orbit, k1);
                if best.as_ref().is_none_or(|b| v < b.value) {
                    best = Some(OmegaTerm {
                        value: v,
                        r,
                        witness: McWitness { field: orbit.field(), orbit: orbit.label(), k1 },
                    });
                }
            }
        }
    }
    best.ok_or_else(|| Error::Inconsistency(format!("case {case} has no split order")))
}

/// `f(N)`: least total contribution over profiles of dimension `N`, with
/// back-pointers into `items`.
fn knapsack(items: &[ProfileItem], upto: u64) -> Vec<Option<(Rational, Option<usize>)>> {
    let mut best: Vec<Option<(Rational, Option<usize>)>> = vec![None; upto as usize + 1];
    best[0] = Some((Rational::zero(), None));
    for n in 1..=upto as usize {
        for (i, it) in items.iter().enumerate() {
            let c = it.coefficient as usize;
            if c == 0 || c > n {
                continue;
            }
            if let Some((prev, _)) = &best[n - c] {
                let v = prev + &it.contribution;
                if best[n].as_ref().is_none_or(|(b, _)| v < *b) {
                    best[n] = Some((v, Some(i)));
                }
            }
        }
    }
    best
}

fn threshold(
    table: &[Option<(Rational, Option<usize>)>],
    omega: &Rational,
    dim_vr: u64,
) -> u64 {
    let last_open = table
        .iter()
        .enumerate()
        .filter(|(_, e)| e.as_ref().is_some_and(|(v, _)| omega + v < Rational::one()))
        .map(|(n, _)| n as u64)
        .next_back();
    let n0 = last_open.map_or(0, |n| n + 1);
    (n0 + dim_vr).saturating_sub(1)
}

/// Scan bound past which `ρ N ≥ 1 − ω` holds for the cheapest rate `ρ`.
fn scan_bound(items: &[ProfileItem], omega: &Rational) -> Option<u64> {
    let rho = items
        .iter()
        .map(|it| &it.contribution / Rational::from_integer(it.coefficient.into()))
        .min()?;
    if rho.is_zero() {
        return None;
    }
    let need = (Rational::one() - omega) / rho;
    let max_coeff = items.iter().map(|it| it.coefficient).max().unwrap_or(0);
    let bound: u64 = need.ceil().to_integer().try_into().unwrap_or(0);
    Some(bound + max_coeff)
}

/// Recompute one case: per-`d` contributions, the `ω`-term, the threshold on
/// `n`, and the least sum attainable at the given `n`.
pub fn case_analysis(case: CaseId, n: u64) -> Result<CaseReport> {
    let items = case_items(case)?;
    let omega = omega_term(case)?;
    let dim_vr = case.dim_vr();
    let zero = Rational::zero();
    let credited = if case.omega_credited() { &omega.value } else { &zero };

    let mut per_d = BTreeMap::new();
    for it in &items {
        per_d
            .entry(it.d)
            .and_modify(|v: &mut Rational| {
                if it.contribution < *v {
                    *v = it.contribution.clone()
                }
            })
            .or_insert_with(|| it.contribution.clone());
    }

    let n_dim = (n + 1).checked_sub(dim_vr);
    let bound_plain = scan_bound(&items, credited);
    let bound_omega = scan_bound(&items, &omega.value);
    let upto = [bound_plain, bound_omega, n_dim].into_iter().flatten().max().unwrap_or(0);
    let table = knapsack(&items, upto);

    let thr = bound_plain.map(|b| threshold(&table[..=b as usize], credited, dim_vr));
    let thr_omega = bound_omega.map(|b| threshold(&table[..=b as usize], &omega.value, dim_vr));

    let mut worst_choice = Vec::new();
    let (min_sigma, worst_profile) = match n_dim.and_then(|m| table[m as usize].clone().map(|e| (m, e))) {
        Some((m, (v, _))) => {
            let mut nu = BTreeMap::new();
            let mut at = m as usize;
            while let Some((_, Some(i))) = &table[at] {
                *nu.entry(items[*i].d).or_insert(0) += 1;
                worst_choice.push(items[*i].clone());
                at -= items[*i].coefficient as usize;
            }
            let profile = DecompositionProfile { n, r: omega.r, lambda: 1, nu, dim_vr };
            (Some(credited + v), Some(profile))
        }
        None => (None, None),
    };
    let forced = thr.is_some_and(|t| n >= t);

    Ok(CaseReport {
        case_id: case,
        orders: case.orders().to_vec(),
        field: case.field(),
        dim_vr,
        per_d_contribution: per_d,
        items,
        omega,
        omega_credited: case.omega_credited(),
        threshold: thr,
        threshold_with_omega: thr_omega,
        n,
        min_sigma,
        worst_profile,
        worst_choice,
        forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;

    fn below_one(report: &CaseReport) -> BTreeMap<u64, Rational> {
        report
            .per_d_contribution
            .iter()
            .filter(|(_, v)| **v < Rational::one())
            .map(|(d, v)| (*d, v.clone()))
            .collect()
    }

    fn table(entries: &[(u64, i64, i64)]) -> BTreeMap<u64, Rational> {
        entries.iter().map(|&(d, p, q)| (d, rat(p, q))).collect()
    }

    #[test]
    fn dimension_coefficients() {
        let c = |d| dimension_coefficient(d).unwrap();
        assert_eq!([c(1), c(2), c(3), c(4), c(6)], [1, 1, 2, 2, 2]);
        assert_eq!([c(7), c(14)], [3, 3]);
        assert_eq!([c(8), c(12)], [2, 2]);
        assert_eq!([c(15), c(20), c(24), c(30)], [4, 4, 4, 4]);
        assert!(dimension_coefficient(5).is_err());
    }

    #[test]
    fn dimension_count_examples() {
        let p = DecompositionProfile {
            n: 9,
            r: 3,
            lambda: 1,
            nu: [(1, 2), (2, 0), (3, 1), (4, 1), (6, 1)].into_iter().collect(),
            dim_vr: 2,
        };
        // ν_1 + ν_2 + 2ν_3 + 2ν_4 + 2ν_6 = n − 1
        assert_eq!(dimension_count(&p).unwrap(), 10);
        assert!(p.is_consistent().unwrap());
        let q = DecompositionProfile { n: 5, r: 1, lambda: 1, nu: BTreeMap::new(), dim_vr: 6 };
        assert_eq!(dimension_count(&q).unwrap(), 6);
        let bad = DecompositionProfile { nu: [(5, 1)].into_iter().collect(), ..q };
        assert!(dimension_count(&bad).is_err());
    }

    #[test]
    fn case_phi2() {
        let rep = case_analysis(CaseId::Phi2, 7).unwrap();
        assert_eq!(below_one(&rep), table(&[(1, 1, 6), (2, 1, 6), (3, 1, 3), (4, 1, 2), (6, 1, 3)]));
        assert_eq!(rep.threshold, Some(7));
        assert!(rep.forced);
        assert_eq!(rep.omega.value, rat(1, 3));
        assert!(!case_analysis(CaseId::Phi2, 6).unwrap().forced);
    }

    #[test]
    fn case_r7_14() {
        let rep = case_analysis(CaseId::R7_14, 8).unwrap();
        assert_eq!(
            below_one(&rep),
            table(&[(1, 1, 14), (2, 1, 14), (3, 3, 7), (4, 4, 7), (6, 3, 7), (7, 4, 7), (14, 4, 7)])
        );
        assert_eq!(rep.omega.value, rat(4, 7));
        assert_eq!(rep.threshold, Some(8));
        assert!(rep.forced);
        assert_eq!(rep.min_sigma, Some(rat(1, 1)));
        let below = case_analysis(CaseId::R7_14, 7).unwrap();
        assert!(!below.forced);
        assert!(below.min_sigma.unwrap() < Rational::one());
    }

    #[test]
    fn case_three() {
        let common = [(1, 1, 30), (2, 1, 30), (3, 5, 12), (4, 8, 15), (6, 5, 12)];
        let with = |extra: &[(u64, i64, i64)]| {
            let mut t = table(&common);
            t.extend(table(extra));
            t
        };
        let a = case_analysis(CaseId::DMinus5, 9).unwrap();
        assert_eq!(below_one(&a), with(&[(20, 4, 5)]));
        assert_eq!(a.omega.value, rat(4, 5));
        assert_eq!(a.threshold, Some(9));
        assert!(!case_analysis(CaseId::DMinus5, 8).unwrap().forced);

        let b = case_analysis(CaseId::DMinus6, 8).unwrap();
        assert_eq!(below_one(&b), with(&[(24, 5, 6)]));
        assert_eq!(b.omega.value, rat(5, 6));
        assert_eq!(b.threshold, Some(8));
        assert!(!case_analysis(CaseId::DMinus6, 7).unwrap().forced);

        let c = case_analysis(CaseId::DMinus15, 11).unwrap();
        assert_eq!(below_one(&c), with(&[(15, 11, 15), (30, 11, 15)]));
        assert_eq!(c.omega.value, rat(11, 15));
        assert_eq!(c.threshold, Some(11));
        assert!(c.forced);
        assert!(!case_analysis(CaseId::DMinus15, 10).unwrap().forced);
    }

    #[test]
    fn worst_choice_fills_the_dimension() {
        for case in CaseId::ALL {
            for n in 3..16 {
                let rep = case_analysis(case, n).unwrap();
                let used: u64 = rep.worst_choice.iter().map(|it| it.coefficient).sum();
                assert_eq!(used + rep.dim_vr, n + 1);
                let credited = if rep.omega_credited { rep.omega.value.clone() } else { Rational::zero() };
                let total: Rational = credited + rep.worst_choice.iter().map(|it| it.contribution.clone()).sum::<Rational>();
                assert_eq!(Some(total), rep.min_sigma);
            }
        }
    }

    #[test]
    fn thresholds_monotone_in_n() {
        for case in CaseId::ALL {
            let t = case_analysis(case, 0).unwrap().threshold.unwrap();
            for n in t..t + 20 {
                assert!(case_analysis(case, n).unwrap().forced);
            }
        }
    }

    #[test]
    fn case_names_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.name().parse::<CaseId>().unwrap(), c);
        }
        assert!("nope".parse::<CaseId>().is_err());
    }
}
