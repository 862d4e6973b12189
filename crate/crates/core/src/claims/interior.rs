use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use rayon::prelude::*;
use serde_json::json;

use super::{ints, q, q_map, Computed, Context, Outcome};
use crate::cyclo::{euler_phi, is_reducible, orbit_sets, suitable_fields, OrbitSet};
use crate::error::{Error, Result};
use crate::qfield::{int, is_squarefree, rat, QuadField, Rational};
use crate::reidtai::{
    c_min, c_min_red, case_analysis, dimension_coefficient, enumerate_exceptional_orders, enumerate_small_d, mc,
    mc_literal, mc_sum, qr_allowed_patterns, tabulated_exceptional_orders, tabulated_small_d, CaseId, CONTRIBUTING_D,
};

const R_LIMIT: u64 = 300;
const EXCEPTIONAL_LIMIT: u64 = 100_000;
const SMALL_D_LIMIT: u64 = 10_000;

fn in_range(ctx: &Context, f: QuadField) -> bool {
    let (lo, hi) = ctx.bounds.d_range;
    (lo..=hi).contains(&f.d().unsigned_abs())
}

fn range_json(ctx: &Context) -> serde_json::Value {
    json!([ctx.bounds.d_range.0, ctx.bounds.d_range.1])
}

pub fn cminred_table(_: &Context) -> Result<Outcome> {
    let expected = [
        (30, rat(11, 15)),
        (24, rat(5, 6)),
        (20, rat(4, 5)),
        (15, rat(11, 15)),
        (14, rat(4, 7)),
        (12, rat(1, 3)),
        (8, rat(1, 4)),
        (7, rat(4, 7)),
        (6, int(0)),
        (4, int(0)),
        (3, int(0)),
    ];
    let mut out = Outcome::default().input("fields", json!("all suitable D < 0"));
    for (d, e) in expected {
        let m = c_min_red(d, &|_| true)?;
        out.push(Computed::equals(format!("c_min_red({d})"), q(&m.value), q(&e)).with_witness(&m.witness));
    }
    Ok(out)
}

pub fn mc_ge_1_phi10(ctx: &Context) -> Result<Outcome> {
    let limit = ctx.bounds.r_limit.unwrap_or(R_LIMIT);
    let rs: Vec<u64> = (3..=limit).filter(|&r| euler_phi(r) >= 10).collect();
    let mins: Vec<_> = rs.par_iter().map(|&r| mc(r, &|_| true)).collect::<Result<_>>()?;
    let mut out = Outcome::default()
        .input("phi_at_least", json!(10))
        .input("fields", json!("all suitable D < 0"))
        .bound("r_limit", json!(limit));
    out.push(Computed::info("orders_checked", json!(rs.len())));
    for (r, m) in rs.iter().zip(mins) {
        out.push(Computed::at_least(format!("mc({r})"), &m.value, Rational::one()).with_witness(&m.witness));
    }
    Ok(out)
}

pub fn mc_ge_1_r9_16_18(ctx: &Context) -> Result<Outcome> {
    let mut out = Outcome::default().input("orders", ints([9u64, 16, 18])).bound("abs_d_range", range_json(ctx));
    for r in [9u64, 16, 18] {
        let filter = |f: QuadField| in_range(ctx, f);
        let m = mc(r, &filter)?;
        let lit = mc_literal(r, &filter)?;
        out.push(Computed::at_least(format!("mc({r})"), &m.value, Rational::one()).with_witness(&m.witness));
        out.push(Computed::info(format!("mc_literal({r})"), q(&lit.value)).with_witness(&lit.witness));
    }
    Ok(out)
}

pub fn mc_ge_1_phi4_filtered(_: &Context) -> Result<Outcome> {
    let rs: Vec<u64> = (3..=100).filter(|&r| euler_phi(r) == 4).collect();
    let filter = |f: QuadField| f.d() < -3;
    let mut out = Outcome::default().input("orders", ints(rs.clone())).input("fields", json!("D < -3"));
    for r in rs {
        let m = mc(r, &filter)?;
        let lit = mc_literal(r, &filter)?;
        out.push(Computed::at_least(format!("mc({r})"), &m.value, Rational::one()).with_witness(&m.witness));
        out.push(Computed::info(format!("mc_literal({r})"), q(&lit.value)).with_witness(&lit.witness));
    }
    Ok(out)
}

pub fn exceptional_orders(ctx: &Context) -> Result<Outcome> {
    let limit = ctx.bounds.r_limit.unwrap_or(EXCEPTIONAL_LIMIT);
    let found: BTreeSet<u64> = enumerate_exceptional_orders(limit).into_iter().collect();
    let tables: BTreeSet<u64> = tabulated_exceptional_orders().into_iter().filter(|&r| r <= limit).collect();
    let mut out = Outcome::default().bound("r_limit", json!(limit));
    out.push(Computed::equals("exceptional_orders", ints(found.iter().copied()), ints(tables.iter().copied())));
    out.push(Computed::info("count", json!(found.len())));
    out.push(Computed::info("not_in_tables", ints(found.difference(&tables).copied())));
    out.push(Computed::info("tabulated_not_found", ints(tables.difference(&found).copied())));
    Ok(out)
}

pub fn small_d_list(ctx: &Context) -> Result<Outcome> {
    let limit = ctx.bounds.d_limit.unwrap_or(SMALL_D_LIMIT);
    let found = enumerate_small_d(limit);
    let expected: Vec<u64> = tabulated_small_d().into_iter().filter(|&d| d <= limit).collect();
    let mut out = Outcome::default().bound("d_limit", json!(limit));
    out.push(Computed::info("count", json!(found.len())));
    out.push(Computed::equals("small_d", ints(found), ints(expected)));
    Ok(out)
}

/// `c_min^red(d)` over all suitable fields, falling back to `c_min(d)`.
fn reduced_minimum(d: u64) -> Result<(Rational, serde_json::Value)> {
    match c_min_red(d, &|_| true) {
        Ok(m) => Ok((m.value, json!({ "c_min_red": m.witness }))),
        Err(Error::UseCMin(_)) => {
            let m = c_min(d);
            Ok((m.value, json!({ "c_min": { "a": m.witness } })))
        }
        Err(e) => Err(e),
    }
}

pub fn cmin_contrib_lt1(ctx: &Context) -> Result<Outcome> {
    let limit = ctx.bounds.d_limit.unwrap_or(SMALL_D_LIMIT);
    // the j/d bound covers d outside φ⁻¹{2,4,6,8}; those are evaluated directly
    let mut candidates: BTreeSet<u64> = enumerate_small_d(limit).into_iter().collect();
    candidates.extend((1..=limit.min(100)).filter(|&d| [2, 4, 6, 8].contains(&euler_phi(d))));
    let cands: Vec<u64> = candidates.into_iter().filter(|&d| d <= limit).collect();
    let vals: Vec<(Rational, serde_json::Value)> = cands.par_iter().map(|&d| reduced_minimum(d)).collect::<Result<_>>()?;
    let mut below = Vec::new();
    let mut table = BTreeMap::new();
    for (d, (v, _)) in cands.iter().zip(&vals) {
        if *v < Rational::one() {
            below.push(*d);
        }
        table.insert(*d, v.clone());
    }
    let mut out = Outcome::default().bound("d_limit", json!(limit));
    out.push(Computed::info("candidates", ints(cands.clone())));
    out.push(Computed::info("minimum_per_d", q_map(&table)));
    out.push(Computed::equals("contributing_d", ints(below), ints(CONTRIBUTING_D)));
    Ok(out)
}

fn case_claim(case: CaseId, table: &[(u64, Rational)], omega: Option<Rational>, threshold: u64, full_table: bool) -> Result<Outcome> {
    let rep = case_analysis(case, threshold)?;
    let before = case_analysis(case, threshold - 1)?;
    let tag = case.name();
    let mut out = Outcome::default()
        .input("case", json!(tag))
        .input("orders", ints(case.orders().iter().copied()))
        .input("field", json!(case.field().map(|f| f.d())));
    for (d, e) in table {
        let v = rep.per_d_contribution.get(d).ok_or_else(|| Error::Inconsistency(format!("{tag}: no entry for d = {d}")))?;
        let w: Vec<_> = rep.items.iter().filter(|it| it.d == *d && it.contribution == *v).collect();
        out.push(Computed::equals(format!("{tag}.contribution({d})"), q(v), q(e)).with_witness(w.first()));
    }
    let below: Vec<u64> = rep.per_d_contribution.iter().filter(|(_, v)| **v < Rational::one()).map(|(d, _)| *d).collect();
    let printed: Vec<u64> = table.iter().map(|(d, _)| *d).collect();
    if full_table {
        out.push(Computed::equals(format!("{tag}.below_one"), ints(below), ints(printed)));
    } else {
        out.push(Computed::info(format!("{tag}.below_one"), ints(below)));
    }
    out.push(Computed::info(format!("{tag}.per_d"), q_map(&rep.per_d_contribution)));
    let om = Computed::info(format!("{tag}.omega"), q(&rep.omega.value));
    out.push(match omega {
        Some(e) => Computed::equals(format!("{tag}.omega"), q(&rep.omega.value), q(&e)),
        None => om,
    }
    .with_witness(&rep.omega));
    out.push(Computed::info(format!("{tag}.omega_credited"), json!(rep.omega_credited)));
    out.push(Computed::equals(format!("{tag}.threshold"), json!(rep.threshold), json!(threshold)));
    if let Some(s) = &rep.min_sigma {
        out.push(Computed::at_least(format!("{tag}.min_sum(n={threshold})"), s, Rational::one()).with_witness(&rep.worst_profile));
    }
    if let Some(s) = &before.min_sigma {
        out.push(
            Computed::below(format!("{tag}.min_sum(n={})", threshold - 1), s, Rational::one())
                .with_witness(&before.worst_profile),
        );
    }
    Ok(out)
}

pub fn case_phi2(_: &Context) -> Result<Outcome> {
    let t = [(1, rat(1, 6)), (2, rat(1, 6)), (3, rat(1, 3)), (4, rat(1, 2)), (6, rat(1, 3))];
    case_claim(CaseId::Phi2, &t, None, 7, true)
}

pub fn case_r7_14(_: &Context) -> Result<Outcome> {
    let t = [
        (1, rat(1, 14)),
        (2, rat(1, 14)),
        (3, rat(3, 7)),
        (4, rat(4, 7)),
        (6, rat(3, 7)),
        (7, rat(4, 7)),
        (14, rat(4, 7)),
    ];
    case_claim(CaseId::R7_14, &t, Some(rat(4, 7)), 8, true)
}

pub fn case_d_minus5(_: &Context) -> Result<Outcome> {
    let t = [
        (1, rat(1, 30)),
        (2, rat(1, 30)),
        (3, rat(5, 12)),
        (4, rat(8, 15)),
        (6, rat(5, 12)),
        (20, rat(4, 5)),
    ];
    case_claim(CaseId::DMinus5, &t, Some(rat(4, 5)), 9, true)
}

pub fn case_d_minus6(_: &Context) -> Result<Outcome> {
    case_claim(CaseId::DMinus6, &[(24, rat(5, 6))], Some(rat(5, 6)), 8, false)
}

pub fn case_d_minus15(_: &Context) -> Result<Outcome> {
    case_claim(CaseId::DMinus15, &[(15, rat(11, 15)), (30, rat(11, 15))], Some(rat(11, 15)), 11, false)
}

/// Least `mc_sum` over the orbits of `r` available over `field` (the full
/// orbit when `Φ_r` stays irreducible).
fn omega_over(r: u64, field: QuadField) -> Result<(Rational, serde_json::Value)> {
    let orbits = if is_reducible(r, field) {
        let (p, m) = orbit_sets(r, field)?;
        vec![p, m]
    } else {
        vec![OrbitSet::full(r)]
    };
    let mut best: Option<(Rational, serde_json::Value)> = None;
    for o in &orbits {
        for &k1 in o.members() {
            let v = mc_sum(o, k1);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, json!({ "r": r, "orbit": o.label(), "k1": k1 })));
            }
        }
    }
    Ok(best.expect("nonempty orbit"))
}

fn squarefree_fields(ctx: &Context) -> Vec<QuadField> {
    let (lo, hi) = ctx.bounds.d_range;
    (lo.max(1)..=hi)
        .filter(|&m| is_squarefree(m))
        .map(|m| QuadField::new(-(m as i64)).expect("squarefree"))
        .collect()
}

pub fn case2_other_d(ctx: &Context) -> Result<Outcome> {
    let fields: Vec<QuadField> = squarefree_fields(ctx).into_iter().filter(|f| f.d() < -3 && f.d() != -7).collect();
    let mut out = Outcome::default().input("orders", ints([7u64, 14])).bound("abs_d_range", range_json(ctx));
    let mut split_elsewhere = Vec::new();
    for r in [7u64, 14] {
        split_elsewhere.extend(suitable_fields(r)?.into_iter().filter(|f| f.d() != -7).map(|f| f.d()));
    }
    out.push(Computed::equals("other_splitting_fields", ints(split_elsewhere), ints(Vec::<i64>::new())));
    let vals: Vec<_> = fields
        .par_iter()
        .map(|&f| -> Result<_> {
            let a = omega_over(7, f)?;
            let b = omega_over(14, f)?;
            Ok(if b.0 < a.0 { (f, b) } else { (f, a) })
        })
        .collect::<Result<_>>()?;
    let worst = vals.into_iter().min_by(|x, y| x.1 .0.cmp(&y.1 .0));
    if let Some((f, (v, w))) = worst {
        out.push(Computed::at_least("omega_min_over_other_d", &v, Rational::one()).with_witness(json!({ "D": f.d(), "at": w })));
    }
    Ok(out)
}

pub fn case3_reduction(ctx: &Context) -> Result<Outcome> {
    let orders = [15u64, 20, 24, 30];
    let fields: Vec<QuadField> = squarefree_fields(ctx).into_iter().filter(|f| f.d() < -3).collect();
    let per_field: Vec<(i64, Rational)> = fields
        .par_iter()
        .map(|&f| -> Result<_> {
            let mut best: Option<Rational> = None;
            for r in orders {
                let (v, _) = omega_over(r, f)?;
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
            Ok((f.d(), best.expect("four orders")))
        })
        .collect::<Result<_>>()?;
    let mut below: Vec<i64> = per_field.iter().filter(|(_, v)| *v < Rational::one()).map(|(d, _)| *d).collect();
    below.sort_unstable();
    let table: BTreeMap<String, serde_json::Value> =
        per_field.iter().filter(|(_, v)| *v < int(2)).map(|(d, v)| (d.to_string(), q(v))).collect();
    let mut out = Outcome::default().input("orders", ints(orders)).bound("abs_d_range", range_json(ctx));
    out.push(Computed::info("omega_below_2", serde_json::to_value(table).expect("map")));
    out.push(Computed::equals("fields_with_omega_below_1", ints(below), ints([-15i64, -6, -5])));
    Ok(out)
}

pub fn dimension_count_coeffs(_: &Context) -> Result<Outcome> {
    let expected: [(u64, u64); 13] =
        [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (7, 3), (8, 2), (12, 2), (14, 3), (15, 4), (20, 4), (24, 4), (30, 4)];
    let mut out = Outcome::default();
    for (d, e) in expected {
        out.push(Computed::equals(format!("coefficient(nu_{d})"), json!(dimension_coefficient(d)?), json!(e)));
    }
    Ok(out)
}

pub fn v8_split(ctx: &Context) -> Result<Outcome> {
    let split: Vec<i64> = squarefree_fields(ctx).into_iter().filter(|&f| is_reducible(8, f)).map(|f| f.d()).rev().collect();
    let mut out = Outcome::default().input("d", json!(8)).bound("abs_d_range", range_json(ctx));
    let (lo, hi) = ctx.bounds.d_range;
    let expected: Vec<i64> = [-2i64, -1].into_iter().filter(|d| (lo..=hi).contains(&d.unsigned_abs())).collect();
    out.push(Computed::equals("fields_splitting_phi_8", ints(split), ints(expected)));
    Ok(out)
}

pub fn qr_patterns(_: &Context) -> Result<Outcome> {
    let cases: [(i64, &[u64]); 5] = [(-5, &[1, 2]), (-2, &[1, 2]), (-1, &[1, 2, 4]), (-3, &[1, 2, 3, 6]), (-7, &[1, 2])];
    let mut out = Outcome::default();
    for (d, e) in cases {
        let p = qr_allowed_patterns(QuadField::new(d)?);
        out.push(Computed::equals(format!("orders(D={d})"), ints(p.orders.iter().copied()), ints(e.iter().copied())).with_witness(&p.alpha));
    }
    Ok(out)
}

pub fn interior_thresholds(_: &Context) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut worst = 0;
    for case in CaseId::ALL {
        let t = case_analysis(case, 11)?.threshold.ok_or_else(|| Error::Inconsistency(format!("{case}: no threshold")))?;
        out.push(Computed::info(format!("threshold({case})"), json!(t)));
        worst = worst.max(t);
    }
    out.push(Computed::equals("max_threshold", json!(worst), json!(11)));
    Ok(out)
}
