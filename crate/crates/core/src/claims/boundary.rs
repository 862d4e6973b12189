use rayon::prelude::*;
use serde_json::json;

use super::{Computed, Context, Outcome};
use crate::cusp::random::{
    order_two_element, random_elem, random_frame, random_gram, random_matrix, random_nf, random_rational, random_uf,
    random_wf, seeded_rng,
};
use crate::cusp::{
    apply_boundary_action, boundary_divisor_fixed, boundary_tangent_exponents, check_qr_congruences, is_in_nf, is_in_uf,
    is_in_wf, normalize_cusp_basis, uf_lattice_generator, uf_lattice_generator_scan, uf_lattice_half_formula,
    uf_lattice_lcm_formula, BoundaryElement, BoundaryPoint,
};
use crate::error::Result;
use crate::qfield::{int, QuadField};
use crate::reidtai::{is_quasi_reflection, reid_tai_sum};

pub const FRAME_FIELDS: [i64; 7] = [-5, -6, -7, -10, -11, -13, -15];

fn field(d: i64) -> QuadField {
    QuadField::new(d).expect("squarefree")
}

fn sweep<T: Send>(ctx: &Context, fields: &[i64], f: impl Fn(i64, u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let jobs: Vec<(i64, u64)> =
        fields.iter().flat_map(|&d| (0..ctx.bounds.samples as u64).map(move |i| (d, i))).collect();
    jobs.par_iter().map(|&(d, i)| f(d, i)).collect()
}

fn dimension_for(index: u64) -> usize {
    2 + (index % 3) as usize
}

fn zero_failures(out: &mut Outcome, label: &str, fails: usize, witness: Option<serde_json::Value>) {
    let c = Computed::equals(label, json!(fails), json!(0));
    out.push(match witness {
        Some(w) => c.with_witness(w),
        None => c,
    });
}

fn first_failure(flags: &[(i64, u64, bool)]) -> Option<serde_json::Value> {
    flags.iter().find(|(_, _, ok)| !ok).map(|(d, i, _)| json!({ "D": d, "sample": i }))
}

fn base(ctx: &Context, fields: &[i64]) -> Outcome {
    Outcome::default()
        .input("fields", json!(fields))
        .bound("samples_per_field", json!(ctx.bounds.samples))
}

pub fn cusp_normalization(ctx: &Context) -> Result<Outcome> {
    let flags = sweep(ctx, &FRAME_FIELDS, |d, i| {
        let mut rng = seeded_rng(ctx.seed, d, i);
        let fr = random_frame(&mut rng, field(d), dimension_for(i));
        let qp = random_gram(&mut rng, &fr);
        let (nm, out) = normalize_cusp_basis(&qp, fr.n())?;
        let ok = nm.adjoint().mul(&qp)?.mul(&nm)? == out.gram() && out.a() == fr.a() && out.n() == fr.n();
        Ok((d, i, ok))
    })?;
    let fails = flags.iter().filter(|f| !f.2).count();
    let mut out = base(ctx, &FRAME_FIELDS);
    out.push(Computed::info("frames", json!(flags.len())));
    zero_failures(&mut out, "normalization_failures", fails, first_failure(&flags));
    Ok(out)
}

pub fn cusp_group_laws(ctx: &Context) -> Result<Outcome> {
    let rows = sweep(ctx, &FRAME_FIELDS, |d, i| {
        let mut rng = seeded_rng(ctx.seed, d, i);
        let k = field(d);
        let fr = random_frame(&mut rng, k, dimension_for(i));
        let (g1, g2) = (random_nf(&mut rng, &fr), random_nf(&mut rng, &fr));
        let prod = g1.compose(&g2)?;
        let closure = is_in_nf(&prod, &fr) && is_in_nf(&g1.inverse()?, &fr);
        let (w1, w2) = (random_wf(&mut rng, &fr), random_wf(&mut rng, &fr));
        let w_closed = is_in_wf(&w1.compose(&w2)?, &fr) && is_in_wf(&w1.inverse()?, &fr);
        let u = random_uf(&mut rng, &fr);
        let central = is_in_uf(&u, &fr) && u.compose(&w1)? == w1.compose(&u)?;
        let q = fr.gram();
        let gm = g1.to_matrix();
        let form = gm.adjoint().mul(&q)?.mul(&gm)? == q;
        let pt = BoundaryPoint::finite(random_elem(&mut rng, k), random_matrix(&mut rng, k, fr.n() - 1, 1));
        let lhs = apply_boundary_action(&prod, &pt, &fr)?;
        let rhs = apply_boundary_action(&g1, &apply_boundary_action(&g2, &pt, &fr)?, &fr)?;
        Ok([(d, i, closure), (d, i, w_closed), (d, i, central), (d, i, form), (d, i, lhs == rhs)])
    })?;
    let mut out = base(ctx, &FRAME_FIELDS);
    out.push(Computed::info("frames", json!(rows.len())));
    let names = ["nf_closure_failures", "wf_closure_failures", "uf_centrality_failures", "form_failures", "action_failures"];
    for (j, name) in names.iter().enumerate() {
        let col: Vec<_> = rows.iter().map(|r| r[j]).collect();
        zero_failures(&mut out, name, col.iter().filter(|f| !f.2).count(), first_failure(&col));
    }
    Ok(out)
}

pub fn sigma_oracle(ctx: &Context) -> Result<Outcome> {
    // two fields per congruence class of D mod 4, plus D = -1 and -3
    let fields = [-1i64, -2, -5, -6, -10, -14, -3, -7, -11, -15, -19, -23];
    let rows = sweep(ctx, &fields, |d, i| {
        let mut rng = seeded_rng(ctx.seed ^ 0x5167, d, i);
        let k = field(d);
        let (e, f) = (random_rational(&mut rng, 12, 9), random_rational(&mut rng, 12, 9));
        // every fifth sample is degenerate in one coordinate
        let a = match i % 5 {
            0 => k.elem(e.clone(), int(0)),
            1 => k.elem(int(0), f.clone()),
            _ => k.elem(e, f),
        };
        if a.is_zero() {
            return Ok((d, i, true, None, None));
        }
        let g = uf_lattice_generator(&a)?;
        let scan = uf_lattice_generator_scan(&a, 1_000_000);
        let lcm = uf_lattice_lcm_formula(&a).map(|v| v == g);
        let half = uf_lattice_half_formula(&a).map(|v| v == g);
        Ok((d, i, scan.as_ref() == Some(&g), lcm, half))
    })?;
    let flags: Vec<_> = rows.iter().map(|r| (r.0, r.1, r.2)).collect();
    let lcm: Vec<_> = rows.iter().filter_map(|r| r.3.map(|ok| (r.0, r.1, ok))).collect();
    let half: Vec<_> = rows.iter().filter_map(|r| r.4.map(|ok| (r.0, r.1, ok))).collect();
    let mut out = base(ctx, &fields);
    out.push(Computed::info("samples", json!(flags.len())));
    zero_failures(&mut out, "scan_mismatches", flags.iter().filter(|f| !f.2).count(), first_failure(&flags));
    out.push(Computed::info("lcm_formula_samples", json!(lcm.len())));
    zero_failures(&mut out, "lcm_formula_mismatches", lcm.iter().filter(|f| !f.2).count(), first_failure(&lcm));
    out.push(Computed::info("half_constant_samples", json!(half.len())));
    out.push(
        Computed::info("half_constant_mismatches", json!(half.iter().filter(|f| !f.2).count()))
            .with_witness(first_failure(&half)),
    );
    Ok(out)
}

pub fn boundary_order2(ctx: &Context) -> Result<Outcome> {
    let rows = sweep(ctx, &FRAME_FIELDS, |d, i| {
        let mut rng = seeded_rng(ctx.seed ^ 0x0202, d, i);
        let fr = random_frame(&mut rng, field(d), dimension_for(i));
        let (g, w0) = order_two_element(&mut rng, &fr);
        let sigma = fr.lattice_generator();
        let squared = g.compose(&g)?;
        let in_uf_z = crate::cusp::is_in_uf_z(&squared, &fr) || crate::cusp::is_in_uf_z(&squared.negate(), &fr);
        let congr = check_qr_congruences(&g, &fr, &sigma)?;
        let es = boundary_tangent_exponents(&g, &w0, &fr, &sigma)?;
        let pm1 = es.exponents().iter().all(|&a| (2 * a) % es.order() == 0);
        let qr = is_quasi_reflection(&es);
        let sum_ok = qr || reid_tai_sum(&es) >= int(1);
        Ok(((d, i, in_uf_z), (d, i, congr), (d, i, pm1), (d, i, sum_ok), qr))
    })?;
    let mut out = base(ctx, &FRAME_FIELDS);
    out.push(Computed::info("elements", json!(rows.len())));
    out.push(Computed::info("quasi_reflections", json!(rows.iter().filter(|r| r.4).count())));
    let cols: [(&str, Vec<(i64, u64, bool)>); 4] = [
        ("square_not_in_uf_z", rows.iter().map(|r| r.0).collect()),
        ("congruence_failures", rows.iter().map(|r| r.1).collect()),
        ("eigenvalue_not_pm1", rows.iter().map(|r| r.2).collect()),
        ("non_qr_sum_below_1", rows.iter().map(|r| r.3).collect()),
    ];
    for (name, col) in cols {
        zero_failures(&mut out, name, col.iter().filter(|f| !f.2).count(), first_failure(&col));
    }
    Ok(out)
}

pub fn no_boundary_divisor(ctx: &Context) -> Result<Outcome> {
    let rows = sweep(ctx, &FRAME_FIELDS, |d, i| {
        let mut rng = seeded_rng(ctx.seed ^ 0xd1, d, i);
        let fr = random_frame(&mut rng, field(d), dimension_for(i));
        let (g, _) = order_two_element(&mut rng, &fr);
        let h: BoundaryElement = random_nf(&mut rng, &fr);
        let a = boundary_divisor_fixed(&g, &fr)?;
        // a random N(F) element may be trivial in the quotient; skip it then
        let b = boundary_divisor_fixed(&h, &fr).unwrap_or(false);
        Ok((d, i, !a && !b))
    })?;
    let mut out = base(ctx, &FRAME_FIELDS);
    out.push(Computed::info("elements", json!(2 * rows.len())));
    zero_failures(&mut out, "divisor_fixed", rows.iter().filter(|f| !f.2).count(), first_failure(&rows));
    Ok(out)
}
