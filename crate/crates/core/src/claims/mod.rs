//! Named, re-executable claims. Each claim runs its computation and returns
//! a [`Certificate`] with exact values, witnesses and a verdict.

mod boundary;
mod interior;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qfield::{fmt_rational, parse_rational, Rational};

/// Search limits shared by all claims. `None` means the claim's own default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub r_limit: Option<u64>,
    pub d_limit: Option<u64>,
    /// Range of `|D|` for sweeps over fields.
    pub d_range: (u64, u64),
    /// Random instances per field in the cusp sweeps.
    pub samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { r_limit: None, d_limit: None, d_range: (1, 1000), samples: 100 }
    }
}

/// How a computed value is judged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    /// Recorded only.
    Info,
    Equals(Value),
    AtLeast(Rational),
    Below(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Computed {
    pub label: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip)]
    check: Option<Check>,
}

impl Computed {
    pub fn info(label: impl Into<String>, value: Value) -> Self {
        Computed {
            label: label.into(),
            value,
            witness: None,
            relation: None,
            expected: None,
            pass: None,
            check: Some(Check::Info),
        }
    }

    pub fn equals(label: impl Into<String>, value: Value, expected: Value) -> Self {
        Computed { check: Some(Check::Equals(expected)), ..Self::info(label, value) }
    }

    pub fn at_least(label: impl Into<String>, value: &Rational, bound: Rational) -> Self {
        Computed { check: Some(Check::AtLeast(bound)), ..Self::info(label, q(value)) }
    }

    pub fn below(label: impl Into<String>, value: &Rational, bound: Rational) -> Self {
        Computed { check: Some(Check::Below(bound)), ..Self::info(label, q(value)) }
    }

    pub fn with_witness(mut self, w: impl Serialize) -> Self {
        self.witness = Some(serde_json::to_value(w).expect("serialisable witness"));
        self
    }

    /// Replaces the expectation, keeping the kind of check.
    fn override_expected(&mut self, raw: &str) -> Result<()> {
        let check = match self.check.take() {
            Some(Check::Info) | None => Check::Equals(parse_expected(raw)),
            Some(Check::Equals(_)) => Check::Equals(parse_expected(raw)),
            Some(Check::AtLeast(_)) => Check::AtLeast(parse_rational(raw)?),
            Some(Check::Below(_)) => Check::Below(parse_rational(raw)?),
        };
        self.check = Some(check);
        Ok(())
    }

    fn judge(&mut self) {
        let (relation, expected, pass) = match self.check.as_ref().expect("set on construction") {
            Check::Info => (None, None, None),
            Check::Equals(e) => (Some("="), Some(e.clone()), Some(canonical(&self.value) == canonical(e))),
            Check::AtLeast(b) => (Some(">="), Some(q(b)), Some(value_rational(&self.value).is_some_and(|v| v >= *b))),
            Check::Below(b) => (Some("<"), Some(q(b)), Some(value_rational(&self.value).is_some_and(|v| v < *b))),
        };
        self.relation = relation;
        self.expected = expected;
        self.pass = pass;
    }
}

fn parse_expected(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Rationals compare as reduced strings; integers written as JSON numbers
/// compare equal to the same integer written as a string.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::String(s) => match parse_rational(s) {
            Ok(r) => Value::String(fmt_rational(&r)),
            Err(_) => v.clone(),
        },
        Value::Array(xs) => Value::Array(xs.iter().map(canonical).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, x)| (k.clone(), canonical(x))).collect()),
        _ => v.clone(),
    }
}

fn value_rational(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok(),
        Value::Number(n) => parse_rational(&n.to_string()).ok(),
        _ => None,
    }
}

/// A rational as its `"p/q"` string.
pub fn q(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

/// A map `d ↦ rational` as a JSON object with `"p/q"` values.
pub fn q_map(m: &BTreeMap<u64, Rational>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), q(v))).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub claim_id: String,
    pub statement: String,
    pub inputs: BTreeMap<String, Value>,
    pub computed: Vec<Computed>,
    pub verdict: Verdict,
    pub bounds: BTreeMap<String, Value>,
    pub seed: u64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// What a claim body returns before judging.
#[derive(Debug, Default)]
pub struct Outcome {
    pub inputs: BTreeMap<String, Value>,
    pub bounds: BTreeMap<String, Value>,
    pub computed: Vec<Computed>,
}

impl Outcome {
    pub fn input(mut self, k: &str, v: Value) -> Self {
        self.inputs.insert(k.to_string(), v);
        self
    }

    pub fn bound(mut self, k: &str, v: Value) -> Self {
        self.bounds.insert(k.to_string(), v);
        self
    }

    pub fn push(&mut self, c: Computed) {
        self.computed.push(c);
    }
}

pub struct Context<'a> {
    pub bounds: &'a Bounds,
    pub seed: u64,
}

type ClaimFn = fn(&Context) -> Result<Outcome>;

pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    run: ClaimFn,
}

/// All registered claims, sorted by id.
pub fn registry() -> Vec<Claim> {
    let mut all = vec![
        Claim { id: "cminred_table", statement: "c_min^red(d) for the eleven contributing d with split fields", run: interior::cminred_table },
        Claim { id: "mc_ge_1_phi10", statement: "mc(r) >= 1 for every r with phi(r) >= 10, over all suitable D < 0", run: interior::mc_ge_1_phi10 },
        Claim { id: "mc_ge_1_r9_16_18", statement: "mc(r) >= 1 for r = 9, 16, 18 with no restriction on D < 0", run: interior::mc_ge_1_r9_16_18 },
        Claim { id: "mc_ge_1_phi4_filtered", statement: "mc(r) >= 1 for phi(r) = 4 when D < -3", run: interior::mc_ge_1_phi4_filtered },
        Claim { id: "exceptional_orders", statement: "orders r with (phi/2 - 1)(phi/2)/(2r) < 1 are exactly the three tabulated families", run: interior::exceptional_orders },
        Claim { id: "small_d_list", statement: "d with sum_{j <= phi(d)/2} j/d < 1", run: interior::small_d_list },
        Claim { id: "cmin_contrib_lt1", statement: "only d in {1,2,3,4,6,7,8,12,14,15,20,24,30} can contribute less than 1", run: interior::cmin_contrib_lt1 },
        Claim { id: "case_phi2", statement: "case phi(r) = 2: per-d table and threshold n - 1 >= 6", run: interior::case_phi2 },
        Claim { id: "case_r7_14", statement: "case r in {7,14}, D = -7: per-d table, omega term 4/7 and threshold n >= 8", run: interior::case_r7_14 },
        Claim { id: "case_d_minus5", statement: "case r in {15,20,24,30}, D = -5: d = 20 contributes 4/5, omega term 4/5", run: interior::case_d_minus5 },
        Claim { id: "case_d_minus6", statement: "case r in {15,20,24,30}, D = -6: d = 24 contributes 5/6", run: interior::case_d_minus6 },
        Claim { id: "case_d_minus15", statement: "case r in {15,20,24,30}, D = -15: d = 15, 30 contribute 11/15, threshold n >= 11", run: interior::case_d_minus15 },
        Claim { id: "case2_other_d", statement: "for r in {7,14} and D != -7 the omega component contributes at least 1", run: interior::case2_other_d },
        Claim { id: "case3_reduction", statement: "for r in {15,20,24,30} and D < -3 the omega component is below 1 only for D = -5, -6, -15", run: interior::case3_reduction },
        Claim { id: "dimension_count_coeffs", statement: "coefficients of nu_d in the dimension count", run: interior::dimension_count_coeffs },
        Claim { id: "v8_split", statement: "V_8 splits over Q(sqrt(D)) only for D = -1, -2", run: interior::v8_split },
        Claim { id: "qr_patterns", statement: "orders of the exceptional eigenvalue of a quasi-reflection per field", run: interior::qr_patterns },
        Claim { id: "interior_thresholds", statement: "every case forces sum >= 1 once n >= 11", run: interior::interior_thresholds },
        Claim { id: "cusp_normalization", statement: "the cusp basis change yields the anti-diagonal Gram shape with delta = 0", run: boundary::cusp_normalization },
        Claim { id: "cusp_group_laws", statement: "N(F), W(F) closure, U(F) centrality, form preservation and the action law", run: boundary::cusp_group_laws },
        Claim { id: "sigma_oracle", statement: "U(F)_Z generator agrees with a brute-force ring membership search", run: boundary::sigma_oracle },
        Claim { id: "boundary_order2", statement: "order-2 boundary elements have tangent eigenvalues +-1 and sum >= 1 unless quasi-reflections", run: boundary::boundary_order2 },
        Claim { id: "no_boundary_divisor", statement: "no nontrivial stabiliser element fixes the divisor theta = 0", run: boundary::no_boundary_divisor },
    ];
    all.sort_by_key(|c| c.id);
    all
}

/// `*` matches any run, `?` one character.
pub fn glob_match(pattern: &str, s: &str) -> bool {
    fn go(p: &[char], s: &[char]) -> bool {
        match (p.first(), s.first()) {
            (None, None) => true,
            (Some('*'), _) => go(&p[1..], s) || (!s.is_empty() && go(p, &s[1..])),
            (Some('?'), Some(_)) => go(&p[1..], &s[1..]),
            (Some(a), Some(b)) if a == b => go(&p[1..], &s[1..]),
            _ => false,
        }
    }
    let p: Vec<char> = pattern.chars().collect();
    let s: Vec<char> = s.chars().collect();
    go(&p, &s)
}

/// Claim ids matched by the selectors; `all` selects everything. Every
/// selector must match at least one claim.
pub fn select(selectors: &[String]) -> Result<Vec<&'static str>> {
    let reg = registry();
    let mut chosen = std::collections::BTreeSet::new();
    for sel in selectors {
        let pat = if sel == "all" { "*" } else { sel.as_str() };
        let hits: Vec<_> = reg.iter().filter(|c| glob_match(pat, c.id)).map(|c| c.id).collect();
        if hits.is_empty() {
            return Err(Error::UnknownClaim(sel.clone()));
        }
        chosen.extend(hits);
    }
    Ok(chosen.into_iter().collect())
}

/// Runs one claim; `expected` overrides expectations by computed label.
pub fn verify_claim(
    claim_id: &str,
    bounds: &Bounds,
    seed: u64,
    expected: &BTreeMap<String, String>,
) -> Result<Certificate> {
    let claim = registry()
        .into_iter()
        .find(|c| c.id == claim_id)
        .ok_or_else(|| Error::UnknownClaim(claim_id.to_string()))?;
    let ctx = Context { bounds, seed };
    let mut out = (claim.run)(&ctx)?;
    for c in &mut out.computed {
        if let Some(raw) = expected.get(&c.label) {
            c.override_expected(raw)?;
        }
        c.judge();
    }
    let all_pass = out.computed.iter().all(|c| c.pass != Some(false));
    let any_check = out.computed.iter().any(|c| c.pass.is_some());
    Ok(Certificate {
        claim_id: claim.id.to_string(),
        statement: claim.statement.to_string(),
        inputs: out.inputs,
        computed: out.computed,
        verdict: if all_pass && any_check { Verdict::Pass } else { Verdict::Fail },
        bounds: out.bounds,
        seed,
    })
}

/// Runs claims in parallel; results keep the order of `ids`.
pub fn verify_all(
    ids: &[&str],
    bounds: &Bounds,
    seed: u64,
    expected: &BTreeMap<String, String>,
) -> Vec<Result<Certificate>> {
    ids.par_iter().map(|id| verify_claim(id, bounds, seed, expected)).collect()
}

/// A JSON list of integers.
pub fn ints<I: IntoIterator<Item = T>, T: Into<i128>>(xs: I) -> Value {
    Value::Array(xs.into_iter().map(|x| json!(x.into() as i64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::rat;

    #[test]
    fn globs() {
        assert!(glob_match("case_*", "case_phi2"));
        assert!(glob_match("mc_ge_1_phi??", "mc_ge_1_phi10"));
        assert!(!glob_match("case_?", "case_phi2"));
        assert!(glob_match("*", ""));
    }

    #[test]
    fn selection() {
        assert_eq!(select(&["case_d_*".into()]).unwrap(), vec!["case_d_minus15", "case_d_minus5", "case_d_minus6"]);
        assert_eq!(select(&["all".into()]).unwrap().len(), registry().len());
        assert!(matches!(select(&["nope".into()]), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn registry_ids_are_unique() {
        let reg = registry();
        let ids: std::collections::BTreeSet<_> = reg.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), reg.len());
    }

    #[test]
    fn judging() {
        let mut c = Computed::equals("x", q(&rat(2, 4)), json!("1/2"));
        c.judge();
        assert_eq!(c.pass, Some(true));
        let mut c = Computed::equals("n", json!(7), json!("7"));
        c.judge();
        assert_eq!(c.pass, Some(true));
        let mut c = Computed::at_least("m", &rat(6, 5), rat(1, 1));
        c.judge();
        assert_eq!(c.pass, Some(true));
        c.override_expected("2").unwrap();
        c.judge();
        assert_eq!(c.pass, Some(false));
        let mut c = Computed::equals("s", ints([1u64, 2]), ints([1u64, 2]));
        c.override_expected("[1,3]").unwrap();
        c.judge();
        assert_eq!(c.pass, Some(false));
    }
}
