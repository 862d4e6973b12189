use std::collections::BTreeSet;

use serde::Serialize;

use crate::cyclo::{euler_phi, phi_table};
use crate::qfield::{rat, Rational};

/// `Σ_{j=1}^{φ(r)/2 − 1} j/r`, the crude lower bound for `mc(r)`.
pub fn exceptional_lower_bound(r: u64) -> Rational {
    let t = (euler_phi(r) / 2) as i64;
    rat((t - 1) * t, 2 * r as i64)
}

/// `Σ_{j=1}^{⌊φ(d)/2⌋} j/d`, the crude lower bound for a `Hom(W, V_d)` term.
pub fn small_d_lower_bound(d: u64) -> Rational {
    let t = (euler_phi(d) / 2) as i64;
    rat(t * (t + 1), 2 * d as i64)
}

/// All `r ∈ [3, limit]` whose crude bound stays below 1.
pub fn enumerate_exceptional_orders(limit: u64) -> Vec<u64> {
    let phi = phi_table(limit as usize);
    (3..=limit)
        .filter(|&r| {
            let t = phi[r as usize] / 2;
            // (t − 1) t / (2r) < 1
            t.saturating_sub(1) * t < 2 * r
        })
        .collect()
}

/// All `d ∈ [1, limit]` whose crude bound stays below 1.
pub fn enumerate_small_d(limit: u64) -> Vec<u64> {
    let phi = phi_table(limit as usize);
    (1..=limit)
        .filter(|&d| {
            let t = phi[d as usize] / 2;
            t * (t + 1) < 2 * d
        })
        .collect()
}

/// One row of a published exceptional-order table: admissible exponents and
/// primes, expanded by [`ExceptionalRow::values`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalRow {
    pub shape: &'static str,
    pub a: &'static [u32],
    pub b: &'static [u32],
    pub p: &'static [u64],
    pub q: &'static [u64],
}

impl ExceptionalRow {
    pub fn values(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &a in self.a {
            for &b in self.b {
                for &p in self.p {
                    for &q in self.q {
                        let r = match self.shape {
                            "2^a p^b q" => 2u64.pow(a) * p.pow(b) * q,
                            "p^a q^b" => p.pow(a) * q.pow(b),
                            _ => p.pow(a),
                        };
                        out.push(r);
                    }
                }
            }
        }
        out
    }
}

/// `r = 2^a p^b q`.
pub const EXCEPTIONAL_TABLE_A: &[ExceptionalRow] = &[
    ExceptionalRow { shape: "2^a p^b q", a: &[1, 2], b: &[1], p: &[3], q: &[5, 7] },
    ExceptionalRow { shape: "2^a p^b q", a: &[1], b: &[1], p: &[3], q: &[11] },
    ExceptionalRow { shape: "2^a p^b q", a: &[1], b: &[1], p: &[3], q: &[13] },
    ExceptionalRow { shape: "2^a p^b q", a: &[1], b: &[2], p: &[3], q: &[5] },
    ExceptionalRow { shape: "2^a p^b q", a: &[1], b: &[1], p: &[5], q: &[7] },
];

/// `r = p^a q^b`.
pub const EXCEPTIONAL_TABLE_B: &[ExceptionalRow] = &[
    ExceptionalRow { shape: "p^a q^b", a: &[1], b: &[1], p: &[2], q: &[3, 5, 7, 11, 13, 17, 19] },
    ExceptionalRow { shape: "p^a q^b", a: &[1], b: &[1], p: &[3], q: &[5, 7] },
    ExceptionalRow { shape: "p^a q^b", a: &[2], b: &[1], p: &[2], q: &[3, 5, 7] },
    ExceptionalRow { shape: "p^a q^b", a: &[2, 3], b: &[2], p: &[2], q: &[3] },
    ExceptionalRow { shape: "p^a q^b", a: &[1], b: &[2], p: &[2], q: &[5] },
    ExceptionalRow { shape: "p^a q^b", a: &[3], b: &[1], p: &[2], q: &[3, 5] },
    ExceptionalRow { shape: "p^a q^b", a: &[4], b: &[1], p: &[2], q: &[3] },
    ExceptionalRow { shape: "p^a q^b", a: &[2], b: &[1], p: &[3], q: &[2] },
    ExceptionalRow { shape: "p^a q^b", a: &[3], b: &[1], p: &[3], q: &[2] },
];

/// `r = p^a`.
pub const EXCEPTIONAL_TABLE_C: &[ExceptionalRow] = &[
    ExceptionalRow { shape: "p^a", a: &[1], b: &[0], p: &[2, 3, 5, 7], q: &[1] },
    ExceptionalRow { shape: "p^a", a: &[2], b: &[0], p: &[3], q: &[1] },
    ExceptionalRow { shape: "p^a", a: &[1, 2, 3, 4, 5], b: &[0], p: &[2], q: &[1] },
];

/// Union of the three published tables as explicit integers `r >= 3`.
pub fn tabulated_exceptional_orders() -> BTreeSet<u64> {
    [EXCEPTIONAL_TABLE_A, EXCEPTIONAL_TABLE_B, EXCEPTIONAL_TABLE_C]
        .iter()
        .flat_map(|t| t.iter())
        .flat_map(|row| row.values())
        .filter(|&r| r >= 3)
        .collect()
}

/// The published list of `d` with crude bound below 1.
pub fn tabulated_small_d() -> Vec<u64> {
    let mut v: Vec<u64> = (1..=10).collect();
    v.extend([12, 14, 15, 16, 18, 20, 22, 24, 26, 28, 30, 36, 40, 42, 48, 54, 60, 66, 84, 90]);
    v
}
