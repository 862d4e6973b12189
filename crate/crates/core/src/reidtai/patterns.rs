use std::fmt;

use serde::{Serialize, Serializer};

use crate::cyclo::{euler_phi, is_reducible};
use crate::qfield::QuadField;

/// `ζ_n^k`, reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exponent) {
            (1, _) => f.write_str("1"),
            (2, _) => f.write_str("-1"),
            (n, 1) => write!(f, "zeta_{n}"),
            (n, k) => write!(f, "zeta_{n}^{k}"),
        }
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// What a quasi-reflection `h` may look like over a given field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QrPatterns {
    pub field: QuadField,
    /// Admissible eigenvalues `α(h)` on the isotropic line, up to conjugation.
    pub alpha: Vec<RootOfUnity>,
    /// Admissible orders of the exceptional eigenvalue.
    pub orders: Vec<u64>,
}

/// Orders `e` whose primitive roots can form a one-dimensional summand over
/// Q(√D): `φ(e) = 1`, or `φ(e) = 2` with the cyclotomic polynomial split.
pub fn qr_allowed_patterns(field: QuadField) -> QrPatterns {
    let orders: Vec<u64> = (1..=6u64)
        .filter(|&e| {
            let p = euler_phi(e);
            p == 1 || (p == 2 && is_reducible(e, field))
        })
        .collect();
    let mut alpha = vec![
        RootOfUnity { order: 1, exponent: 0 },
        RootOfUnity { order: 2, exponent: 1 },
    ];
    for &e in orders.iter().filter(|&&e| e > 2) {
        alpha.push(RootOfUnity { order: e, exponent: 1 });
    }
    QrPatterns { field, alpha, orders }
}
