use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{is_in_nf, BoundaryElement, CuspFrame};
use crate::cycfield::eigen_exponents;
use crate::error::{Error, Result};
use crate::qfield::{frac, int, QElem, QMatrix, Rational};
use crate::reidtai::EigenSystem;

/// Action of a torsion element on the tangent space at a fixed boundary
/// point `(0, w0)`: the torus direction `θ ↦ e^{2πiτ} θ` and the linear part
/// `X/z` on the `w` directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentAction {
    #[serde(with = "crate::qfield::rational_str")]
    pub torus: Rational,
    pub linear: EigenSystem,
    pub combined: EigenSystem,
}

fn require_nf(g: &BoundaryElement, frame: &CuspFrame) -> Result<()> {
    if is_in_nf(g, frame) {
        Ok(())
    } else {
        Err(Error::NotInGroup { group: "N(F)", reason: "a defining relation fails".into() })
    }
}

fn period_ratio(t: &QElem, period: &QElem) -> Result<Rational> {
    let q = t / period;
    if q.is_rational() {
        Ok(q.re().clone())
    } else {
        Err(Error::NonTorsion(format!("{t} is not a rational multiple of the period")))
    }
}

/// Full tangent data; see [`boundary_tangent_exponents`].
pub fn tangent_action(
    g: &BoundaryElement,
    w0: &QMatrix,
    frame: &CuspFrame,
    sigma: &Rational,
) -> Result<TangentAction> {
    require_nf(g, frame)?;
    if !(&g.z * g.z.conj()).is_one() {
        return Err(Error::Precondition("z is not a unit, so g cannot have finite order".into()));
    }
    let image = g.x.mul(w0)?.add(&g.y)?;
    if image != w0.scale(&g.z) {
        return Err(Error::Precondition("g does not fix the boundary point (0, w0)".into()));
    }
    let period = frame.a() * frame.field().sqrt_d().scale(sigma);
    let t = g.v.mul(w0)?[(0, 0)].clone() + &g.w;
    let torus = frac(&period_ratio(&(&t / &g.z), &period)?);
    let linear = eigen_exponents(&g.x.scale(&g.z.inv()?))?;
    let den = torus.denom().to_u64().ok_or_else(|| Error::NonTorsion("torus order overflows".into()))?;
    let l = linear.order().lcm(&den);
    let lin = linear.rescaled(l / linear.order());
    let tau_exp = (&torus * int(l as i64)).to_integer().to_i64().expect("bounded by l");
    let exps = std::iter::once(tau_exp).chain(lin.exponents().iter().map(|&e| e as i64));
    let combined = EigenSystem::new(l, exps.collect::<Vec<_>>())?;
    Ok(TangentAction { torus, linear, combined })
}

/// Eigenvalue exponents of `g` on the tangent space at `(0, w0)`, torus
/// direction first. `sigma` is the lattice generator `x̃0`.
pub fn boundary_tangent_exponents(
    g: &BoundaryElement,
    w0: &QMatrix,
    frame: &CuspFrame,
    sigma: &Rational,
) -> Result<EigenSystem> {
    tangent_action(g, w0, frame, sigma).map(|t| t.combined)
}

/// `v + vX = 0`, `Xy + y = 0` and `2w + vy ∈ σZ` after scaling to `z = 1`.
///
/// Needs `g ∈ N(F)`, `z = ±1` and `X² = I`; under these the three relations
/// hold exactly when `g² ∈ U(F)_Z`.
pub fn check_qr_congruences(g: &BoundaryElement, frame: &CuspFrame, sigma: &Rational) -> Result<bool> {
    require_nf(g, frame)?;
    let g = if g.z.is_one() {
        g.clone()
    } else if (-&g.z).is_one() {
        g.negate()
    } else {
        return Err(Error::Precondition("z is not ±1".into()));
    };
    if !g.x.mul(&g.x)?.is_identity() {
        return Err(Error::Precondition("X does not square to the identity".into()));
    }
    let period = frame.a() * frame.field().sqrt_d().scale(sigma);
    let r1 = g.v.add(&g.v.mul(&g.x)?)?.is_zero();
    let r2 = g.x.mul(&g.y)?.add(&g.y)?.is_zero();
    let two_w = &g.w + &g.w + &g.v.mul(&g.y)?[(0, 0)];
    let r3 = period_ratio(&two_w, &period).is_ok_and(|q| q.is_integer());
    Ok(r1 && r2 && r3)
}

/// Whether `g` fixes the divisor `θ = 0` pointwise, i.e. acts trivially on
/// the `w` coordinates. `g` must be nontrivial modulo scalars and `U(F)_Z`.
pub fn boundary_divisor_fixed(g: &BoundaryElement, frame: &CuspFrame) -> Result<bool> {
    require_nf(g, frame)?;
    let scalar_x = g.x == QMatrix::identity(frame.field(), g.x.rows()).scale(&g.z);
    let trivial_w = scalar_x && g.y.is_zero();
    if trivial_w && g.v.is_zero() && (&g.z * g.z.conj()).is_one() {
        let p = frame.period();
        if period_ratio(&(&g.w / &g.z), &p).is_ok_and(|q| q.is_integer()) {
            return Err(Error::Precondition("g is trivial modulo U(F)_Z".into()));
        }
    }
    Ok(trivial_w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp::random::{order_two_element, random_frame, random_nf, seeded_rng};
    use crate::qfield::{rat, QuadField};
    use crate::reidtai::{is_quasi_reflection, reid_tai_sum};

    fn frame(d: i64, idx: u64) -> CuspFrame {
        let mut rng = seeded_rng(7, d, idx);
        random_frame(&mut rng, QuadField::new(d).unwrap(), 4)
    }

    #[test]
    fn central_elements_act_trivially() {
        let fr = frame(-5, 0);
        let sigma = fr.lattice_generator();
        let w0 = QMatrix::zeros(fr.field(), 3, 1);
        let g = BoundaryElement::central(&fr, &(&sigma * int(3)));
        let es = boundary_tangent_exponents(&g, &w0, &fr, &sigma).unwrap();
        assert_eq!(es.nontrivial_count(), 0);
        assert!(check_qr_congruences(&g, &fr, &sigma).unwrap());
        assert!(matches!(boundary_divisor_fixed(&g, &fr), Err(Error::Precondition(_))));
        let half = BoundaryElement::central(&fr, &(&sigma * rat(1, 2)));
        let t = tangent_action(&half, &w0, &fr, &sigma).unwrap();
        assert_eq!(t.torus, rat(1, 2));
    }

    #[test]
    fn irrational_translation_is_non_torsion() {
        let fr = frame(-6, 1);
        let t = fr.period() * fr.field().sqrt_d();
        assert!(matches!(period_ratio(&t, &fr.period()), Err(Error::NonTorsion(_))));
        assert_eq!(period_ratio(&fr.period().scale(&rat(5, 2)), &fr.period()).unwrap(), rat(5, 2));
    }

    #[test]
    fn order_two_elements_behave() {
        for d in [-5i64, -6, -7, -10, -11] {
            for idx in 0..8 {
                let fr = frame(d, idx);
                let mut rng = seeded_rng(11, d, idx);
                let (g, w0) = order_two_element(&mut rng, &fr);
                let sigma = fr.lattice_generator();
                assert!(check_qr_congruences(&g, &fr, &sigma).unwrap());
                let es = boundary_tangent_exponents(&g, &w0, &fr, &sigma).unwrap();
                assert!(es.exponents().iter().all(|&e| 2 * e % es.order() == 0));
                if !is_quasi_reflection(&es) {
                    assert!(reid_tai_sum(&es) >= int(1));
                }
                assert!(!boundary_divisor_fixed(&g, &fr).unwrap());
            }
        }
    }

    #[test]
    fn broken_relation_is_detected() {
        let fr = frame(-7, 2);
        let mut rng = seeded_rng(3, -7, 2);
        let (g, _) = order_two_element(&mut rng, &fr);
        let sigma = fr.lattice_generator();
        // shift w by a non-integral multiple of the period; stays in N(F)
        let mut h = g.clone();
        h.w = &h.w + fr.period().scale(&rat(1, 3));
        assert!(is_in_nf(&h, &fr));
        assert!(!check_qr_congruences(&h, &fr, &sigma).unwrap());
    }

    #[test]
    fn non_member_is_rejected() {
        let fr = frame(-10, 3);
        let mut rng = seeded_rng(5, -10, 3);
        let mut g = random_nf(&mut rng, &fr);
        g.z = &g.z + &g.z;
        assert!(matches!(
            check_qr_congruences(&g, &fr, &fr.lattice_generator()),
            Err(Error::NotInGroup { .. })
        ));
    }
}
