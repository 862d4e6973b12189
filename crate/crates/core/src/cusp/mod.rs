//! Algebra at a 0-dimensional cusp: the normalised Gram matrix, the
//! stabiliser `N(F)` with its unipotent radical `W(F)` and centre `U(F)`,
//! the boundary action and the boundary quasi-reflection checks.
//!
//! Everything stays inside Q(√D). A purely imaginary multiple `i·a·x` of `a`
//! is written `a·x̃·√D` with `x = x̃·√(−D)`.

mod boundary;
mod lattice;
pub mod random;

pub use boundary::{boundary_divisor_fixed, boundary_tangent_exponents, check_qr_congruences, TangentAction};
pub use lattice::{uf_lattice_generator, uf_lattice_generator_scan, uf_lattice_half_formula, uf_lattice_lcm_formula};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qfield::{QElem, QMatrix, QuadField, Rational};

/// Normalised Gram data `Q = [[0,0,a],[0,B,0],[ā,0,0]]` at a cusp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspFrame {
    n: usize,
    a: QElem,
    b: QMatrix,
}

impl CuspFrame {
    /// Requires `n ≥ 2`, `a ≠ 0` and `B` hermitian positive definite of size `n − 1`.
    pub fn new(a: QElem, b: QMatrix) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("cusp frame with a = 0".into()));
        }
        if a.field() != b.field() {
            return Err(Error::FieldMismatch(a.field().d(), b.field().d()));
        }
        if !b.is_square() || b.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "B must be square of size n - 1 >= 1, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        if !b.is_hermitian() {
            return Err(Error::InvalidArgument("B is not hermitian".into()));
        }
        if !b.is_positive_definite() {
            return Err(Error::InvalidArgument("B is not positive definite".into()));
        }
        Ok(CuspFrame { n: b.rows() + 1, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> QuadField {
        self.a.field()
    }

    pub fn a(&self) -> &QElem {
        &self.a
    }

    pub fn b(&self) -> &QMatrix {
        &self.b
    }

    /// The assembled `(n+1) × (n+1)` Gram matrix.
    pub fn gram(&self) -> QMatrix {
        let n = self.n;
        let mut q = QMatrix::zeros(self.field(), n + 1, n + 1);
        q[(0, n)] = self.a.clone();
        q[(n, 0)] = self.a.conj();
        q.set_block(1, 1, &self.b).expect("block fits");
        q
    }

    /// Positive generator `x̃0` of the rational lattice behind `U(F)_Z`.
    pub fn lattice_generator(&self) -> Rational {
        uf_lattice_generator(&self.a).expect("a is nonzero")
    }

    /// The period `σ` of the torus coordinate, as the element `a·x̃0·√D`.
    pub fn period(&self) -> QElem {
        &self.a * self.field().sqrt_d().scale(&self.lattice_generator())
    }
}

/// Brings a hermitian `Q′` whose first row vanishes off the last column into
/// the frame shape: returns `N` and the frame with `Nᴴ Q′ N = Q`.
pub fn normalize_cusp_basis(q: &QMatrix, n: usize) -> Result<(QMatrix, CuspFrame)> {
    if n < 2 || q.rows() != n + 1 || !q.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected an {0}x{0} Gram matrix with n >= 2, got {1}x{2}",
            n + 1,
            q.rows(),
            q.cols()
        )));
    }
    if !q.is_hermitian() {
        return Err(Error::InvalidArgument("Gram matrix is not hermitian".into()));
    }
    if (0..n).any(|j| !q[(0, j)].is_zero()) {
        return Err(Error::InvalidArgument(
            "first basis vector must be isotropic and orthogonal to the first n".into(),
        ));
    }
    let a = q[(0, n)].clone();
    if a.is_zero() {
        return Err(Error::InvalidArgument("first basis vector lies in the radical".into()));
    }
    let b = q.submatrix(1, 1, n - 1, n - 1)?;
    let c = q.submatrix(1, n, n - 1, 1)?;
    let d = q[(n, n)].clone();
    let b_inv = b
        .inverse()
        .map_err(|_| Error::SingularMatrix("B is singular, so h is degenerate on E⊥/E".into()))?;
    let r = b_inv.mul(&c)?.neg();
    let delta = &d - &b_inv.quadratic_form(&c)?;
    let r_prime = -(delta / (a.conj() + a.conj()));
    let field = q.field();
    let mut nm = QMatrix::identity(field, n + 1);
    nm[(0, n)] = r_prime;
    nm.set_block(1, n, &r)?;
    let frame = CuspFrame::new(a, b)?;
    let check = nm.adjoint().mul(q)?.mul(&nm)?;
    if check != frame.gram() {
        return Err(Error::Inconsistency("normalised Gram matrix has the wrong shape".into()));
    }
    Ok((nm, frame))
}

/// Block upper-triangular element `[[u,v,w],[0,X,y],[0,0,z]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryElement {
    pub u: QElem,
    pub v: QMatrix,
    pub w: QElem,
    pub x: QMatrix,
    pub y: QMatrix,
    pub z: QElem,
}

impl BoundaryElement {
    pub fn identity(frame: &CuspFrame) -> Self {
        let f = frame.field();
        let m = frame.n() - 1;
        BoundaryElement {
            u: f.one(),
            v: QMatrix::zeros(f, 1, m),
            w: f.zero(),
            x: QMatrix::identity(f, m),
            y: QMatrix::zeros(f, m, 1),
            z: f.one(),
        }
    }

    /// The element of `U(F)` with top-right entry `a·x̃·√D`.
    pub fn central(frame: &CuspFrame, x_tilde: &Rational) -> Self {
        let mut g = Self::identity(frame);
        g.w = frame.a() * frame.field().sqrt_d().scale(x_tilde);
        g
    }

    pub fn size(&self) -> usize {
        self.x.rows() + 2
    }

    pub fn field(&self) -> QuadField {
        self.z.field()
    }

    fn check_shape(&self) -> Result<()> {
        let m = self.x.rows();
        let ok = self.x.is_square()
            && (self.v.rows(), self.v.cols()) == (1, m)
            && (self.y.rows(), self.y.cols()) == (m, 1)
            && [&self.u, &self.w, &self.z].iter().all(|e| e.field() == self.x.field())
            && self.v.field() == self.x.field()
            && self.y.field() == self.x.field();
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("inconsistent boundary element blocks".into()))
        }
    }

    pub fn to_matrix(&self) -> QMatrix {
        let m = self.x.rows();
        let mut g = QMatrix::zeros(self.field(), m + 2, m + 2);
        g[(0, 0)] = self.u.clone();
        g[(0, m + 1)] = self.w.clone();
        g[(m + 1, m + 1)] = self.z.clone();
        g.set_block(0, 1, &self.v).expect("block fits");
        g.set_block(1, 1, &self.x).expect("block fits");
        g.set_block(1, m + 1, &self.y).expect("block fits");
        g
    }

    /// Reads the blocks of a square matrix; the lower-left blocks must vanish.
    pub fn from_matrix(g: &QMatrix) -> Result<Self> {
        if !g.is_square() || g.rows() < 3 {
            return Err(Error::DimensionMismatch("boundary element needs size >= 3".into()));
        }
        let s = g.rows();
        let m = s - 2;
        let lower = (1..s).flat_map(|i| (0..i.min(m + 1)).map(move |j| (i, j)));
        for (i, j) in lower {
            let in_x = (1..=m).contains(&i) && (1..=m).contains(&j);
            if !in_x && !g[(i, j)].is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i},{j}) breaks the block triangular shape"
                )));
            }
        }
        Ok(BoundaryElement {
            u: g[(0, 0)].clone(),
            v: g.submatrix(0, 1, 1, m)?,
            w: g[(0, m + 1)].clone(),
            x: g.submatrix(1, 1, m, m)?,
            y: g.submatrix(1, m + 1, m, 1)?,
            z: g[(m + 1, m + 1)].clone(),
        })
    }

    pub fn compose(&self, other: &BoundaryElement) -> Result<BoundaryElement> {
        BoundaryElement::from_matrix(&self.to_matrix().mul(&other.to_matrix())?)
    }

    pub fn inverse(&self) -> Result<BoundaryElement> {
        BoundaryElement::from_matrix(&self.to_matrix().inverse()?)
    }

    pub fn power(&self, k: u32) -> Result<BoundaryElement> {
        let mut acc = BoundaryElement {
            u: self.field().one(),
            v: QMatrix::zeros(self.field(), 1, self.x.rows()),
            w: self.field().zero(),
            x: QMatrix::identity(self.field(), self.x.rows()),
            y: QMatrix::zeros(self.field(), self.x.rows(), 1),
            z: self.field().one(),
        };
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    pub fn negate(&self) -> BoundaryElement {
        BoundaryElement {
            u: -&self.u,
            v: self.v.neg(),
            w: -&self.w,
            x: self.x.neg(),
            y: self.y.neg(),
            z: -&self.z,
        }
    }
}

/// A point `(α, w)` of the chart `t_{n+1} = 1`, or of the boundary `θ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub alpha: QElem,
    pub wvec: QMatrix,
    pub at_infinity: bool,
}

impl BoundaryPoint {
    pub fn finite(alpha: QElem, wvec: QMatrix) -> Self {
        BoundaryPoint { alpha, wvec, at_infinity: false }
    }
}

fn fits(g: &BoundaryElement, frame: &CuspFrame) -> bool {
    g.check_shape().is_ok() && g.size() == frame.n() + 1 && g.field() == frame.field()
}

/// The four defining relations of `N(F)`.
pub fn is_in_nf(g: &BoundaryElement, frame: &CuspFrame) -> bool {
    if !fits(g, frame) {
        return false;
    }
    nf_relations(g, frame).unwrap_or(false)
}

fn nf_relations(g: &BoundaryElement, frame: &CuspFrame) -> Result<bool> {
    let (a, b) = (frame.a(), frame.b());
    if !(&g.z * g.u.conj()).is_one() {
        return Ok(false);
    }
    let xh = g.x.adjoint();
    if xh.mul(b)?.mul(&g.x)? != *b {
        return Ok(false);
    }
    let rel3 = xh.mul(b)?.mul(&g.y)?.add(&g.v.adjoint().scale(&(a * &g.z)))?;
    if !rel3.is_zero() {
        return Ok(false);
    }
    let rel4 = b.quadratic_form(&g.y)? + g.z.conj() * a.conj() * &g.w + &g.z * a * g.w.conj();
    Ok(rel4.is_zero())
}

/// `N(F)` membership with `u = z = 1`, `X = I`.
pub fn is_in_wf(g: &BoundaryElement, frame: &CuspFrame) -> bool {
    fits(g, frame) && g.u.is_one() && g.z.is_one() && g.x.is_identity() && is_in_nf(g, frame)
}

/// `W(F)` membership with `v = 0`, `y = 0`, so that `āw + aw̄ = 0`.
pub fn is_in_uf(g: &BoundaryElement, frame: &CuspFrame) -> bool {
    is_in_wf(g, frame) && g.v.is_zero() && g.y.is_zero()
}

/// `U(F)` membership with `w` an integral multiple of the period.
pub fn is_in_uf_z(g: &BoundaryElement, frame: &CuspFrame) -> bool {
    is_in_uf(g, frame) && period_multiple(&g.w, frame).is_some_and(|q| q.is_integer())
}

/// `t / σ` when it is rational.
pub fn period_multiple(t: &QElem, frame: &CuspFrame) -> Option<Rational> {
    let q = t / frame.period();
    q.is_rational().then(|| q.re().clone())
}

/// `α ↦ (α/z̄ + v·w + w_entry)/z`, `w ↦ (Xw + y)/z`.
pub fn apply_boundary_action(
    g: &BoundaryElement,
    pt: &BoundaryPoint,
    frame: &CuspFrame,
) -> Result<BoundaryPoint> {
    if !is_in_nf(g, frame) {
        return Err(Error::NotInGroup { group: "N(F)", reason: "a defining relation fails".into() });
    }
    if pt.at_infinity {
        return Err(Error::Precondition("the action is computed in the finite chart".into()));
    }
    if (pt.wvec.rows(), pt.wvec.cols()) != (frame.n() - 1, 1) {
        return Err(Error::DimensionMismatch("boundary point has the wrong length".into()));
    }
    let zi = g.z.inv()?;
    let vw = g.v.mul(&pt.wvec)?[(0, 0)].clone();
    let alpha = &zi * (&pt.alpha / g.z.conj() + vw + &g.w);
    let wvec = g.x.mul(&pt.wvec)?.add(&g.y)?.scale(&zi);
    Ok(BoundaryPoint::finite(alpha, wvec))
}
