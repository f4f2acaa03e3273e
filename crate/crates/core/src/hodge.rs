//! The frame inner product on R^4 attached to the totally geodesic spacelike
//! plane, the induced product on so_0(2,2), the sharp/star/codifferential
//! operators on grid-sampled 1-forms over upper-half-plane patches, and the
//! Weil-Petersson patch pairing.
//!
//! Conventions. H(z) is the Gram matrix of the frame product in the canonical
//! basis of R^4 (the frame {u1, u2, position, normal} of the embedded plane is
//! orthonormal). On endomorphisms the product is
//!     iota_z(A, B) = tr(A^t H conj(B) H^{-1}),
//! the pullback of the Frobenius product under the frame change. Note the
//! placement of H and H^{-1}: with the printed Gram matrix H this is the
//! unique order that reproduces the closed forms for sharp E1..E3 and the
//! 16 y^2 identity. On 2-forms the Hodge star divides by the conformal factor
//! 1/y^2 of the hyperbolic metric; on 1-forms the star is conformally
//! invariant and extends to complex coefficients anti-linearly.

use nalgebra::{Matrix4, SMatrix, SVector, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{self, e_basis, phi_alg_complex, So22Alg};

type C = Complex64;
type Mat4c = Matrix4<C>;
type Coeffs = SVector<C, 6>;

/// A point x + i y of the upper half-plane (y > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) {
            return Err(Error::InvalidInput(format!("y = {y} must be positive")));
        }
        Ok(Self { x, y })
    }

    pub fn complex(&self) -> C {
        C::new(self.x, self.y)
    }
}

/// The isometric embedding of the upper half-plane onto the x4 = 0 hyperboloid:
/// (x, y) -> (x/y, (x^2+y^2-1)/2y, (x^2+y^2+1)/2y, 0).
pub fn embed_hyperboloid(z: UpperHalfPoint) -> Vector4<f64> {
    let (x, y) = (z.x, z.y);
    let q = x * x + y * y;
    Vector4::new(x / y, (q - 1.0) / (2.0 * y), (q + 1.0) / (2.0 * y), 0.0)
}

/// Residual of the quadric constraint x1^2 + x2^2 - x3^2 - x4^2 = -1.
pub fn quadric_residual(v: &Vector4<f64>) -> f64 {
    (v[0] * v[0] + v[1] * v[1] - v[2] * v[2] - v[3] * v[3] + 1.0).abs()
}

/// Gram matrix H of the frame inner product and its inverse; H differs from
/// H^{-1} only in the signs of the (1,3) and (2,3) symmetric pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMetric {
    pub h: Matrix4<f64>,
    pub h_inv: Matrix4<f64>,
}

impl FrameMetric {
    pub const INV_TOL: f64 = 1e-10;

    pub fn validate(&self) -> Result<()> {
        let res = lie::max_abs4(&(self.h * self.h_inv - Matrix4::identity()));
        if res > Self::INV_TOL {
            return Err(Error::InvalidMatrix(format!(
                "H * Hinv deviates from I by {res:e}"
            )));
        }
        if self.h.clone().cholesky().is_none() {
            return Err(Error::InvalidMatrix("H is not positive definite".into()));
        }
        Ok(())
    }
}

pub fn frame_metric(z: UpperHalfPoint) -> FrameMetric {
    frame_metric_signed(z, 1.0)
}

/// The Q-conjugated variant Q^t H Q (Q = diag(-1,-1,1,-1) flips the sign of
/// the off-block x-terms in rows/columns 1,2 against 3; here computed
/// entrywise).
pub fn frame_metric_q(z: UpperHalfPoint) -> FrameMetric {
    let fm = frame_metric(z);
    FrameMetric {
        h: lie::q_conjugate(&fm.h),
        h_inv: lie::q_conjugate(&fm.h_inv),
    }
}

fn frame_metric_signed(z: UpperHalfPoint, _sign: f64) -> FrameMetric {
    let (x, y) = (z.x, z.y);
    let y2 = y * y;
    let q = x * x + y2;
    let h = Matrix4::new(
        2.0 * x * x / y2 + 1.0,
        x * (q - 1.0) / y2,
        -x * (q + 1.0) / y2,
        0.0,
        x * (q - 1.0) / y2,
        (q - 1.0) * (q - 1.0) / (2.0 * y2) + 1.0,
        -(q - 1.0) * (q + 1.0) / (2.0 * y2),
        0.0,
        -x * (q + 1.0) / y2,
        -(q - 1.0) * (q + 1.0) / (2.0 * y2),
        (q + 1.0) * (q + 1.0) / (2.0 * y2) - 1.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.0,
    );
    let h_inv = Matrix4::new(
        2.0 * x * x / y2 + 1.0,
        x * (q - 1.0) / y2,
        x * (q + 1.0) / y2,
        0.0,
        x * (q - 1.0) / y2,
        (q - 1.0) * (q - 1.0) / (2.0 * y2) + 1.0,
        (q - 1.0) * (q + 1.0) / (2.0 * y2),
        0.0,
        x * (q + 1.0) / y2,
        (q - 1.0) * (q + 1.0) / (2.0 * y2),
        (q + 1.0) * (q + 1.0) / (2.0 * y2) - 1.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.0,
    );
    FrameMetric { h, h_inv }
}

/// iota_z(A, B) = tr(A^t H conj(B) H^{-1}); real-bilinear and symmetric on
/// real inputs, Hermitian in the second argument on complex inputs.
pub fn iota(fm: &FrameMetric, a: &Mat4c, b: &Mat4c) -> C {
    let h = fm.h.map(C::from);
    let h_inv = fm.h_inv.map(C::from);
    (a.transpose() * h * b.conjugate() * h_inv).trace()
}

pub fn iota_at(z: UpperHalfPoint, a: &Mat4c, b: &Mat4c) -> C {
    iota(&frame_metric(z), a, b)
}

fn e_basis_complex() -> [Mat4c; 6] {
    let e = e_basis();
    std::array::from_fn(|i| e[i].matrix().map(C::from))
}

fn e_basis_real() -> [Matrix4<f64>; 6] {
    let e = e_basis();
    std::array::from_fn(|i| *e[i].matrix())
}

/// Gram matrix of iota on the basis E1..E6 (real symmetric positive definite).
pub fn gram_matrix(fm: &FrameMetric) -> SMatrix<f64, 6, 6> {
    let e = e_basis_complex();
    SMatrix::<f64, 6, 6>::from_fn(|i, j| iota(fm, &e[i], &e[j]).re)
}

/// Coefficients of sharp A in the dual basis: (iota(A, E_1), ..., iota(A, E_6)).
pub fn sharp(fm: &FrameMetric, a: &Mat4c) -> Coeffs {
    let e = e_basis_complex();
    Coeffs::from_fn(|i, _| iota(fm, a, &e[i]))
}

pub fn sharp_at(z: UpperHalfPoint, a: &Mat4c) -> Coeffs {
    sharp(&frame_metric(z), a)
}

/// Invert sharp through the Gram matrix: solve G x = c, A = sum x_i E_i.
/// Fails with GramSingular when the Gram system cannot be solved or its
/// condition number exceeds 1e8.
pub fn unsharp(fm: &FrameMetric, coeffs: &Coeffs) -> Result<Mat4c> {
    let g = gram_matrix(fm);
    let chol = g.cholesky().ok_or(Error::GramSingular { cond: f64::NAN })?;
    // condition estimate from the Cholesky diagonal
    let diag = chol.l();
    let mut dmax = 0.0f64;
    let mut dmin = f64::INFINITY;
    for i in 0..6 {
        let d = diag[(i, i)];
        dmax = dmax.max(d);
        dmin = dmin.min(d);
    }
    let cond = (dmax / dmin) * (dmax / dmin);
    if cond > 1e8 {
        return Err(Error::GramSingular { cond });
    }
    let re = SVector::<f64, 6>::from_fn(|i, _| coeffs[i].re);
    let im = SVector::<f64, 6>::from_fn(|i, _| coeffs[i].im);
    let xre = chol.solve(&re);
    let xim = chol.solve(&im);
    let e = e_basis_complex();
    let mut out = Mat4c::zeros();
    for i in 0..6 {
        out += e[i] * C::new(xre[i], xim[i]);
    }
    Ok(out)
}

/// Hodge star on 1-forms with complex coefficients: the real rule
/// (p dx + q dy) -> (-q dx + p dy) extended anti-linearly, so
/// star(phi dz) = i conj(phi) dzbar.
pub fn hodge_star_1form(p: C, q: C) -> (C, C) {
    (-q.conj(), p.conj())
}

/// A rectangular grid on the upper half-plane with square cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPatch {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    /// cells per side; nodes are (n+1) x (n+1)
    pub n: usize,
}

impl GridPatch {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Self> {
        if !(x1 > x0 && y1 > y0 && y0 > 0.0) || n < 4 {
            return Err(Error::InvalidInput("bad patch geometry".into()));
        }
        let patch = Self { x0, x1, y0, y1, n };
        if patch.y0 - patch.hy() <= 0.0 {
            return Err(Error::InvalidInput(
                "grid spacing exceeds the distance to the real axis".into(),
            ));
        }
        Ok(patch)
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / self.n as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y1 - self.y0) / self.n as f64
    }

    pub fn node(&self, i: usize, j: usize) -> UpperHalfPoint {
        UpperHalfPoint {
            x: self.x0 + self.hx() * i as f64,
            y: self.y0 + self.hy() * j as f64,
        }
    }

    pub fn nodes_per_side(&self) -> usize {
        self.n + 1
    }

    fn index(&self, i: usize, j: usize) -> usize {
        j * self.nodes_per_side() + i
    }
}

/// Grid-sampled so(2,2)-valued 1-form: (dx, dy) coefficient matrices per node.
#[derive(Debug, Clone)]
pub struct So22ValuedForm {
    pub patch: GridPatch,
    pub values: Vec<(Mat4c, Mat4c)>,
}

impl So22ValuedForm {
    pub fn sample(patch: GridPatch, f: impl Fn(UpperHalfPoint) -> (Mat4c, Mat4c)) -> Self {
        let side = patch.nodes_per_side();
        let mut values = Vec::with_capacity(side * side);
        for j in 0..side {
            for i in 0..side {
                values.push(f(patch.node(i, j)));
            }
        }
        Self { patch, values }
    }

    pub fn value(&self, i: usize, j: usize) -> &(Mat4c, Mat4c) {
        &self.values[self.patch.index(i, j)]
    }

    /// Largest so(2,2) residual over all nodes and both components.
    pub fn algebra_residual(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|(p, q)| [lie::so22_residual_complex(p), lie::so22_residual_complex(q)])
            .fold(0.0, f64::max)
    }

    /// Entrywise Q-conjugation of both components at every node.
    pub fn q_conjugated(&self) -> Self {
        Self {
            patch: self.patch,
            values: self
                .values
                .iter()
                .map(|(p, q)| (lie::q_conjugate_complex(p), lie::q_conjugate_complex(q)))
                .collect(),
        }
    }
}

/// The principal value phi(z) dz tensor Phi([[-z, z^2], [-1, z]]) at z, as
/// (dx, dy) components (dz = dx + i dy).
pub fn principal_form_value(z: UpperHalfPoint, phi: &[C]) -> (Mat4c, Mat4c) {
    let zz = z.complex();
    let val = horner(phi, zz);
    let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
    (xz * val, xz * (val * C::i()))
}

pub fn principal_form(patch: GridPatch, phi: &[C]) -> So22ValuedForm {
    So22ValuedForm::sample(patch, |z| principal_form_value(z, phi))
}

fn horner(coeffs: &[C], z: C) -> C {
    coeffs
        .iter()
        .rev()
        .fold(C::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Interior grid of a scalar quantity per node; boundary ring is excluded
/// from all reports.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_interior: f64,
}

/// Exterior derivative of a 1-form by centered differences:
/// d(p dx + q dy) = (dq/dx - dp/dy) dx ^ dy. Returns the 2-form density on
/// the full grid (boundary entries zero) plus the interior max residual.
pub fn d_exterior(form: &So22ValuedForm) -> (Vec<Mat4c>, ResidualReport) {
    let patch = &form.patch;
    let side = patch.nodes_per_side();
    let hx = patch.hx();
    let hy = patch.hy();
    let mut out = vec![Mat4c::zeros(); side * side];
    let mut max_res = 0.0f64;
    for j in 1..side - 1 {
        for i in 1..side - 1 {
            let dq_dx = (form.value(i + 1, j).1 - form.value(i - 1, j).1) / C::from(2.0 * hx);
            let dp_dy = (form.value(i, j + 1).0 - form.value(i, j - 1).0) / C::from(2.0 * hy);
            let curl = dq_dx - dp_dy;
            max_res = max_res.max(lie::max_abs4c(&curl));
            out[patch.index(i, j)] = curl;
        }
    }
    (
        out,
        ResidualReport {
            max_interior: max_res,
        },
    )
}

/// Which frame product the sharp operators use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricVariant {
    Standard,
    /// Q-conjugated product H^q = Q^t H Q
    QConjugated,
}

fn metric_at(z: UpperHalfPoint, variant: MetricVariant) -> FrameMetric {
    match variant {
        MetricVariant::Standard => frame_metric(z),
        MetricVariant::QConjugated => frame_metric_q(z),
    }
}

/// Codifferential delta = -(sharp)^{-1} star^{-1} d star sharp on a grid:
/// pointwise sharp, anti-linear star on 1-forms, centered d, star^{-1} on
/// 2-forms (division by the hyperbolic area density 1/y^2), and -unsharp.
/// Returns the 0-form values on the full grid plus the interior max residual.
pub fn delta_coboundary(
    form: &So22ValuedForm,
    variant: MetricVariant,
) -> Result<(Vec<Mat4c>, ResidualReport)> {
    let patch = &form.patch;
    let side = patch.nodes_per_side();
    let hx = patch.hx();
    let hy = patch.hy();

    // pointwise sharp then star on dual coefficients
    let mut starred: Vec<(Coeffs, Coeffs)> = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            let z = patch.node(i, j);
            let fm = metric_at(z, variant);
            let (p, q) = form.value(i, j);
            let sp = sharp(&fm, p);
            let sq = sharp(&fm, q);
            // star: (p, q) -> (-conj(q), conj(p)), componentwise on coefficients
            starred.push((-sq.map(|c| c.conj()), sp.map(|c| c.conj())));
        }
    }

    let mut out = vec![Mat4c::zeros(); side * side];
    let mut max_res = 0.0f64;
    for j in 1..side - 1 {
        for i in 1..side - 1 {
            let idx = |a: usize, b: usize| patch.index(a, b);
            let dq_dx = (starred[idx(i + 1, j)].1 - starred[idx(i - 1, j)].1) / C::from(2.0 * hx);
            let dp_dy = (starred[idx(i, j + 1)].0 - starred[idx(i, j - 1)].0) / C::from(2.0 * hy);
            let curl: Coeffs = dq_dx - dp_dy;
            let z = patch.node(i, j);
            // star^{-1} of a 2-form: conjugate and divide by lambda = 1/y^2
            let zero_form: Coeffs = curl.map(|c| c.conj() * (z.y * z.y));
            let fm = metric_at(z, variant);
            let value = -unsharp(&fm, &zero_form)?;
            max_res = max_res.max(lie::max_abs4c(&value));
            out[patch.index(i, j)] = value;
        }
    }
    Ok((
        out,
        ResidualReport {
            max_interior: max_res,
        },
    ))
}

/// Weil-Petersson patch pairing through the frame product.
///
/// lhs assembles Re integral of iota_z(Phi(X_z), Phi(X_z)) phi conj(psi)
/// with the complex area element i dz ^ dzbar (the product is verified
/// against 16 y^2 at every quadrature node and the closed form carried
/// through the complex chain); rhs integrates 32 Re(phi conj(psi)) y^2 dx dy
/// by the same midpoint rule. The identity is pointwise algebraic, so the two
/// sides agree to roundoff.
#[derive(Debug, Clone, PartialEq)]
pub struct WpPairing {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn wp_patch_pairing(phi: &[C], psi: &[C], patch: &GridPatch) -> Result<WpPairing> {
    let h = patch.hx();
    let hy = patch.hy();
    let mut lhs = C::new(0.0, 0.0);
    let mut rhs = 0.0f64;
    for j in 0..patch.n {
        for i in 0..patch.n {
            // midpoint of the cell
            let z = UpperHalfPoint {
                x: patch.x0 + h * (i as f64 + 0.5),
                y: patch.y0 + hy * (j as f64 + 0.5),
            };
            let zz = z.complex();
            let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
            let iota_num = iota_at(z, &xz, &xz);
            let closed = 16.0 * z.y * z.y;
            if (iota_num.re - closed).abs() > 1e-10 * closed || iota_num.im.abs() > 1e-10 * closed
            {
                return Err(Error::InvalidMatrix(format!(
                    "iota(Phi X_z, Phi X_z) = {iota_num} deviates from {closed} at ({}, {})",
                    z.x, z.y
                )));
            }
            let pv = horner(phi, zz);
            let qv = horner(psi, zz);
            // i phi conj(psi) iota dz ^ dzbar = i phi conj(psi) iota (-2i) dx dy
            let cell = C::i() * pv * qv.conj() * C::from(closed) * C::new(0.0, -2.0);
            lhs += cell * C::from(h * hy);
            rhs += 32.0 * (pv * qv.conj()).re * z.y * z.y * h * hy;
        }
    }
    Ok(WpPairing { lhs: lhs.re, rhs })
}

/// Report of the swap-involution isometry checks at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct QIsometryReport {
    /// max |iota^q(QAQ^{-1}, QBQ^{-1}) - iota(A, B)| over the sampled pairs
    pub invariance_error: f64,
    /// H^q positive definite and consistent with its inverse
    pub metric_ok: bool,
}

/// Verify that conjugation by Q = diag(-1,-1,1,-1) is an isometry: H^q is a
/// valid frame metric and iota^q(QAQ^{-1}, QBQ^{-1}) = iota(A, B).
pub fn q_isometry_check(z: UpperHalfPoint, pairs: &[(Mat4c, Mat4c)]) -> Result<QIsometryReport> {
    let fm = frame_metric(z);
    let fmq = frame_metric_q(z);
    fmq.validate()?;
    let mut err = 0.0f64;
    for (a, b) in pairs {
        let qa = lie::q_conjugate_complex(a);
        let qb = lie::q_conjugate_complex(b);
        let lhs = iota(&fmq, &qa, &qb);
        let rhs = iota(&fm, a, b);
        err = err.max((lhs - rhs).norm());
    }
    Ok(QIsometryReport {
        invariance_error: err,
        metric_ok: true,
    })
}

/// Random so(2,2) complex matrix from coefficients in the E basis.
pub fn random_so22_complex(rng: &mut impl rand::Rng) -> Mat4c {
    use rand::Rng as _;
    let e = e_basis_complex();
    let mut out = Mat4c::zeros();
    for ei in &e {
        let c = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        out += ei * c;
    }
    out
}

/// Closed-form sharp coefficients of E1, E2, E3 (coefficients of E1*, E2*,
/// E3*; those of E4*, E5*, E6* vanish). The E3 row carries (x^2+y^2)^2: the
/// squared factor is forced by the expansion of sharp(Phi(X_z)) into
/// -4 E1* - 4z E2* + 4 z^2 E3*.
pub fn sharp_closed_forms(z: UpperHalfPoint) -> [[f64; 3]; 3] {
    let (x, y) = (z.x, z.y);
    let q = x * x + y * y;
    let s = 4.0 / (y * y);
    [
        [s, s * x, -s * x * x],
        [s * x, s * (x * x + y * y / 2.0), -s * x * q],
        [-s * x * x, -s * x * q, s * q * q],
    ]
}

/// so(2,2) residual of a complex matrix (exposed for form validation).
pub fn so22_residual_c(m: &Mat4c) -> f64 {
    lie::so22_residual_complex(m)
}

pub use crate::lie::q_conjugate_complex;

/// Structured-text report for patch residual experiments.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PatchReport {
    pub patch: (f64, f64, f64, f64),
    pub h: f64,
    pub residual_d_max: f64,
    pub residual_delta_max: f64,
    pub convergence_ratio: Option<f64>,
}

/// Convenience: E basis as real matrices (re-export for verification code).
pub fn e_basis_matrices() -> [Matrix4<f64>; 6] {
    e_basis_real()
}

/// Convenience: E basis as So22Alg values.
pub fn e_basis_alg() -> [So22Alg; 6] {
    e_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_z(rng: &mut impl Rng) -> UpperHalfPoint {
        UpperHalfPoint {
            x: rng.gen_range(-1.0..1.0),
            y: rng.gen_range(0.2..5.0),
        }
    }

    #[test]
    fn embedding_basics() {
        let zi = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let v = embed_hyperboloid(zi);
        assert_eq!(v, Vector4::new(0.0, 0.0, 1.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let z = random_z(&mut rng);
            assert!(quadric_residual(&embed_hyperboloid(z)) <= 1e-14);
        }
    }

    #[test]
    fn embedding_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let x = crate::lie::Sl2Alg::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let a = x.exp();
            let z = random_z(&mut rng);
            let w = a.moebius(z.complex());
            let lhs = crate::lie::phi_group(&a).unwrap().matrix()
                * embed_hyperboloid(z);
            let rhs = embed_hyperboloid(UpperHalfPoint { x: w.re, y: w.im });
            assert!((lhs - rhs).amax() <= 1e-10);
        }
    }

    #[test]
    fn frame_metric_identity_at_i() {
        let z = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let fm = frame_metric(z);
        assert!(lie::max_abs4(&(fm.h - Matrix4::identity())) < 1e-15);
        fm.validate().unwrap();
    }

    #[test]
    fn frame_metric_inverse_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let fm = frame_metric(random_z(&mut rng));
            fm.validate().unwrap();
        }
    }

    #[test]
    fn iota_values_at_i() {
        let z = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let e = e_basis_complex();
        let fm = frame_metric(z);
        let v = iota(&fm, &e[1], &e[1]);
        assert!((v.re - 2.0).abs() < 1e-14 && v.im.abs() < 1e-14);
        let v = iota(&fm, &e[0], &e[2]);
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn iota_sixteen_y_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let z = random_z(&mut rng);
            let zz = z.complex();
            let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
            let v = iota_at(z, &xz, &xz);
            let expect = 16.0 * z.y * z.y;
            assert!(
                (v.re - expect).abs() <= 1e-10 * expect && v.im.abs() <= 1e-10 * expect,
                "at ({}, {}): {v} vs {expect}",
                z.x,
                z.y
            );
        }
    }

    #[test]
    fn sharp_matches_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = e_basis_complex();
        for _ in 0..500 {
            let z = random_z(&mut rng);
            let rows = sharp_closed_forms(z);
            for (i, row) in rows.iter().enumerate() {
                let coeffs = sharp_at(z, &e[i]);
                for j in 0..3 {
                    let err = (coeffs[j].re - row[j]).abs() / (1.0 + row[j].abs());
                    assert!(err <= 1e-10, "sharp E{} coeff {}: {err}", i + 1, j + 1);
                    assert!(coeffs[j].im.abs() <= 1e-10);
                }
                for j in 3..6 {
                    assert!(coeffs[j].norm() <= 1e-10, "E456 coefficient leak");
                }
            }
        }
    }

    #[test]
    fn sharp_of_principal_matrix_is_polynomial() {
        // sharp(Phi(X_z)) = -4 E1* - 4z E2* + 4z^2 E3*
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let z = random_z(&mut rng);
            let zz = z.complex();
            let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
            let c = sharp_at(z, &xz);
            let expect = [
                C::from(-4.0),
                -4.0 * zz,
                4.0 * zz * zz,
                C::from(0.0),
                C::from(0.0),
                C::from(0.0),
            ];
            for k in 0..6 {
                assert!(
                    (c[k] - expect[k]).norm() <= 1e-10 * (1.0 + expect[k].norm()),
                    "coefficient {k}: {} vs {}",
                    c[k],
                    expect[k]
                );
            }
        }
    }

    #[test]
    fn sharp_unsharp_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let z = random_z(&mut rng);
            let a = random_so22_complex(&mut rng);
            let fm = frame_metric(z);
            let back = unsharp(&fm, &sharp(&fm, &a)).unwrap();
            assert!(lie::max_abs4c(&(back - a)) <= 1e-9);
        }
    }

    #[test]
    fn gram_positive_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let fm = frame_metric(random_z(&mut rng));
            assert!(gram_matrix(&fm).cholesky().is_some());
        }
    }

    #[test]
    fn hodge_star_rules() {
        // dx -> dy
        let (p, q) = hodge_star_1form(C::from(1.0), C::from(0.0));
        assert_eq!((p, q), (C::from(0.0), C::from(1.0)));
        // dz = (1, i) -> i dzbar = (i, 1)
        let (p, q) = hodge_star_1form(C::from(1.0), C::i());
        assert!((p - C::i()).norm() < 1e-15 && (q - C::from(1.0)).norm() < 1e-15);
        // star star = -1 on real forms
        let (p, q) = hodge_star_1form(C::from(0.3), C::from(-0.7));
        let (p2, q2) = hodge_star_1form(p, q);
        assert!((p2 + C::from(0.3)).norm() < 1e-15 && (q2 - C::from(0.7)).norm() < 1e-15);
    }

    #[test]
    fn d_exterior_on_constant_and_exact_forms() {
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 16).unwrap();
        let constant = So22ValuedForm::sample(patch, |_| {
            let m = e_basis_complex()[0];
            (m, m * C::from(2.0))
        });
        let (_, rep) = d_exterior(&constant);
        assert_eq!(rep.max_interior, 0.0);

        // d of a smooth 0-form: (p, q) = (df/dx, df/dy) with f = sin(x) e^{y} E1
        let exact = |n: usize| {
            let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, n).unwrap();
            let form = So22ValuedForm::sample(patch, |z| {
                let e1 = e_basis_complex()[0];
                let p = e1 * C::from(z.x.cos() * z.y.exp());
                let q = e1 * C::from(z.x.sin() * z.y.exp());
                (p, q)
            });
            d_exterior(&form).1.max_interior
        };
        let r16 = exact(16);
        let r32 = exact(32);
        let ratio = r16 / r32;
        assert!((3.5..=4.5).contains(&ratio), "convergence ratio {ratio}");
    }

    #[test]
    fn principal_forms_are_d_closed_at_second_order() {
        // phi = z^2 has degree-4 entries, the dominant truncation error
        let phi = [C::from(0.0), C::from(0.0), C::from(1.0)];
        let res = |n: usize| {
            let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, n).unwrap();
            let form = principal_form(patch, &phi);
            assert!(form.algebra_residual() <= 1e-10);
            d_exterior(&form).1.max_interior
        };
        let r = res(32) / res(64);
        assert!((3.5..=4.5).contains(&r), "d ratio {r}");
    }

    #[test]
    fn principal_forms_are_delta_closed_at_second_order() {
        let phi = [C::from(0.0), C::from(0.0), C::from(1.0)];
        let res = |n: usize| {
            let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, n).unwrap();
            let form = principal_form(patch, &phi);
            delta_coboundary(&form, MetricVariant::Standard)
                .unwrap()
                .1
                .max_interior
        };
        let r32 = res(32);
        let r64 = res(64);
        let ratio = r32 / r64;
        assert!((3.5..=4.5).contains(&ratio), "delta ratio {ratio}");
    }

    #[test]
    fn zero_form_has_zero_delta() {
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 8).unwrap();
        let zero = So22ValuedForm::sample(patch, |_| (Mat4c::zeros(), Mat4c::zeros()));
        let (_, rep) = delta_coboundary(&zero, MetricVariant::Standard).unwrap();
        assert_eq!(rep.max_interior, 0.0);
    }

    #[test]
    fn anti_holomorphic_form_is_not_delta_closed() {
        // phi(z) dz with phi = conj(z): the delta residual stays away from 0
        let sample = |n: usize| {
            let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, n).unwrap();
            let form = So22ValuedForm::sample(patch, |z| {
                let zz = z.complex();
                let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
                let val = zz.conj();
                (xz * val, xz * (val * C::i()))
            });
            delta_coboundary(&form, MetricVariant::Standard)
                .unwrap()
                .1
                .max_interior
        };
        assert!(sample(32) > 1e-2);
        assert!(sample(64) > 1e-2);
    }

    #[test]
    fn q_isometry_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let zi = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let fmq = frame_metric_q(zi);
        assert!(lie::max_abs4(&(fmq.h - Matrix4::identity())) < 1e-15);
        for _ in 0..200 {
            let z = random_z(&mut rng);
            let pairs: Vec<(Mat4c, Mat4c)> = (0..5)
                .map(|_| (random_so22_complex(&mut rng), random_so22_complex(&mut rng)))
                .collect();
            let report = q_isometry_check(z, &pairs).unwrap();
            assert!(report.invariance_error <= 1e-10, "{report:?}");
        }
    }

    #[test]
    fn q_pushed_principal_forms_stay_harmonic() {
        let phi = [C::from(0.0), C::from(1.0)]; // phi = z
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 32).unwrap();
        let form = principal_form(patch, &phi);
        let d0 = d_exterior(&form).1.max_interior;
        let delta0 = delta_coboundary(&form, MetricVariant::Standard)
            .unwrap()
            .1
            .max_interior;
        let pushed = form.q_conjugated();
        let d1 = d_exterior(&pushed).1.max_interior;
        let delta1 = delta_coboundary(&pushed, MetricVariant::QConjugated)
            .unwrap()
            .1
            .max_interior;
        assert!(d1 <= 2.0 * d0 + 1e-12 && d0 <= 2.0 * d1 + 1e-12);
        assert!(delta1 <= 2.0 * delta0 + 1e-12 && delta0 <= 2.0 * delta1 + 1e-12);
    }

    #[test]
    fn wp_pairing_constant_example() {
        // phi = psi = 1 on [0,1] x [1,2]: rhs = 32 * 7/3 up to quadrature error
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 128).unwrap();
        let one = [C::from(1.0)];
        let wp = wp_patch_pairing(&one, &one, &patch).unwrap();
        let exact = 32.0 * 7.0 / 3.0;
        assert!((wp.rhs - exact).abs() <= 1e-4, "{} vs {exact}", wp.rhs);
        assert!((wp.lhs - wp.rhs).abs() <= 1e-12 * (1.0 + wp.rhs.abs()));
    }

    #[test]
    fn wp_pairing_orthogonal_case() {
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 64).unwrap();
        let one = [C::from(1.0)];
        let eye = [C::i()];
        let wp = wp_patch_pairing(&one, &eye, &patch).unwrap();
        assert!(wp.lhs.abs() <= 1e-12 && wp.rhs.abs() <= 1e-12);
    }

    #[test]
    fn wp_pairing_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 48).unwrap();
        for _ in 0..20 {
            let deg = rng.gen_range(0..=4usize);
            let phi: Vec<C> = (0..=deg)
                .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let deg2 = rng.gen_range(0..=4usize);
            let psi: Vec<C> = (0..=deg2)
                .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let wp = wp_patch_pairing(&phi, &psi, &patch).unwrap();
            assert!(
                (wp.lhs - wp.rhs).abs() <= 1e-12 * (1.0 + wp.rhs.abs()),
                "{wp:?}"
            );
        }
    }

    #[test]
    fn principal_form_value_at_i() {
        let z = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let (p, _) = principal_form_value(z, &[C::from(1.0)]);
        assert!((p[(0, 2)] - C::from(-2.0)).norm() < 1e-15);
        assert!((p[(1, 2)] - C::new(0.0, -2.0)).norm() < 1e-15);
        assert!((p[(2, 0)] - C::from(-2.0)).norm() < 1e-15);
        assert!((p[(2, 1)] - C::new(0.0, -2.0)).norm() < 1e-15);
        assert!(p[(0, 1)].norm() < 1e-15 && p[(1, 0)].norm() < 1e-15);
        // linearity in phi
        let (p2, q2) = principal_form_value(z, &[C::from(2.0)]);
        let (p1, q1) = principal_form_value(z, &[C::from(1.0)]);
        assert!(lie::max_abs4c(&(p2 - p1 * C::from(2.0))) < 1e-15);
        assert!(lie::max_abs4c(&(q2 - q1 * C::from(2.0))) < 1e-15);
    }
}
