//! Small-matrix linear algebra: SL(2,R), SO_0(2,2), their Lie algebras and the
//! explicit maps between them.
//!
//! Conventions. The quadratic form on R^4 is J = diag(1,1,-1,-1). The embedding
//! `phi_group` lands in the SO_0(2,1) < SO_0(2,2) stabilizing e_4; its (2,1)
//! entry is `ab - cd`. (A misprinted variant, `ad - cd`, circulates; it breaks
//! J-orthogonality already on diag(l, 1/l), while `ab - cd` passes the
//! orthogonality check, the homomorphism property and equivariance with the
//! hyperboloid embedding.)

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// J = diag(1,1,-1,-1), the bilinear form of signature (2,2).
pub fn form_j() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0))
}

/// Q = diag(-1,-1,1,-1). Involution realizing the left/right swap; Q = Q^t = Q^{-1}.
pub fn swap_q() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, -1.0, 1.0, -1.0))
}

pub(crate) fn max_abs2(m: &Matrix2<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub(crate) fn max_abs4(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub(crate) fn max_abs4c(m: &Matrix4<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// An element of SL(2,R); |det - 1| <= 1e-12 enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2 {
    m: Matrix2<f64>,
}

impl Sl2 {
    pub const DET_TOL: f64 = 1e-12;

    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        if (det - 1.0).abs() > Self::DET_TOL {
            return Err(Error::InvalidMatrix(format!(
                "SL2 determinant {det} deviates from 1 beyond {}",
                Self::DET_TOL
            )));
        }
        Ok(Self { m })
    }

    pub fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(Matrix2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    /// Rescale by 1/sqrt(det) so the determinant is 1 to machine precision.
    /// Used after long products or Newton updates to keep drift out.
    pub fn renormalized(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::InvalidMatrix(format!(
                "cannot renormalize matrix with determinant {det}"
            )));
        }
        Ok(Self { m: m / det.sqrt() })
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Inverse by the adjugate formula (exact for det = 1).
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self {
            m: Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]),
        }
    }

    pub fn compose(&self, other: &Sl2) -> Self {
        Self {
            m: self.m * other.m,
        }
    }

    /// Moebius action on the upper half-plane, z -> (az + b)/(cz + d).
    pub fn moebius(&self, z: Complex64) -> Complex64 {
        let m = &self.m;
        (m[(0, 0)] * z + Complex64::from(m[(0, 1)])) / (m[(1, 0)] * z + Complex64::from(m[(1, 1)]))
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + 1e-12
    }
}

/// A traceless 2x2 matrix [[a, b], [c, -a]].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sl2Alg {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sl2Alg {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Traceless part of an arbitrary 2x2 matrix.
    pub fn project(m: &Matrix2<f64>) -> Self {
        let a = (m[(0, 0)] - m[(1, 1)]) / 2.0;
        Self::new(a, m[(0, 1)], m[(1, 0)])
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a, self.b, self.c, -self.a)
    }

    pub fn frobenius_dot(&self, other: &Sl2Alg) -> f64 {
        2.0 * self.a * other.a + self.b * other.b + self.c * other.c
    }

    pub fn norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self::new(self.a * t, self.b * t, self.c * t)
    }

    pub fn add(&self, other: &Sl2Alg) -> Self {
        Self::new(self.a + other.a, self.b + other.b, self.c + other.c)
    }

    /// Ad(g) X = g X g^{-1}, again traceless.
    pub fn adjoint_by(&self, g: &Sl2) -> Self {
        let m = g.matrix() * self.matrix() * g.inverse().matrix();
        Self::project(&m)
    }

    pub fn exp(&self) -> Sl2 {
        Sl2 {
            m: expm(&self.matrix()),
        }
    }
}

/// An element of SO_0(2,2): m^t J m = J to 1e-10 and det m = 1 to 1e-10.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So22 {
    m: Matrix4<f64>,
}

impl So22 {
    pub const ORTHO_TOL: f64 = 1e-10;

    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let j = form_j();
        let ortho = max_abs4(&(m.transpose() * j * m - j));
        if ortho > Self::ORTHO_TOL {
            return Err(Error::InvalidMatrix(format!(
                "SO(2,2) orthogonality residual {ortho:e} exceeds {:e}",
                Self::ORTHO_TOL
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > Self::ORTHO_TOL {
            return Err(Error::InvalidMatrix(format!(
                "SO(2,2) determinant {det} deviates from 1"
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }
}

/// An element of so_0(2,2): m^t J + J m = 0 to 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So22Alg {
    m: Matrix4<f64>,
}

impl So22Alg {
    pub const ALG_TOL: f64 = 1e-12;

    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let res = so22_residual(&m);
        if res > Self::ALG_TOL {
            return Err(Error::InvalidMatrix(format!(
                "so(2,2) residual {res:e} exceeds {:e}",
                Self::ALG_TOL
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }
}

/// ||m^t J + J m||_max for a real 4x4 matrix.
pub fn so22_residual(m: &Matrix4<f64>) -> f64 {
    let j = form_j();
    max_abs4(&(m.transpose() * j + j * m))
}

/// ||m^t J + J m||_max for a complex 4x4 matrix (plain transpose).
pub fn so22_residual_complex(m: &Matrix4<Complex64>) -> f64 {
    let j = form_j().map(Complex64::from);
    max_abs4c(&(m.transpose() * j + j * m))
}

/// The isomorphism PSL(2,R) -> SO_0(2,1) < SO_0(2,2) fixing e_4.
pub fn phi_group(a: &Sl2) -> Result<So22> {
    let m = a.matrix();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let out = Matrix4::new(
        a * d + b * c,
        a * c - b * d,
        a * c + b * d,
        0.0,
        a * b - c * d,
        (a * a - b * b - c * c + d * d) / 2.0,
        (a * a + b * b - c * c - d * d) / 2.0,
        0.0,
        a * b + c * d,
        (a * a - b * b + c * c - d * d) / 2.0,
        (a * a + b * b + c * c + d * d) / 2.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.0,
    );
    So22::new(out)
}

/// The induced Lie algebra homomorphism sl(2,R) -> so_0(2,2).
pub fn phi_alg(x: &Sl2Alg) -> So22Alg {
    So22Alg {
        m: phi_alg_raw(x.a, x.b, x.c),
    }
}

fn phi_alg_raw(a: f64, b: f64, c: f64) -> Matrix4<f64> {
    Matrix4::new(
        0.0,
        c - b,
        c + b,
        0.0,
        b - c,
        0.0,
        2.0 * a,
        0.0,
        b + c,
        2.0 * a,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    )
}

/// Complex extension of `phi_alg`, entrywise the same formula.
pub fn phi_alg_complex(a: Complex64, b: Complex64, c: Complex64) -> Matrix4<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    Matrix4::new(
        z,
        c - b,
        c + b,
        z,
        b - c,
        z,
        2.0 * a,
        z,
        b + c,
        2.0 * a,
        z,
        z,
        z,
        z,
        z,
        z,
    )
}

/// Orthonormal basis of 2x2 matrices diagonalizing the determinant form to
/// J = diag(1,1,-1,-1): (M1+M4)/sqrt2, (M2-M3)/sqrt2, (M1-M4)/sqrt2, (M2+M3)/sqrt2.
fn det_form_basis() -> [Matrix2<f64>; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        Matrix2::new(s, 0.0, 0.0, s),
        Matrix2::new(0.0, s, -s, 0.0),
        Matrix2::new(s, 0.0, 0.0, -s),
        Matrix2::new(0.0, s, s, 0.0),
    ]
}

/// The matrix of M -> A M B^t on 2x2 matrices in the `det_form_basis`,
/// realizing SL(2,R) x SL(2,R) -> SO_0(2,2). Its trace is tr(A) tr(B).
pub fn rho_so22(a: &Sl2, b: &Sl2) -> Result<So22> {
    let basis = det_form_basis();
    let mut out = Matrix4::zeros();
    for (col, f) in basis.iter().enumerate() {
        let image = a.matrix() * f * b.matrix().transpose();
        for (row, g) in basis.iter().enumerate() {
            // basis is Frobenius-orthonormal, so coordinates are plain dots
            out[(row, col)] = image.dot(g);
        }
    }
    So22::new(out)
}

/// Hyperbolic translation length 2 log lambda = 2 arccosh(|tr|/2).
pub fn translation_length(a: &Sl2) -> Result<f64> {
    let t = a.trace().abs();
    if t <= 2.0 + 1e-12 {
        return Err(Error::NotHyperbolic { trace_abs: t });
    }
    Ok(2.0 * (t / 2.0).acosh())
}

/// Translation length in AdS_3: the average of the two factor lengths.
pub fn ads_length(len_l: f64, len_r: f64) -> f64 {
    (len_l + len_r) / 2.0
}

/// The basis E_1..E_6 of so_0(2,2); E_1, E_2, E_3 are the `phi_alg` images of
/// the standard sl(2,R) basis.
pub fn e_basis() -> [So22Alg; 6] {
    let e1 = phi_alg(&Sl2Alg::new(0.0, 1.0, 0.0));
    let e2 = phi_alg(&Sl2Alg::new(0.5, 0.0, 0.0));
    let e3 = phi_alg(&Sl2Alg::new(0.0, 0.0, 1.0));
    let mut m4 = Matrix4::zeros();
    m4[(0, 3)] = 1.0;
    m4[(3, 0)] = 1.0;
    let mut m5 = Matrix4::zeros();
    m5[(1, 3)] = 1.0;
    m5[(3, 1)] = 1.0;
    let mut m6 = Matrix4::zeros();
    m6[(2, 3)] = 1.0;
    m6[(3, 2)] = -1.0;
    [
        e1,
        e2,
        e3,
        So22Alg { m: m4 },
        So22Alg { m: m5 },
        So22Alg { m: m6 },
    ]
}

/// Q M Q^{-1} with Q = diag(-1,-1,1,-1); entrywise (i,j) -> q_i q_j M_ij.
pub fn q_conjugate(m: &Matrix4<f64>) -> Matrix4<f64> {
    let q = [-1.0, -1.0, 1.0, -1.0];
    Matrix4::from_fn(|i, j| q[i] * q[j] * m[(i, j)])
}

/// Complex variant of `q_conjugate`.
pub fn q_conjugate_complex(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let q = [-1.0, -1.0, 1.0, -1.0];
    Matrix4::from_fn(|i, j| m[(i, j)] * q[i] * q[j])
}

/// Matrix exponential by scaling and squaring with a series tolerance of 1e-15.
pub fn expm<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    let norm = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) * N as f64;
    let mut s = 0u32;
    let mut scaled = *m;
    if norm > 0.5 {
        s = (norm / 0.5).log2().ceil() as u32;
        scaled /= 2f64.powi(s as i32);
    }
    let mut sum = SMatrix::<f64, N, N>::identity();
    let mut term = SMatrix::<f64, N, N>::identity();
    for k in 1..60 {
        term = term * scaled / k as f64;
        sum += term;
        if term.iter().fold(0.0f64, |acc, v| acc.max(v.abs())) < 1e-15 {
            break;
        }
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

/// Max-norm distance between two matrices after projective sign normalization
/// (compares both +/-B against A, returns the smaller deviation).
pub fn projective_distance(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
    max_abs4(&(a - b)).min(max_abs4(&(a + b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_sl2alg(rng: &mut impl Rng) -> Sl2Alg {
        Sl2Alg::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    }

    pub(crate) fn random_sl2(rng: &mut impl Rng) -> Sl2 {
        random_sl2alg(rng).exp()
    }

    #[test]
    fn phi_group_identity() {
        let p = phi_group(&Sl2::identity()).unwrap();
        assert_eq!(max_abs4(&(p.matrix() - Matrix4::identity())), 0.0);
    }

    #[test]
    fn phi_group_parabolic_example() {
        // frozen by substituting a=1, b=1, c=0, d=1 into the corrected formula;
        // cross-checked by the embedding equivariance oracle below
        let a = Sl2::from_entries(1.0, 1.0, 0.0, 1.0).unwrap();
        let p = phi_group(&a).unwrap();
        let expected = Matrix4::new(
            1.0, -1.0, 1.0, 0.0, 1.0, 0.5, 0.5, 0.0, 1.0, -0.5, 1.5, 0.0, 0.0, 0.0, 0.0, 1.0,
        );
        assert!(max_abs4(&(p.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn phi_group_misprint_variant_fails_invariant() {
        // the `ad - cd` variant breaks J-orthogonality on diag(l, 1/l)
        let l = std::f64::consts::E;
        let (a, b, c, d) = (l, 0.0, 0.0, 1.0 / l);
        let mut m = phi_group(&Sl2::from_entries(a, b, c, d).unwrap())
            .unwrap()
            .matrix()
            .to_owned();
        m[(1, 0)] = a * d - c * d;
        assert!(So22::new(m).is_err());
    }

    #[test]
    fn phi_group_homomorphism_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let j = form_j();
        for _ in 0..1000 {
            let a = random_sl2(&mut rng);
            let b = random_sl2(&mut rng);
            let pa = phi_group(&a).unwrap();
            let pb = phi_group(&b).unwrap();
            let pab = phi_group(&a.compose(&b)).unwrap();
            assert!(max_abs4(&(pab.matrix() - pa.matrix() * pb.matrix())) <= 1e-10);
            let res = max_abs4(&(pa.matrix().transpose() * j * pa.matrix() - j));
            assert!(res <= 1e-10);
        }
    }

    #[test]
    fn phi_alg_basis_images() {
        let e = e_basis();
        let from_diag = phi_alg(&Sl2Alg::new(0.5, 0.0, 0.0));
        assert_eq!(from_diag.matrix(), e[1].matrix());
        let from_upper = phi_alg(&Sl2Alg::new(0.0, 1.0, 0.0));
        assert_eq!(from_upper.matrix(), e[0].matrix());
        let zero = phi_alg(&Sl2Alg::new(0.0, 0.0, 0.0));
        assert_eq!(max_abs4(zero.matrix()), 0.0);
    }

    #[test]
    fn phi_alg_bracket_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = random_sl2alg(&mut rng);
            let y = random_sl2alg(&mut rng);
            let bracket = x.matrix() * y.matrix() - y.matrix() * x.matrix();
            let lhs = phi_alg(&Sl2Alg::project(&bracket));
            let px = phi_alg(&x).matrix().to_owned();
            let py = phi_alg(&y).matrix().to_owned();
            let rhs = px * py - py * px;
            assert!(max_abs4(&(lhs.matrix() - rhs)) <= 1e-12);
        }
    }

    #[test]
    fn phi_exp_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let x = random_sl2alg(&mut rng);
            let t: f64 = rng.gen_range(-1.0..1.0);
            let lhs = phi_group(&x.scale(t).exp()).unwrap();
            let rhs = expm(&(phi_alg(&x).matrix() * t));
            assert!(max_abs4(&(lhs.matrix() - rhs)) <= 1e-8);
        }
    }

    #[test]
    fn rho_so22_identity_and_trace() {
        let id = rho_so22(&Sl2::identity(), &Sl2::identity()).unwrap();
        assert!(max_abs4(&(id.matrix() - Matrix4::identity())) < 1e-14);

        let l = std::f64::consts::E;
        let a = Sl2::from_entries(l, 0.0, 0.0, 1.0 / l).unwrap();
        let r = rho_so22(&a, &a).unwrap();
        // eigenvalues lambda^{+-1} mu^{+-1}; trace = 4 cosh^2(1) for l = e
        let expected = 4.0 * 1.0f64.cosh().powi(2);
        assert!((r.trace() - expected).abs() <= 1e-10, "{}", r.trace());
    }

    #[test]
    fn rho_so22_homomorphism_each_slot() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let a1 = random_sl2(&mut rng);
            let a2 = random_sl2(&mut rng);
            let b = random_sl2(&mut rng);
            let lhs = rho_so22(&a1.compose(&a2), &b).unwrap();
            let rhs = rho_so22(&a1, &Sl2::identity()).unwrap().matrix()
                * rho_so22(&a2, &b).unwrap().matrix();
            assert!(max_abs4(&(lhs.matrix() - rhs)) <= 1e-10);
            let lhs2 = rho_so22(&b, &a1.compose(&a2)).unwrap();
            let rhs2 = rho_so22(&Sl2::identity(), &a1).unwrap().matrix()
                * rho_so22(&b, &a2).unwrap().matrix();
            assert!(max_abs4(&(lhs2.matrix() - rhs2)) <= 1e-10);
        }
    }

    #[test]
    fn rho_so22_diagonal_pair_fixes_identity_direction() {
        // the identity 2x2 matrix maps to e_1 in the chosen basis
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let a = random_sl2(&mut rng);
            let r = rho_so22(&a, &a).unwrap();
            let e1 = Vector4::new(1.0, 0.0, 0.0, 0.0);
            assert!((r.matrix() * e1 - e1).amax() <= 1e-12);
        }
    }

    #[test]
    fn translation_length_values() {
        let l = std::f64::consts::E;
        let a = Sl2::from_entries(l, 0.0, 0.0, 1.0 / l).unwrap();
        assert!((translation_length(&a).unwrap() - 2.0).abs() < 1e-14);

        // octagon generator: tr = 2(1 + sqrt2) gives 2 arccosh(1 + sqrt2)
        let t = 2.0 * (1.0 + 2.0f64.sqrt());
        let s = (t * t / 4.0 - 1.0).sqrt();
        let a = Sl2::from_entries(t / 2.0, s, s, t / 2.0);
        // det = t^2/4 - s^2 = 1
        let a = a.unwrap();
        let expected = 2.0 * (1.0 + 2.0f64.sqrt()).acosh();
        assert!((translation_length(&a).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 3.057141687871).abs() < 1e-9);

        let p = Sl2::from_entries(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            translation_length(&p),
            Err(Error::NotHyperbolic { .. })
        ));
    }

    #[test]
    fn translation_length_invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let mut a = random_sl2(&mut rng);
            // make it safely hyperbolic
            while a.trace().abs() <= 2.1 {
                a = a.compose(&a);
            }
            let g = random_sl2(&mut rng);
            let conj = Sl2::renormalized(g.matrix() * a.matrix() * g.inverse().matrix()).unwrap();
            let l0 = translation_length(&a).unwrap();
            assert!((translation_length(&a.inverse()).unwrap() - l0).abs() <= 1e-12 * (1.0 + l0));
            assert!((translation_length(&conj).unwrap() - l0).abs() <= 1e-10 * (1.0 + l0));
        }
    }

    #[test]
    fn ads_length_values() {
        assert_eq!(ads_length(2.0, 2.0), 2.0);
        assert_eq!(ads_length(2.0, 4.0), 3.0);
        assert_eq!(ads_length(0.0, 0.0), 0.0);
    }

    #[test]
    fn e_basis_entries_and_invariant() {
        let e = e_basis();
        // E2: exactly two nonzero entries, (2,3) = (3,2) = 1 (1-based)
        let e2 = e[1].matrix();
        assert_eq!(e2[(1, 2)], 1.0);
        assert_eq!(e2[(2, 1)], 1.0);
        assert_eq!(e2.iter().filter(|v| **v != 0.0).count(), 2);
        // E6: (3,4) = 1, (4,3) = -1
        let e6 = e[5].matrix();
        assert_eq!(e6[(2, 3)], 1.0);
        assert_eq!(e6[(3, 2)], -1.0);
        for ei in &e {
            assert_eq!(so22_residual(ei.matrix()), 0.0);
        }
    }

    #[test]
    fn q_conjugation_table() {
        let e = e_basis();
        let expect: [(usize, f64, usize); 6] = [
            (0, -1.0, 2), // E1 -> -E3
            (1, -1.0, 1), // E2 -> -E2
            (2, -1.0, 0), // E3 -> -E1
            (3, 1.0, 3),  // E4 -> E4
            (4, 1.0, 4),  // E5 -> E5
            (5, -1.0, 5), // E6 -> -E6
        ];
        for (i, sign, j) in expect {
            let got = q_conjugate(e[i].matrix());
            let want = e[j].matrix() * sign;
            assert_eq!(got, want, "Q-conjugation of E{}", i + 1);
        }
        let id = Matrix4::identity();
        assert_eq!(q_conjugate(&id), id);
    }

    #[test]
    fn expm_matches_closed_forms() {
        // exp of diag(t, -t)
        let x = Sl2Alg::new(0.7, 0.0, 0.0).matrix();
        let e = expm(&x);
        assert!((e[(0, 0)] - 0.7f64.exp()).abs() < 1e-14);
        assert!((e[(1, 1)] - (-0.7f64).exp()).abs() < 1e-14);
        // rotation generator
        let r = Matrix2::new(0.0, 1.0, -1.0, 0.0);
        let e = expm(&(r * 0.3));
        assert!((e[(0, 0)] - 0.3f64.cos()).abs() < 1e-14);
        assert!((e[(0, 1)] - 0.3f64.sin()).abs() < 1e-14);
    }
}
