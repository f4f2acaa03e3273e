//! Genus-2 surface-group representations into PSL(2,R): the regular-octagon
//! base point, relator-preserving Newton deformations, bending paths, and
//! difference-quotient cocycles.
//!
//! Words and relators are lists of signed 1-based generator indices: `+k`
//! stands for the generator `g{k-1}`, `-k` for its inverse.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{self, Sl2, Sl2Alg};

/// Signed 1-based generator index.
pub type Letter = i32;
pub type Word = Vec<Letter>;

/// Residual tolerance every public representation must satisfy.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// One-relator presentation of a closed surface group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub genus: usize,
    pub generator_names: Vec<String>,
    pub relator: Word,
}

impl Presentation {
    pub fn new(genus: usize, generator_names: Vec<String>, relator: Word) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidInput(format!("genus {genus} < 2")));
        }
        if relator.len() != 4 * genus {
            return Err(Error::InvalidInput(format!(
                "relator length {} != 4 * genus",
                relator.len()
            )));
        }
        let n = generator_names.len();
        let mut counts = vec![0usize; n];
        for &l in &relator {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > n {
                return Err(Error::InvalidInput(format!("bad relator letter {l}")));
            }
            counts[idx - 1] += 1;
        }
        if counts.iter().any(|&c| c != 2) {
            return Err(Error::InvalidInput(
                "each generator must appear exactly twice in the relator".into(),
            ));
        }
        Ok(Self {
            genus,
            generator_names,
            relator,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }
}

/// A representation of the surface group: one SL2 matrix per generator, with
/// relator residual <= 1e-9 and all generators hyperbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceRepresentation {
    pub presentation: Presentation,
    matrices: Vec<Sl2>,
}

impl SurfaceRepresentation {
    pub fn new(presentation: Presentation, matrices: Vec<Sl2>) -> Result<Self> {
        if matrices.len() != presentation.generator_count() {
            return Err(Error::InvalidInput(
                "matrix count does not match generator count".into(),
            ));
        }
        let rep = Self {
            presentation,
            matrices,
        };
        rep.validate()?;
        Ok(rep)
    }

    fn validate(&self) -> Result<()> {
        for m in &self.matrices {
            if !m.is_hyperbolic() {
                return Err(Error::NotHyperbolic {
                    trace_abs: m.trace().abs(),
                });
            }
        }
        let res = relator_residual(self);
        if res > RESIDUAL_TOL {
            return Err(Error::InvalidMatrix(format!(
                "relator residual {res:e} exceeds {RESIDUAL_TOL:e}"
            )));
        }
        Ok(())
    }

    pub fn generator(&self, k: usize) -> &Sl2 {
        &self.matrices[k]
    }

    pub fn generators(&self) -> &[Sl2] {
        &self.matrices
    }

    /// Conjugate every generator by g. Leaves the relator residual unchanged
    /// up to roundoff.
    pub fn conjugated(&self, g: &Sl2) -> Result<Self> {
        let gi = g.inverse();
        let matrices = self
            .matrices
            .iter()
            .map(|m| Sl2::renormalized(g.matrix() * m.matrix() * gi.matrix()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.presentation.clone(), matrices)
    }
}

/// Ordered product of generators and inverses along the word.
pub fn evaluate_word(rep: &SurfaceRepresentation, word: &[Letter]) -> Sl2 {
    let m = evaluate_word_raw(&rep.matrices, word);
    // products of unit-determinant matrices; drift stays far below the ctor tol
    Sl2::renormalized(m).expect("word evaluation produced a singular matrix")
}

/// min over signs of ||W -/+ I||_max where W evaluates the relator.
pub fn relator_residual(rep: &SurfaceRepresentation) -> f64 {
    let w = evaluate_word_raw(&rep.matrices, &rep.presentation.relator);
    residual_of(&w)
}

fn evaluate_word_raw(mats: &[Sl2], word: &[Letter]) -> Matrix2<f64> {
    let mut m = Matrix2::identity();
    for &l in word {
        let g = &mats[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            m *= g.matrix();
        } else {
            m *= g.inverse().matrix();
        }
    }
    m
}

fn residual_of(w: &Matrix2<f64>) -> f64 {
    let id = Matrix2::identity();
    lie::max_abs2(&(w - id)).min(lie::max_abs2(&(w + id)))
}

/// The Fuchsian holonomy of the regular hyperbolic octagon with all vertex
/// angles pi/4: generators g_k = r^k g_0 r^{-k} for k = 0..3, where g_0 pairs
/// opposite sides with tr g_0 = 2 + 2 sqrt2 and r rotates by pi/4 about i.
/// The relator is found by exhaustive search over length-8 cyclic words and
/// cached under `cache_dir()`.
pub fn octagon_fuchsian() -> Result<SurfaceRepresentation> {
    let s2 = 2.0f64.sqrt();
    let off = (2.0 + 2.0 * s2).sqrt();
    let g0 = Sl2::from_entries(1.0 + s2, off, off, 1.0 + s2)?;
    let th = std::f64::consts::PI / 8.0;
    let r = Sl2::from_entries(th.cos(), th.sin(), -th.sin(), th.cos())?;

    let mut gens = Vec::with_capacity(4);
    let mut rk = Sl2::identity();
    for _ in 0..4 {
        gens.push(Sl2::renormalized(
            rk.matrix() * g0.matrix() * rk.inverse().matrix(),
        )?);
        rk = r.compose(&rk);
    }

    let relator = octagon_relator(&gens)?;
    let names = (0..4).map(|k| format!("g{k}")).collect();
    let presentation = Presentation::new(2, names, relator)?;
    SurfaceRepresentation::new(presentation, gens)
}

/// Cache directory: `GHLAB_CACHE_DIR` or `./cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os("GHLAB_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("./cache"))
}

fn octagon_relator(gens: &[Sl2]) -> Result<Word> {
    let cache = cache_dir().join("octagon_relator.json");
    if let Ok(text) = std::fs::read_to_string(&cache) {
        if let Ok(word) = serde_json::from_str::<Word>(&text) {
            if word.len() == 8 && residual_of(&evaluate_word_raw(gens, &word)) <= RESIDUAL_TOL {
                return Ok(word);
            }
        }
    }
    let word = search_relator(gens)?;
    let _ = std::fs::create_dir_all(cache.parent().unwrap());
    let tmp = cache.with_extension("tmp");
    if serde_json::to_writer(std::fs::File::create(&tmp)?, &word).is_ok() {
        let _ = std::fs::rename(&tmp, &cache);
    }
    Ok(word)
}

/// Depth-first search over length-8 cyclically reduced words using each
/// generator exactly twice (free signs); returns the lexicographically first
/// canonical word evaluating to +/-I within 1e-9.
fn search_relator(gens: &[Sl2]) -> Result<Word> {
    let letters: Vec<Letter> = vec![1, -1, 2, -2, 3, -3, 4, -4];
    let mut counts = [0u8; 4];
    let mut word: Word = Vec::with_capacity(8);
    let mut found: Option<Word> = None;
    fn dfs(
        gens: &[Sl2],
        letters: &[Letter],
        word: &mut Word,
        counts: &mut [u8; 4],
        found: &mut Option<Word>,
    ) {
        if found.is_some() {
            return;
        }
        if word.len() == 8 {
            if word[0] == -word[7] {
                return; // not cyclically reduced
            }
            if crate::spectrum::canonical_rotation(word) != *word {
                return; // only canonical representatives
            }
            let w = evaluate_word_raw(gens, word);
            if residual_of(&w) <= RESIDUAL_TOL {
                *found = Some(word.clone());
            }
            return;
        }
        for &l in letters {
            let idx = (l.unsigned_abs() - 1) as usize;
            if counts[idx] == 2 {
                continue;
            }
            if let Some(&last) = word.last() {
                if last == -l {
                    continue;
                }
            }
            word.push(l);
            counts[idx] += 1;
            dfs(gens, letters, word, counts, found);
            word.pop();
            counts[idx] -= 1;
        }
    }
    dfs(gens, &letters, &mut word, &mut counts, &mut found);
    found.ok_or(Error::RelatorSearchFailed { tol: RESIDUAL_TOL })
}

/// A gauge-normalized tangent direction: one traceless matrix per generator in
/// left trivialization (the path is g_k(t) = exp(t X_k) g_k), lying in the
/// tangent space of the relator variety and Frobenius-orthogonal to the
/// 3-dimensional conjugation orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentDirection {
    pub components: Vec<Sl2Alg>,
}

impl TangentDirection {
    pub fn dot(&self, other: &TangentDirection) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| x.frobenius_dot(y))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            components: self.components.iter().map(|x| x.scale(t)).collect(),
        }
    }

    fn from_flat(v: &DVector<f64>) -> Self {
        let n = v.len() / 3;
        Self {
            components: (0..n)
                .map(|k| Sl2Alg::new(v[3 * k], v[3 * k + 1], v[3 * k + 2]))
                .collect(),
        }
    }

    fn to_flat(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.components.len() * 3);
        for (k, x) in self.components.iter().enumerate() {
            v[3 * k] = x.a;
            v[3 * k + 1] = x.b;
            v[3 * k + 2] = x.c;
        }
        v
    }
}

/// Weighted flat coordinates in which the Euclidean dot product equals the
/// Frobenius pairing sum_k tr(X_k^t Y_k): the a-coordinate carries sqrt 2.
fn frob_weights(dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |i, _| if i % 3 == 0 { 2.0f64.sqrt() } else { 1.0 })
}

/// The three relator constraint functions: the traceless coordinates of
/// sigma * W where W evaluates the relator and sigma = +/-1 picks the closer
/// sign. F = 0 exactly on the relator variety.
fn relator_constraints(mats: &[Sl2], relator: &[Letter]) -> DVector<f64> {
    let w = evaluate_word_raw(mats, relator);
    let id = Matrix2::identity();
    let sigma = if lie::max_abs2(&(w - id)) <= lie::max_abs2(&(w + id)) {
        1.0
    } else {
        -1.0
    };
    let t = Sl2Alg::project(&(w * sigma));
    DVector::from_vec(vec![t.a, t.b, t.c])
}

/// Analytic Jacobian of the relator constraints with respect to the left
/// trivialized coordinates (3 per generator).
fn relator_jacobian(mats: &[Sl2], relator: &[Letter]) -> DMatrix<f64> {
    let n = mats.len();
    let letters: Vec<Matrix2<f64>> = relator
        .iter()
        .map(|&l| {
            let g = &mats[(l.unsigned_abs() - 1) as usize];
            if l > 0 {
                *g.matrix()
            } else {
                *g.inverse().matrix()
            }
        })
        .collect();
    let len = letters.len();
    let mut prefix = vec![Matrix2::identity(); len + 1];
    for i in 0..len {
        prefix[i + 1] = prefix[i] * letters[i];
    }
    let mut suffix = vec![Matrix2::identity(); len + 1];
    for i in (0..len).rev() {
        suffix[i] = letters[i] * suffix[i + 1];
    }
    let w = prefix[len];
    let id = Matrix2::identity();
    let sigma = if lie::max_abs2(&(w - id)) <= lie::max_abs2(&(w + id)) {
        1.0
    } else {
        -1.0
    };

    let basis = [
        Sl2Alg::new(1.0, 0.0, 0.0),
        Sl2Alg::new(0.0, 1.0, 0.0),
        Sl2Alg::new(0.0, 0.0, 1.0),
    ];
    let mut jac = DMatrix::zeros(3, 3 * n);
    for k in 0..n {
        for (bi, y) in basis.iter().enumerate() {
            let ym = y.matrix();
            let mut dw = Matrix2::zeros();
            for (i, &l) in relator.iter().enumerate() {
                if (l.unsigned_abs() - 1) as usize != k {
                    continue;
                }
                // d/de [exp(eY) g] = Y g ; d/de [g^{-1} exp(-eY)] = -g^{-1} Y
                let dletter = if l > 0 {
                    ym * letters[i]
                } else {
                    -(letters[i] * ym)
                };
                dw += prefix[i] * dletter * suffix[i + 1];
            }
            let dt = Sl2Alg::project(&(dw * sigma));
            jac[(0, 3 * k + bi)] = dt.a;
            jac[(1, 3 * k + bi)] = dt.b;
            jac[(2, 3 * k + bi)] = dt.c;
        }
    }
    jac
}

/// Gauge anchor built from a base representation: pins g_0 to the frame that
/// diagonalizes it and pins the axis ratio of g_1, killing the 3-parameter
/// conjugation redundancy during Newton projection.
#[derive(Debug, Clone)]
struct GaugeAnchor {
    s: Matrix2<f64>,
    s_inv: Matrix2<f64>,
    ratio: f64,
    use_ratio: bool,
}

impl GaugeAnchor {
    fn new(rep: &SurfaceRepresentation) -> Self {
        let g0 = rep.matrices[0].matrix();
        let tr = g0.trace();
        let disc = (tr * tr - 4.0).max(0.0).sqrt();
        let lam = (tr + if tr >= 0.0 { disc } else { -disc }) / 2.0;
        let mu = tr - lam;
        let col = |l: f64| -> (f64, f64) {
            // nonzero row of (g0 - l I) gives the orthogonal of the eigenvector
            let r1 = (g0[(0, 0)] - l, g0[(0, 1)]);
            let r2 = (g0[(1, 0)], g0[(1, 1)] - l);
            let v = if r1.0.abs().max(r1.1.abs()) >= r2.0.abs().max(r2.1.abs()) {
                (-r1.1, r1.0)
            } else {
                (-r2.1, r2.0)
            };
            let n = (v.0 * v.0 + v.1 * v.1).sqrt();
            (v.0 / n, v.1 / n)
        };
        let v1 = col(lam);
        let v2 = col(mu);
        let mut s = Matrix2::new(v1.0, v2.0, v1.1, v2.1);
        if s.determinant() < 0.0 {
            s = Matrix2::new(-v1.0, v2.0, -v1.1, v2.1);
        }
        let scale = s.determinant().sqrt();
        s /= scale;
        let s_inv = Matrix2::new(s[(1, 1)], -s[(0, 1)], -s[(1, 0)], s[(0, 0)]);
        let h1 = s_inv * rep.matrices[1].matrix() * s;
        let (b, c) = (h1[(0, 1)], h1[(1, 0)]);
        let use_ratio = b.abs() > 1e-8 && c.abs() > 1e-8;
        GaugeAnchor {
            s,
            s_inv,
            ratio: if use_ratio { b / c } else { 0.0 },
            use_ratio,
        }
    }

    /// Three pinning values, all zero at the anchor representation.
    fn constraints(&self, mats: &[Sl2]) -> DVector<f64> {
        let h0 = self.s_inv * mats[0].matrix() * self.s;
        let h1 = self.s_inv * mats[1].matrix() * self.s;
        let third = if self.use_ratio {
            h1[(0, 1)] - self.ratio * h1[(1, 0)]
        } else {
            0.0
        };
        DVector::from_vec(vec![h0[(0, 1)], h0[(1, 0)], third])
    }

    fn jacobian(&self, mats: &[Sl2]) -> DMatrix<f64> {
        let n = mats.len();
        let basis = [
            Sl2Alg::new(1.0, 0.0, 0.0),
            Sl2Alg::new(0.0, 1.0, 0.0),
            Sl2Alg::new(0.0, 0.0, 1.0),
        ];
        let mut jac = DMatrix::zeros(3, 3 * n);
        for k in 0..2 {
            for (bi, y) in basis.iter().enumerate() {
                let d = self.s_inv * y.matrix() * mats[k].matrix() * self.s;
                if k == 0 {
                    jac[(0, 3 * k + bi)] = d[(0, 1)];
                    jac[(1, 3 * k + bi)] = d[(1, 0)];
                } else if self.use_ratio {
                    jac[(2, 3 * k + bi)] = d[(0, 1)] - self.ratio * d[(1, 0)];
                }
            }
        }
        jac
    }
}

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TARGET: f64 = 1e-12;
const NEWTON_RIDGE: f64 = 1e-12;

/// One minimum-norm Newton solve: delta = J^t (J J^t + ridge I)^{-1} (-c).
fn newton_step(jac: &DMatrix<f64>, c: &DVector<f64>) -> DVector<f64> {
    let m = jac.nrows();
    let jjt = jac * jac.transpose() + DMatrix::identity(m, m) * NEWTON_RIDGE;
    let rhs = -c;
    let sol = jjt.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(m));
    jac.transpose() * sol
}

fn apply_update(mats: &mut [Sl2], delta: &DVector<f64>) -> Result<()> {
    for (k, m) in mats.iter_mut().enumerate() {
        let x = Sl2Alg::new(delta[3 * k], delta[3 * k + 1], delta[3 * k + 2]);
        *m = Sl2::renormalized(x.exp().matrix() * m.matrix())?;
    }
    Ok(())
}

/// Move the generators to first order by `t * dir` and Newton-project back
/// onto the relator variety, holding the gauge pinned to the input
/// representation. `deform(rep, dir, 0)` returns `rep` unchanged.
pub fn deform(
    rep: &SurfaceRepresentation,
    dir: &TangentDirection,
    t: f64,
) -> Result<SurfaceRepresentation> {
    if t.abs() > 0.5 {
        return Err(Error::NewtonDiverged {
            residual: f64::INFINITY,
            iterations: 0,
        });
    }
    if t == 0.0 {
        return Ok(rep.clone());
    }
    if dir.components.len() != rep.presentation.generator_count() {
        return Err(Error::InvalidInput(
            "direction size does not match generator count".into(),
        ));
    }
    let anchor = GaugeAnchor::new(rep);
    let relator = rep.presentation.relator.clone();
    let mut mats = rep.matrices.clone();

    for (k, m) in mats.iter_mut().enumerate() {
        let x = dir.components[k].scale(t);
        *m = Sl2::renormalized(x.exp().matrix() * m.matrix())?;
    }

    let mut last = f64::INFINITY;
    for iter in 0..NEWTON_MAX_ITER {
        let f = relator_constraints(&mats, &relator);
        let g = anchor.constraints(&mats);
        let resid = f.amax().max(g.amax());
        if resid <= NEWTON_TARGET {
            break;
        }
        if iter == NEWTON_MAX_ITER - 1 || (resid > 1e3 && resid > last) {
            return Err(Error::NewtonDiverged {
                residual: resid,
                iterations: iter,
            });
        }
        last = resid;
        let cols = mats.len() * 3;
        let mut jac = DMatrix::zeros(6, cols);
        jac.view_mut((0, 0), (3, cols))
            .copy_from(&relator_jacobian(&mats, &relator));
        jac.view_mut((3, 0), (3, cols))
            .copy_from(&anchor.jacobian(&mats));
        let mut c = DVector::zeros(6);
        c.rows_mut(0, 3).copy_from(&f);
        c.rows_mut(3, 3).copy_from(&g);
        let delta = newton_step(&jac, &c);
        apply_update(&mut mats, &delta)?;
    }
    SurfaceRepresentation::new(rep.presentation.clone(), mats)
}

/// A point of the deformation space of representation pairs; Fuchsian when
/// left = right.
#[derive(Debug, Clone, PartialEq)]
pub struct GhPair {
    pub left: SurfaceRepresentation,
    pub right: SurfaceRepresentation,
}

impl GhPair {
    pub fn new(left: SurfaceRepresentation, right: SurfaceRepresentation) -> Result<Self> {
        if left.presentation != right.presentation {
            return Err(Error::InvalidInput(
                "left and right presentations differ".into(),
            ));
        }
        Ok(Self { left, right })
    }

    pub fn fuchsian(rep: SurfaceRepresentation) -> Self {
        Self {
            left: rep.clone(),
            right: rep,
        }
    }
}

/// The bending path t -> (deform(rep, dir, +t), deform(rep, dir, -t)); at
/// t = 0 the pair is Fuchsian and the tangent is (v, -v).
pub fn pure_bending_path(
    rep: &SurfaceRepresentation,
    dir: &TangentDirection,
    t: f64,
) -> Result<GhPair> {
    let left = deform(rep, dir, t)?;
    let right = deform(rep, dir, -t)?;
    GhPair::new(left, right)
}

/// Orthonormal basis of the conjugation-orbit directions at `rep` in left
/// trivialization: X_k = Y - Ad(g_k) Y for Y in a basis of sl(2,R).
pub fn conjugation_directions(rep: &SurfaceRepresentation) -> Vec<TangentDirection> {
    let basis = [
        Sl2Alg::new(1.0, 0.0, 0.0),
        Sl2Alg::new(0.0, 1.0, 0.0),
        Sl2Alg::new(0.0, 0.0, 1.0),
    ];
    basis
        .iter()
        .map(|y| TangentDirection {
            components: rep
                .matrices
                .iter()
                .map(|g| y.add(&y.adjoint_by(g).scale(-1.0)))
                .collect(),
        })
        .collect()
}

/// Project a raw per-generator perturbation onto the tangent space of the
/// relator variety intersected with the Frobenius-orthogonal complement of
/// the conjugation orbit.
pub fn project_direction(rep: &SurfaceRepresentation, raw: &TangentDirection) -> TangentDirection {
    let n = rep.presentation.generator_count();
    let dim = 3 * n;
    let w = frob_weights(dim);
    let jac = relator_jacobian(&rep.matrices, &rep.presentation.relator);
    let mut jw = jac.clone();
    for r in 0..jw.nrows() {
        for c in 0..dim {
            jw[(r, c)] /= w[c];
        }
    }
    let mut v = raw.to_flat();
    for i in 0..dim {
        v[i] *= w[i];
    }
    // remove the normal components of the relator constraints (Gram solve)
    let gram = &jw * jw.transpose();
    let rhs = &jw * &v;
    if let Some(sol) = gram.lu().solve(&rhs) {
        v -= jw.transpose() * sol;
    }
    // remove the conjugation-orbit components (Gram-Schmidt in weighted coords)
    let mut orbit: Vec<DVector<f64>> = Vec::new();
    for d in conjugation_directions(rep) {
        let mut u = d.to_flat();
        for i in 0..dim {
            u[i] *= w[i];
        }
        for done in &orbit {
            let coef = u.dot(done);
            u -= done * coef;
        }
        let norm = u.norm();
        if norm > 1e-12 {
            orbit.push(u / norm);
        }
    }
    for u in &orbit {
        let coef = v.dot(u);
        v -= u * coef;
    }
    for i in 0..dim {
        v[i] /= w[i];
    }
    TangentDirection::from_flat(&v)
}

/// Sample a unit tangent direction from a seeded generator, projected onto
/// the relator-variety tangent and the gauge-orthogonal complement.
pub fn random_direction(rep: &SurfaceRepresentation, seed: u64) -> TangentDirection {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = rep.presentation.generator_count();
    loop {
        let raw = TangentDirection {
            components: (0..n)
                .map(|_| {
                    Sl2Alg::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect(),
        };
        let projected = project_direction(rep, &raw);
        let norm = projected.norm();
        if norm > 1e-6 {
            return projected.scale(1.0 / norm);
        }
    }
}

/// Difference-quotient 1-cocycle of a path of representations:
/// u(w) = (d/dt rho_t(w)) rho_0(w)^{-1} by central differences at t = 0.
/// Satisfies u(ww') = u(w) + Ad(rho_0(w)) u(w') up to O(eps^2).
pub fn tangent_cocycle<F>(path: F, word: &[Letter], eps: f64) -> Sl2Alg
where
    F: Fn(f64) -> SurfaceRepresentation,
{
    let plus = evaluate_word(&path(eps), word);
    let minus = evaluate_word(&path(-eps), word);
    let base = evaluate_word(&path(0.0), word);
    let deriv = (plus.matrix() - minus.matrix()) / (2.0 * eps);
    Sl2Alg::project(&(deriv * base.inverse().matrix()))
}

/// Per-factor cocycles of a path of pairs.
pub fn tangent_cocycle_pair<F>(path: F, word: &[Letter], eps: f64) -> (Sl2Alg, Sl2Alg)
where
    F: Fn(f64) -> GhPair,
{
    let l = tangent_cocycle(|t| path(t).left, word, eps);
    let r = tangent_cocycle(|t| path(t).right, word, eps);
    (l, r)
}

pub fn invert_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|&l| -l).collect()
}

/// Structured-text document for a representation, written and read by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub genus: usize,
    pub generators: std::collections::BTreeMap<String, [f64; 4]>,
    pub relator: Word,
    pub residual: f64,
}

impl RepresentationFile {
    pub fn from_rep(rep: &SurfaceRepresentation) -> Self {
        let mut generators = std::collections::BTreeMap::new();
        for (name, m) in rep
            .presentation
            .generator_names
            .iter()
            .zip(rep.generators())
        {
            let mm = m.matrix();
            generators.insert(
                name.clone(),
                [mm[(0, 0)], mm[(0, 1)], mm[(1, 0)], mm[(1, 1)]],
            );
        }
        Self {
            genus: rep.presentation.genus,
            generators,
            relator: rep.presentation.relator.clone(),
            residual: relator_residual(rep),
        }
    }

    pub fn into_rep(self) -> Result<SurfaceRepresentation> {
        let names: Vec<String> = self.generators.keys().cloned().collect();
        let presentation = Presentation::new(self.genus, names.clone(), self.relator)?;
        let matrices = names
            .iter()
            .map(|n| {
                let e = self.generators[n];
                Sl2::from_entries(e[0], e[1], e[2], e[3])
            })
            .collect::<Result<Vec<_>>>()?;
        SurfaceRepresentation::new(presentation, matrices)
    }
}

pub fn write_representation(rep: &SurfaceRepresentation, path: &Path) -> Result<()> {
    let doc = RepresentationFile::from_rep(rep);
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Format(format!("serialize representation: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_representation(path: &Path) -> Result<SurfaceRepresentation> {
    let text = std::fs::read_to_string(path)?;
    let doc: RepresentationFile =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("parse {path:?}: {e}")))?;
    doc.into_rep()
}
