//! The identity-verification suite behind `ghlab verify` and the acceptance
//! tests: each criterion function runs a batch of checks at pinned tolerances
//! and reports one row per identity.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hodge::{
    self, delta_coboundary, d_exterior, frame_metric, iota, principal_form, q_isometry_check,
    sharp, sharp_closed_forms, wp_patch_pairing, GridPatch, MetricVariant, UpperHalfPoint,
};
use crate::lie::{
    self, e_basis, expm, phi_alg, phi_alg_complex, phi_group, q_conjugate, Sl2, Sl2Alg,
};
use crate::rep::{self, octagon_fuchsian, pure_bending_path, GhPair};
use crate::spectrum::{
    bending_derivative_test, eigen_expansion_check, entropy_estimate, enumerate_classes,
    proportionality_test, trace_so22_check,
};
use crate::thermo::{
    self, brute_force_entropy, entropy_root, full_two_shift, is_coboundary, pressure_form,
    random_roof, random_shift, tangent_projection, EdgeFunction,
};

type C = Complex64;

#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(criterion: u8, name: &str, passed: bool, detail: String) -> Self {
        Self {
            criterion,
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

fn random_sl2(rng: &mut impl Rng) -> Sl2 {
    Sl2Alg::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
    .exp()
}

fn random_z(rng: &mut impl Rng) -> UpperHalfPoint {
    UpperHalfPoint {
        x: rng.gen_range(-1.0..1.0),
        y: rng.gen_range(0.2..5.0),
    }
}

/// Criterion 1: the exact/near-exact identity suite.
pub fn criterion_identities() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut checks = Vec::new();
    let j = lie::form_j();

    // Phi homomorphism and J-orthogonality on 1000 random pairs
    let mut hom_err = 0.0f64;
    let mut orth_err = 0.0f64;
    for _ in 0..1000 {
        let a = random_sl2(&mut rng);
        let b = random_sl2(&mut rng);
        let pa = phi_group(&a).unwrap();
        let pb = phi_group(&b).unwrap();
        let pab = phi_group(&a.compose(&b)).unwrap();
        hom_err = hom_err.max(lie::max_abs4(&(pab.matrix() - pa.matrix() * pb.matrix())));
        orth_err = orth_err.max(lie::max_abs4(
            &(pa.matrix().transpose() * j * pa.matrix() - j),
        ));
    }
    checks.push(Check::new(
        1,
        "Phi(AB) = Phi(A) Phi(B)",
        hom_err <= 1e-10,
        format!("max error {hom_err:.3e} (tol 1e-10)"),
    ));
    checks.push(Check::new(
        1,
        "Phi^t J Phi = J",
        orth_err <= 1e-10,
        format!("max error {orth_err:.3e} (tol 1e-10)"),
    ));

    // Lie algebra homomorphism and exp compatibility
    let mut bracket_err = 0.0f64;
    let mut exp_err = 0.0f64;
    for _ in 0..300 {
        let x = Sl2Alg::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let y = Sl2Alg::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let bracket = x.matrix() * y.matrix() - y.matrix() * x.matrix();
        let lhs = phi_alg(&Sl2Alg::project(&bracket));
        let px = phi_alg(&x).matrix().to_owned();
        let py = phi_alg(&y).matrix().to_owned();
        bracket_err = bracket_err.max(lie::max_abs4(&(lhs.matrix() - (px * py - py * px))));
        let t: f64 = rng.gen_range(-1.0..1.0);
        let lhs = phi_group(&x.scale(t).exp()).unwrap();
        let rhs = expm(&(phi_alg(&x).matrix() * t));
        exp_err = exp_err.max(lie::max_abs4(&(lhs.matrix() - rhs)));
    }
    checks.push(Check::new(
        1,
        "Phi[X,Y] = [Phi X, Phi Y]",
        bracket_err <= 1e-8,
        format!("max error {bracket_err:.3e} (tol 1e-8)"),
    ));
    checks.push(Check::new(
        1,
        "Phi(exp tX) = exp(t Phi X)",
        exp_err <= 1e-8,
        format!("max error {exp_err:.3e} (tol 1e-8)"),
    ));

    // Q-conjugation table, exact on integer matrices
    let e = e_basis();
    let table: [(usize, f64, usize); 6] = [
        (0, -1.0, 2),
        (1, -1.0, 1),
        (2, -1.0, 0),
        (3, 1.0, 3),
        (4, 1.0, 4),
        (5, -1.0, 5),
    ];
    let q_exact = table.iter().all(|&(i, sign, k)| {
        q_conjugate(e[i].matrix()) == e[k].matrix() * sign
    });
    checks.push(Check::new(
        1,
        "Q-conjugation table on E1..E6",
        q_exact,
        if q_exact {
            "exact".to_string()
        } else {
            "table mismatch".to_string()
        },
    ));

    // H Hinv = I and positive definiteness at 1000 points
    let mut inv_err = 0.0f64;
    let mut pd_ok = true;
    for _ in 0..1000 {
        let fm = frame_metric(random_z(&mut rng));
        inv_err = inv_err.max(lie::max_abs4(&(fm.h * fm.h_inv - Matrix4::identity())));
        pd_ok &= fm.h.cholesky().is_some();
    }
    checks.push(Check::new(
        1,
        "H Hinv = I",
        inv_err <= 1e-10,
        format!("max error {inv_err:.3e} (tol 1e-10)"),
    ));
    checks.push(Check::new(
        1,
        "H positive definite",
        pd_ok,
        if pd_ok { "Cholesky succeeds" } else { "failed" }.to_string(),
    ));

    // iota(Phi X_z, Phi X_z) = 16 y^2
    let mut iota_err = 0.0f64;
    for _ in 0..1000 {
        let z = random_z(&mut rng);
        let zz = z.complex();
        let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
        let v = hodge::iota_at(z, &xz, &xz);
        let expect = 16.0 * z.y * z.y;
        iota_err = iota_err.max(((v.re - expect).abs() + v.im.abs()) / expect);
    }
    checks.push(Check::new(
        1,
        "iota(Phi X_z, Phi X_z) = 16 y^2",
        iota_err <= 1e-10,
        format!("max rel error {iota_err:.3e} (tol 1e-10)"),
    ));

    // sharp E1/E2/E3 closed forms
    let ec = {
        let e = e_basis();
        [
            e[0].matrix().map(C::from),
            e[1].matrix().map(C::from),
            e[2].matrix().map(C::from),
        ]
    };
    let mut sharp_err = 0.0f64;
    for _ in 0..1000 {
        let z = random_z(&mut rng);
        let fm = frame_metric(z);
        let rows = sharp_closed_forms(z);
        for (i, row) in rows.iter().enumerate() {
            let coeffs = sharp(&fm, &ec[i]);
            for jx in 0..3 {
                sharp_err =
                    sharp_err.max((coeffs[jx].re - row[jx]).abs() / (1.0 + row[jx].abs()));
                sharp_err = sharp_err.max(coeffs[jx].im.abs());
            }
            for jx in 3..6 {
                sharp_err = sharp_err.max(coeffs[jx].norm());
            }
        }
    }
    checks.push(Check::new(
        1,
        "sharp E1/E2/E3 closed forms",
        sharp_err <= 1e-10,
        format!("max error {sharp_err:.3e} (tol 1e-10)"),
    ));

    // embedding quadric and equivariance
    let mut quad_err = 0.0f64;
    let mut equiv_err = 0.0f64;
    for _ in 0..1000 {
        let z = random_z(&mut rng);
        let v = hodge::embed_hyperboloid(z);
        quad_err = quad_err.max(hodge::quadric_residual(&v));
        let a = random_sl2(&mut rng);
        let w = a.moebius(z.complex());
        let lhs = phi_group(&a).unwrap().matrix() * v;
        let rhs = hodge::embed_hyperboloid(UpperHalfPoint { x: w.re, y: w.im });
        equiv_err = equiv_err.max((lhs - rhs).amax());
    }
    checks.push(Check::new(
        1,
        "embedding quadric residual",
        quad_err <= 1e-14,
        format!("max residual {quad_err:.3e} (tol 1e-14)"),
    ));
    checks.push(Check::new(
        1,
        "embedding equivariance",
        equiv_err <= 1e-10,
        format!("max error {equiv_err:.3e} (tol 1e-10)"),
    ));

    checks
}

/// Criterion 2: second-order convergence of the d and delta residuals of the
/// principal forms, and the anti-holomorphic control case.
pub fn criterion_harmonicity() -> Result<Vec<Check>> {
    let polys: [Vec<C>; 3] = [
        vec![C::from(1.0)],
        vec![C::from(0.0), C::from(1.0)],
        vec![C::from(0.0), C::from(0.0), C::from(1.0)],
    ];
    // pooled max over phi in {1, z, z^2}; the h^2 term of the pool is carried
    // by the higher-degree entries
    let residuals = |n: usize| -> Result<(f64, f64)> {
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, n)?;
        let mut d_max = 0.0f64;
        let mut delta_max = 0.0f64;
        for phi in &polys {
            let form = principal_form(patch, phi);
            d_max = d_max.max(d_exterior(&form).1.max_interior);
            delta_max = delta_max.max(
                delta_coboundary(&form, MetricVariant::Standard)?
                    .1
                    .max_interior,
            );
        }
        Ok((d_max, delta_max))
    };
    let (d64, delta64) = residuals(64)?;
    let (d128, delta128) = residuals(128)?;
    let d_ratio = d128 / d64;
    let delta_ratio = delta128 / delta64;

    let control = |n: usize| -> Result<f64> {
        let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, n)?;
        let form = hodge::So22ValuedForm::sample(patch, |z| {
            let zz = z.complex();
            let xz = phi_alg_complex(-zz, zz * zz, -C::from(1.0));
            let val = zz.conj();
            (xz * val, xz * (val * C::i()))
        });
        Ok(delta_coboundary(&form, MetricVariant::Standard)?
            .1
            .max_interior)
    };
    let c64 = control(64)?;
    let c128 = control(128)?;

    Ok(vec![
        Check::new(
            2,
            "d residual second-order",
            (0.2..=0.35).contains(&d_ratio),
            format!("r(1/64) = {d64:.3e}, r(1/128) = {d128:.3e}, ratio {d_ratio:.3}"),
        ),
        Check::new(
            2,
            "delta residual second-order",
            (0.2..=0.35).contains(&delta_ratio),
            format!("r(1/64) = {delta64:.3e}, r(1/128) = {delta128:.3e}, ratio {delta_ratio:.3}"),
        ),
        Check::new(
            2,
            "anti-holomorphic control stays non-harmonic",
            c64 > 1e-2 && c128 > 1e-2,
            format!("delta residuals {c64:.3e}, {c128:.3e} (must stay > 1e-2)"),
        ),
    ])
}

/// Criterion 3: Weil-Petersson patch pairing on random polynomial pairs.
pub fn criterion_wp() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 64)?;
    let mut max_err = 0.0f64;
    for _ in 0..20 {
        let deg = rng.gen_range(0..=4usize);
        let phi: Vec<C> = (0..=deg)
            .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let deg2 = rng.gen_range(0..=4usize);
        let psi: Vec<C> = (0..=deg2)
            .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let wp = wp_patch_pairing(&phi, &psi, &patch)?;
        max_err = max_err.max((wp.lhs - wp.rhs).abs() / (1.0 + wp.rhs.abs()));
    }
    Ok(vec![Check::new(
        3,
        "32 <phi, psi>_WP factor",
        max_err <= 1e-12,
        format!("max |lhs-rhs|/(1+|rhs|) = {max_err:.3e} (tol 1e-12)"),
    )])
}

/// Criterion 4: octagon base point and Newton deformations at |t| <= 0.3.
pub fn criterion_deformations() -> Result<Vec<Check>> {
    let rep = octagon_fuchsian()?;
    let base_res = rep::relator_residual(&rep);
    let mut checks = vec![Check::new(
        4,
        "octagon relator residual",
        base_res <= 1e-9,
        format!("residual {base_res:.3e} (tol 1e-9)"),
    )];
    let mut worst = 0.0f64;
    for seed in 0..2u64 {
        let dir = rep::random_direction(&rep, 400 + seed);
        for &t in &[0.1, -0.1, 0.3, -0.3] {
            let moved = rep::deform(&rep, &dir, t)?;
            worst = worst.max(rep::relator_residual(&moved));
        }
    }
    checks.push(Check::new(
        4,
        "Newton-projected deformations keep the relator",
        worst <= 1e-9,
        format!("worst residual {worst:.3e} over |t| <= 0.3 (tol 1e-9)"),
    ));
    Ok(checks)
}

/// Criterion 5: entropy near 1 at the Fuchsian octagon, and no increase at a
/// bent pair.
pub fn criterion_entropy(max_word_len: usize) -> Result<Vec<Check>> {
    let rep = octagon_fuchsian()?;
    let fuchsian = GhPair::fuchsian(rep.clone());
    let spec = enumerate_classes(&fuchsian, max_word_len)?;
    let window = spec.default_window()?;
    let est = entropy_estimate(&spec, window)?;

    let dir = rep::random_direction(&rep, 500);
    let bent_pair = pure_bending_path(&rep, &dir, 0.3)?;
    let bent_spec = enumerate_classes(&bent_pair, max_word_len)?;
    let bent_window = bent_spec.default_window()?;
    let bent_est = entropy_estimate(&bent_spec, bent_window)?;

    Ok(vec![
        Check::new(
            5,
            "Fuchsian entropy estimate in [0.85, 1.15]",
            (0.85..=1.15).contains(&est.value),
            format!(
                "estimate {:.4} +- {:.4} on window [{:.2}, {:.2}], {} classes",
                est.value,
                est.slope_stderr,
                window.0,
                window.1,
                spec.entries.len()
            ),
        ),
        Check::new(
            5,
            "bent entropy does not exceed Fuchsian",
            bent_est.value <= est.value + 0.05,
            format!(
                "bent {:.4} vs Fuchsian {:.4} (allowance +0.05)",
                bent_est.value, est.value
            ),
        ),
    ])
}

/// Criterion 6: first derivative of lengths vanishes along pure bending.
pub fn criterion_bending() -> Result<Vec<Check>> {
    let rep = octagon_fuchsian()?;
    let mut worst = 0.0f64;
    for seed in 0..5u64 {
        let dir = rep::random_direction(&rep, 600 + seed);
        let report = bending_derivative_test(&rep, &dir, 1e-3, 6)?;
        worst = worst.max(report.max_rel_derivative);
    }
    Ok(vec![Check::new(
        6,
        "pure bending length derivative",
        worst <= 1e-9,
        format!("max |dl/dt|/l = {worst:.3e} over 5 directions (tol 1e-9)"),
    )])
}

/// Criterion 7: no proportional length derivative off the Fuchsian locus.
pub fn criterion_proportionality() -> Result<Vec<Check>> {
    let rep = octagon_fuchsian()?;
    let bend = rep::random_direction(&rep, 700);
    let bent = pure_bending_path(&rep, &bend, 0.3)?;
    let mut min_residual = f64::INFINITY;
    for seed in 0..5u64 {
        let dir_l = rep::random_direction(&bent.left, 710 + seed);
        let dir_r = rep::random_direction(&bent.right, 720 + seed);
        let report = proportionality_test(
            |t| {
                let l = rep::deform(&bent.left, &dir_l, t)?;
                let r = rep::deform(&bent.right, &dir_r, t)?;
                GhPair::new(l, r)
            },
            1e-3,
            4,
        )?;
        min_residual = min_residual.min(report.rel_residual);
    }
    Ok(vec![Check::new(
        7,
        "bent pair rejects proportional derivatives",
        min_residual > 1e-3,
        format!("min rel residual {min_residual:.3e} over 5 directions (must exceed 1e-3)"),
    )])
}

/// Criterion 8: eigenvalue expansion remainder is O(lambda^{-4n}).
pub fn criterion_eigen_expansion() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    let mut worst_ratio = 0.0f64;
    for _ in 0..50 {
        let lambda = rng.gen_range(1.4..1.8);
        let a = Sl2::from_entries(lambda, 0.0, 0.0, 1.0 / lambda).unwrap();
        // B = R(theta) diag(mu, 1/mu) R(theta)^{-1}: hyperbolic, a > 0, bc != 0
        let mu: f64 = rng.gen_range(1.5..3.0);
        let th: f64 = rng.gen_range(0.2..1.2);
        let (c, s) = (th.cos(), th.sin());
        let b = Sl2::from_entries(
            mu * c * c + s * s / mu,
            (mu - 1.0 / mu) * c * s,
            (mu - 1.0 / mu) * c * s,
            mu * s * s + c * c / mu,
        )
        .unwrap();
        let rows = eigen_expansion_check(&a, &b, 2..=10)?;
        let base = rows[0].normalized.abs();
        for r in &rows {
            worst_ratio = worst_ratio.max(r.normalized.abs() / (10.0 * base));
        }
    }
    Ok(vec![Check::new(
        8,
        "normalized remainders bounded by 10x the n=2 value",
        worst_ratio <= 1.0,
        format!("worst |r_n| lambda^{{4n}} / (10 |r_2| lambda^8) = {worst_ratio:.3}"),
    )])
}

/// Criterion 9: thermodynamic model closed forms, oracle agreement, pressure
/// form values.
pub fn criterion_thermo() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let shift = full_two_shift();

    let h = entropy_root(&shift, &vec![1.0, 1.0])?;
    let err_log2 = (h - 2.0f64.ln()).abs();
    checks.push(Check::new(
        9,
        "entropy root log 2",
        err_log2 <= 1e-10,
        format!("error {err_log2:.3e} (tol 1e-10)"),
    ));
    let h = entropy_root(&shift, &vec![1.0, 2.0])?;
    let golden = ((1.0 + 5.0f64.sqrt()) / 2.0).ln();
    let err_golden = (h - golden).abs();
    checks.push(Check::new(
        9,
        "entropy root log golden ratio",
        err_golden <= 1e-9,
        format!("error {err_golden:.3e} (tol 1e-9)"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(900);
    let mut worst_gap = 0.0f64;
    for _ in 0..20 {
        let shift = random_shift(&mut rng);
        let f = random_roof(&shift, &mut rng);
        let root = entropy_root(&shift, &f)?;
        let mut t = 26.0 / (1.0 + root);
        let bf = loop {
            match brute_force_entropy(&shift, &f, t, 2_000_000) {
                Ok(bf) => break bf,
                Err(crate::error::Error::Overflow { .. }) => t *= 0.85,
                Err(e) => return Err(e),
            }
        };
        worst_gap = worst_gap.max((bf.value - root).abs());
    }
    checks.push(Check::new(
        9,
        "entropy root vs cycle-count oracle",
        worst_gap <= 0.08,
        format!("max |root - brute force| = {worst_gap:.4} over 20 graphs (tol 0.08)"),
    ));

    let f_base = vec![-(2.0f64.ln()), -(2.0f64.ln())];
    let value = pressure_form(&shift, &f_base, &vec![1.0, -1.0])?;
    let expect = 1.0 / 2.0f64.ln();
    let err_pf = (value - expect).abs();
    checks.push(Check::new(
        9,
        "pressure form worked example 1/log 2",
        err_pf <= 1e-4,
        format!("error {err_pf:.3e} (tol 1e-4)"),
    ));

    let mut worst_cob = 0.0f64;
    let mut min_noncob = f64::INFINITY;
    let mut tested = 0;
    while tested < 50 {
        let shift = random_shift(&mut rng);
        let f = random_roof(&shift, &mut rng);
        let root = entropy_root(&shift, &f)?;
        let f0: EdgeFunction = f.iter().map(|x| -root * x).collect();
        // coboundary direction
        let u: Vec<f64> = (0..shift.vertices)
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let cob: EdgeFunction = shift.edges.iter().map(|e| u[e.head] - u[e.tail]).collect();
        worst_cob = worst_cob.max(pressure_form(&shift, &f0, &cob)?.abs());
        // non-coboundary tangent direction
        let raw: EdgeFunction = (0..shift.edge_count())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let g = tangent_projection(&shift, &f0, &raw)?;
        if is_coboundary(&shift, &g, 1e-8)?.is_coboundary {
            continue;
        }
        min_noncob = min_noncob.min(pressure_form(&shift, &f0, &g)?);
        tested += 1;
    }
    checks.push(Check::new(
        9,
        "pressure form vanishes on coboundaries",
        worst_cob <= 1e-8,
        format!("max |form| = {worst_cob:.3e} (tol 1e-8)"),
    ));
    checks.push(Check::new(
        9,
        "pressure form positive off coboundaries",
        min_noncob > 1e-6,
        format!("min form = {min_noncob:.3e} over 50 directions (must exceed 1e-6)"),
    ));
    Ok(checks)
}

/// Criterion 10: the swap involution is an isometry of iota and preserves
/// harmonicity.
pub fn criterion_q_isometry() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z = random_z(&mut rng);
        let pair = [(
            hodge::random_so22_complex(&mut rng),
            hodge::random_so22_complex(&mut rng),
        )];
        let report = q_isometry_check(z, &pair)?;
        worst = worst.max(report.invariance_error);
    }
    let mut checks = vec![Check::new(
        10,
        "iota invariance under Q-conjugation",
        worst <= 1e-10,
        format!("max error {worst:.3e} at 1000 points (tol 1e-10)"),
    )];

    let phi = vec![C::from(0.0), C::from(0.0), C::from(1.0)];
    let patch = GridPatch::new(0.0, 1.0, 1.0, 2.0, 64)?;
    let form = principal_form(patch, &phi);
    let d0 = d_exterior(&form).1.max_interior;
    let delta0 = delta_coboundary(&form, MetricVariant::Standard)?.1.max_interior;
    let pushed = form.q_conjugated();
    let d1 = d_exterior(&pushed).1.max_interior;
    let delta1 = delta_coboundary(&pushed, MetricVariant::QConjugated)?
        .1
        .max_interior;
    let within = |a: f64, b: f64| a <= 2.0 * b + 1e-14 && b <= 2.0 * a + 1e-14;
    checks.push(Check::new(
        10,
        "Q-pushed principal forms stay harmonic",
        within(d0, d1) && within(delta0, delta1),
        format!("d: {d0:.3e} vs {d1:.3e}; delta: {delta0:.3e} vs {delta1:.3e} (factor 2)"),
    ));
    Ok(checks)
}

/// Criterion 11: trace diagonalization identity on all short words of a bent
/// pair.
pub fn criterion_trace_diagonalization() -> Result<Vec<Check>> {
    let rep = octagon_fuchsian()?;
    let dir = rep::random_direction(&rep, 1100);
    let pair = pure_bending_path(&rep, &dir, 0.3)?;
    let spec = enumerate_classes(&pair, 4)?;
    let mut worst = 0.0f64;
    for e in &spec.entries {
        let tc = trace_so22_check(&pair, &e.word)?;
        worst = worst.max(tc.rel_error);
    }
    Ok(vec![Check::new(
        11,
        "tr rho(gamma) matches the length diagonalization",
        worst <= 1e-8,
        format!(
            "max rel error {worst:.3e} over {} classes (tol 1e-8)",
            spec.entries.len()
        ),
    )])
}

/// Suite names for the CLI.
pub const SUITES: &[&str] = &[
    "identities",
    "harmonicity",
    "wp",
    "deform",
    "entropy",
    "bending",
    "proportionality",
    "eigen",
    "thermo",
    "qisometry",
    "trace",
];

/// Run one named suite.
pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "identities" => Ok(criterion_identities()),
        "harmonicity" => criterion_harmonicity(),
        "wp" => criterion_wp(),
        "deform" => criterion_deformations(),
        "entropy" => criterion_entropy(8),
        "bending" => criterion_bending(),
        "proportionality" => criterion_proportionality(),
        "eigen" => criterion_eigen_expansion(),
        "thermo" => criterion_thermo(),
        "qisometry" => criterion_q_isometry(),
        "trace" => criterion_trace_diagonalization(),
        other => Err(crate::error::Error::InvalidInput(format!(
            "unknown suite {other:?} (available: {})",
            SUITES.join(", ")
        ))),
    }
}

/// Run every suite in order.
pub fn run_all() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for name in SUITES {
        checks.extend(run_suite(name)?);
    }
    Ok(checks)
}
