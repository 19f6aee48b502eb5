//! Exact Foldy–Wouthuysen transformation.
//!
//! For a Hamiltonian with block-diagonal square the transformation
//!
//! ```text
//! U = (|H| + βH) / √(2H² + 2M|H|)
//! ```
//!
//! gives `U H U⁻¹ = β√(H²)`. `U` is unitary only when `H` is Hermitian; for the
//! pseudo-Hermitian boson Hamiltonians the binding statement is the similarity
//! form with `U⁻¹`. The same `U` follows from the energy and parity projectors,
//! `U = X (XY)^{-1/2}` with `X = P⁺Λ⁺ + P⁻Λ⁻` and `Y = Λ⁺P⁺ + Λ⁻P⁻`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau::InteriorProjector;
use crate::models::{build_model, nonrel_hamiltonian, BlockHamiltonian, ModelSpec};
use crate::opalg::{
    eigh, hermitian_inverse_sqrt, hermitian_sqrt_psd, op_norm, relative, Matrix, Operator, Sector,
    Tolerances, C64,
};
use crate::report::CheckReport;

#[derive(Clone, Debug)]
pub struct FwHamiltonian {
    /// Block-diagonal part of the exact compression of `H²`.
    pub h_squared: Operator,
    /// `β √(H²)`.
    pub h_fw: Operator,
    pub report: CheckReport,
}

/// `H²`, `β√(H²)` and the closed form `β mc² √(1 + 2H_NR/mc²)`.
pub fn fw_hamiltonian(h: &BlockHamiltonian, spec: &ModelSpec) -> Result<FwHamiltonian> {
    let tol = &spec.tolerances;
    let window = spec.graded_window();
    let full_square = h.squared();
    let h_squared = full_square.block_diagonal_part()?;
    let off = full_square.off_diagonal_part()?;
    let beta = h.beta();

    let mut report = CheckReport::new("fw_hamiltonian");
    report.at_most(
        "h_squared_off_diagonal",
        relative(window.norm(&off), window.norm(&h_squared)),
        tol.interior_tol,
    );
    report.at_most("h_squared_hermitian", h_squared.hermiticity_residual(), tol.identity_tol);

    let h_fw = &beta * &hermitian_sqrt_psd(&h_squared, tol)?;

    let mc2 = spec.rest_energy();
    let nr = nonrel_hamiltonian(spec)?.graded();
    let closed = &beta * &hermitian_sqrt_psd(&nr.scale(2.0 * mc2).shifted(mc2 * mc2), tol)?;
    report.at_most(
        "closed_form",
        relative(window.norm(&(&h_fw - &closed)), window.norm(&h_fw)),
        tol.interior_tol,
    );
    report.at_most(
        "h_fw_squared_minus_h_squared",
        relative(window.norm(&(&(&h_fw * &h_fw) - &h_squared)), window.norm(&h_squared)),
        tol.interior_tol,
    );
    Ok(FwHamiltonian {
        h_squared,
        h_fw,
        report,
    })
}

#[derive(Clone, Debug)]
pub struct FwUnitary {
    pub u: Operator,
    pub u_inv: Operator,
    /// The projector form `X (XY)^{-1/2}`.
    pub u_projector_form: Operator,
    pub sign: Operator,
    pub abs_h: Operator,
    pub report: CheckReport,
}

/// Builds `U` from both closed forms and `U⁻¹` by LU inversion.
///
/// `h_squared` must be the block-diagonal square from [`fw_hamiltonian`]; the
/// product of the truncated `H` with itself is corrupted near the truncation
/// edge and need not be positive.
pub fn fw_unitary(h: &BlockHamiltonian, h_squared: &Operator, window: &InteriorProjector, tol: &Tolerances) -> Result<FwUnitary> {
    let window = window.for_basis(h_squared.basis());
    let h_full = crate::models::assemble_full(h);
    let beta = h.beta();
    let id = Operator::identity(beta.basis());
    let mass = h.mass_graded();

    let abs_h = hermitian_sqrt_psd(h_squared, tol)?;
    let inv_abs = hermitian_inverse_sqrt(h_squared, tol)?;
    let sign = &h_full * &inv_abs;

    // 2H² + M|H| + |H|M: the symmetrised denominator, Hermitian by construction
    let denom = &(&h_squared.scale(2.0) + &(&mass * &abs_h)) + &(&abs_h * &mass);
    let u = &(&abs_h + &(&beta * &h_full)) * &hermitian_inverse_sqrt(&denom.hermitian_part(), tol)?;

    let (p_plus, p_minus) = parity_projectors(&beta);
    let (l_plus, l_minus) = sign_projectors(&sign);
    let x = &(&p_plus * &l_plus) + &(&p_minus * &l_minus);
    let y = &(&l_plus * &p_plus) + &(&l_minus * &p_minus);
    let xy = &x * &y;
    let xy_herm = xy.hermiticity_residual();
    let u_projector_form = &x * &hermitian_inverse_sqrt(&xy.hermitian_part(), tol)?;

    let inverse = u.entries().clone().lu().try_inverse().ok_or(Error::NearSingular {
        min_eigenvalue: 0.0,
        threshold: tol.shift_margin,
    })?;
    let u_inv = Operator::new(u.basis(), inverse)?;

    let mut report = CheckReport::new("fw_unitary");
    report.at_most(
        "sign_squared_minus_identity",
        window.norm(&(&(&sign * &sign) - &id)),
        tol.interior_tol,
    );
    report
        .at_most(
            "closed_forms_agree",
            relative(window.norm(&(&u - &u_projector_form)), window.norm(&u)),
            tol.interior_tol,
        )
        .with("xy_hermiticity", xy_herm)
        .with("unwindowed", relative(op_norm(&(&u - &u_projector_form)), op_norm(&u)));
    report.at_most(
        "inverse",
        relative(op_norm(&(&(&u * &u_inv) - &id)), 1.0),
        tol.interior_tol,
    );
    Ok(FwUnitary {
        u,
        u_inv,
        u_projector_form,
        sign,
        abs_h,
        report,
    })
}

fn parity_projectors(beta: &Operator) -> (Operator, Operator) {
    let id = Operator::identity(beta.basis());
    ((&id + beta).scale(0.5), (&id - beta).scale(0.5))
}

fn sign_projectors(sign: &Operator) -> (Operator, Operator) {
    let id = Operator::identity(sign.basis());
    ((&id + sign).scale(0.5), (&id - sign).scale(0.5))
}

/// `‖P(X)_{+-}‖` and `‖P(X)_{-+}‖`, the larger of the two windowed
/// off-diagonal blocks.
fn windowed_offdiag(x: &Operator, window: &InteriorProjector) -> Result<f64> {
    Ok(window.norm(&x.off_diagonal_part()?))
}

/// Residuals of the transformation: (a) `offdiag(U H U⁻¹)`, (b) `U H U⁻¹ −
/// H_fw`, (c) `offdiag(U H U†)`, (d) `U†U − I` and `UU† − I`. All four are entries for the
/// fermion; for bosons (c) and (d) are attached to (a) as context.
pub fn verify_fw_transform(
    h_full: &Operator,
    u: &Operator,
    u_inv: &Operator,
    h_fw: &Operator,
    fermion: bool,
    window: &InteriorProjector,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let window = window.for_basis(h_full.basis());
    let scale = window.norm(h_fw);
    let similar = &(u * h_full) * u_inv;
    let conj = &(u * h_full) * &u.adjoint();
    let id = Operator::identity(u.basis());
    let unitarity = &(&u.adjoint() * u) - &id;
    let unitarity_right = &(u * &u.adjoint()) - &id;

    let a = relative(windowed_offdiag(&similar, &window)?, scale);
    let b = relative(window.norm(&(&similar - h_fw)), scale);
    let c = relative(windowed_offdiag(&conj, &window)?, scale);
    let d = window.norm(&unitarity).max(window.norm(&unitarity_right));

    let mut r = CheckReport::new("fw_transform");
    let entry = r.at_most("offdiag_similarity", a, tol.interior_tol);
    if !fermion {
        entry.with("offdiag_adjoint", c).with("unitarity", d);
    }
    r.at_most("similarity_minus_h_fw", b, tol.interior_tol);
    if fermion {
        r.at_most("offdiag_adjoint", c, tol.interior_tol);
        r.at_most("unitarity", d, tol.interior_tol).with("unwindowed", op_norm(&unitarity));
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct Projectors {
    pub p_plus: Operator,
    pub p_minus: Operator,
    pub lambda_plus: Operator,
    pub lambda_minus: Operator,
}

/// `P± = (1 ± β)/2`, `Λ± = (1 ± sgn H)/2` and their relation `P± = U Λ± U⁻¹`.
pub fn energy_projectors(
    sign: &Operator,
    u: &Operator,
    u_inv: &Operator,
    beta: &Operator,
    fermion: bool,
    window: &InteriorProjector,
    tol: &Tolerances,
) -> Result<(Projectors, CheckReport)> {
    let window = window.for_basis(beta.basis());
    let (p_plus, p_minus) = parity_projectors(beta);
    let (lambda_plus, lambda_minus) = sign_projectors(sign);
    let id = Operator::identity(beta.basis());
    let mut r = CheckReport::new("energy_projectors");

    r.at_most("parity_product", op_norm(&(&p_plus * &p_minus)), 0.0);
    r.at_most("parity_completeness", op_norm(&(&(&p_plus + &p_minus) - &id)), 0.0);
    r.at_most("energy_completeness", op_norm(&(&(&lambda_plus + &lambda_minus) - &id)), tol.identity_tol);
    for (name, x) in [
        ("parity_plus", &p_plus),
        ("parity_minus", &p_minus),
        ("energy_plus", &lambda_plus),
        ("energy_minus", &lambda_minus),
    ] {
        r.at_most(format!("{name}_idempotent"), window.norm(&(&(x * x) - x)), tol.interior_tol);
    }
    for (name, p, l) in [("plus", &p_plus, &lambda_plus), ("minus", &p_minus, &lambda_minus)] {
        let similar = &(u * l) * u_inv;
        r.at_most(format!("transport_{name}"), window.norm(&(p - &similar)), tol.interior_tol);
        if fermion {
            let conj = &(u * l) * &u.adjoint();
            r.at_most(format!("transport_adjoint_{name}"), window.norm(&(p - &conj)), tol.interior_tol);
        }
    }
    Ok((
        Projectors {
            p_plus,
            p_minus,
            lambda_plus,
            lambda_minus,
        },
        r,
    ))
}

/// Largest `‖P(HΨ − EΨ)‖ / ‖Ψ‖` over `Ψ = U⁻¹ψ` for the interior eigenpairs
/// `(E, ψ)` of `H_fw`.
pub fn eigenvector_transport(h_full: &Operator, u_inv: &Operator, h_fw: &Operator, window: &InteriorProjector) -> f64 {
    let window = window.for_basis(h_full.basis());
    let eig = eigh(&window.window(h_fw));
    let mut worst = 0.0_f64;
    for (k, &e) in eig.values.iter().enumerate() {
        let psi = window.embed(&eig.vectors.column(k).into_owned());
        let big = u_inv.apply(&psi);
        let defect = h_full.apply(&big) - &big * C64::from(e);
        worst = worst.max(window.restrict(&defect).norm() / big.norm());
    }
    worst
}

/// Everything the transformation produces for one model.
#[derive(Clone, Debug)]
pub struct FwResult {
    pub h_squared: Operator,
    pub h_fw: Operator,
    pub u: Operator,
    pub u_inv: Operator,
    pub projectors: Projectors,
    pub residuals: CheckReport,
}

pub fn fw_transform(h: &BlockHamiltonian, spec: &ModelSpec) -> Result<FwResult> {
    let tol = &spec.tolerances;
    let window = spec.graded_window();
    let fwh = fw_hamiltonian(h, spec)?;
    let fu = fw_unitary(h, &fwh.h_squared, &window, tol)?;
    let h_full = crate::models::assemble_full(h);
    let fermion = h.is_fermion();

    let mut residuals = CheckReport::new("fw");
    residuals.absorb(fwh.report);
    residuals.absorb(fu.report);
    residuals.absorb(verify_fw_transform(&h_full, &fu.u, &fu.u_inv, &fwh.h_fw, fermion, &window, tol)?);
    let (projectors, pr) = energy_projectors(&fu.sign, &fu.u, &fu.u_inv, &h.beta(), fermion, &window, tol)?;
    residuals.absorb(pr);
    residuals.at_most(
        "eigenvector_transport",
        eigenvector_transport(&h_full, &fu.u_inv, &fwh.h_fw, &window),
        tol.interior_tol,
    );
    Ok(FwResult {
        h_squared: fwh.h_squared,
        h_fw: fwh.h_fw,
        u: fu.u,
        u_inv: fu.u_inv,
        projectors,
        residuals,
    })
}

/// Windowed eigenvalues of `H_fw` in the upper and lower sectors, ascending.
pub fn sector_eigenvalues(h_fw: &Operator, window: &InteriorProjector) -> Result<(Vec<f64>, Vec<f64>)> {
    let up = h_fw.block(Sector::Plus, Sector::Plus)?;
    let down = h_fw.block(Sector::Minus, Sector::Minus)?;
    let w = window.for_basis(up.basis());
    Ok((eigh(&w.window(&up)).values, eigh(&w.window(&down)).values))
}

/// One `c` value of the non-relativistic limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub c: f64,
    /// `‖P(H_fw⁺ − mc² − H_NR)P‖`.
    pub distance: f64,
    /// `2 max(H_NR) / mc²` on the window; the Taylor expansion converges below 1.
    pub expansion_parameter: f64,
}

pub fn nonrel_limit_points(spec: &ModelSpec, c_list: &[f64]) -> Result<Vec<LimitPoint>> {
    if c_list.is_empty() || c_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("c_list must be non-empty and strictly ascending".into()));
    }
    c_list
        .iter()
        .map(|&c| {
            let s = spec.clone().with_c(c);
            let h = build_model(&s)?;
            let fwh = fw_hamiltonian(&h, &s)?;
            let upper = fwh.h_fw.block(Sector::Plus, Sector::Plus)?;
            let nr = nonrel_hamiltonian(&s)?.op;
            let mc2 = s.rest_energy();
            let diff = &upper.shifted(-mc2) - &nr;
            let w = s.window();
            let nr_max = eigh(&w.window(&nr)).max_abs();
            Ok(LimitPoint {
                c,
                distance: w.norm(&diff),
                expansion_parameter: 2.0 * nr_max / mc2,
            })
        })
        .collect()
}

/// `d(c)` must decrease along `c_list`; for consecutive values inside the
/// convergent regime (expansion parameter below 1) the ratio `d(c₂)/d(c₁)` must
/// be within a factor 2 of `(c₁/c₂)²`.
pub fn nonrel_limit_check(spec: &ModelSpec, c_list: &[f64]) -> Result<CheckReport> {
    Ok(nonrel_limit_report(&nonrel_limit_points(spec, c_list)?))
}

/// The checks of [`nonrel_limit_check`] on precomputed points.
pub fn nonrel_limit_report(points: &[LimitPoint]) -> CheckReport {
    let mut r = CheckReport::new("nonrel_limit");
    for p in points {
        r.at_most(format!("distance_c{}", p.c), p.distance, f64::INFINITY)
            .with("expansion_parameter", p.expansion_parameter);
    }
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        r.holds(format!("decreasing_c{}_c{}", a.c, b.c), b.distance < a.distance || b.distance == 0.0);
        let expected = (a.c / b.c).powi(2);
        let ratio = b.distance / a.distance;
        let off = (ratio / expected).max(expected / ratio);
        let entry = if a.expansion_parameter < 1.0 {
            r.at_most(format!("ratio_c{}_c{}", a.c, b.c), off, 2.0)
        } else {
            r.at_most(format!("ratio_c{}_c{}", a.c, b.c), 0.0, 2.0)
                .with("outside_convergent_regime", off)
        };
        entry.with("ratio", ratio).with("expected", expected);
    }
    r
}

/// `U H U⁻¹` restricted to the window; a convenience for reporting.
pub fn windowed_similarity(u: &Operator, h_full: &Operator, u_inv: &Operator, window: &InteriorProjector) -> Matrix {
    window.for_basis(h_full.basis()).window(&(&(u * h_full) * u_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{assemble_full, SpinCase};
    use crate::opalg::BasisTag;
    use crate::spin::Spin;

    fn spec(case: SpinCase) -> ModelSpec {
        let s = ModelSpec::new(case).with_n_fock(16, 4);
        if case == SpinCase::Spin1 {
            s.with_omega_c(0.5)
        } else {
            s
        }
    }

    #[test]
    fn all_models_pass_at_moderate_size() {
        for case in SpinCase::ALL {
            for k_z in [0.0, 0.7] {
                let s = spec(case).with_k_z(k_z);
                let h = build_model(&s).unwrap();
                let r = fw_transform(&h, &s).unwrap();
                assert!(r.residuals.overall_pass, "{case} {k_z}: {:#?}", r.residuals);
            }
        }
    }

    #[test]
    fn one_level_kg_toy() {
        // ε_L a scalar: H = [[1+ε, ε], [−ε, −1−ε]], H² = (1+2ε) I
        let eps = 0.75;
        let b = BasisTag::ungraded(1, 1);
        let m = Operator::identity(b).scale(1.0 + eps);
        let a = Operator::identity(b).scale(eps);
        let h = BlockHamiltonian::from_blocks(Spin::Zero, 1.0, m.clone(), m, a).unwrap();
        let h_full = assemble_full(&h);
        let h2 = &h_full * &h_full;
        let root = (1.0 + 2.0 * eps).sqrt();
        assert!((h2.get(0, 0).re - root * root).abs() < 1e-15 && h2.get(0, 1).norm() < 1e-15);
        let tol = Tolerances::default();
        let w = crate::landau::interior_projector(h.graded_basis(), 0).unwrap();
        let fu = fw_unitary(&h, &h2, &w, &tol).unwrap();
        let sim = &(&fu.u * &h_full) * &fu.u_inv;
        assert!((sim.get(0, 0).re - root).abs() < 1e-14);
        assert!((sim.get(1, 1).re + root).abs() < 1e-14);
        assert!(sim.get(0, 1).norm() < 1e-14 && sim.get(1, 0).norm() < 1e-14);
        // U H U† keeps an off-diagonal part for the boson
        let conj = &(&fu.u * &h_full) * &fu.u.adjoint();
        assert!(conj.get(0, 1).norm() > 0.1);
    }

    #[test]
    fn dirac_is_unitary() {
        let s = spec(SpinCase::Dirac).with_k_z(0.3);
        let h = build_model(&s).unwrap();
        let r = fw_transform(&h, &s).unwrap();
        let id = Operator::identity(r.u.basis());
        let defect = &(&r.u * &r.u.adjoint()) - &id;
        let w = s.graded_window();
        assert!(w.norm(&defect) <= 1e-12);
    }

    #[test]
    fn known_eigenvalues() {
        let cases = [
            (SpinCase::Kg, vec![2f64.sqrt(), 2.0, 6f64.sqrt()]),
            (SpinCase::Dirac, vec![1.0, 3f64.sqrt(), 3f64.sqrt()]),
        ];
        for (case, want) in cases {
            let s = spec(case);
            let h = build_model(&s).unwrap();
            let f = fw_hamiltonian(&h, &s).unwrap();
            let (up, down) = sector_eigenvalues(&f.h_fw, &s.window()).unwrap();
            for (k, w) in want.iter().enumerate() {
                assert!((up[k] - w).abs() < 1e-12, "{case}: {up:?}");
                assert!((down[down.len() - 1 - k] + w).abs() < 1e-12, "{case}");
            }
        }
    }

    #[test]
    fn critical_spin1_field_is_near_singular() {
        let s = ModelSpec::new(SpinCase::Spin1).with_n_fock(12, 4);
        let h = build_model(&s).unwrap();
        // H_fw exists, sgn H does not
        let f = fw_hamiltonian(&h, &s).unwrap();
        let err = fw_unitary(&h, &f.h_squared, &s.graded_window(), &s.tolerances).unwrap_err();
        assert!(matches!(err, Error::NearSingular { .. }));
    }

    #[test]
    fn nonrel_limit_ratio() {
        for case in SpinCase::ALL {
            let s = spec(case);
            let r = nonrel_limit_check(&s, &[1.0, 10.0, 100.0]).unwrap();
            assert!(r.overall_pass, "{case}: {r:#?}");
            let pts = nonrel_limit_points(&s, &[10.0, 100.0]).unwrap();
            let ratio = pts[1].distance / pts[0].distance;
            assert!((0.005..=0.02).contains(&ratio), "{case}: {ratio}");
        }
        assert!(nonrel_limit_check(&spec(SpinCase::Kg), &[10.0, 1.0]).is_err());
    }
}
