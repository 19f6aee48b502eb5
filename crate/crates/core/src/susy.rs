//! N = 2 supersymmetry of the block Hamiltonians.
//!
//! With `Q = [[0, A], [0, 0]] / √(2mc²)` and the Witten parity `W = β`,
//!
//! ```text
//! {Q, Q†} = H_SUSY = diag(AA†, A†A) / 2mc² = diag(H₊, H₋)
//! ```
//!
//! and whenever `M±` commute with `A` the relativistic spectrum follows from
//! that of the partner Hamiltonians, `E± = ±√(m±²c⁴ + (−1)^{2s+1} 2mc² ε)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau::InteriorProjector;
use crate::models::{build_model, BlockHamiltonian, ModelSpec, SpinCase};
use crate::opalg::{
    anticommutator, commutator, eigh, joint_eigen, op_norm, relative, BasisTag,
    Matrix, Operator, Tolerances, Vector, C64,
};
use crate::report::CheckReport;

/// Relative gap below which partner eigenvalues count as degenerate.
pub const CLUSTER_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SusySystem {
    pub q: Operator,
    pub q_dag: Operator,
    pub w: Operator,
    pub h_susy: Operator,
    /// `AA† / 2mc²`.
    pub h_plus: Operator,
    /// `A†A / 2mc²`.
    pub h_minus: Operator,
    /// `m c²`.
    pub mass_scale: f64,
}

impl SusySystem {
    pub fn basis(&self) -> BasisTag {
        self.h_plus.basis()
    }
}

pub fn build_susy_system(h: &BlockHamiltonian) -> SusySystem {
    let basis = h.basis();
    let mass_scale = h.rest_energy;
    let zero = Operator::zeros(basis);
    let a = h.a.scale(1.0 / (2.0 * mass_scale).sqrt());
    let q = Operator::from_blocks(&zero, &a, &zero, &zero).expect("same basis");
    let q_dag = q.adjoint();
    let m2 = h.mass_squared_graded();
    let h_susy = (&h.squared() - &m2).scale(h.sign_factor / (2.0 * mass_scale));
    SusySystem {
        q,
        q_dag,
        w: h.beta(),
        h_susy,
        h_plus: h.a_a_dag().scale(1.0 / (2.0 * mass_scale)),
        h_minus: h.a_dag_a().scale(1.0 / (2.0 * mass_scale)),
        mass_scale,
    }
}

fn windowed(report: &mut CheckReport, name: &str, residual: &Operator, scale: f64, window: &InteriorProjector, tol: f64) {
    report
        .at_most(name, relative(window.norm(residual), scale), tol)
        .with("unwindowed", relative(op_norm(residual), scale));
}

/// Interior-windowed, relative residuals of the N = 2 algebra and of the
/// claim that `M = diag(M₊, M₋)` lies in its center.
pub fn verify_susy_algebra(sys: &SusySystem, h: &BlockHamiltonian, window: &InteriorProjector, tol: f64) -> Result<CheckReport> {
    let window = window.for_basis(sys.q.basis());
    let mut r = CheckReport::new("susy_algebra");
    let id = Operator::identity(sys.w.basis());
    let hs_scale = window.norm(&sys.h_susy);
    let q_scale = op_norm(&sys.q);

    let qq = anticommutator(&sys.q, &sys.q_dag)?;
    windowed(&mut r, "anticommutator_q_qdag_minus_h_susy", &(&qq - &sys.h_susy), hs_scale, &window, tol);
    windowed(&mut r, "anticommutator_q_w", &anticommutator(&sys.q, &sys.w)?, q_scale, &window, tol);
    windowed(&mut r, "q_squared", &(&sys.q * &sys.q), q_scale * q_scale, &window, tol);
    windowed(&mut r, "q_dag_squared", &(&sys.q_dag * &sys.q_dag), q_scale * q_scale, &window, tol);
    windowed(&mut r, "commutator_w_h_susy", &commutator(&sys.w, &sys.h_susy)?, hs_scale, &window, tol);
    windowed(&mut r, "w_squared_minus_identity", &(&(&sys.w * &sys.w) - &id), 1.0, &window, tol);

    let mass = h.mass_graded();
    let m_scale = op_norm(&mass);
    windowed(&mut r, "center_mass_q", &commutator(&mass, &sys.q)?, m_scale * q_scale, &window, tol);
    windowed(&mut r, "center_mass_w", &commutator(&mass, &sys.w)?, m_scale, &window, tol);
    windowed(&mut r, "center_mass_h_susy", &commutator(&mass, &sys.h_susy)?, m_scale * op_norm(&sys.h_susy), &window, tol);
    Ok(r)
}

/// One eigenvalue `ε` of the partner Hamiltonians with its eigenvectors.
///
/// Paired records carry both sectors. Kernel states of `H₋` carry only the
/// lower sector and kernel states of `H₊` only the upper one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairRecord {
    pub epsilon: f64,
    pub m_plus: Option<f64>,
    pub m_minus: Option<f64>,
    pub e_plus: Option<f64>,
    pub e_minus: Option<f64>,
    /// Windowed `‖H₊φ₊ − εφ₊‖`.
    pub partner_residual: Option<f64>,
    /// `|‖Aφ₋‖² − 2mc²ε| / max(1, 2mc²ε)`.
    pub norm_residual: Option<f64>,
    #[serde(skip)]
    pub phi_plus: Option<Vector>,
    #[serde(skip)]
    pub phi_minus: Option<Vector>,
}

impl PairRecord {
    pub fn is_paired(&self) -> bool {
        self.m_plus.is_some() && self.m_minus.is_some()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumPair {
    pub records: Vec<PairRecord>,
    /// Absolute eigenvalue below which `ε` counts as zero.
    pub kernel_threshold: f64,
}

impl SpectrumPair {
    pub fn paired(&self) -> impl Iterator<Item = &PairRecord> {
        self.records.iter().filter(|r| r.is_paired())
    }

    /// All positive energies, sorted.
    pub fn positive_energies(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.records.iter().filter_map(|r| r.e_plus).collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// All negative energies, sorted.
    pub fn negative_energies(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.records.iter().filter_map(|r| r.e_minus).collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

fn rayleigh(x: &Operator, v: &Vector) -> f64 {
    let num = v.dotc(&x.apply(v)).re;
    num / v.norm_squared()
}

fn energy(mass: f64, radicand_shift: f64, sign: f64, tol: &Tolerances) -> Result<f64> {
    let radicand = mass * mass + radicand_shift;
    let scale = (mass * mass).max(radicand_shift.abs()).max(1.0);
    if radicand < -tol.identity_tol * scale {
        return Err(Error::NegativeSpectrum {
            min_eigenvalue: radicand,
            threshold: -tol.identity_tol * scale,
        });
    }
    Ok(sign * radicand.max(0.0).sqrt())
}

/// Pairs eigenvectors of `H₋` with eigenvectors of `H₊` through
/// `φ₊ = Aφ₋ / √(2mc²ε)`.
///
/// `H₋` is diagonalised on the interior window; inside each degenerate cluster
/// the basis is rotated to diagonalise `M₋`, which fixes the pairing. Masses are
/// Rayleigh quotients of `M±`.
pub fn partner_spectrum_map(sys: &SusySystem, h: &BlockHamiltonian, window: &InteriorProjector, tol: &Tolerances) -> Result<SpectrumPair> {
    let window = window.for_basis(sys.basis());
    let two_mc2 = 2.0 * sys.mass_scale;
    let sign = h.sign_factor;

    let hm = window.window(&sys.h_minus);
    let hp = window.window(&sys.h_plus);
    let scale = eigh(&hm).max_abs().max(eigh(&hp).max_abs());
    let kernel_threshold = tol.kernel_rel * if scale > 0.0 { scale } else { 1.0 };

    let mut records = Vec::new();
    for jv in joint_eigen(&hm, &window.window(&h.m_minus), CLUSTER_TOL) {
        let phi_minus = window.embed(&jv.vector);
        let m_minus = rayleigh(&h.m_minus, &phi_minus);
        let eps = jv.primary;
        if eps.abs() <= kernel_threshold {
            records.push(PairRecord {
                epsilon: eps,
                m_plus: None,
                m_minus: Some(m_minus),
                e_plus: None,
                e_minus: Some(energy(m_minus, 0.0, -1.0, tol)?),
                partner_residual: None,
                norm_residual: None,
                phi_plus: None,
                phi_minus: Some(phi_minus),
            });
            continue;
        }
        let a_phi = h.a.apply(&phi_minus);
        let norm_residual = (a_phi.norm_squared() - two_mc2 * eps).abs() / (two_mc2 * eps).max(1.0);
        let phi_plus = a_phi / C64::from((two_mc2 * eps).sqrt());
        let defect = sys.h_plus.apply(&phi_plus) - &phi_plus * C64::from(eps);
        let partner_residual = window.restrict(&defect).norm();
        let m_plus = rayleigh(&h.m_plus, &phi_plus);
        records.push(PairRecord {
            epsilon: eps,
            m_plus: Some(m_plus),
            m_minus: Some(m_minus),
            e_plus: Some(energy(m_plus, sign * two_mc2 * eps, 1.0, tol)?),
            e_minus: Some(energy(m_minus, sign * two_mc2 * eps, -1.0, tol)?),
            partner_residual: Some(partner_residual),
            norm_residual: Some(norm_residual),
            phi_plus: Some(phi_plus),
            phi_minus: Some(phi_minus),
        });
    }

    if hp_kernel_dim(&hp, kernel_threshold) > 0 {
        for jv in joint_eigen(&hp, &window.window(&h.m_plus), CLUSTER_TOL)
            .into_iter()
            .filter(|jv| jv.primary.abs() <= kernel_threshold)
        {
            let phi_plus = window.embed(&jv.vector);
            let m_plus = rayleigh(&h.m_plus, &phi_plus);
            records.push(PairRecord {
                epsilon: jv.primary,
                m_plus: Some(m_plus),
                m_minus: None,
                e_plus: Some(energy(m_plus, 0.0, 1.0, tol)?),
                e_minus: None,
                partner_residual: None,
                norm_residual: None,
                phi_plus: Some(phi_plus),
                phi_minus: None,
            });
        }
    }
    records.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    Ok(SpectrumPair {
        records,
        kernel_threshold,
    })
}

fn hp_kernel_dim(m: &Matrix, threshold: f64) -> usize {
    eigh(m).values.iter().filter(|v| v.abs() <= threshold).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittenIndex {
    pub dim_ker_plus: usize,
    pub dim_ker_minus: usize,
    /// `dim ker H₋ − dim ker H₊`.
    pub delta: i64,
    /// `dim ker (Q + Q†)`, computed from its singular values.
    pub dim_ker_supercharge_sum: usize,
}

impl WittenIndex {
    pub fn is_consistent(&self) -> bool {
        self.dim_ker_supercharge_sum == self.dim_ker_plus + self.dim_ker_minus
    }
}

/// Kernel dimensions on the interior window.
///
/// `dim ker(Q + Q†)` uses the singular values of `(Q + Q†)` restricted to
/// interior columns (all rows kept), so states near the truncation edge do not
/// produce spurious zero modes.
pub fn witten_index(sys: &SusySystem, window: &InteriorProjector, kernel_rel: f64) -> WittenIndex {
    let window_u = window.for_basis(sys.basis());
    let hp = window_u.window(&sys.h_plus);
    let hm = window_u.window(&sys.h_minus);
    let scale = eigh(&hp).max_abs().max(eigh(&hm).max_abs());
    let threshold = kernel_rel * if scale > 0.0 { scale } else { 1.0 };
    let dim_ker_plus = hp_kernel_dim(&hp, threshold);
    let dim_ker_minus = hp_kernel_dim(&hm, threshold);

    let window_g = window.for_basis(sys.q.basis());
    let sum = &sys.q + &sys.q_dag;
    let cols = window_g.indices();
    let restricted = Matrix::from_fn(sum.dim(), cols.len(), |i, j| sum.get(i, cols[j]));
    let sv = restricted.singular_values();
    // ε = σ², so the kernel threshold on ε maps to √threshold on σ
    let dim_ker_supercharge_sum = sv.iter().filter(|s| **s <= threshold.sqrt()).count();
    WittenIndex {
        dim_ker_plus,
        dim_ker_minus,
        delta: dim_ker_minus as i64 - dim_ker_plus as i64,
        dim_ker_supercharge_sum,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub k_z: f64,
    pub dim_ker: usize,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelScan {
    pub points: Vec<ScanPoint>,
    /// Zero crossings of the smallest `H₊` eigenvalue, from parabolic fits.
    pub crossings: Vec<f64>,
    /// Where the closed-form spectrum puts the zeros.
    pub analytic: Vec<f64>,
}

/// Accepted vertex value of a parabolic fit, relative to `a h²` (curvature
/// times squared grid spacing), the size a genuine double zero shows at its
/// nearest grid points.
pub const CROSSING_REL: f64 = 0.1;

/// `k_z` values where the closed-form partner spectrum has a zero eigenvalue.
pub fn analytic_crossings(spec: &ModelSpec) -> Vec<f64> {
    match spec.case {
        SpinCase::Kg => vec![],
        SpinCase::Dirac => vec![0.0],
        SpinCase::Spin1 if spec.g == 2.0 => {
            let k = 1.0 / spec.larmor_length();
            vec![-k, k]
        }
        SpinCase::Spin1 => vec![],
    }
}

/// Smallest eigenvalue and kernel dimension of windowed `H₊` on every fiber,
/// with zero crossings located by fitting a parabola through each local
/// minimum and its two neighbours. A vertex is accepted as a crossing when its
/// value is at most the kernel threshold or `CROSSING_REL · a h²`, where `a` is
/// the fitted curvature and `h` the larger of the two spacings.
pub fn kernel_scan(spec: &ModelSpec, grid: &[f64]) -> Result<KernelScan> {
    spec.validate()?;
    if grid.iter().any(|k| !k.is_finite()) {
        return Err(Error::InvalidParameter("k_z grid must be finite".into()));
    }
    let evaluated: Vec<Result<(ScanPoint, f64)>> = grid
        .par_iter()
        .map(|&k_z| {
            let fiber = spec.clone().with_k_z(k_z);
            let h = build_model(&fiber)?;
            let sys = build_susy_system(&h);
            let hp = fiber.window().window(&sys.h_plus);
            let eig = eigh(&hp);
            let scale = eig.max_abs();
            let threshold = fiber.tolerances.kernel_rel * if scale > 0.0 { scale } else { 1.0 };
            let dim_ker = eig.values.iter().filter(|v| v.abs() <= threshold).count();
            Ok((
                ScanPoint {
                    k_z,
                    dim_ker,
                    min_eigenvalue: eig.min(),
                },
                threshold,
            ))
        })
        .collect();
    let mut points = Vec::with_capacity(grid.len());
    let mut thresholds = Vec::with_capacity(grid.len());
    for r in evaluated {
        let (p, t) = r?;
        points.push(p);
        thresholds.push(t);
    }

    let mut crossings = Vec::new();
    for i in 1..points.len().saturating_sub(1) {
        let (l, c, r) = (&points[i - 1], &points[i], &points[i + 1]);
        if !(c.min_eigenvalue <= l.min_eigenvalue && c.min_eigenvalue < r.min_eigenvalue) {
            continue;
        }
        let (k, v, a) = parabola_vertex([l.k_z, c.k_z, r.k_z], [l.min_eigenvalue, c.min_eigenvalue, r.min_eigenvalue]);
        let h = (c.k_z - l.k_z).abs().max((r.k_z - c.k_z).abs());
        let accept = thresholds[i].max(CROSSING_REL * a.abs() * h * h);
        if v <= accept {
            crossings.push(k);
        }
    }
    Ok(KernelScan {
        points,
        crossings,
        analytic: analytic_crossings(spec),
    })
}

/// Vertex `(x, y)` and leading coefficient of the parabola through three
/// points; falls back to the middle point when they are collinear.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if a.abs() <= f64::EPSILON * (d1.abs() + d2.abs()) {
        return (x[1], y[1], 0.0);
    }
    let b = d1 - a * (x[0] + x[1]);
    let xv = -b / (2.0 * a);
    let yv = y[0] + (xv - x[0]) * (d1 + a * (xv - x[1]));
    (xv, yv, a)
}

impl KernelScan {
    /// Every analytic crossing inside the grid range is matched by a located
    /// crossing within `resolution`, and no located crossing is unmatched.
    pub fn check(&self, resolution: f64) -> CheckReport {
        let mut r = CheckReport::new("kernel_scan");
        let (lo, hi) = match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => (a.k_z.min(b.k_z), a.k_z.max(b.k_z)),
            _ => return r,
        };
        let expected: Vec<f64> = self.analytic.iter().copied().filter(|k| *k > lo && *k < hi).collect();
        for (i, k) in expected.iter().enumerate() {
            let dist = self.crossings.iter().map(|c| (c - k).abs()).fold(f64::INFINITY, f64::min);
            r.at_most(format!("crossing_{i}"), dist, resolution).with("analytic_k_z", *k);
        }
        let spurious = self
            .crossings
            .iter()
            .filter(|c| expected.iter().all(|k| (*c - k).abs() > resolution))
            .count();
        r.at_most("unexpected_crossings", spurious as f64, 0.0);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{assemble_full, mo_commutator_norm};

    fn spec(case: SpinCase) -> ModelSpec {
        ModelSpec::new(case).with_n_fock(16, 4)
    }

    #[test]
    fn q_squares_to_zero_exactly() {
        let h = build_model(&spec(SpinCase::Spin1).with_k_z(0.3)).unwrap();
        let sys = build_susy_system(&h);
        assert_eq!(op_norm(&(&sys.q * &sys.q)), 0.0);
        assert_eq!(op_norm(&anticommutator(&sys.q, &sys.w).unwrap()), 0.0);
    }

    #[test]
    fn h_susy_is_partner_diagonal() {
        for case in SpinCase::ALL {
            let s = spec(case).with_k_z(0.4);
            let h = build_model(&s).unwrap();
            let sys = build_susy_system(&h);
            let diag = Operator::block_diagonal(&sys.h_plus, &sys.h_minus).unwrap();
            let r = relative(op_norm(&(&sys.h_susy - &diag)), op_norm(&diag));
            assert!(r <= s.tolerances.identity_tol, "{case}: {r}");
        }
    }

    #[test]
    fn kg_partner_is_landau_squared() {
        let s = spec(SpinCase::Kg).with_k_z(0.5);
        let sys = build_susy_system(&build_model(&s).unwrap());
        for n in 0..s.n_fock {
            let e_l = n as f64 + 0.5 + 0.125;
            assert!((sys.h_plus.get(n, n).re - e_l * e_l / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn algebra_holds_for_supersymmetric_models() {
        for case in SpinCase::ALL {
            let s = spec(case).with_k_z(0.6);
            let h = build_model(&s).unwrap();
            let sys = build_susy_system(&h);
            let r = verify_susy_algebra(&sys, &h, &s.window(), s.tolerances.interior_tol).unwrap();
            assert!(r.overall_pass, "{case}: {r:#?}");
        }
    }

    #[test]
    fn anomalous_moment_breaks_center() {
        let s = spec(SpinCase::Spin1).with_g(3.0);
        let h = build_model(&s).unwrap();
        let sys = build_susy_system(&h);
        let r = verify_susy_algebra(&sys, &h, &s.window(), s.tolerances.interior_tol).unwrap();
        assert!(!r.get("center_mass_q").unwrap().pass);
        assert!(mo_commutator_norm(&h, &s.window()).absolute > 0.1);
    }

    #[test]
    fn kg_lowest_energy() {
        let s = spec(SpinCase::Kg);
        let h = build_model(&s).unwrap();
        let sys = build_susy_system(&h);
        let pairs = partner_spectrum_map(&sys, &h, &s.window(), &s.tolerances).unwrap();
        let first = &pairs.records[0];
        assert!((first.e_plus.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((first.e_minus.unwrap() + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dirac_pairing_residuals() {
        let s = spec(SpinCase::Dirac).with_k_z(0.2);
        let h = build_model(&s).unwrap();
        let sys = build_susy_system(&h);
        let pairs = partner_spectrum_map(&sys, &h, &s.window(), &s.tolerances).unwrap();
        assert!(pairs.paired().count() > 10);
        for p in pairs.paired() {
            assert!(p.partner_residual.unwrap() <= s.tolerances.interior_tol, "{p:?}");
            assert!(p.norm_residual.unwrap() <= s.tolerances.interior_tol, "{p:?}");
            let (mp, mm) = (p.m_plus.unwrap(), p.m_minus.unwrap());
            assert!((mp - mm).abs() <= s.tolerances.interior_tol * mp.abs());
        }
    }

    #[test]
    fn spin1_unbroken_fiber_has_rest_energy() {
        let s = spec(SpinCase::Spin1).with_k_z(1.0);
        let h = build_model(&s).unwrap();
        let sys = build_susy_system(&h);
        let pairs = partner_spectrum_map(&sys, &h, &s.window(), &s.tolerances).unwrap();
        let zero: Vec<_> = pairs.records.iter().filter(|r| r.epsilon.abs() <= pairs.kernel_threshold).collect();
        assert_eq!(zero.len(), 2);
        for z in zero {
            let e = z.e_plus.or(z.e_minus).unwrap();
            assert!((e.abs() - 1.0).abs() < 1e-10, "{z:?}");
        }
    }

    #[test]
    fn spin1_supercritical_is_rejected() {
        let s = spec(SpinCase::Spin1).with_omega_c(2.0);
        let h = build_model(&s).unwrap();
        let sys = build_susy_system(&h);
        let err = partner_spectrum_map(&sys, &h, &s.window(), &s.tolerances).unwrap_err();
        assert!(matches!(err, Error::NegativeSpectrum { .. }));
    }

    #[test]
    fn witten_examples() {
        let cases = [
            (spec(SpinCase::Kg), (0, 0)),
            (spec(SpinCase::Dirac), (1, 1)),
            (spec(SpinCase::Spin1).with_k_z(1.0), (1, 1)),
            (spec(SpinCase::Spin1).with_k_z(0.3), (0, 0)),
        ];
        for (s, (p, m)) in cases {
            let sys = build_susy_system(&build_model(&s).unwrap());
            let w = witten_index(&sys, &s.window(), s.tolerances.kernel_rel);
            assert_eq!((w.dim_ker_plus, w.dim_ker_minus), (p, m), "{s:?}");
            assert_eq!(w.delta, 0);
            assert!(w.is_consistent(), "{w:?}");
        }
    }

    #[test]
    fn symmetric_spectrum_for_dirac() {
        let s = spec(SpinCase::Dirac).with_k_z(0.1);
        let h = build_model(&s).unwrap();
        let full = assemble_full(&h);
        let sys = build_susy_system(&h);
        let pairs = partner_spectrum_map(&sys, &h, &s.window(), &s.tolerances).unwrap();
        let pos = pairs.positive_energies();
        let mut neg: Vec<f64> = pairs.negative_energies().iter().map(|e| -e).collect();
        neg.sort_by(f64::total_cmp);
        assert_eq!(pos.len(), neg.len());
        for (a, b) in pos.iter().zip(&neg) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(full.hermiticity_residual() == 0.0);
    }

    #[test]
    fn parabola_vertex_exact() {
        let (x, y, a) = parabola_vertex([0.0, 1.0, 3.0], [4.0, 1.0, 1.0]);
        // y = (x - 2)^2
        assert!((x - 2.0).abs() < 1e-14 && y.abs() < 1e-14 && (a - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scans() {
        let grid: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let s1 = kernel_scan(&spec(SpinCase::Spin1), &grid).unwrap();
        assert!(s1.check(0.1).overall_pass, "{:?}", s1.crossings);
        let kg = kernel_scan(&spec(SpinCase::Kg), &grid).unwrap();
        assert!(kg.crossings.is_empty());
        assert!(kg.points.iter().all(|p| p.dim_ker == 0));
        let weak = kernel_scan(&spec(SpinCase::Spin1).with_omega_c(0.5), &grid).unwrap();
        assert!(weak.check(0.1).overall_pass, "{:?}", weak.crossings);
        let d = kernel_scan(&spec(SpinCase::Dirac), &grid).unwrap();
        assert!(d.check(0.1).overall_pass, "{:?}", d.crossings);
        assert_eq!(d.points[20].dim_ker, 1);
    }
}
