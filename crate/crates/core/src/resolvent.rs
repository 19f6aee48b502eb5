//! Resolvents of the block Hamiltonians through the iterated resolvent
//! `g(ζ) = (H² − ζ)⁻¹`.
//!
//! With `H²` block diagonal, `G(z) = (H − z)⁻¹ = (H + z) g(z²)` and
//!
//! ```text
//! G(z) = [[ (z + M₊) g⁺(z²),            A g⁻(z²)        ],
//!         [ (−1)^{2s+1} A† g⁺(z²),      (z − M₋) g⁻(z²) ]]
//! ```
//!
//! Each `g±` reduces to the resolvent of the non-relativistic Hamiltonian at
//! `ξ = ζ/2mc² − mc²/2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fw::fw_hamiltonian;
use crate::landau::InteriorProjector;
use crate::models::{assemble_full, nonrel_hamiltonian, BlockHamiltonian, ModelSpec};
use crate::opalg::{eigh, relative, solve_shifted, Operator, Sector, Tolerances, C64};
use crate::report::CheckReport;

/// A complex shift as it appears in configuration files and reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shift {
    pub re: f64,
    #[serde(default = "default_im")]
    pub im: f64,
}

fn default_im() -> f64 {
    1.0
}

impl Shift {
    pub fn new(re: f64, im: f64) -> Self {
        Shift { re, im }
    }

    pub fn value(self) -> C64 {
        C64::new(self.re, self.im)
    }
}

impl From<C64> for Shift {
    fn from(z: C64) -> Self {
        Shift { re: z.re, im: z.im }
    }
}

/// `{i, −i, 1 + i, 0.3 i mc², 2mc² + i}`.
pub fn default_shifts(rest_energy: f64) -> Vec<Shift> {
    vec![
        Shift::new(0.0, 1.0),
        Shift::new(0.0, -1.0),
        Shift::new(1.0, 1.0),
        Shift::new(0.0, 0.3 * rest_energy),
        Shift::new(2.0 * rest_energy, 1.0),
    ]
}

/// `(g⁺(ζ), g⁻(ζ))` from the exact diagonal blocks of `H²`.
pub fn iterated_resolvent_blocks(h_squared: &Operator, zeta: C64, tol: &Tolerances) -> Result<(Operator, Operator)> {
    let up = h_squared.block(Sector::Plus, Sector::Plus)?;
    let down = h_squared.block(Sector::Minus, Sector::Minus)?;
    Ok((solve_shifted(&up, zeta, tol)?, solve_shifted(&down, zeta, tol)?))
}

/// Distance from `z` to a set of real eigenvalues.
fn distance_to(values: &[f64], z: C64) -> f64 {
    values
        .iter()
        .map(|v| (C64::from(*v) - z).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Spectrum of `H` (from `H_fw`) and of `H²`, used to vet shifts.
#[derive(Clone, Debug)]
pub struct Spectra {
    pub energies: Vec<f64>,
    pub squares: Vec<f64>,
}

impl Spectra {
    pub fn new(h_fw: &Operator) -> Self {
        let energies = eigh(h_fw.entries()).values;
        let squares = energies.iter().map(|e| e * e).collect();
        Spectra { energies, squares }
    }

    /// `ShiftOnSpectrum` when `z` is within `margin` of `spec(H)` or `z²` of `spec(H²)`.
    pub fn admit(&self, z: C64, margin: f64) -> Result<()> {
        let d1 = distance_to(&self.energies, z);
        let d2 = distance_to(&self.squares, z * z);
        let distance = d1.min(d2);
        if distance <= margin {
            return Err(Error::ShiftOnSpectrum {
                re: z.re,
                im: z.im,
                distance,
                margin,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ResolventReport {
    pub z: C64,
    pub g_block: Operator,
    pub g_plus: Operator,
    pub g_minus: Operator,
    /// Windowed `‖G₃ − (H − z)⁻¹‖`, relative.
    pub residual_direct: f64,
    /// Windowed `‖G₃ − (H + z) g(z²)‖`, relative.
    pub residual_iterated: f64,
    /// Windowed distance of `g±(z²)` from the scaled non-relativistic resolvent.
    pub residual_reduction: f64,
}

/// Serializable summary of a [`ResolventReport`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventSummary {
    pub z: Shift,
    pub residual_direct: f64,
    pub residual_iterated: f64,
    pub residual_reduction: f64,
}

impl ResolventReport {
    pub fn summary(&self) -> ResolventSummary {
        ResolventSummary {
            z: self.z.into(),
            residual_direct: self.residual_direct,
            residual_iterated: self.residual_iterated,
            residual_reduction: self.residual_reduction,
        }
    }
}

/// `max± ‖P(g±(ζ) − (H_NR − ξ)⁻¹ / 2mc²)P‖` relative to `‖P g± P‖`.
pub fn nonrel_reduction_check(g: (&Operator, &Operator), spec: &ModelSpec, zeta: C64) -> Result<f64> {
    let mc2 = spec.rest_energy();
    let xi = zeta / (2.0 * mc2) - mc2 / 2.0;
    let nr = nonrel_hamiltonian(spec)?.op;
    let g_nr = solve_shifted(&nr, xi, &spec.tolerances)?.scale(1.0 / (2.0 * mc2));
    let w = spec.window();
    let mut worst = 0.0_f64;
    for gb in [g.0, g.1] {
        worst = worst.max(relative(w.norm(&(gb - &g_nr)), w.norm(gb)));
    }
    Ok(worst)
}

/// Assembles `G(z)` from the iterated resolvent and compares it with the direct
/// inverse, the product form and the non-relativistic reduction.
pub fn block_resolvent(h: &BlockHamiltonian, h_squared: &Operator, spectra: &Spectra, spec: &ModelSpec, z: C64) -> Result<ResolventReport> {
    let tol = &spec.tolerances;
    spectra.admit(z, tol.shift_margin)?;
    let zeta = z * z;
    let (g_plus, g_minus) = iterated_resolvent_blocks(h_squared, zeta, tol)?;

    let a_dag = h.a.adjoint();
    let ul = &h.m_plus.shifted(z) * &g_plus;
    let ur = &h.a * &g_minus;
    let ll = (&a_dag * &g_plus).scale(h.sign_factor);
    let lr = &(-&h.m_minus).shifted(z) * &g_minus;
    let g_block = Operator::from_blocks(&ul, &ur, &ll, &lr)?;

    let h_full = assemble_full(h);
    let direct = solve_shifted(&h_full, z, tol)?;
    let g_graded = Operator::block_diagonal(&g_plus, &g_minus)?;
    let iterated = &h_full.shifted(z) * &g_graded;

    let window = spec.graded_window();
    let scale = window.norm(&direct);
    Ok(ResolventReport {
        z,
        residual_direct: relative(window.norm(&(&g_block - &direct)), scale),
        residual_iterated: relative(window.norm(&(&g_block - &iterated)), scale),
        residual_reduction: nonrel_reduction_check((&g_plus, &g_minus), spec, zeta)?,
        g_block,
        g_plus,
        g_minus,
    })
}

/// Windowed `‖G(z₁) − G(z₂) − (z₁ − z₂) G(z₁) G(z₂)‖` relative to `‖P(G(z₁) − G(z₂))P‖`.
pub fn first_resolvent_identity(g1: &Operator, g2: &Operator, z1: C64, z2: C64, window: &InteriorProjector) -> f64 {
    let diff = g1 - g2;
    let product = (g1 * g2).scale(z1 - z2);
    relative(window.norm(&(&diff - &product)), window.norm(&diff))
}

/// Runs [`block_resolvent`] over `shifts` (in parallel) and the first resolvent
/// identity on consecutive pairs.
pub fn resolvent_suite(h: &BlockHamiltonian, spec: &ModelSpec, shifts: &[Shift]) -> Result<(Vec<ResolventSummary>, CheckReport)> {
    let fwh = fw_hamiltonian(h, spec)?;
    let spectra = Spectra::new(&fwh.h_fw);
    let reports: Vec<ResolventReport> = shifts
        .par_iter()
        .map(|s| block_resolvent(h, &fwh.h_squared, &spectra, spec, s.value()))
        .collect::<Result<_>>()?;
    let tol = spec.tolerances.interior_tol;
    let mut check = CheckReport::new("resolvent");
    for (k, r) in reports.iter().enumerate() {
        let label = format!("z{k}");
        check
            .at_most(format!("{label}_direct"), r.residual_direct, tol)
            .with("re", r.z.re)
            .with("im", r.z.im);
        check.at_most(format!("{label}_iterated"), r.residual_iterated, tol);
        check.at_most(format!("{label}_reduction"), r.residual_reduction, tol);
    }
    // the direct inverses are what the identity is about
    let h_full = assemble_full(h);
    let window = spec.graded_window();
    for (k, pair) in reports.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let ga = solve_shifted(&h_full, a.z, &spec.tolerances)?;
        let gb = solve_shifted(&h_full, b.z, &spec.tolerances)?;
        check
            .at_most(
                format!("first_identity_z{}_z{}", k, k + 1),
                first_resolvent_identity(&ga, &gb, a.z, b.z, &window),
                tol,
            );
    }
    Ok((reports.iter().map(|r| r.summary()).collect(), check))
}

/// `(2mc² H_NR + m²c⁴ − ζ)⁻¹`, the closed form of `g±` for the supersymmetric
/// models.
pub fn closed_form_iterated(spec: &ModelSpec, zeta: C64) -> Result<Operator> {
    let mc2 = spec.rest_energy();
    let nr = nonrel_hamiltonian(spec)?.op;
    solve_shifted(&nr.scale(2.0 * mc2).shifted(mc2 * mc2), zeta, &spec.tolerances)
}
