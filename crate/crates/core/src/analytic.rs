//! Closed-form Landau spectra and the comparison against numerical spectra.
//!
//! Non-relativistic levels are `ħω_c(n + ½ + s_z) + ħ²k_z²/2m` (with `s_z = 0`
//! for spin 0) and all three relativistic spectra take the form
//! `E = ±√(m²c⁴ + 2mc² ε_NR)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fw::fw_hamiltonian;
use crate::models::{build_model, ModelSpec, SpinCase};
use crate::opalg::{joint_eigen, BasisTag, Operator, Sector, C64};
use crate::report::CheckReport;
use crate::spin::spin_matrices;

/// Default absolute tolerance for matching numeric and analytic levels.
pub const MATCH_TOL: f64 = 1e-10;

/// Spin projections closer than this are considered equal.
const SPIN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelLabel {
    pub n: usize,
    /// `0` for spin 0.
    pub s_z: f64,
    pub k_z: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

fn check_label(case: SpinCase, label: &LevelLabel) -> Result<()> {
    let ok = case.spin().projections().iter().any(|p| (p - label.s_z).abs() < SPIN_TOL) && label.k_z.is_finite();
    if ok {
        Ok(())
    } else {
        Err(Error::LabelMismatch {
            label: format!("n={} s_z={} k_z={}", label.n, label.s_z, label.k_z),
            case: case.name().to_string(),
        })
    }
}

/// `ħω_c(n + ½ + s_z) + ħ²k_z²/2m`.
pub fn nonrel_level(case: SpinCase, label: &LevelLabel, spec: &ModelSpec) -> Result<f64> {
    check_label(case, label)?;
    Ok(spec.hbar * spec.omega_c * (label.n as f64 + 0.5 + label.s_z)
        + spec.hbar * spec.hbar * label.k_z * label.k_z / (2.0 * spec.m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativisticEnergy {
    pub value: C64,
    /// Set when the radicand is negative and the energy is imaginary.
    pub supercritical: bool,
}

/// `±√(m²c⁴ + 2mc² ε_NR)`; imaginary with the flag set when the radicand is
/// negative.
pub fn relativistic_energy(case: SpinCase, label: &LevelLabel, spec: &ModelSpec, branch: Branch) -> Result<RelativisticEnergy> {
    let eps = nonrel_level(case, label, spec)?;
    let mc2 = spec.rest_energy();
    let radicand = mc2 * mc2 + 2.0 * mc2 * eps;
    let s = branch.sign();
    Ok(if radicand < 0.0 {
        RelativisticEnergy {
            value: C64::new(0.0, s * (-radicand).sqrt()),
            supercritical: true,
        }
    } else {
        RelativisticEnergy {
            value: C64::from(s * radicand.sqrt()),
            supercritical: false,
        }
    })
}

/// The three equivalent spin-0 forms `√(m₊²c⁴ − 2mc²ε)`, `√((mc² + ε_L)² − ε_L²)`
/// and `mc²√(1 + 2ε_L/mc²)` with `m₊c² = mc² + ε_L`, `ε = ε_L²/2mc²`.
pub fn kg_energy_forms(eps_l: f64, rest_energy: f64) -> [f64; 3] {
    let mc2 = rest_energy;
    let mass = mc2 + eps_l;
    let eps = eps_l * eps_l / (2.0 * mc2);
    [
        (mass * mass - 2.0 * mc2 * eps).sqrt(),
        ((mc2 + eps_l).powi(2) - eps_l * eps_l).sqrt(),
        mc2 * (1.0 + 2.0 * eps_l / mc2).sqrt(),
    ]
}

/// Labels of the interior window `n ≤ n_fock − buffer − 1`, spin projections
/// in descending order.
pub fn interior_labels(spec: &ModelSpec) -> Vec<LevelLabel> {
    let levels = spec.n_fock - spec.buffer;
    let proj = spec.spin().projections();
    (0..levels)
        .flat_map(|n| {
            proj.iter().map(move |&s_z| LevelLabel {
                n,
                s_z,
                k_z: spec.k_z,
            })
        })
        .collect()
}

/// A numerical eigenvalue with the spin projection of its eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericLevel {
    pub energy: f64,
    pub s_z: f64,
}

/// Interior eigenvalues of both sectors of `H_fw`, with `S_3` diagonalised
/// inside every degenerate cluster.
pub fn fw_levels(h_fw: &Operator, spec: &ModelSpec) -> Result<Vec<NumericLevel>> {
    let spin = spin_matrices(spec.spin());
    let fock_id = Operator::identity(BasisTag::ungraded(spec.n_fock, 1));
    let s3 = Operator::fock_spin(&fock_id, &spin.s[2])?;
    let window = spec.window();
    let s3w = window.window(&s3);
    let mut out = Vec::new();
    for sector in [Sector::Plus, Sector::Minus] {
        let block = h_fw.block(sector, sector)?;
        for jv in joint_eigen(&window.window(&block), &s3w, crate::susy::CLUSTER_TOL) {
            out.push(NumericLevel {
                energy: jv.primary,
                s_z: jv.secondary,
            });
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelMatch {
    pub label: LevelLabel,
    pub branch: Branch,
    pub numeric: f64,
    pub analytic: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub matches: Vec<LevelMatch>,
    pub report: CheckReport,
}

/// Greedy bijective matching of numeric levels to analytic `(label, branch)`
/// pairs by energy and spin projection.
///
/// Fails with `UnmatchedLevel` when a numeric level has no unused candidate
/// within `tolerance`.
pub fn compare_spectrum(numeric: &[NumericLevel], spec: &ModelSpec, tolerance: f64) -> Result<SpectrumComparison> {
    let case = spec.case;
    let mut candidates = Vec::new();
    for label in interior_labels(spec) {
        for branch in [Branch::Plus, Branch::Minus] {
            let e = relativistic_energy(case, &label, spec, branch)?;
            if !e.supercritical {
                candidates.push((label, branch, e.value.re));
            }
        }
    }
    let mut used = vec![false; candidates.len()];
    let mut matches = Vec::with_capacity(numeric.len());
    for level in numeric {
        let best = candidates
            .iter()
            .enumerate()
            .filter(|(i, (label, _, _))| !used[*i] && (label.s_z - level.s_z).abs() < SPIN_TOL)
            .map(|(i, c)| (i, (c.2 - level.energy).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, d)) if d <= tolerance => {
                used[i] = true;
                let (label, branch, analytic) = candidates[i];
                matches.push(LevelMatch {
                    label,
                    branch,
                    numeric: level.energy,
                    analytic,
                    abs_error: d,
                });
            }
            other => {
                return Err(Error::UnmatchedLevel {
                    energy: level.energy,
                    distance: other.map_or(f64::INFINITY, |b| b.1),
                    tolerance,
                })
            }
        }
    }
    let mut report = CheckReport::new("spectrum");
    let worst = matches.iter().map(|m| m.abs_error).fold(0.0, f64::max);
    report.at_most("max_abs_error", worst, tolerance);
    report
        .holds("bijective", used.iter().all(|u| *u) && matches.len() == candidates.len())
        .with("numeric_levels", numeric.len() as f64)
        .with("analytic_levels", candidates.len() as f64);
    Ok(SpectrumComparison { matches, report })
}

/// One row of the spectrum table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub s_z: f64,
    pub k_z: f64,
    pub epsilon_nonrel: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub analytic_e: f64,
    pub abs_error: f64,
}

/// Joins the two branches of every label into a row, ordered by `(n, −s_z)`.
pub fn spectrum_rows(cmp: &SpectrumComparison, spec: &ModelSpec) -> Result<Vec<SpectrumRow>> {
    let mut rows = Vec::new();
    for label in interior_labels(spec) {
        let find = |b: Branch| {
            cmp.matches
                .iter()
                .find(|m| m.branch == b && m.label.n == label.n && (m.label.s_z - label.s_z).abs() < SPIN_TOL)
        };
        if let (Some(p), Some(m)) = (find(Branch::Plus), find(Branch::Minus)) {
            rows.push(SpectrumRow {
                n: label.n,
                s_z: label.s_z,
                k_z: label.k_z,
                epsilon_nonrel: nonrel_level(spec.case, &label, spec)?,
                e_plus: p.numeric,
                e_minus: m.numeric,
                analytic_e: p.analytic,
                abs_error: p.abs_error.max(m.abs_error),
            });
        }
    }
    Ok(rows)
}

/// Builds the model, transforms it and compares the interior spectrum.
pub fn fw_spectrum(spec: &ModelSpec) -> Result<(SpectrumComparison, Vec<SpectrumRow>)> {
    let h = build_model(spec)?;
    let f = fw_hamiltonian(&h, spec)?;
    let levels = fw_levels(&f.h_fw, spec)?;
    let cmp = compare_spectrum(&levels, spec, MATCH_TOL)?;
    let rows = spectrum_rows(&cmp, spec)?;
    Ok((cmp, rows))
}
