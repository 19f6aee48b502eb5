//! Command pipelines.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::RunConfig;
use crate::analytic::{fw_spectrum, SpectrumRow};
use crate::error::Error;
use crate::fw::{fw_transform, nonrel_limit_points, nonrel_limit_report, sector_eigenvalues};
use crate::models::{
    build_model, energy_momentum_residual, mo_commutator_norm, pi_identity_suite, supercritical_margin,
    ModelSpec, SpinCase,
};
use crate::opalg::eigh;
use crate::report::CheckReport;
use crate::resolvent::resolvent_suite;
use crate::spin::{spin1_identity_suite, spin_matrices, Spin};
use crate::susy::{build_susy_system, kernel_scan, partner_spectrum_map, verify_susy_algebra, witten_index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    SusyCheck,
    FwCheck,
    Resolvent,
    WittenScan,
    Identities,
    NonrelLimit,
    All,
}

impl Command {
    /// Every suite, in the order `all` runs them.
    pub const SUITES: [Command; 7] = [
        Command::Spectrum,
        Command::SusyCheck,
        Command::FwCheck,
        Command::Resolvent,
        Command::WittenScan,
        Command::Identities,
        Command::NonrelLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::SusyCheck => "susy-check",
            Command::FwCheck => "fw-check",
            Command::Resolvent => "resolvent",
            Command::WittenScan => "witten-scan",
            Command::Identities => "identities",
            Command::NonrelLimit => "nonrel-limit",
            Command::All => "all",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::SUITES
            .iter()
            .chain(std::iter::once(&Command::All))
            .copied()
            .find(|c| c.name() == name)
    }
}

/// Stable process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExitCode {
    Pass = 0,
    CheckFailed = 1,
    Config = 2,
    Numerical = 3,
}

impl ExitCode {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Why a command stopped before producing its reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// `numerical` or `config`.
    pub kind: String,
    pub check: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub command: Command,
    pub exit_code: u8,
    pub reports: Vec<CheckReport>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Diagnostic>,
    #[serde(skip)]
    pub rows: Option<Vec<SpectrumRow>>,
}

struct Failure {
    check: &'static str,
    error: Error,
}

trait At<T> {
    fn at(self, check: &'static str) -> Result<T, Failure>;
}

impl<T> At<T> for crate::error::Result<T> {
    fn at(self, check: &'static str) -> Result<T, Failure> {
        self.map_err(|error| Failure { check, error })
    }
}

struct Output {
    reports: Vec<CheckReport>,
    data: Value,
    rows: Option<Vec<SpectrumRow>>,
}

impl Output {
    fn new(reports: Vec<CheckReport>, data: Value) -> Self {
        Output {
            reports,
            data,
            rows: None,
        }
    }
}

/// Runs one suite (not `all`).
pub fn run_suite(command: Command, cfg: &RunConfig) -> CommandResult {
    let spec = cfg.spec();
    let out = match command {
        Command::Spectrum => spectrum(&spec),
        Command::SusyCheck => susy_check(&spec),
        Command::FwCheck => fw_check(&spec),
        Command::Resolvent => resolvent(&spec, cfg),
        Command::WittenScan => witten_scan(&spec, cfg),
        Command::Identities => identities(&spec),
        Command::NonrelLimit => nonrel_limit(&spec, cfg),
        Command::All => unreachable!("all is not a suite"),
    };
    match out {
        Ok(o) => {
            let pass = o.reports.iter().all(|r| r.overall_pass);
            CommandResult {
                command,
                exit_code: if pass { ExitCode::Pass } else { ExitCode::CheckFailed }.code(),
                reports: o.reports,
                data: o.data,
                error: None,
                rows: o.rows,
            }
        }
        Err(f) => {
            let (code, kind) = match f.error {
                Error::InvalidParameter(_) | Error::LabelMismatch { .. } | Error::UnsupportedSpin(_) => {
                    (ExitCode::Config, "config")
                }
                _ => (ExitCode::Numerical, "numerical"),
            };
            CommandResult {
                command,
                exit_code: code.code(),
                reports: Vec::new(),
                data: Value::Null,
                error: Some(Diagnostic {
                    kind: kind.into(),
                    check: format!("{}.{}", command.name(), f.check),
                    message: f.error.to_string(),
                }),
                rows: None,
            }
        }
    }
}

/// Runs `command`, expanding `all` into every suite.
pub fn run_command(command: Command, cfg: &RunConfig) -> Vec<CommandResult> {
    match command {
        Command::All => Command::SUITES.iter().map(|c| run_suite(*c, cfg)).collect(),
        c => vec![run_suite(c, cfg)],
    }
}

fn supercritical_guard(spec: &ModelSpec) -> Result<(), Failure> {
    if spec.case != SpinCase::Spin1 {
        return Ok(());
    }
    let m = supercritical_margin(spec).at("supercritical_margin")?;
    if m.supercritical {
        // radicand of the n = 0, s_z = −1, k_z = 0 level: mc²(mc² − ħω_c)
        return Err(Failure {
            check: "supercritical_margin",
            error: Error::NegativeSpectrum {
                min_eigenvalue: spec.rest_energy() * m.margin,
                threshold: 0.0,
            },
        });
    }
    Ok(())
}

/// `max |a_i − b_i|` over sorted sequences, infinite when the lengths differ.
fn elementwise(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn spectrum(spec: &ModelSpec) -> Result<Output, Failure> {
    supercritical_guard(spec)?;
    let (cmp, rows) = fw_spectrum(spec).at("compare_spectrum")?;
    let mut report = cmp.report;
    let mut plus: Vec<f64> = rows.iter().map(|r| r.e_plus).collect();
    let mut minus: Vec<f64> = rows.iter().map(|r| -r.e_minus).collect();
    plus.sort_by(f64::total_cmp);
    minus.sort_by(f64::total_cmp);
    report.at_most("spectral_symmetry", elementwise(&plus, &minus), spec.tolerances.interior_tol);
    let data = json!({ "rows": rows });
    Ok(Output {
        reports: vec![report],
        data,
        rows: Some(rows),
    })
}

fn susy_check(spec: &ModelSpec) -> Result<Output, Failure> {
    let tol = &spec.tolerances;
    let h = build_model(spec).at("build_model")?;
    let sys = build_susy_system(&h);
    let window = spec.window();
    let algebra = verify_susy_algebra(&sys, &h, &window, tol.interior_tol).at("verify_susy_algebra")?;

    let mut partner = CheckReport::new("partner");
    let mo = mo_commutator_norm(&h, &window);
    partner
        .at_most("mass_odd_commutator", mo.relative, tol.interior_tol)
        .with("absolute", mo.absolute);

    let hp = eigh(&window.window(&sys.h_plus)).values;
    let hm = eigh(&window.window(&sys.h_minus)).values;
    let pairs = partner_spectrum_map(&sys, &h, &window, tol).at("partner_spectrum_map")?;
    let thr = pairs.kernel_threshold;
    let pos = |v: &[f64]| v.iter().copied().filter(|e| *e > thr).collect::<Vec<_>>();
    partner.at_most("isospectrality", elementwise(&pos(&hp), &pos(&hm)), tol.interior_tol);

    let max_of = |f: &dyn Fn(&crate::susy::PairRecord) -> Option<f64>| {
        pairs.paired().filter_map(f).fold(0.0, f64::max)
    };
    partner.at_most("partner_eigenvector", max_of(&|r| r.partner_residual), tol.interior_tol);
    partner.at_most("partner_norm", max_of(&|r| r.norm_residual), tol.interior_tol);
    partner.at_most(
        "mass_match",
        max_of(&|r| Some((r.m_plus? - r.m_minus?).abs() / r.m_plus?.abs().max(1.0))),
        tol.interior_tol,
    );
    let mut e_plus: Vec<f64> = pairs.paired().filter_map(|r| r.e_plus).collect();
    let mut e_minus: Vec<f64> = pairs.paired().filter_map(|r| r.e_minus.map(|e| -e)).collect();
    e_plus.sort_by(f64::total_cmp);
    e_minus.sort_by(f64::total_cmp);
    partner.at_most("spectral_symmetry", elementwise(&e_plus, &e_minus), tol.interior_tol);

    let w = witten_index(&sys, &window, tol.kernel_rel);
    partner
        .holds("kernel_count_consistency", w.is_consistent())
        .with("dim_ker_plus", w.dim_ker_plus as f64)
        .with("dim_ker_minus", w.dim_ker_minus as f64)
        .with("dim_ker_supercharge_sum", w.dim_ker_supercharge_sum as f64);

    let data = json!({
        "mass_odd_commutator": mo,
        "witten_index": w,
        "paired_levels": pairs.paired().count(),
        "kernel_threshold": thr,
    });
    Ok(Output::new(vec![algebra, partner], data))
}

fn fw_check(spec: &ModelSpec) -> Result<Output, Failure> {
    supercritical_guard(spec)?;
    let tol = &spec.tolerances;
    let h = build_model(spec).at("build_model")?;
    let fw = fw_transform(&h, spec).at("fw_transform")?;
    let mut report = fw.residuals;
    report.at_most(
        "energy_momentum_relation",
        energy_momentum_residual(&h, spec).at("energy_momentum_relation")?,
        tol.interior_tol,
    );

    let window = spec.window();
    let sys = build_susy_system(&h);
    let pairs = partner_spectrum_map(&sys, &h, &window, tol).at("partner_spectrum_map")?;
    let (up, down) = sector_eigenvalues(&fw.h_fw, &window).at("sector_eigenvalues")?;
    report.at_most("partner_energy_match_plus", elementwise(&up, &pairs.positive_energies()), tol.interior_tol);
    report.at_most("partner_energy_match_minus", elementwise(&down, &pairs.negative_energies()), tol.interior_tol);

    let lowest: Vec<f64> = up.iter().take(3).copied().collect();
    Ok(Output::new(vec![report], json!({ "lowest_positive_energies": lowest })))
}

fn resolvent(spec: &ModelSpec, cfg: &RunConfig) -> Result<Output, Failure> {
    supercritical_guard(spec)?;
    let h = build_model(spec).at("build_model")?;
    let (summaries, report) = resolvent_suite(&h, spec, &cfg.shifts()).at("block_resolvent")?;
    Ok(Output::new(vec![report], json!({ "shifts": summaries })))
}

fn witten_scan(spec: &ModelSpec, cfg: &RunConfig) -> Result<Output, Failure> {
    let h = build_model(spec).at("build_model")?;
    let sys = build_susy_system(&h);
    let w = witten_index(&sys, &spec.window(), spec.tolerances.kernel_rel);
    let mut index = CheckReport::new("witten_index");
    index
        .holds("kernel_count_consistency", w.is_consistent())
        .with("delta", w.delta as f64);

    let scan = kernel_scan(spec, &cfg.scan.grid()).at("kernel_scan")?;
    let check = scan.check(cfg.scan.spacing());
    let data = json!({
        "witten_index": w,
        "crossings": scan.crossings,
        "analytic_crossings": scan.analytic,
        "points": scan.points,
    });
    Ok(Output::new(vec![index, check], data))
}

/// Unwindowed residual above which truncation visibly breaks an identity.
pub const HONESTY_THRESHOLD: f64 = 1e-3;

fn identities(spec: &ModelSpec) -> Result<Output, Failure> {
    let spin = spin1_identity_suite(&spin_matrices(Spin::One), 1.0).at("spin1_identities")?;
    let mut pi = pi_identity_suite(spec).at("pi_identities")?;
    let worst = pi
        .entries
        .iter()
        .filter_map(|e| e.context.get("unwindowed").copied())
        .fold(0.0, f64::max);
    pi.exceeds("truncation_honesty", worst, HONESTY_THRESHOLD);
    Ok(Output::new(vec![spin, pi], Value::Null))
}

fn nonrel_limit(spec: &ModelSpec, cfg: &RunConfig) -> Result<Output, Failure> {
    supercritical_guard(spec)?;
    let points = nonrel_limit_points(spec, &cfg.limits.c_list).at("nonrel_limit_points")?;
    let report = nonrel_limit_report(&points);
    Ok(Output::new(vec![report], json!({ "points": points })))
}
