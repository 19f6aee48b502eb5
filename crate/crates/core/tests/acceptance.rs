//! End-to-end acceptance criteria. Runs without the libtest harness so that
//! every criterion prints exactly one line, and exits non-zero on any failure.

use std::process::Command;

use rayon::prelude::*;

use relsusy::analytic::{fw_spectrum, relativistic_energy, Branch, LevelLabel};
use relsusy::cli::output::payload_of;
use relsusy::error::Error;
use relsusy::fw::{fw_hamiltonian, fw_transform, nonrel_limit_points, sector_eigenvalues};
use relsusy::models::{
    build_model, energy_momentum_residual, mo_commutator_norm, pi_identity_suite, supercritical_margin, ModelSpec,
    SpinCase,
};
use relsusy::opalg::eigh;
use relsusy::report::CheckReport;
use relsusy::resolvent::{default_shifts, resolvent_suite};
use relsusy::spin::{spin1_identity_suite, spin_matrices, Spin};
use relsusy::susy::{analytic_crossings, build_susy_system, kernel_scan, partner_spectrum_map, verify_susy_algebra, witten_index};

const INTERIOR: f64 = 1e-10;
const EXACT_SPIN: f64 = 1e-15;
const UNITARY: f64 = 1e-12;
const SCAN_SPACING: f64 = 0.05;

/// Collects named sub-checks; the criterion passes when all of them do.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
    checks: usize,
}

impl Outcome {
    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn at_most(&mut self, what: &str, value: f64, bound: f64) {
        self.check(format!("{what} = {value:.3e} > {bound:.0e}"), value <= bound);
    }

    fn error(&mut self, what: &str, e: Error) {
        self.check(format!("{what}: {e}"), false);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn defaults(case: SpinCase) -> ModelSpec {
    ModelSpec::new(case)
}

fn entry(report: &CheckReport, suffix: &str) -> f64 {
    report
        .entries
        .iter()
        .find(|e| e.name == suffix || e.name.ends_with(&format!(".{suffix}")))
        .map(|e| e.residual)
        .unwrap_or(f64::INFINITY)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn susy_algebra(o: &mut Outcome) {
    for case in SpinCase::ALL {
        let spec = defaults(case);
        let h = build_model(&spec).unwrap();
        let sys = build_susy_system(&h);
        match verify_susy_algebra(&sys, &h, &spec.window(), INTERIOR) {
            Ok(r) => {
                o.check(format!("{case}: algebra has {} entries, want 9", r.entries.len()), r.entries.len() == 9);
                for e in &r.entries {
                    o.at_most(&format!("{case} {}", e.name), e.residual, INTERIOR);
                }
            }
            Err(e) => o.error(&format!("{case} algebra"), e),
        }
    }
    let mo = |g: f64| {
        let spec = defaults(SpinCase::Spin1).with_g(g);
        mo_commutator_norm(&build_model(&spec).unwrap(), &spec.window()).absolute
    };
    let (m2, m25, m3) = (mo(2.0), mo(2.5), mo(3.0));
    o.at_most("spin1 g=2 [M,O]", m2, INTERIOR);
    o.check(format!("spin1 g=2.5 [M,O] = {m25:.3e} <= 1e-6"), m25 > 1e-6);
    o.check(format!("spin1 g=3 [M,O] = {m3:.3e} <= 1e-6"), m3 > 1e-6);
    let (s25, s3) = (m25 / 0.5, m3 / 1.0);
    let spread = (s25 - s3).abs() / s25.max(s3);
    o.at_most("[M,O]/|g-2| spread", spread, 0.05);
    o.note(format!("[M,O]/|g-2| = {s25:.6e}, {s3:.6e}"));
}

fn spectra(o: &mut Outcome) {
    for case in SpinCase::ALL {
        match fw_spectrum(&defaults(case)) {
            Ok((cmp, rows)) => {
                o.at_most(&format!("{case} max abs error"), entry(&cmp.report, "max_abs_error"), INTERIOR);
                o.check(format!("{case} level matching is not bijective"), cmp.report.entries.iter().all(|e| e.pass));
                let pair = |n: usize, s_z: f64| {
                    rows.iter()
                        .find(|r| r.n == n && (r.s_z - s_z).abs() < 1e-12)
                        .map(|r| (r.e_plus, r.e_minus))
                };
                let mut expect = |name: &str, got: Option<(f64, f64)>, want: f64| match got {
                    Some((p, m)) => o.at_most(name, (p - want).abs().max((m + want).abs()), INTERIOR),
                    None => o.check(format!("{name} missing"), false),
                };
                match case {
                    SpinCase::Kg => expect("kg lowest pair vs ±√2", pair(0, 0.0), 2f64.sqrt()),
                    SpinCase::Dirac => {
                        expect("dirac zero mode vs ±1", pair(0, -0.5), 1.0);
                        expect("dirac n=0 s_z=+1/2 vs ±√3", pair(0, 0.5), 3f64.sqrt());
                    }
                    SpinCase::Spin1 => expect("spin1 n=0 s_z=0 vs ±√2", pair(0, 0.0), 2f64.sqrt()),
                }
            }
            Err(e) => o.error(&format!("{case} spectrum"), e),
        }
    }
}

fn fw_block_diagonalization(o: &mut Outcome) {
    for case in SpinCase::ALL {
        // the default spin-1 field is critical (a zero eigenvalue makes sgn H undefined)
        let spec = match case {
            SpinCase::Spin1 => defaults(case).with_omega_c(0.5),
            _ => defaults(case),
        };
        let h = build_model(&spec).unwrap();
        match fw_transform(&h, &spec) {
            Ok(fw) => {
                let r = &fw.residuals;
                o.at_most(&format!("{case} offdiag(U H U_inv)"), entry(r, "offdiag_similarity"), INTERIOR);
                o.at_most(&format!("{case} U H U_inv - beta sqrt(H^2)"), entry(r, "similarity_minus_h_fw"), INTERIOR);
                o.at_most(&format!("{case} closed forms of U"), entry(r, "closed_forms_agree"), INTERIOR);
                if case == SpinCase::Dirac {
                    o.at_most("dirac UU^dag - I", entry(r, "unitarity"), UNITARY);
                }
            }
            Err(e) => o.error(&format!("{case} fw_transform"), e),
        }
    }
    o.note("spin1 at omega_c = 0.5");
}

fn partner_mapping(o: &mut Outcome) {
    for case in SpinCase::ALL {
        let spec = defaults(case);
        let h = build_model(&spec).unwrap();
        let sys = build_susy_system(&h);
        let window = spec.window();
        let pairs = match partner_spectrum_map(&sys, &h, &window, &spec.tolerances) {
            Ok(p) => p,
            Err(e) => {
                o.error(&format!("{case} partner map"), e);
                continue;
            }
        };
        let thr = pairs.kernel_threshold;
        let positive = |m: &relsusy::opalg::Operator| -> Vec<f64> {
            eigh(&window.window(m)).values.into_iter().filter(|e| *e > thr).collect()
        };
        o.at_most(
            &format!("{case} positive spectra of H+ and H-"),
            max_abs_diff(&positive(&sys.h_plus), &positive(&sys.h_minus)),
            INTERIOR,
        );
        let paired = pairs.paired().count();
        o.check(format!("{case} has no paired levels"), paired > 0);
        let worst = |f: &dyn Fn(&relsusy::susy::PairRecord) -> Option<f64>| {
            pairs.paired().map(|r| f(r).unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
        };
        o.at_most(&format!("{case} A-mapped eigenvector"), worst(&|r| r.partner_residual), INTERIOR);
        o.at_most(&format!("{case} norm 2mc^2 eps"), worst(&|r| r.norm_residual), INTERIOR);
    }
}

fn kernel_structure(o: &mut Outcome) {
    let index = |spec: &ModelSpec| {
        let h = build_model(spec).unwrap();
        witten_index(&build_susy_system(&h), &spec.window(), spec.tolerances.kernel_rel)
    };
    let kg = index(&defaults(SpinCase::Kg));
    o.check(
        format!("kg kernels {} / {} / {}, want empty", kg.dim_ker_plus, kg.dim_ker_minus, kg.dim_ker_supercharge_sum),
        kg.dim_ker_plus == 0 && kg.dim_ker_minus == 0 && kg.dim_ker_supercharge_sum == 0,
    );
    let d = index(&defaults(SpinCase::Dirac).with_k_z(0.0));
    o.check(format!("dirac dim ker H+ = {}, want 1", d.dim_ker_plus), d.dim_ker_plus == 1);
    o.check(format!("dirac dim ker H- = {}, want 1", d.dim_ker_minus), d.dim_ker_minus == 1);
    o.check(format!("dirac Witten index {}, want 0", d.delta), d.delta == 0);
    o.check(
        format!("dirac dim ker(Q+Q^dag) = {}, want 2", d.dim_ker_supercharge_sum),
        d.dim_ker_supercharge_sum == 2,
    );

    let spec = defaults(SpinCase::Spin1);
    let s = index(&spec);
    o.check(format!("spin1 Witten index {}, want 0", s.delta), s.delta == 0);
    let points = 81;
    let grid: Vec<f64> = (0..points).map(|i| -2.0 + SCAN_SPACING * i as f64).collect();
    match kernel_scan(&spec, &grid) {
        Ok(scan) => {
            let lambda = spec.larmor_length();
            let want = [-1.0 / lambda, 1.0 / lambda];
            o.check(format!("analytic crossings {:?}", analytic_crossings(&spec)), analytic_crossings(&spec) == want);
            o.check(format!("found crossings {:?}", scan.crossings), scan.crossings.len() == 2);
            for (k, w) in scan.crossings.iter().zip(want) {
                o.at_most(&format!("crossing near {w}"), (k - w).abs(), SCAN_SPACING);
            }
            o.note(format!("spin1 crossings at {:?}", scan.crossings));
        }
        Err(e) => o.error("spin1 scan", e),
    }
}

fn supercritical(o: &mut Outcome) {
    let omegas = [0.5, 0.9, 0.999, 1.0, 1.001, 1.5, 2.0];
    for omega in omegas {
        let spec = defaults(SpinCase::Spin1).with_omega_c(omega).with_n_fock(16, 4);
        let mc2 = spec.m * spec.c * spec.c;
        let mut any_negative = false;
        for n in 0..4 {
            for s_z in [1.0, 0.0, -1.0] {
                for k_z in [0.0, 0.3] {
                    let eps = spec.hbar * omega * (n as f64 + 0.5 + s_z) + spec.hbar.powi(2) * k_z * k_z / (2.0 * spec.m);
                    let radicand = mc2 * mc2 + 2.0 * mc2 * eps;
                    any_negative |= radicand < 0.0;
                    let label = LevelLabel { n, s_z, k_z };
                    let e = relativistic_energy(SpinCase::Spin1, &label, &spec, Branch::Plus).unwrap();
                    o.check(
                        format!("omega {omega} n {n} s_z {s_z} k_z {k_z}: flag {}", e.supercritical),
                        e.supercritical == (radicand < 0.0),
                    );
                }
            }
        }
        let margin = supercritical_margin(&spec).unwrap();
        o.check(format!("omega {omega}: margin flag {}", margin.supercritical), margin.supercritical == any_negative);
        let h = build_model(&spec).unwrap();
        match (fw_hamiltonian(&h, &spec), any_negative) {
            (Err(Error::NegativeSpectrum { .. }), true) | (Ok(_), false) => o.check("", true),
            (r, _) => o.check(
                format!("omega {omega}: fw_hamiltonian gave {:?}", r.map(|_| ()).map_err(|e| e.to_string())),
                false,
            ),
        }
    }
    o.note("boundary omega_c = mc^2/hbar exercised");
}

fn resolvents(o: &mut Outcome) {
    for case in SpinCase::ALL {
        let spec = defaults(case);
        let h = build_model(&spec).unwrap();
        let shifts = default_shifts(spec.rest_energy());
        let want = [(0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (2.0 * spec.rest_energy(), 1.0)];
        for (re, im) in want {
            o.check(
                format!("shift {re}+{im}i missing"),
                shifts.iter().any(|s| s.re == re && s.im == im),
            );
        }
        match resolvent_suite(&h, &spec, &shifts) {
            Ok((_, report)) => {
                for e in &report.entries {
                    o.at_most(&format!("{case} {}", e.name), e.residual, INTERIOR);
                }
            }
            Err(e) => o.error(&format!("{case} resolvent"), e),
        }
    }
}

fn identities(o: &mut Outcome) {
    let triple = spin_matrices(Spin::from_value(1.0).unwrap());
    let exact = spin1_identity_suite(&triple, 1.0).unwrap();
    for name in ["symmetrized_triple_product", "epsilon_contraction"] {
        o.at_most(name, entry(&exact, name), EXACT_SPIN);
    }
    let spec = defaults(SpinCase::Spin1);
    o.check("buffer is 4", spec.buffer == 4);
    let pi = pi_identity_suite(&spec).unwrap();
    let mut unwindowed: f64 = 0.0;
    for name in [
        "pi2_commutator_s_dot_pi",
        "pi2_commutator_s_dot_pi_squared",
        "quartic_reduction",
        "zeeman_anticommutator",
        "a_squared_equals_h_v_squared",
    ] {
        o.at_most(name, entry(&pi, name), INTERIOR);
        if let Some(e) = pi.entries.iter().find(|e| e.name == name) {
            unwindowed = unwindowed.max(e.context.get("unwindowed").copied().unwrap_or(0.0));
        }
    }
    o.check(format!("max unwindowed residual {unwindowed:.3e} <= 1e-3"), unwindowed > 1e-3);
    o.note(format!("max unwindowed residual {unwindowed:.3e}"));
}

fn nonrel_limit(o: &mut Outcome) {
    for case in SpinCase::ALL {
        match nonrel_limit_points(&defaults(case), &[10.0, 100.0]) {
            Ok(p) => {
                let ratio = p[1].distance / p[0].distance;
                o.check(format!("{case} d(100)/d(10) = {ratio:.5}"), (0.005..=0.02).contains(&ratio));
                o.note(format!("{case} {ratio:.5}"));
            }
            Err(e) => o.error(&format!("{case} nonrel limit"), e),
        }
    }
}

fn spectral_symmetry(o: &mut Outcome) {
    for case in SpinCase::ALL {
        let spec = defaults(case);
        let h = build_model(&spec).unwrap();
        let window = spec.window();
        match fw_hamiltonian(&h, &spec).and_then(|f| sector_eigenvalues(&f.h_fw, &window)) {
            Ok((up, down)) => {
                let mut mirrored: Vec<f64> = down.iter().map(|e| -e).collect();
                mirrored.sort_by(f64::total_cmp);
                o.at_most(&format!("{case} E+ vs -E-"), max_abs_diff(&up, &mirrored), INTERIOR);
            }
            Err(e) => o.error(&format!("{case} fw"), e),
        }
        let sys = build_susy_system(&h);
        match partner_spectrum_map(&sys, &h, &window, &spec.tolerances) {
            Ok(pairs) => {
                let worst = pairs
                    .paired()
                    .filter(|r| r.epsilon > pairs.kernel_threshold)
                    .map(|r| (r.m_plus.unwrap() - r.m_minus.unwrap()).abs())
                    .fold(0.0, f64::max);
                o.at_most(&format!("{case} m+ vs m-"), worst, INTERIOR);
            }
            Err(e) => o.error(&format!("{case} partner map"), e),
        }
    }
}

fn energy_momentum(o: &mut Outcome) {
    for case in SpinCase::ALL {
        let spec = defaults(case);
        let h = build_model(&spec).unwrap();
        match energy_momentum_residual(&h, &spec) {
            Ok(r) => o.at_most(&format!("{case}"), r, INTERIOR),
            Err(e) => o.error(&format!("{case}"), e),
        }
    }
}

fn determinism(o: &mut Outcome) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("default.json");
    std::fs::write(&cfg, "{ \"schema_version\": 1 }\n").unwrap();
    let mut payloads = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(format!("{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_relsusy"))
            .args(["all", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"])
            .status()
            .unwrap();
        o.check(format!("run {run} exit code {:?}", status.code()), status.code() == Some(0));
        payloads.push(payload_of(&std::fs::read_to_string(&out).unwrap()).unwrap());
    }
    o.check("payloads differ", payloads[0] == payloads[1]);
    o.note(format!("{} payload bytes", payloads[0].len()));
}

type Criterion = (u32, &'static str, fn(&mut Outcome));

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "SUSY algebra and anomalous-moment scaling", susy_algebra),
        (2, "interior spectra match closed forms", spectra),
        (3, "FW block diagonalization", fw_block_diagonalization),
        (4, "partner isospectrality and SUSY mapping", partner_mapping),
        (5, "kernel structure and Witten index", kernel_structure),
        (6, "supercritical detection", supercritical),
        (7, "resolvent grid", resolvents),
        (8, "spin and momentum identities", identities),
        (9, "non-relativistic limit", nonrel_limit),
        (10, "spectral symmetry", spectral_symmetry),
        (11, "energy-momentum relation", energy_momentum),
        (12, "determinism of relsusy all", determinism),
    ];
    let outcomes: Vec<Outcome> = criteria
        .par_iter()
        .map(|(_, _, f)| {
            let mut o = Outcome::default();
            f(&mut o);
            o
        })
        .collect();

    let mut failed = 0;
    for ((id, title, _), o) in criteria.iter().zip(&outcomes) {
        let ok = o.failures.is_empty() && o.checks > 0;
        failed += usize::from(!ok);
        let status = if ok { "PASS" } else { "FAIL" };
        let notes = if o.notes.is_empty() { String::new() } else { format!(" [{}]", o.notes.join("; ")) };
        println!("criterion {id:>2} {status}  {title} ({} checks){notes}", o.checks);
        for f in &o.failures {
            println!("    {f}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
