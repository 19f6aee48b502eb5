//! The three relativistic Hamiltonians in block form
//!
//! ```text
//! H = [[ M₊,            A  ],
//!      [ (−1)^{2s+1} A†, −M₋ ]]
//! ```
//!
//! for a charged spin-0 (Klein–Gordon, Feshbach–Villars form), spin-1/2 (Dirac)
//! and spin-1 particle, plus their non-relativistic counterparts.
//!
//! Unit conversions used throughout (electron, `e < 0`, `B = B e_z`, `B > 0`):
//!
//! | symbol        | value in code          |
//! |---------------|------------------------|
//! | `eB/c`        | `−m ω_c`               |
//! | `(eħ/c) S·B`  | `−ħ m ω_c S_3`         |
//! | `(eħ/mc) S·B` | `−ħ ω_c S_3`           |
//! | `B·π`         | `B ħ k_z`              |
//! | `λ_L`         | `√(ħ / m ω_c)`         |
//! | `λ_C`         | `ħ / m c`              |
//!
//! Polynomials in `π` are evaluated on a Fock space padded by [`POLY_PAD`]
//! levels and then truncated, so `M±`, `A` and the block squares are exact
//! compressions of the infinite-dimensional operators. Products taken after
//! truncation still see the corner artifacts, which is what the interior window
//! is for.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau::{
    interior_projector, kinetic_momentum, landau_hamiltonian, InteriorProjector, KineticMomentum,
    LandauMode, LandauParams,
};
use crate::opalg::{
    anticommutator, commutator, matrix_norm, op_norm, relative, BasisTag, Operator, Sector,
    Tolerances, I,
};
use crate::report::CheckReport;
use crate::spin::{spin_matrices, Spin};

/// Extra Fock levels used when evaluating polynomials in `π` (quartic at most).
pub const POLY_PAD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinCase {
    /// Spin 0, Klein–Gordon.
    Kg,
    /// Spin 1/2, Dirac.
    Dirac,
    /// Spin 1 with arbitrary g-factor.
    Spin1,
}

impl SpinCase {
    pub const ALL: [SpinCase; 3] = [SpinCase::Kg, SpinCase::Dirac, SpinCase::Spin1];

    pub fn spin(self) -> Spin {
        match self {
            SpinCase::Kg => Spin::Zero,
            SpinCase::Dirac => Spin::Half,
            SpinCase::Spin1 => Spin::One,
        }
    }

    pub fn spin_dim(self) -> usize {
        self.spin().dim()
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinCase::Kg => "kg",
            SpinCase::Dirac => "dirac",
            SpinCase::Spin1 => "spin1",
        }
    }
}

impl std::fmt::Display for SpinCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Physical and numerical parameters of one model on one `k_z` fiber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSpec {
    pub case: SpinCase,
    /// Gyromagnetic factor; only the spin-1 model uses it.
    pub g: f64,
    pub omega_c: f64,
    pub k_z: f64,
    pub m: f64,
    pub c: f64,
    pub hbar: f64,
    pub n_fock: usize,
    /// Number of top Fock levels excluded from windowed checks.
    pub buffer: usize,
    pub tolerances: Tolerances,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            case: SpinCase::Dirac,
            g: 2.0,
            omega_c: 1.0,
            k_z: 0.0,
            m: 1.0,
            c: 1.0,
            hbar: 1.0,
            n_fock: 32,
            buffer: 4,
            tolerances: Tolerances::default(),
        }
    }
}

impl ModelSpec {
    pub fn new(case: SpinCase) -> Self {
        ModelSpec {
            case,
            ..Self::default()
        }
    }

    pub fn with_omega_c(mut self, omega_c: f64) -> Self {
        self.omega_c = omega_c;
        self
    }

    pub fn with_k_z(mut self, k_z: f64) -> Self {
        self.k_z = k_z;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn with_n_fock(mut self, n_fock: usize, buffer: usize) -> Self {
        self.n_fock = n_fock;
        self.buffer = buffer;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.landau_params().validate()?;
        if !(self.c.is_finite() && self.c > 0.0) || !self.m.is_finite() || !self.hbar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "c, m, hbar must be finite and positive (c = {})",
                self.c
            )));
        }
        if !self.g.is_finite() {
            return Err(Error::InvalidParameter(format!("g must be finite, got {}", self.g)));
        }
        if self.n_fock < 2 {
            return Err(Error::InvalidParameter(format!(
                "n_fock must be at least 2, got {}",
                self.n_fock
            )));
        }
        if self.buffer >= self.n_fock {
            return Err(Error::InvalidParameter(format!(
                "buffer {} must be smaller than n_fock {}",
                self.buffer, self.n_fock
            )));
        }
        self.tolerances.validate()
    }

    pub fn spin(&self) -> Spin {
        self.case.spin()
    }

    pub fn landau_params(&self) -> LandauParams {
        LandauParams {
            omega_c: self.omega_c,
            k_z: self.k_z,
            m: self.m,
            hbar: self.hbar,
        }
    }

    /// `m c²`.
    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// `eB/c = −m ω_c`.
    pub fn charge_field(&self) -> f64 {
        -self.m * self.omega_c
    }

    /// `λ_L = √(ħ / m ω_c)`.
    pub fn larmor_length(&self) -> f64 {
        (self.hbar / (self.m * self.omega_c)).sqrt()
    }

    /// `λ_C = ħ / m c`.
    pub fn compton_wavelength(&self) -> f64 {
        self.hbar / (self.m * self.c)
    }

    pub fn basis(&self) -> BasisTag {
        BasisTag::ungraded(self.n_fock, self.case.spin_dim())
    }

    pub fn graded_basis(&self) -> BasisTag {
        self.basis().to_graded()
    }

    pub fn window(&self) -> InteriorProjector {
        interior_projector(self.basis(), self.buffer).expect("validated buffer")
    }

    pub fn graded_window(&self) -> InteriorProjector {
        interior_projector(self.graded_basis(), self.buffer).expect("validated buffer")
    }
}

/// `π`-polynomial building blocks on a given Fock dimension.
struct MomentumAlgebra {
    km: KineticMomentum,
    /// `π_i ⊗ 1_spin`.
    pi: [Operator; 3],
    pi_squared: Operator,
    s_dot_pi: Operator,
    /// `1_Fock ⊗ S_3`.
    s3: Operator,
}

impl MomentumAlgebra {
    fn new(spec: &ModelSpec, n_fock: usize) -> Result<Self> {
        let km = kinetic_momentum(n_fock, &spec.landau_params())?;
        let spin = spin_matrices(spec.spin());
        let pi = km.lifted(spin.basis().spin_dim);
        let pi_squared = pi.iter().fold(Operator::zeros(pi[0].basis()), |acc, p| &acc + &(p * p));
        let s_dot_pi = km.dot_spin(&spin);
        let id_fock = Operator::identity(BasisTag::ungraded(n_fock, 1));
        let s3 = Operator::fock_spin(&id_fock, &spin.s[2])?;
        Ok(MomentumAlgebra {
            km,
            pi,
            pi_squared,
            s_dot_pi,
            s3,
        })
    }
}

#[derive(Clone, Debug)]
struct PaddedBlocks {
    m_plus: Operator,
    m_minus: Operator,
    a: Operator,
}

/// `(M₊, M₋, A)` together with the spin and the sign factor `(−1)^{2s+1}`.
#[derive(Clone, Debug)]
pub struct BlockHamiltonian {
    pub spin: Spin,
    pub sign_factor: f64,
    /// `m c²`, the normalisation of the supercharges.
    pub rest_energy: f64,
    pub m_plus: Operator,
    pub m_minus: Operator,
    pub a: Operator,
    padded: PaddedBlocks,
}

impl BlockHamiltonian {
    /// Blocks given directly on the target basis (no padding).
    pub fn from_blocks(
        spin: Spin,
        rest_energy: f64,
        m_plus: Operator,
        m_minus: Operator,
        a: Operator,
    ) -> Result<Self> {
        if m_plus.basis() != m_minus.basis() || m_plus.basis() != a.basis() {
            return Err(Error::BasisMismatch {
                left: m_plus.basis(),
                right: a.basis(),
            });
        }
        if m_plus.basis().graded {
            return Err(Error::InvalidParameter("blocks must be ungraded".into()));
        }
        if !(rest_energy > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rest energy must be positive, got {rest_energy}"
            )));
        }
        let padded = PaddedBlocks {
            m_plus: m_plus.clone(),
            m_minus: m_minus.clone(),
            a: a.clone(),
        };
        Ok(BlockHamiltonian {
            spin,
            sign_factor: spin.sign_factor(),
            rest_energy,
            m_plus,
            m_minus,
            a,
            padded,
        })
    }

    fn from_padded(spin: Spin, rest_energy: f64, n_fock: usize, padded: PaddedBlocks) -> Result<Self> {
        Ok(BlockHamiltonian {
            spin,
            sign_factor: spin.sign_factor(),
            rest_energy,
            m_plus: padded.m_plus.truncate_fock(n_fock)?,
            m_minus: padded.m_minus.truncate_fock(n_fock)?,
            a: padded.a.truncate_fock(n_fock)?,
            padded,
        })
    }

    pub fn basis(&self) -> BasisTag {
        self.m_plus.basis()
    }

    pub fn graded_basis(&self) -> BasisTag {
        self.basis().to_graded()
    }

    pub fn n_fock(&self) -> usize {
        self.basis().n_fock
    }

    pub fn is_fermion(&self) -> bool {
        self.spin.is_fermion()
    }

    pub fn beta(&self) -> Operator {
        Operator::grading(self.graded_basis()).expect("graded basis")
    }

    /// The graded mass operator `diag(M₊, M₋)`.
    pub fn mass_graded(&self) -> Operator {
        Operator::block_diagonal(&self.m_plus, &self.m_minus).expect("same basis")
    }

    fn assemble(m_plus: &Operator, m_minus: &Operator, a: &Operator, sign: f64) -> Operator {
        Operator::from_blocks(m_plus, a, &a.adjoint().scale(sign), &(-m_minus)).expect("same basis")
    }

    fn truncate(&self, x: &Operator) -> Operator {
        x.truncate_fock(self.n_fock()).expect("padded basis is larger")
    }

    /// `H²` evaluated on the padded space and truncated: the exact compression
    /// of the square, including its off-diagonal blocks `M₊A − AM₋` (which vanish
    /// when the even and odd parts commute).
    pub fn squared(&self) -> Operator {
        let p = &self.padded;
        let h = Self::assemble(&p.m_plus, &p.m_minus, &p.a, self.sign_factor);
        self.truncate(&(&h * &h))
    }

    /// `diag(M₊², M₋²)`, exact compression.
    pub fn mass_squared_graded(&self) -> Operator {
        let p = &self.padded;
        let up = self.truncate(&(&p.m_plus * &p.m_plus));
        let down = self.truncate(&(&p.m_minus * &p.m_minus));
        Operator::block_diagonal(&up, &down).expect("same basis")
    }

    /// `A A†`, exact compression.
    pub fn a_a_dag(&self) -> Operator {
        self.truncate(&(&self.padded.a * &self.padded.a.adjoint()))
    }

    /// `A† A`, exact compression.
    pub fn a_dag_a(&self) -> Operator {
        self.truncate(&(&self.padded.a.adjoint() * &self.padded.a))
    }
}

/// Builds `(M₊, M₋, A)` for the requested model.
pub fn build_model(spec: &ModelSpec) -> Result<BlockHamiltonian> {
    spec.validate()?;
    let n_pad = spec.n_fock + POLY_PAD;
    let mc2 = spec.rest_energy();
    let padded = match spec.case {
        SpinCase::Kg => {
            // M± and A are functions of H_L alone: use the exact ladder form.
            let h_l = landau_hamiltonian(n_pad, &spec.landau_params(), LandauMode::LadderExact)?;
            PaddedBlocks {
                m_plus: h_l.shifted(mc2),
                m_minus: h_l.shifted(mc2),
                a: h_l,
            }
        }
        SpinCase::Dirac => {
            let alg = MomentumAlgebra::new(spec, n_pad)?;
            // σ = 2S
            let a = alg.s_dot_pi.scale(2.0 * spec.c);
            let mass = Operator::identity(a.basis()).scale(mc2);
            PaddedBlocks {
                m_plus: mass.clone(),
                m_minus: mass,
                a,
            }
        }
        SpinCase::Spin1 => {
            let alg = MomentumAlgebra::new(spec, n_pad)?;
            let kinetic = alg.pi_squared.scale(1.0 / (2.0 * spec.m));
            // (eħ/mc) S·B = (ħ eB/c / m) S_3
            let zeeman = alg.s3.scale(spec.hbar * spec.charge_field() / spec.m);
            let sp2 = &alg.s_dot_pi * &alg.s_dot_pi;
            let mass = &kinetic.shifted(mc2) - &zeeman.scale(spec.g / 2.0);
            let a = &(&kinetic - &sp2.scale(1.0 / spec.m)) + &zeeman.scale((spec.g - 2.0) / 2.0);
            PaddedBlocks {
                m_plus: mass.clone(),
                m_minus: mass,
                a,
            }
        }
    };
    let h = BlockHamiltonian::from_padded(spec.spin(), mc2, spec.n_fock, padded)?;
    for m in [&h.m_plus, &h.m_minus] {
        let r = m.hermiticity_residual();
        if r > spec.tolerances.identity_tol {
            return Err(Error::NotHermitian {
                residual: r,
                tolerance: spec.tolerances.identity_tol,
            });
        }
    }
    Ok(h)
}

/// The graded Hamiltonian `[[M₊, A], [(−1)^{2s+1} A†, −M₋]]`.
pub fn assemble_full(h: &BlockHamiltonian) -> Operator {
    BlockHamiltonian::assemble(&h.m_plus, &h.m_minus, &h.a, h.sign_factor)
}

/// `H = β M + O` with `[β, M] = 0` and `{β, O} = 0`.
#[derive(Clone, Debug)]
pub struct EvenOdd {
    /// `diag(M₊, M₋)`.
    pub mass: Operator,
    pub odd: Operator,
}

impl EvenOdd {
    pub fn reassemble(&self) -> Operator {
        let beta = Operator::grading(self.mass.basis()).expect("graded");
        &(&beta * &self.mass) + &self.odd
    }

    /// `(M₊, M₋, A, lower-left block)`.
    pub fn blocks(&self) -> (Operator, Operator, Operator, Operator) {
        let b = |x: &Operator, r, c| x.block(r, c).expect("graded");
        (
            b(&self.mass, Sector::Plus, Sector::Plus),
            b(&self.mass, Sector::Minus, Sector::Minus),
            b(&self.odd, Sector::Plus, Sector::Minus),
            b(&self.odd, Sector::Minus, Sector::Plus),
        )
    }
}

pub fn even_odd_decompose(h_full: &Operator) -> Result<EvenOdd> {
    let beta = Operator::grading(h_full.basis())?;
    // (H + βHβ)/2 is the block-diagonal part, equal to βM.
    let even = (h_full + &(&(&beta * h_full) * &beta)).scale(0.5);
    let mass = &beta * &even;
    let odd = h_full - &even;
    Ok(EvenOdd { mass, odd })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonRelKind {
    /// `H_L = π²/2m`.
    Landau,
    /// `H_P = (σ·π)²/2m`.
    Pauli,
    /// `H_V = π²/2m − (eħ/mc) S·B`.
    Vector,
}

#[derive(Clone, Debug)]
pub struct NonRelHamiltonian {
    pub kind: NonRelKind,
    pub op: Operator,
}

impl NonRelHamiltonian {
    /// `diag(H_NR, H_NR)` on the graded basis.
    pub fn graded(&self) -> Operator {
        Operator::block_diagonal(&self.op, &self.op).expect("same basis")
    }
}

/// Non-relativistic partner of `spec.case`, built from the momentum matrices on
/// the padded space. The Pauli Hamiltonian is defined as `(σ·π)²/2m`.
pub fn nonrel_hamiltonian(spec: &ModelSpec) -> Result<NonRelHamiltonian> {
    spec.validate()?;
    let n_pad = spec.n_fock + POLY_PAD;
    let alg = MomentumAlgebra::new(spec, n_pad)?;
    let inv2m = 1.0 / (2.0 * spec.m);
    let (kind, op) = match spec.case {
        SpinCase::Kg => (NonRelKind::Landau, alg.pi_squared.scale(inv2m)),
        SpinCase::Dirac => {
            let sigma_pi = alg.s_dot_pi.scale(2.0);
            (NonRelKind::Pauli, (&sigma_pi * &sigma_pi).scale(inv2m))
        }
        SpinCase::Spin1 => {
            let zeeman = alg.s3.scale(spec.hbar * spec.charge_field() / spec.m);
            (NonRelKind::Vector, &alg.pi_squared.scale(inv2m) - &zeeman)
        }
    };
    Ok(NonRelHamiltonian {
        kind,
        op: op.truncate_fock(spec.n_fock)?,
    })
}

/// Size of `[M, O]`, measured through `M₊A − AM₋` and `A†M₊ − M₋A†`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassOddCommutator {
    /// Windowed spectral norm.
    pub absolute: f64,
    /// `absolute / max(1, ‖M₊‖‖A‖)`.
    pub relative: f64,
}

pub fn mo_commutator_norm(h: &BlockHamiltonian, window: &InteriorProjector) -> MassOddCommutator {
    let a_dag = h.a.adjoint();
    let left = &(&h.m_plus * &h.a) - &(&h.a * &h.m_minus);
    let right = &(&a_dag * &h.m_plus) - &(&h.m_minus * &a_dag);
    let absolute = window.norm(&left).max(window.norm(&right));
    MassOddCommutator {
        absolute,
        relative: relative(absolute, op_norm(&h.m_plus) * op_norm(&h.a)),
    }
}

fn windowed_identity(
    report: &mut CheckReport,
    name: &str,
    lhs: &Operator,
    rhs: &Operator,
    window: &InteriorProjector,
    tol: f64,
) {
    let diff = lhs - rhs;
    let scale = window.norm(lhs).max(window.norm(rhs));
    let full_scale = op_norm(lhs).max(op_norm(rhs));
    report
        .at_most(name, relative(window.norm(&diff), scale), tol)
        .with("unwindowed", relative(op_norm(&diff), full_scale));
}

/// Kinetic-momentum identities evaluated with plain truncated matrices (no
/// padding), each as an interior-windowed relative residual. The unwindowed
/// residual is attached as context to show what the window removes.
///
/// Every spec checks `[π_k, π_l] = iħ(e/c) ε_klm B_m`. Spin-1 specs add the
/// commutators of `π²` with `S·π` and `(S·π)²`, both quartic reductions of
/// `(S·π)²`, and `A² = H_V²` at `g = 2`. Dirac specs add the expansion of
/// `(σ·π)²`.
pub fn pi_identity_suite(spec: &ModelSpec) -> Result<CheckReport> {
    spec.validate()?;
    let tol = spec.tolerances.interior_tol;
    let alg = MomentumAlgebra::new(spec, spec.n_fock)?;
    let window = spec.window();
    let fock_window = interior_projector(alg.km.basis(), spec.buffer)?;
    let hq = spec.hbar * spec.charge_field();
    let mut report = CheckReport::new("pi_identities");

    let pairs = [(0, 1, "xy"), (1, 2, "yz"), (2, 0, "zx")];
    for (k, l, label) in pairs {
        let lhs = commutator(&alg.km.pi[k], &alg.km.pi[l])?;
        // only B_3 is non-zero
        let eps = crate::spin::levi_civita(k, l, 2);
        let rhs = Operator::identity(lhs.basis()).scale(I * hq * eps);
        windowed_identity(&mut report, &format!("momentum_commutator_{label}"), &lhs, &rhs, &fock_window, tol);
    }

    let pi2 = &alg.pi_squared;
    let sp = &alg.s_dot_pi;
    let sp2 = sp * sp;
    let s3 = &alg.s3;
    let pi_z = &alg.pi[2];

    match spec.case {
        SpinCase::Spin1 => {
            let lhs = commutator(pi2, sp)?;
            let rhs = commutator(s3, sp)?.scale(2.0 * hq);
            windowed_identity(&mut report, "pi2_commutator_s_dot_pi", &lhs, &rhs, &window, tol);

            let lhs = commutator(pi2, &sp2)?;
            let rhs = commutator(s3, &sp2)?.scale(2.0 * hq);
            windowed_identity(&mut report, "pi2_commutator_s_dot_pi_squared", &lhs, &rhs, &window, tol);

            let lhs = &sp2 * &sp2;
            let rhs = &(&(pi2 - &s3.scale(2.0 * hq)) * &sp2) + &(pi_z * sp).scale(hq);
            windowed_identity(&mut report, "quartic_reduction", &lhs, &rhs, &window, tol);

            let lhs = anticommutator(s3, &sp2)?;
            let rhs = &(&(pi2 - &s3.scale(hq)) * s3) + &(pi_z * sp);
            windowed_identity(&mut report, "zeeman_anticommutator", &lhs, &rhs, &window, tol);

            let kinetic = pi2.scale(1.0 / (2.0 * spec.m));
            let zeeman = s3.scale(hq / spec.m);
            let a = &kinetic - &sp2.scale(1.0 / spec.m);
            let h_v = &kinetic - &zeeman;
            windowed_identity(&mut report, "a_squared_equals_h_v_squared", &(&a * &a), &(&h_v * &h_v), &window, tol);
        }
        SpinCase::Dirac => {
            let sigma_pi = sp.scale(2.0);
            let sigma3 = s3.scale(2.0);
            let lhs = &sigma_pi * &sigma_pi;
            let rhs = pi2 - &sigma3.scale(hq);
            windowed_identity(&mut report, "pauli_square_expansion", &lhs, &rhs, &window, tol);
            // Same comparison with the spin coupling doubled, as sometimes printed.
            let doubled = pi2 - &sigma3.scale(2.0 * hq);
            let entry = report.entries.last_mut().expect("just pushed");
            let scale = window.norm(&lhs);
            entry.with(
                "doubled_coupling_residual",
                relative(matrix_norm(&window.window(&(&lhs - &doubled))), scale),
            );
        }
        SpinCase::Kg => {}
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupercriticalMargin {
    /// `m c² − ħ ω_c`; negative means the lowest spin-1 level has complex energy.
    pub margin: f64,
    /// `λ_C / λ_L`; exceeds 1 exactly when the margin is negative.
    pub compton_over_larmor: f64,
    pub supercritical: bool,
}

/// Pre-flight check for the spin-1 supercritical field `ħω_c > mc²`.
pub fn supercritical_margin(spec: &ModelSpec) -> Result<SupercriticalMargin> {
    if spec.case != SpinCase::Spin1 {
        return Err(Error::InvalidParameter(format!(
            "supercritical margin applies to the spin1 model, not {}",
            spec.case
        )));
    }
    spec.validate()?;
    let margin = spec.rest_energy() - spec.hbar * spec.omega_c;
    Ok(SupercriticalMargin {
        margin,
        compton_over_larmor: spec.compton_wavelength() / spec.larmor_length(),
        supercritical: margin < 0.0,
    })
}

/// `‖P(H·H − m²c⁴ − 2mc² diag(H_NR, H_NR))P‖` relative to `max(1, ‖P H·H P‖)`.
pub fn energy_momentum_residual(h: &BlockHamiltonian, spec: &ModelSpec) -> Result<f64> {
    let full = assemble_full(h);
    let squared = &full * &full;
    let nr = nonrel_hamiltonian(spec)?.graded();
    let mc2 = spec.rest_energy();
    let target = nr.scale(2.0 * mc2).shifted(mc2 * mc2);
    let window = spec.graded_window();
    Ok(relative(
        window.norm(&(&squared - &target)),
        window.norm(&squared),
    ))
}
