//! Truncated Fock-space ladder machinery for a charged particle in a constant
//! magnetic field along `+z`.
//!
//! The kinetic momentum is realised through a single ladder pair,
//!
//! ```text
//! π_x = √(mħω_c/2) (a + a†),   π_y = i √(mħω_c/2) (a − a†),   π_z = ħ k_z,
//! ```
//!
//! which gives `[π_x, π_y] = −iħ m ω_c` (electron charge `e < 0`, `B > 0`), i.e.
//! `eB/c = −m ω_c`. Truncation to `n_fock` levels spoils ladder identities in the
//! top levels only; [`InteriorProjector`] cuts those levels out of every check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opalg::{matrix_norm, BasisTag, Matrix, Operator, C64, I};
use crate::spin::SpinTriple;

/// Lowering and raising operators on `n_fock` levels.
#[derive(Clone, Debug)]
pub struct LadderPair {
    pub a: Operator,
    pub a_dag: Operator,
    pub n_fock: usize,
}

pub fn ladder_pair(n_fock: usize) -> Result<LadderPair> {
    if n_fock < 2 {
        return Err(Error::InvalidParameter(format!(
            "ladder needs at least 2 Fock levels, got {n_fock}"
        )));
    }
    let basis = BasisTag::ungraded(n_fock, 1);
    let a = Operator::from_fn(basis, |i, j| {
        if j == i + 1 {
            C64::from((j as f64).sqrt())
        } else {
            C64::from(0.0)
        }
    });
    let a_dag = a.adjoint();
    Ok(LadderPair { a, a_dag, n_fock })
}

/// Field and kinematic parameters of one `k_z` fiber.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandauParams {
    pub omega_c: f64,
    pub k_z: f64,
    pub m: f64,
    pub hbar: f64,
}

impl LandauParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c.is_finite() && self.omega_c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_c must be > 0, got {}",
                self.omega_c
            )));
        }
        if !(self.m > 0.0 && self.hbar > 0.0) || !self.k_z.is_finite() {
            return Err(Error::InvalidParameter(
                "m and hbar must be > 0 and k_z finite".into(),
            ));
        }
        Ok(())
    }

    /// `eB/c` for the electron convention, `−m ω_c`.
    pub fn charge_field(&self) -> f64 {
        -self.m * self.omega_c
    }

    /// `ħ² k_z² / 2m`.
    pub fn longitudinal_energy(&self) -> f64 {
        self.hbar * self.hbar * self.k_z * self.k_z / (2.0 * self.m)
    }
}

#[derive(Clone, Debug)]
pub struct KineticMomentum {
    pub pi: [Operator; 3],
    pub params: LandauParams,
    /// Sign of the particle charge; always −1.
    pub charge_sign: f64,
}

impl KineticMomentum {
    pub fn basis(&self) -> BasisTag {
        self.pi[0].basis()
    }

    /// `π² = π_x² + π_y² + π_z²` by matrix products.
    pub fn squared(&self) -> Operator {
        self.pi
            .iter()
            .fold(Operator::zeros(self.basis()), |acc, p| &acc + &(p * p))
    }

    /// The components lifted to `Fock ⊗ C^{spin_dim}`.
    pub fn lifted(&self, spin_dim: usize) -> [Operator; 3] {
        let id = Operator::identity(BasisTag::ungraded(1, spin_dim));
        self.pi
            .clone()
            .map(|p| Operator::fock_spin(&p, &id).expect("Fock-only momentum"))
    }

    /// `S·π = Σ π_i ⊗ S_i`.
    pub fn dot_spin(&self, spin: &SpinTriple) -> Operator {
        self.pi
            .iter()
            .zip(spin.s.iter())
            .map(|(p, s)| Operator::fock_spin(p, s).expect("Fock-only momentum, spin-only matrix"))
            .reduce(|acc, term| &acc + &term)
            .expect("three components")
    }
}

pub fn kinetic_momentum(n_fock: usize, params: &LandauParams) -> Result<KineticMomentum> {
    params.validate()?;
    let ladder = ladder_pair(n_fock)?;
    let f = (params.m * params.hbar * params.omega_c / 2.0).sqrt();
    let pi_x = (&ladder.a + &ladder.a_dag).scale(f);
    let pi_y = (&ladder.a - &ladder.a_dag).scale(I * f);
    let pi_z = Operator::identity(ladder.a.basis()).scale(params.hbar * params.k_z);
    Ok(KineticMomentum {
        pi: [pi_x, pi_y, pi_z],
        params: *params,
        charge_sign: -1.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandauMode {
    /// `ħω_c(a†a + 1/2) + ħ²k_z²/2m`, diagonal and exact on every level.
    LadderExact,
    /// `π²/2m` from the truncated momentum matrices; wrong in the top level.
    MatrixProduct,
}

/// The Landau Hamiltonian `π²/2m` on `n_fock` levels.
pub fn landau_hamiltonian(n_fock: usize, params: &LandauParams, mode: LandauMode) -> Result<Operator> {
    match mode {
        LandauMode::LadderExact => {
            params.validate()?;
            if n_fock < 2 {
                return Err(Error::InvalidParameter(format!(
                    "ladder needs at least 2 Fock levels, got {n_fock}"
                )));
            }
            let shift = params.longitudinal_energy();
            Operator::diagonal(
                BasisTag::ungraded(n_fock, 1),
                (0..n_fock).map(|n| params.hbar * params.omega_c * (n as f64 + 0.5) + shift),
            )
        }
        LandauMode::MatrixProduct => {
            let km = kinetic_momentum(n_fock, params)?;
            Ok(km.squared().scale(1.0 / (2.0 * params.m)))
        }
    }
}

/// Orthogonal projector that drops the top `buffer` Fock levels in every
/// spin and grading sector.
#[derive(Clone, Debug)]
pub struct InteriorProjector {
    pub buffer: usize,
    pub basis: BasisTag,
    indices: Vec<usize>,
}

pub fn interior_projector(basis: BasisTag, buffer: usize) -> Result<InteriorProjector> {
    if buffer >= basis.n_fock {
        return Err(Error::InvalidParameter(format!(
            "buffer {buffer} must be smaller than n_fock {}",
            basis.n_fock
        )));
    }
    Ok(InteriorProjector {
        buffer,
        basis,
        indices: basis.level_indices(basis.n_fock - buffer),
    })
}

impl InteriorProjector {
    /// Number of Fock levels kept.
    pub fn levels(&self) -> usize {
        self.basis.n_fock - self.buffer
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> Operator {
        let keep: std::collections::HashSet<usize> = self.indices.iter().copied().collect();
        Operator::diagonal(
            self.basis,
            (0..self.basis.dim()).map(|i| if keep.contains(&i) { 1.0 } else { 0.0 }),
        )
        .expect("projector shape")
    }

    /// The same window for the graded (or ungraded) version of the basis.
    pub fn for_basis(&self, basis: BasisTag) -> InteriorProjector {
        interior_projector(basis, self.buffer).expect("same n_fock")
    }

    /// `P X P` restricted to the kept subspace.
    pub fn window(&self, x: &Operator) -> Matrix {
        debug_assert_eq!(x.basis(), self.basis);
        x.compress(&self.indices)
    }

    /// `‖P X P‖`.
    pub fn norm(&self, x: &Operator) -> f64 {
        matrix_norm(&self.window(x))
    }

    /// Embeds a window-coordinate vector back into the full basis.
    pub fn embed(&self, v: &crate::opalg::Vector) -> crate::opalg::Vector {
        let mut out = crate::opalg::Vector::zeros(self.basis.dim());
        for (k, &i) in self.indices.iter().enumerate() {
            out[i] = v[k];
        }
        out
    }

    /// Components of a full-basis vector inside the window.
    pub fn restrict(&self, v: &crate::opalg::Vector) -> crate::opalg::Vector {
        crate::opalg::Vector::from_iterator(self.indices.len(), self.indices.iter().map(|&i| v[i]))
    }
}
