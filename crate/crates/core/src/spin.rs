//! Spin matrices for `s ∈ {0, 1/2, 1}` and the spin-one matrix identities.
//!
//! Basis ordering puts `S_3` on the diagonal with descending eigenvalues
//! `s, s-1, …, -s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opalg::{commutator, op_norm, BasisTag, Matrix, Operator, C64, I};
use crate::report::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Zero,
    Half,
    One,
}

impl Spin {
    pub fn from_value(s: f64) -> Result<Self> {
        match s {
            v if v == 0.0 => Ok(Spin::Zero),
            v if v == 0.5 => Ok(Spin::Half),
            v if v == 1.0 => Ok(Spin::One),
            v => Err(Error::UnsupportedSpin(v)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Spin::Zero => 0.0,
            Spin::Half => 0.5,
            Spin::One => 1.0,
        }
    }

    /// `2s + 1`.
    pub fn dim(self) -> usize {
        match self {
            Spin::Zero => 1,
            Spin::Half => 2,
            Spin::One => 3,
        }
    }

    pub fn is_fermion(self) -> bool {
        self == Spin::Half
    }

    /// `(-1)^{2s+1}`: `+1` for fermions, `-1` for bosons.
    pub fn sign_factor(self) -> f64 {
        if self.is_fermion() {
            1.0
        } else {
            -1.0
        }
    }

    /// `S_3` eigenvalues in basis order.
    pub fn projections(self) -> Vec<f64> {
        let s = self.value();
        (0..self.dim()).map(|k| s - k as f64).collect()
    }
}

/// `(S_1, S_2, S_3)` for one spin value.
#[derive(Clone, Debug)]
pub struct SpinTriple {
    pub spin: Spin,
    pub s: [Operator; 3],
}

impl SpinTriple {
    pub fn basis(&self) -> BasisTag {
        self.s[0].basis()
    }
}

/// Standard spin matrices built from the ladder `S_+ |s,m⟩ = √(s(s+1) - m(m+1)) |s,m+1⟩`.
pub fn spin_matrices(spin: Spin) -> SpinTriple {
    let d = spin.dim();
    let s = spin.value();
    let m: Vec<f64> = spin.projections();
    let basis = BasisTag::ungraded(1, d);
    // row i has projection m[i]; raising connects column j (m[j]) to row j-1
    let raise = Matrix::from_fn(d, d, |i, j| {
        if i + 1 == j {
            C64::from((s * (s + 1.0) - m[j] * (m[j] + 1.0)).sqrt())
        } else {
            C64::from(0.0)
        }
    });
    let lower = raise.adjoint();
    let s1 = (&raise + &lower) * C64::from(0.5);
    let s2 = (&raise - &lower) * (-I * 0.5);
    let s3 = Matrix::from_fn(d, d, |i, j| if i == j { C64::from(m[i]) } else { C64::from(0.0) });
    SpinTriple {
        spin,
        s: [
            Operator::from_parts(basis, s1),
            Operator::from_parts(basis, s2),
            Operator::from_parts(basis, s3),
        ],
    }
}

/// Levi-Civita symbol on `0..3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Largest `‖[S_i, S_j] - i ε_ijk S_k‖` over all index pairs.
pub fn so3_residual(triple: &SpinTriple) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            let c = commutator(&triple.s[i], &triple.s[j]).expect("same basis");
            let mut rhs = Operator::zeros(triple.basis());
            for k in 0..3 {
                rhs = &rhs + &triple.s[k].scale(I * levi_civita(i, j, k));
            }
            worst = worst.max(op_norm(&(&c - &rhs)));
        }
    }
    worst
}

/// `‖S_1² + S_2² + S_3² - s(s+1) I‖`.
pub fn casimir_residual(triple: &SpinTriple) -> f64 {
    let s = triple.spin.value();
    let sum = triple
        .s
        .iter()
        .fold(Operator::zeros(triple.basis()), |acc, x| &acc + &(x * x));
    op_norm(&sum.shifted(-s * (s + 1.0)))
}

/// Checks the two spin-one identities used to reduce `(S·π)⁴`:
/// `S_i S_j S_k + S_k S_j S_i = δ_ij S_k + δ_jk S_i` for every index triple, and
/// `ε_ijk S_i S_j B_k = i S·B` for `B = (0, 0, b_z)`.
pub fn spin1_identity_suite(triple: &SpinTriple, b_z: f64) -> Result<CheckReport> {
    if triple.spin != Spin::One {
        return Err(Error::UnsupportedSpin(triple.spin.value()));
    }
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let s = &triple.s;
    let mut worst = 0.0_f64;
    let mut worst_tuple = (0, 0, 0);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let lhs = &(&(&s[i] * &s[j]) * &s[k]) + &(&(&s[k] * &s[j]) * &s[i]);
                let rhs = &s[k].scale(delta(i, j)) + &s[i].scale(delta(j, k));
                let r = op_norm(&(&lhs - &rhs));
                if r > worst {
                    worst = r;
                    worst_tuple = (i, j, k);
                }
            }
        }
    }

    let b = [0.0, 0.0, b_z];
    let mut eps_sum = Operator::zeros(triple.basis());
    let mut s_dot_b = Operator::zeros(triple.basis());
    for i in 0..3 {
        s_dot_b = &s_dot_b + &s[i].scale(b[i]);
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k) * b[k];
                if e != 0.0 {
                    eps_sum = &eps_sum + &(&s[i] * &s[j]).scale(e);
                }
            }
        }
    }
    let eps_residual = op_norm(&(&eps_sum - &s_dot_b.scale(I)));

    let tol = 1e-15;
    let mut report = CheckReport::new("spin1_identities");
    report
        .at_most("symmetrized_triple_product", worst, tol)
        .with("worst_i", worst_tuple.0 as f64 + 1.0)
        .with("worst_j", worst_tuple.1 as f64 + 1.0)
        .with("worst_k", worst_tuple.2 as f64 + 1.0);
    report
        .at_most("epsilon_contraction", eps_residual, tol)
        .with("b_z", b_z);
    report.at_most("so3_algebra", so3_residual(triple), tol);
    report.at_most("casimir", casimir_residual(triple), tol);
    Ok(report)
}
