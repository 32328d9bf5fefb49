//! Closed-form matrices of the native gates.
//!
//! `sigma_phi^{ij}` and `sigma_phi^{ij} (x) sigma_phi^{kl}` cube to themselves
//! (eigenvalues in `{0, +1, -1}`), so `exp(-i A t) = 1 + (cos t - 1) A^2 - i sin(t) A`
//! holds exactly and no generic exponential is needed.

use crate::error::{Error, Result};
use crate::ir::QuditGate;

use super::matrix::{Matrix, C64};

fn check_pair(d: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i >= d || j >= d {
        return Err(Error::InvalidLevels(format!("pair ({i},{j}) for d={d}")));
    }
    Ok(())
}

/// `cos(phi) sigma_x^{ij} + sin(phi) sigma_y^{ij} = e^{-i phi}|i><j| + e^{i phi}|j><i|`.
///
/// Swapping `i` and `j` is the same as negating `phi`.
pub fn sigma_phi(d: usize, i: usize, j: usize, phi: f64) -> Matrix {
    let mut s = Matrix::zeros(d);
    s[(i, j)] = C64::from_polar(1.0, -phi);
    s[(j, i)] = C64::from_polar(1.0, phi);
    s
}

/// `|i><i| - |j><j|`.
pub fn sigma_z(d: usize, i: usize, j: usize) -> Matrix {
    let mut s = Matrix::zeros(d);
    s[(i, i)] = C64::new(1.0, 0.0);
    s[(j, j)] = C64::new(-1.0, 0.0);
    s
}

/// `exp(-i A t)` for `A` with `A^3 = A`.
pub fn involutory_exp(a: &Matrix, t: f64) -> Matrix {
    let a2 = a.matmul(a);
    Matrix::identity(a.dim()).add(&a2.scale(C64::new(t.cos() - 1.0, 0.0))).add(&a.scale(C64::new(0.0, -t.sin())))
}

/// `R_phi^{ij}(theta) = exp(-i sigma_phi^{ij} theta / 2)`.
pub fn rot_matrix(d: usize, i: usize, j: usize, phi: f64, theta: f64) -> Result<Matrix> {
    check_pair(d, i, j)?;
    Ok(involutory_exp(&sigma_phi(d, i, j, phi), theta / 2.0))
}

/// `Ph_level(theta)`: `e^{i theta}` on one diagonal entry.
pub fn phase_matrix(d: usize, level: usize, theta: f64) -> Result<Matrix> {
    if level >= d {
        return Err(Error::InvalidLevels(format!("level {level} for d={d}")));
    }
    let mut m = Matrix::identity(d);
    m[(level, level)] = C64::from_polar(1.0, theta);
    Ok(m)
}

/// `exp(-i sigma_phi^{ij} (x) sigma_phi^{kl} chi)` on the `d^2` two-qudit space.
pub fn ms_matrix(d: usize, i: usize, j: usize, k: usize, l: usize, phi: f64, chi: f64) -> Result<Matrix> {
    check_pair(d, i, j)?;
    check_pair(d, k, l)?;
    let gen = sigma_phi(d, i, j, phi).kron(&sigma_phi(d, k, l, phi));
    Ok(involutory_exp(&gen, chi))
}

/// `exp(-i sigma_z^{ij} (x) sigma_z^{kl} chi)`, diagonal.
pub fn zz_matrix(d: usize, i: usize, j: usize, k: usize, l: usize, chi: f64) -> Result<Matrix> {
    check_pair(d, i, j)?;
    check_pair(d, k, l)?;
    let z = |x: usize, hi: usize, lo: usize| -> f64 {
        if x == hi {
            1.0
        } else if x == lo {
            -1.0
        } else {
            0.0
        }
    };
    let diag: Vec<C64> =
        (0..d * d).map(|idx| C64::from_polar(1.0, -chi * z(idx / d, i, j) * z(idx % d, k, l))).collect();
    Ok(Matrix::diagonal(&diag))
}

/// Physical MS gate `exp[-i (sigma_phi^{01} (x) 1 + 1 (x) sigma_phi^{01})^2 chi / 2]`.
///
/// The generator is not involutory, so this goes through the general
/// exponential; it is the only builder that does.
pub fn physms_matrix(d: usize, phi: f64, chi: f64) -> Result<Matrix> {
    if d < 2 {
        return Err(Error::InvalidLevels(format!("d={d}")));
    }
    let s = sigma_phi(d, 0, 1, phi);
    let id = Matrix::identity(d);
    let sum = s.kron(&id).add(&id.kron(&s));
    let gen = sum.matmul(&sum).scale(C64::new(0.0, -chi / 2.0));
    Ok(gen.expm())
}

/// Local matrix of a unitary gate: `d x d` for one qudit, `d^2 x d^2` for two
/// (first listed qudit most significant).
pub fn gate_matrix(gate: &QuditGate, d: usize) -> Result<Matrix> {
    match *gate {
        QuditGate::Rot { i, j, phi, theta, .. } => rot_matrix(d, i, j, phi, theta),
        QuditGate::Ph { level, theta, .. } => phase_matrix(d, level, theta),
        QuditGate::Ms { i, j, k, l, phi, chi, .. } => ms_matrix(d, i, j, k, l, phi, chi),
        QuditGate::Zz { i, j, k, l, chi, .. } => zz_matrix(d, i, j, k, l, chi),
        QuditGate::PhysMs { phi, chi, .. } => physms_matrix(d, phi, chi),
        QuditGate::ProjMeasure { .. } | QuditGate::NdProject { .. } => Err(Error::Measurement),
    }
}
