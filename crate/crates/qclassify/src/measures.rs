//! Exact analytic labelers: concurrence for entanglement and geometric
//! discord for quantumness of correlations.
//!
//! Concurrence is evaluated on the Hermitian product sqrt(rho) rho~ sqrt(rho)
//! whose spectrum equals that of rho rho~, so a single Hermitian Jacobi
//! kernel serves every eigenproblem in the crate.

use crate::error::Result;
use crate::linalg::{hermitian_sqrt, jacobi_hermitian_eigen, CMatrix, Eigen};
use crate::states::{pauli, to_bloch, DensityMatrix};

/// Measures below this threshold count as zero when assigning labels.
pub const LABEL_TOL: f64 = 1e-9;

/// Entanglement class of a state: +1 entangled, -1 separable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementLabel {
    pub value: i8,
    pub concurrence: f64,
}

/// Discord class of a state: +1 non-zero discord, -1 zero discord.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordLabel {
    pub value: i8,
    pub discord: f64,
}

/// Eigendecomposition of a small Hermitian matrix, eigenvalues descending.
///
/// Thin contract wrapper over the cyclic Jacobi kernel: the input must be
/// Hermitian within 1e-10.
pub fn hermitian_eigen(m: &CMatrix) -> Result<Eigen> {
    jacobi_hermitian_eigen(m, 1e-10)
}

/// Concurrence of a two-qubit state, clamped to [0, 1].
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let yy = pauli(2).kron(&pauli(2));
    let rho_tilde = yy.matmul(&rho.matrix().conj()).matmul(&yy);
    let root = hermitian_sqrt(rho.matrix(), 1e-10)?;
    let product = root.matmul(&rho_tilde).matmul(&root);
    let eig = jacobi_hermitian_eigen(&product, 1e-8)?;
    // same rounding floor as the matrix square root: eigenvalue noise at
    // 1e-17 must not surface as 3e-9 of spurious concurrence
    let floor = eig.values[0].max(0.0) * 1e-13;
    let mut mu: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l <= floor { 0.0 } else { l.sqrt() })
        .collect();
    mu.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let c = mu[0] - mu[1] - mu[2] - mu[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Geometric discord from the Bloch form:
/// (|a|^2 + tr(T T^t) - lambda_max(a a^t + T T^t)) / 4.
pub fn geometric_discord(rho: &DensityMatrix) -> Result<f64> {
    let bf = to_bloch(rho);
    let a_sq: f64 = bf.a.iter().map(|x| x * x).sum();
    let mut k = [[0.0f64; 3]; 3];
    let mut t_sq = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            t_sq += bf.t[i][j] * bf.t[i][j];
            k[i][j] = bf.a[i] * bf.a[j];
            for m in 0..3 {
                k[i][j] += bf.t[i][m] * bf.t[j][m];
            }
        }
    }
    let flat: Vec<f64> = k.iter().flatten().copied().collect();
    let eig = jacobi_hermitian_eigen(&CMatrix::from_real(3, 3, &flat), 1e-10)?;
    let value = 0.25 * (a_sq + t_sq - eig.values[0]);
    debug_assert!(
        value > -1e-12,
        "geometric discord {value} below clamp window"
    );
    Ok(value.max(0.0))
}

/// Closed form of the geometric discord for Bell-diagonal states.
pub fn geometric_discord_bd(t11: f64, t22: f64, t33: f64) -> f64 {
    let sq = [t11 * t11, t22 * t22, t33 * t33];
    let max = sq.iter().cloned().fold(f64::MIN, f64::max);
    0.25 * (sq.iter().sum::<f64>() - max)
}

pub fn entanglement_label(rho: &DensityMatrix) -> Result<EntanglementLabel> {
    let c = concurrence(rho)?;
    Ok(EntanglementLabel {
        value: if c > LABEL_TOL { 1 } else { -1 },
        concurrence: c,
    })
}

pub fn discord_label(rho: &DensityMatrix) -> Result<DiscordLabel> {
    let d = geometric_discord(rho)?;
    Ok(DiscordLabel {
        value: if d > LABEL_TOL { 1 } else { -1 },
        discord: d,
    })
}
