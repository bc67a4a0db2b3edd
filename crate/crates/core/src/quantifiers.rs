//! l1-norm coherence (total, local, correlated) and Wootters concurrence.

use crate::error::Result;
use crate::linalg::{self, SymMatrix4};
use crate::model::{self, ModelParams, Subsystem};

/// Sum of the absolute off-diagonal entries, `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence<const N: usize>(rho: &[[f64; N]; N]) -> f64 {
    let mut total = 0.0;
    for (i, row) in rho.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                total += x.abs();
            }
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceDecomposition {
    pub total: f64,
    /// `C_l1(ρ_A) + C_l1(ρ_B)`.
    pub local: f64,
    /// `total − local`; non-negative by the triangle inequality.
    pub correlated: f64,
}

/// Splits the l1 coherence of `rho` into the part carried by the reduced
/// states and the remainder stored in correlations.
///
/// In entries: `total = 2 Σ_{i<j} |ρ_ij|` and
/// `local = 2(|ρ13 + ρ24| + |ρ12 + ρ34|)` (1-based).
pub fn coherence_decomposition(rho: &SymMatrix4) -> CoherenceDecomposition {
    let total = l1_coherence(rho.rows());
    let local = l1_coherence(model::reduce_subsystem(rho, Subsystem::A).rows())
        + l1_coherence(model::reduce_subsystem(rho, Subsystem::B).rows());
    CoherenceDecomposition {
        total,
        local,
        correlated: total - local,
    }
}

/// `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`; for real `ρ` this reverses both index orders
/// with signs from the antidiagonal `(−1, 1, 1, −1)`.
pub fn spin_flipped(rho: &SymMatrix4) -> SymMatrix4 {
    let yy = &model::SIGMA_YY;
    SymMatrix4::symmetrized(&linalg::matmul(yy, &linalg::matmul(rho.rows(), yy)))
}

/// Square roots `√λ_i` of the eigenvalues of `R = ρ ρ̃`, sorted
/// nonincreasing.
///
/// With `Y = σʸ⊗σʸ` and `A = √ρ Y √ρ` (real symmetric), `A² = √ρ ρ̃ √ρ` is
/// similar to `R`, so `√λ_i = |eig(A)_i|`. Working with `A` keeps the small
/// `√λ_i` at roundoff level instead of at the square root of roundoff.
pub fn spin_flip_singular_values(rho: &SymMatrix4) -> Result<[f64; 4]> {
    let root = linalg::sqrt_psd4(rho)?;
    let a = linalg::matmul(root.rows(), &linalg::matmul(&model::SIGMA_YY, root.rows()));
    let mut s = linalg::eigvals_sym4(&SymMatrix4::symmetrized(&a))?.map(f64::abs);
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Wootters concurrence `max{0, √λ1 − √λ2 − √λ3 − √λ4}`.
pub fn concurrence(rho: &SymMatrix4) -> Result<f64> {
    let s = spin_flip_singular_values(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Everything evaluated at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierRecord {
    pub params: ModelParams,
    /// Level energies, ascending.
    pub energies: [f64; 4],
    /// Thermal occupations of those levels.
    pub populations: [f64; 4],
    pub c_total: f64,
    pub c_local: f64,
    pub c_correlated: f64,
    pub concurrence: f64,
}

pub fn evaluate_point(p: &ModelParams) -> Result<QuantifierRecord> {
    let state = model::thermal_state(p)?;
    let coherence = coherence_decomposition(&state.rho);
    Ok(QuantifierRecord {
        params: *p,
        energies: state.eigen.values,
        populations: state.populations,
        c_total: coherence.total,
        c_local: coherence.local,
        c_correlated: coherence.correlated,
        concurrence: concurrence(&state.rho)?,
    })
}
