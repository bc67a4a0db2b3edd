//! Dense real symmetric 4×4 and 2×2 linear algebra.
//!
//! Every matrix in this model is real: the Hamiltonian has real entries, so
//! `exp(-βH)` is real symmetric, and `σʸ⊗σʸ` is real as well. Nothing here
//! needs complex arithmetic.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Plain row-major 4×4 array, used for intermediate (not necessarily
/// symmetric) products.
pub type Mat4 = [[f64; 4]; 4];

/// Jacobi sweeps allowed before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are treated as roundoff and clipped
/// to zero; anything more negative is an error.
pub const PSD_TOLERANCE: f64 = 1e-12;

/// Real symmetric 4×4 matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix4([[f64; 4]; 4]);

/// Real symmetric 2×2 matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix2([[f64; 2]; 2]);

impl SymMatrix4 {
    /// Checks that `rows` is finite and exactly symmetric.
    pub fn new(rows: Mat4) -> Result<Self> {
        check_finite4(&rows)?;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self(rows))
    }

    /// Builds a symmetric matrix from the upper triangle of `rows`; the lower
    /// triangle is ignored.
    pub fn from_upper(rows: Mat4) -> Result<Self> {
        let mut m = rows;
        for i in 0..4 {
            for j in 0..i {
                m[i][j] = m[j][i];
            }
        }
        check_finite4(&m)?;
        Ok(Self(m))
    }

    /// Averages `rows` with its transpose. Used for products that are
    /// symmetric in exact arithmetic but pick up asymmetric roundoff.
    pub(crate) fn symmetrized(rows: &Mat4) -> Self {
        let mut m = *rows;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let avg = 0.5 * (rows[i][j] + rows[j][i]);
                m[i][j] = avg;
                m[j][i] = avg;
            }
        }
        Self(m)
    }

    pub fn zeros() -> Self {
        Self([[0.0; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        Self(m)
    }

    /// Rank-one projector `v vᵀ`.
    pub fn outer(v: &[f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = v[i] * v[j];
            }
        }
        Self(m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> &Mat4 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.0)
    }

    /// Largest absolute row sum (equal to the 1-norm for symmetric input).
    pub fn inf_norm(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        worst
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> f64 {
        det4(&self.0)
    }

    pub fn matmul(&self, other: &Self) -> Mat4 {
        matmul(&self.0, &other.0)
    }

    /// `Pᵀ M P` for a permutation or other real matrix `P`.
    pub fn congruence(&self, p: &Mat4) -> Self {
        Self::symmetrized(&matmul(&transpose(p), &matmul(&self.0, p)))
    }
}

impl SymMatrix2 {
    pub fn new(rows: [[f64; 2]; 2]) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        if rows[0][1] != rows[1][0] {
            return Err(Error::NotSymmetric { row: 0, col: 1 });
        }
        Ok(Self(rows))
    }

    pub(crate) fn from_parts(d0: f64, d1: f64, off: f64) -> Self {
        Self([[d0, off], [off, d1]])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn rows(&self) -> &[[f64; 2]; 2] {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Eigenvalues in ascending order (closed form).
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.0;
        let mean = 0.5 * (a + d);
        let radius = (0.5 * (a - d)).hypot(b);
        [mean - radius, mean + radius]
    }

    /// Kronecker product `self ⊗ other`, with `self` acting on the first
    /// (A) factor of the local basis.
    pub fn kron(&self, other: &Self) -> SymMatrix4 {
        SymMatrix4(kron2(&self.0, &other.0))
    }
}

impl Add for SymMatrix4 {
    type Output = SymMatrix4;

    fn add(self, rhs: SymMatrix4) -> SymMatrix4 {
        let mut m = self.0;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += rhs.0[i][j];
            }
        }
        SymMatrix4(m)
    }
}

impl Sub for SymMatrix4 {
    type Output = SymMatrix4;

    fn sub(self, rhs: SymMatrix4) -> SymMatrix4 {
        let mut m = self.0;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] -= rhs.0[i][j];
            }
        }
        SymMatrix4(m)
    }
}

impl Mul<f64> for SymMatrix4 {
    type Output = SymMatrix4;

    fn mul(self, s: f64) -> SymMatrix4 {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|x| *x *= s);
        SymMatrix4(m)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a [`SymMatrix4`].
///
/// Eigenvectors inside a degenerate eigenspace are an arbitrary orthonormal
/// basis of that space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem4 {
    pub values: [f64; 4],
    /// Column `k` (i.e. `vectors[i][k]` for `i = 0..4`) pairs with `values[k]`.
    pub vectors: Mat4,
}

impl EigenSystem4 {
    pub fn vector(&self, k: usize) -> [f64; 4] {
        [
            self.vectors[0][k],
            self.vectors[1][k],
            self.vectors[2][k],
            self.vectors[3][k],
        ]
    }

    /// `Σ_k f(λ_k) v_k v_kᵀ`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> SymMatrix4 {
        let mut m = [[0.0; 4]; 4];
        for k in 0..4 {
            let w = f(self.values[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] += w * self.vectors[i][k] * self.vectors[j][k];
                }
            }
        }
        SymMatrix4::symmetrized(&m)
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> SymMatrix4 {
        self.map_spectrum(|x| x)
    }
}

/// Eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm drops to
/// `1e-14 · (1 + ‖M‖_F)`. Eigenvalues are returned in ascending order.
pub fn eigen_sym4(m: &SymMatrix4) -> Result<EigenSystem4> {
    let mut a = m.0;
    let mut v = SymMatrix4::identity().0;
    let threshold = 1e-14 * (1.0 + frobenius(&a));

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NotConverged {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let mut values = [0.0; 4];
    let mut vectors = [[0.0; 4]; 4];
    for (k, &src) in order.iter().enumerate() {
        values[k] = a[src][src];
        for i in 0..4 {
            vectors[i][k] = v[i][src];
        }
    }
    Ok(EigenSystem4 { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_sym4(m: &SymMatrix4) -> Result<[f64; 4]> {
    eigen_sym4(m).map(|e| e.values)
}

/// Annihilates `a[p][q]` with one plane rotation and accumulates it into `v`.
fn rotate(a: &mut Mat4, v: &mut Mat4, p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    // smaller root of t² + 2θt − 1 = 0, so |rotation angle| ≤ π/4
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    for k in 0..4 {
        let (akp, akq) = (a[k][p], a[k][q]);
        a[k][p] = c * akp - s * akq;
        a[k][q] = s * akp + c * akq;
    }
    for k in 0..4 {
        let (apk, aqk) = (a[p][k], a[q][k]);
        a[p][k] = c * apk - s * aqk;
        a[q][k] = s * apk + c * aqk;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;

    for row in v.iter_mut() {
        let (vp, vq) = (row[p], row[q]);
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}

/// Boltzmann weights `w_i = exp(-β(λ_i − λ_min))` and their sum.
///
/// The shift by `λ_min` keeps every exponent non-positive, so nothing
/// overflows; the shift cancels in the normalized populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoltzmannWeights {
    pub weights: [f64; 4],
    /// Partition function in the shifted convention, `Σ w_i ≥ 1`.
    pub partition: f64,
}

impl BoltzmannWeights {
    pub fn populations(&self) -> [f64; 4] {
        self.weights.map(|w| w / self.partition)
    }
}

pub fn boltzmann_weights(values: &[f64; 4], beta: f64) -> Result<BoltzmannWeights> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidBeta(beta));
    }
    if let Some(col) = values.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row: 0, col });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let weights = values.map(|e| (-beta * (e - min)).exp());
    let partition = weights.iter().sum();
    Ok(BoltzmannWeights { weights, partition })
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd4(m: &SymMatrix4) -> Result<SymMatrix4> {
    let eig = eigen_sym4(m)?;
    let min = eig.values[0];
    if min < -PSD_TOLERANCE {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: min });
    }
    Ok(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..4 {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut t = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn kron2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

pub fn frobenius(a: &Mat4) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diagonal_norm(a: &Mat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &Mat4) -> f64 {
    let mut det = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for i in 1..4 {
            let mut jj = 0;
            for j in 0..4 {
                if j == col {
                    continue;
                }
                minor[i - 1][jj] = m[i][j];
                jj += 1;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * det3(minor);
    }
    det
}

fn check_finite4(m: &Mat4) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}
