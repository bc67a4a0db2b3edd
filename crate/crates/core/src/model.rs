//! Hamiltonian, Gibbs state and Bloch (Pauli) decomposition of the two
//! coupled double dots.
//!
//! In the local basis `(|l_A l_B⟩, |l_A r_B⟩, |r_A l_B⟩, |r_A r_B⟩)` the
//! Hamiltonian is
//!
//! ```text
//!     ⎡ V+2ω   δ_B    δ_A    0    ⎤
//! H = ⎢ δ_B    −V     0      δ_A  ⎥
//!     ⎢ δ_A    0      −V     δ_B  ⎥
//!     ⎣ 0      δ_A    δ_B    V−2ω ⎦
//! ```
//!
//! i.e. `H = ω(σᶻ⊗I + I⊗σᶻ) + δ_A σˣ⊗I + δ_B I⊗σˣ + V σᶻ⊗σᶻ` with `|l⟩` the
//! `+1` eigenstate of `σᶻ`. Units are dimensionless with `k_B = ħ = 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, EigenSystem4, Mat4, SymMatrix2, SymMatrix4};

/// Lowest temperature accepted by [`thermal_state`]. Below it the Gibbs
/// state is numerically the ground-space projector; use
/// [`ground_space_state`] instead.
pub const MIN_TEMPERATURE: f64 = 1e-4;

/// Physical parameters, all in the same dimensionless energy unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Transition frequency of the external stimulus.
    pub omega: f64,
    /// Tunneling strength inside double dot A.
    pub delta_a: f64,
    /// Tunneling strength inside double dot B.
    pub delta_b: f64,
    /// Coulomb interaction between the two electrons.
    pub coulomb: f64,
    pub temperature: f64,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        delta_a: f64,
        delta_b: f64,
        coulomb: f64,
        temperature: f64,
    ) -> Result<Self> {
        let p = Self {
            omega,
            delta_a,
            delta_b,
            coulomb,
            temperature,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks the Hamiltonian parameters (everything except temperature).
    pub fn validate_couplings(&self) -> Result<()> {
        for (name, value) in [
            ("omega", self.omega),
            ("delta_a", self.delta_a),
            ("delta_b", self.delta_b),
            ("coulomb", self.coulomb),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_couplings()?;
        let t = self.temperature;
        if !t.is_finite() {
            return Err(Error::InvalidParameter {
                name: "temperature",
                value: t,
                reason: "must be finite",
            });
        }
        if t < MIN_TEMPERATURE {
            return Err(Error::TemperatureBelowFloor(t));
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    /// The same point with the two double dots exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            delta_a: self.delta_b,
            delta_b: self.delta_a,
            ..*self
        }
    }
}

/// The four local basis states, in matrix index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    LeftLeft,
    LeftRight,
    RightLeft,
    RightRight,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 4] = [
        BasisLabel::LeftLeft,
        BasisLabel::LeftRight,
        BasisLabel::RightLeft,
        BasisLabel::RightRight,
    ];

    /// Zero-based row/column index.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisLabel::LeftLeft => "|l_A l_B>",
            BasisLabel::LeftRight => "|l_A r_B>",
            BasisLabel::RightLeft => "|r_A l_B>",
            BasisLabel::RightRight => "|r_A r_B>",
        };
        f.write_str(s)
    }
}

/// Which double dot to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn build_hamiltonian(p: &ModelParams) -> Result<SymMatrix4> {
    p.validate_couplings()?;
    let ModelParams {
        omega: w,
        delta_a: da,
        delta_b: db,
        coulomb: v,
        ..
    } = *p;
    SymMatrix4::new([
        [v + 2.0 * w, db, da, 0.0],
        [db, -v, 0.0, da],
        [da, 0.0, -v, db],
        [0.0, da, db, v - 2.0 * w],
    ])
}

/// Gibbs state together with the spectrum it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub rho: SymMatrix4,
    /// Eigensystem of the Hamiltonian.
    pub eigen: EigenSystem4,
    /// Occupation of each energy level, ordered by ascending energy.
    pub populations: [f64; 4],
}

/// `ρ = exp(-H/T) / Z`, assembled as `Σ_k p_k v_k v_kᵀ` over the eigenpairs
/// of `H`.
pub fn thermal_state(p: &ModelParams) -> Result<ThermalState> {
    p.validate()?;
    let h = build_hamiltonian(p)?;
    let eigen = linalg::eigen_sym4(&h)?;
    let populations = linalg::boltzmann_weights(&eigen.values, p.beta())?.populations();

    let mut rho = [[0.0; 4]; 4];
    for (k, &pk) in populations.iter().enumerate() {
        if pk == 0.0 {
            continue;
        }
        let v = eigen.vector(k);
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] += pk * v[i] * v[j];
            }
        }
    }
    Ok(ThermalState {
        rho: SymMatrix4::symmetrized(&rho),
        eigen,
        populations,
    })
}

/// Zero-temperature limit of the Gibbs state: the uniform mixture over the
/// ground eigenspace of `h`. Levels within `1e-10 · (1 + ‖h‖_F)` of the
/// lowest one count as degenerate with it.
pub fn ground_space_state(h: &SymMatrix4) -> Result<SymMatrix4> {
    let eigen = linalg::eigen_sym4(h)?;
    let tol = 1e-10 * (1.0 + h.frobenius_norm());
    let e0 = eigen.values[0];
    let degeneracy = eigen.values.iter().filter(|&&e| e - e0 <= tol).count() as f64;
    Ok(eigen.map_spectrum(|e| if e - e0 <= tol { 1.0 / degeneracy } else { 0.0 }))
}

/// Level energies (ascending) and their thermal occupations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations {
    pub energies: [f64; 4],
    pub probabilities: [f64; 4],
}

pub fn populations(p: &ModelParams) -> Result<Populations> {
    let state = thermal_state(p)?;
    Ok(Populations {
        energies: state.eigen.values,
        probabilities: state.populations,
    })
}

/// `exp(-β h)` by scaling and squaring a truncated Taylor series.
///
/// This is a cross-check for [`thermal_state`] that never touches an
/// eigensolver; production code does not call it. It overflows once
/// `β·|λ_min|` approaches ~700; use [`gibbs_state_taylor`] there.
pub fn matrix_exp_taylor(h: &SymMatrix4, beta: f64) -> SymMatrix4 {
    let (mut e, squarings) = taylor_core(h, beta);
    for _ in 0..squarings {
        e = linalg::matmul(&e, &e);
    }
    SymMatrix4::symmetrized(&e)
}

/// Normalized Gibbs state `exp(-β h) / tr exp(-β h)` by the same Taylor
/// route as [`matrix_exp_taylor`], renormalizing to unit trace after every
/// squaring so that large `β‖h‖` neither overflows nor underflows.
pub fn gibbs_state_taylor(h: &SymMatrix4, beta: f64) -> SymMatrix4 {
    let (mut e, squarings) = taylor_core(h, beta);
    normalize_trace(&mut e);
    for _ in 0..squarings {
        e = linalg::matmul(&e, &e);
        normalize_trace(&mut e);
    }
    SymMatrix4::symmetrized(&e)
}

const TAYLOR_TERMS: usize = 20;
const TAYLOR_RADIUS: f64 = 0.5;

/// Returns `exp(-β h / 2^k)` and `k`, with `k` the smallest integer putting
/// `‖β h‖₁ / 2^k` at or below the Taylor radius.
fn taylor_core(h: &SymMatrix4, beta: f64) -> (Mat4, u32) {
    let norm = beta.abs() * h.inf_norm();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > TAYLOR_RADIUS {
        scale *= 0.5;
        squarings += 1;
    }
    let mut x = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            x[i][j] = -beta * scale * h.get(i, j);
        }
    }
    let mut sum = SymMatrix4::identity().rows().to_owned();
    let mut term = sum;
    for n in 1..=TAYLOR_TERMS {
        term = linalg::matmul(&term, &x);
        let inv = 1.0 / n as f64;
        for i in 0..4 {
            for j in 0..4 {
                term[i][j] *= inv;
                sum[i][j] += term[i][j];
            }
        }
    }
    (sum, squarings)
}

fn normalize_trace(m: &mut Mat4) {
    let tr: f64 = (0..4).map(|i| m[i][i]).sum();
    m.iter_mut().flatten().for_each(|x| *x /= tr);
}

/// The nine Bloch coefficients that can be nonzero for a real two-qubit
/// state:
///
/// ```text
/// ρ = ¼ ( I + a1 σˣ⊗I + a2 σᶻ⊗I + b1 I⊗σˣ + b2 I⊗σᶻ
///           + t11 σˣ⊗σˣ + t22 σʸ⊗σʸ + t33 σᶻ⊗σᶻ + t13 σˣ⊗σᶻ + t31 σᶻ⊗σˣ )
/// ```
///
/// `t13` multiplies `σˣ⊗σᶻ` (first index on A, second on B).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PauliCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub t11: f64,
    pub t22: f64,
    pub t33: f64,
    pub t13: f64,
    pub t31: f64,
}

impl PauliCoefficients {
    pub fn as_array(&self) -> [f64; 9] {
        [
            self.a1, self.a2, self.b1, self.b2, self.t11, self.t22, self.t33, self.t13, self.t31,
        ]
    }
}

/// Reads the coefficients off the matrix entries.
pub fn pauli_coefficients(rho: &SymMatrix4) -> PauliCoefficients {
    // 1-based accessor so the formulas read like the usual ϱ_mn notation
    let r = |m: usize, n: usize| rho.get(m - 1, n - 1);
    PauliCoefficients {
        a1: 2.0 * r(1, 3) + 2.0 * r(2, 4),
        a2: r(1, 1) + r(2, 2) - r(3, 3) - r(4, 4),
        b1: 2.0 * r(1, 2) + 2.0 * r(3, 4),
        b2: r(1, 1) - r(2, 2) + r(3, 3) - r(4, 4),
        t11: 2.0 * r(1, 4) + 2.0 * r(2, 3),
        t22: 2.0 * r(2, 3) - 2.0 * r(1, 4),
        t33: r(1, 1) - r(2, 2) - r(3, 3) + r(4, 4),
        t13: 2.0 * r(1, 3) - 2.0 * r(2, 4),
        t31: 2.0 * r(1, 2) - 2.0 * r(3, 4),
    }
}

const ID2: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
const SX: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
const SZ: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];

/// `σʸ⊗σʸ`, which is real: antidiagonal `(−1, 1, 1, −1)`.
pub const SIGMA_YY: Mat4 = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
];

pub fn reconstruct_from_pauli(c: &PauliCoefficients) -> SymMatrix4 {
    let terms: [(f64, Mat4); 10] = [
        (1.0, linalg::kron2(&ID2, &ID2)),
        (c.a1, linalg::kron2(&SX, &ID2)),
        (c.a2, linalg::kron2(&SZ, &ID2)),
        (c.b1, linalg::kron2(&ID2, &SX)),
        (c.b2, linalg::kron2(&ID2, &SZ)),
        (c.t11, linalg::kron2(&SX, &SX)),
        (c.t22, SIGMA_YY),
        (c.t33, linalg::kron2(&SZ, &SZ)),
        (c.t13, linalg::kron2(&SX, &SZ)),
        (c.t31, linalg::kron2(&SZ, &SX)),
    ];
    let mut m = [[0.0; 4]; 4];
    for (coef, op) in terms.iter() {
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += 0.25 * coef * op[i][j];
            }
        }
    }
    SymMatrix4::symmetrized(&m)
}

/// Partial trace keeping `which`.
///
/// With index `2·i_A + i_B`, tracing out B gives
/// `ρ_A = [[ρ11+ρ22, ρ13+ρ24], [ρ13+ρ24, ρ33+ρ44]]` and tracing out A gives
/// `ρ_B = [[ρ11+ρ33, ρ12+ρ34], [ρ12+ρ34, ρ22+ρ44]]` (1-based entries).
pub fn reduce_subsystem(rho: &SymMatrix4, which: Subsystem) -> SymMatrix2 {
    let r = |i: usize, j: usize| rho.get(i, j);
    match which {
        Subsystem::A => {
            SymMatrix2::from_parts(r(0, 0) + r(1, 1), r(2, 2) + r(3, 3), r(0, 2) + r(1, 3))
        }
        Subsystem::B => {
            SymMatrix2::from_parts(r(0, 0) + r(2, 2), r(1, 1) + r(3, 3), r(0, 1) + r(2, 3))
        }
    }
}

/// Permutation exchanging the two double dots (`|i_A j_B⟩ → |j_A i_B⟩`).
pub const SWAP: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];
