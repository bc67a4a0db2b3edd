//! One-dimensional parameter sweeps and critical-point searches.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{self, ModelParams, MIN_TEMPERATURE};
use crate::quantifiers::{self, QuantifierRecord};

/// Default number of grid points for a sweep (odd, so the midpoint is on the
/// grid).
pub const DEFAULT_STEPS: usize = 201;

/// Default golden-section tolerance, in units of `V`.
pub const DEFAULT_CROSSING_TOL: f64 = 1e-6;

/// Concurrence at or below this counts as zero when locating sudden death.
pub const ENTANGLEMENT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    Temperature,
    Coulomb,
    /// `δ_A`, or both tunneling strengths when the sweep ties them.
    Tunneling,
    Omega,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Temperature => "temperature",
            SweepVariable::Coulomb => "coulomb",
            SweepVariable::Tunneling => "tunneling",
            SweepVariable::Omega => "omega",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "temp" | "temperature" | "t" => Ok(SweepVariable::Temperature),
            "coulomb" | "v" => Ok(SweepVariable::Coulomb),
            "tunneling" | "delta" => Ok(SweepVariable::Tunneling),
            "omega" | "w" => Ok(SweepVariable::Omega),
            other => Err(format!(
                "unknown sweep variable `{other}` (expected temp, coulomb, tunneling or omega)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Values of the parameters that are not swept.
    pub base: ModelParams,
    /// Sweep `δ_A = δ_B` together; otherwise only `δ_A` moves.
    pub tie_deltas: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidSweep("range must be finite".into()));
        }
        if self.start >= self.stop {
            return Err(Error::InvalidSweep(format!(
                "start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        let floor = match self.variable {
            SweepVariable::Temperature => MIN_TEMPERATURE,
            _ => 0.0,
        };
        if self.start < floor {
            return Err(Error::InvalidSweep(format!(
                "{} range must start at or above {floor}",
                self.variable
            )));
        }
        self.params_at(self.start).validate()?;
        let grid = self.grid();
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSweep(
                "grid is not strictly increasing at this resolution".into(),
            ));
        }
        Ok(())
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps.max(2);
        let h = (self.stop - self.start) / (n - 1) as f64;
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    self.stop
                } else {
                    self.start + k as f64 * h
                }
            })
            .collect()
    }

    pub fn params_at(&self, x: f64) -> ModelParams {
        let mut p = self.base;
        match self.variable {
            SweepVariable::Temperature => p.temperature = x,
            SweepVariable::Coulomb => p.coulomb = x,
            SweepVariable::Omega => p.omega = x,
            SweepVariable::Tunneling => {
                p.delta_a = x;
                if self.tie_deltas {
                    p.delta_b = x;
                }
            }
        }
        p
    }

    fn evaluate_at(&self, x: f64) -> Result<QuantifierRecord> {
        quantifiers::evaluate_point(&self.params_at(x)).map_err(|e| Error::AtGridPoint {
            value: x,
            source: Box::new(e),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// One record per grid point, in grid order.
    pub records: Vec<QuantifierRecord>,
}

/// Evaluates every grid point, in parallel on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let records = spec
        .grid()
        .into_par_iter()
        .map(|x| spec.evaluate_at(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: *spec,
        records,
    })
}

/// Same as [`run_sweep`] on the calling thread only.
pub fn run_sweep_serial(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let records = spec
        .grid()
        .into_iter()
        .map(|x| spec.evaluate_at(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: *spec,
        records,
    })
}

fn is_entangled(base: &ModelParams, t: f64) -> Result<bool> {
    let p = ModelParams {
        temperature: t,
        ..*base
    };
    let state = model::thermal_state(&p)?;
    Ok(quantifiers::concurrence(&state.rho)? > ENTANGLEMENT_THRESHOLD)
}

/// Temperature at which the concurrence first vanishes, by bisection on the
/// indicator `concurrence > 1e-10`.
///
/// The concurrence has a kink where it hits zero, so bisecting on the sign of
/// the raw value would be ill-posed. Requires entanglement at `t_lo` and none
/// at `t_hi`; returns the bracket midpoint once the bracket is narrower than
/// `tol`.
pub fn find_sudden_death(base: &ModelParams, t_lo: f64, t_hi: f64, tol: f64) -> Result<f64> {
    base.validate_couplings()?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidSearch(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
        return Err(Error::InvalidSearch(format!(
            "bad temperature bracket [{t_lo}, {t_hi}]"
        )));
    }
    if t_lo < MIN_TEMPERATURE {
        return Err(Error::TemperatureBelowFloor(t_lo));
    }
    if !is_entangled(base, t_lo)? {
        return Err(Error::NoSuddenDeath {
            t_lo,
            t_hi,
            reason: "state is not entangled at the lower temperature",
        });
    }
    if is_entangled(base, t_hi)? {
        return Err(Error::NoSuddenDeath {
            t_lo,
            t_hi,
            reason: "state is still entangled at the upper temperature",
        });
    }

    let (mut lo, mut hi) = (t_lo, t_hi);
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if is_entangled(base, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Spread `λ3 − λ1` of the three lowest levels of `H` at Coulomb coupling `v`.
///
/// At zero tunneling the spectrum is `{V+2ω, −V, −V, V−2ω}`: the single
/// `|r_A r_B⟩` level crosses a doubly degenerate entangled pair at `V = ω`,
/// and this quantity is `2|V − ω|`. For `δ_A = δ_B` one member of the pair
/// stays exactly at `−V` at any tunneling, so `λ2 − λ1` never shows the
/// crossing; `λ3 − λ1` is the splitting of the avoided crossing.
pub fn crossing_gap(base: &ModelParams, v: f64) -> Result<f64> {
    let p = ModelParams {
        coulomb: v,
        ..*base
    };
    let e = linalg::eigvals_sym4(&model::build_hamiltonian(&p)?)?;
    Ok(e[2] - e[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCrossing {
    /// Coulomb coupling at the minimum gap.
    pub coulomb: f64,
    /// Gap at that point; zero for an exact crossing.
    pub gap: f64,
}

/// Locates the level crossing as the minimum of [`crossing_gap`] over
/// `[v_lo, v_hi]` by golden-section search.
///
/// For `δ > 0` there is no true crossing and the minimum-gap point is
/// reported. Fails when the minimum sits on the bracket boundary.
pub fn find_level_crossing(
    base: &ModelParams,
    v_lo: f64,
    v_hi: f64,
    tol: f64,
) -> Result<LevelCrossing> {
    base.validate_couplings()?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidSearch(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(v_lo.is_finite() && v_hi.is_finite() && v_lo < v_hi && v_lo >= 0.0) {
        return Err(Error::InvalidSearch(format!(
            "bad Coulomb bracket [{v_lo}, {v_hi}]"
        )));
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let gap = |v: f64| crossing_gap(base, v);

    let (mut a, mut b) = (v_lo, v_hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = gap(x1)?;
    let mut f2 = gap(x2)?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = gap(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = gap(x2)?;
        }
    }
    let (v, g) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };

    let interior = v - v_lo > tol && v_hi - v > tol && g < gap(v_lo)? && g < gap(v_hi)?;
    if !interior {
        return Err(Error::NoInteriorMinimum { v_lo, v_hi });
    }
    Ok(LevelCrossing { coulomb: v, gap: g })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn base(w: f64, d: f64, v: f64, t: f64) -> ModelParams {
        ModelParams::new(w, d, d, v, t).unwrap()
    }

    fn concurrence_at(b: &ModelParams, t: f64) -> f64 {
        quantifiers::evaluate_point(&ModelParams {
            temperature: t,
            ..*b
        })
        .unwrap()
        .concurrence
    }

    #[test]
    fn variable_names_parse() {
        assert_eq!("temp".parse(), Ok(SweepVariable::Temperature));
        assert_eq!("coulomb".parse(), Ok(SweepVariable::Coulomb));
        assert_eq!("tunneling".parse(), Ok(SweepVariable::Tunneling));
        assert_eq!("omega".parse(), Ok(SweepVariable::Omega));
        assert!("x".parse::<SweepVariable>().is_err());
    }

    #[test]
    fn two_step_sweep_is_the_endpoints() {
        let spec = SweepSpec {
            variable: SweepVariable::Coulomb,
            start: 1.0,
            stop: 40.0,
            steps: 2,
            base: base(15.0, 2.0, 0.0, 0.1),
            tie_deltas: true,
        };
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.records.len(), 2);
        assert_eq!(r.records[0].params.coulomb, 1.0);
        assert_eq!(r.records[1].params.coulomb, 40.0);
    }

    #[test]
    fn temperature_sweep_loses_entanglement() {
        let spec = SweepSpec {
            variable: SweepVariable::Temperature,
            start: 0.1,
            stop: 10.0,
            steps: 5,
            base: base(0.0, 2.0, 30.0, 1.0),
            tie_deltas: true,
        };
        let r = run_sweep(&spec).unwrap();
        let c: Vec<f64> = r.records.iter().map(|r| r.concurrence).collect();
        let peak = c
            .iter()
            .enumerate()
            .fold(0, |best, (i, &x)| if x > c[best] { i } else { best });
        assert!(c[peak..].windows(2).all(|w| w[1] <= w[0]), "{c:?}");
        // T_c ≈ 12.02 lies beyond this range, so the tail is small but nonzero
        assert!(c[4] < c[0]);
        let wider = SweepSpec { stop: 20.0, ..spec };
        let r = run_sweep(&wider).unwrap();
        assert_eq!(r.records.last().unwrap().concurrence, 0.0);
    }

    #[test]
    fn coulomb_sweep_changes_regime_at_omega() {
        let spec = SweepSpec {
            variable: SweepVariable::Coulomb,
            start: 0.0,
            stop: 40.0,
            steps: 81,
            base: base(15.0, 2.0, 0.0, 0.1),
            tie_deltas: true,
        };
        let r = run_sweep(&spec).unwrap();
        let c: Vec<f64> = r.records.iter().map(|r| r.c_total).collect();
        let argmax = (0..c.len()).max_by(|&i, &j| c[i].total_cmp(&c[j])).unwrap();
        let v_peak = r.records[argmax].params.coulomb;
        assert!(
            (v_peak - 15.0).abs() <= 2.0,
            "c_total peaks at V = {v_peak}"
        );
        assert!(c[argmax] > c[0] && c[argmax] > *c.last().unwrap());
    }

    #[test]
    fn untied_tunneling_moves_delta_a_only() {
        let spec = SweepSpec {
            variable: SweepVariable::Tunneling,
            start: 0.0,
            stop: 1.0,
            steps: 3,
            base: base(1.0, 0.5, 1.0, 1.0),
            tie_deltas: false,
        };
        let p = spec.params_at(0.25);
        assert_eq!((p.delta_a, p.delta_b), (0.25, 0.5));
    }

    #[test]
    fn invalid_sweeps_rejected() {
        let good = SweepSpec {
            variable: SweepVariable::Temperature,
            start: 0.1,
            stop: 1.0,
            steps: 3,
            base: base(1.0, 1.0, 1.0, 1.0),
            tie_deltas: true,
        };
        assert!(run_sweep(&SweepSpec { steps: 1, ..good }).is_err());
        assert!(run_sweep(&SweepSpec { start: 2.0, ..good }).is_err());
        assert!(run_sweep(&SweepSpec {
            start: 1e-6,
            ..good
        })
        .is_err());
        let neg = SweepSpec {
            variable: SweepVariable::Omega,
            start: -1.0,
            ..good
        };
        assert!(matches!(run_sweep(&neg), Err(Error::InvalidSweep(_))));
    }

    #[test]
    fn sudden_death_reference_point() {
        let b = base(0.0, 2.0, 30.0, 1.0);
        let tol = 1e-4;
        let tc = find_sudden_death(&b, 0.1, 50.0, tol).unwrap();
        // 30-digit bisection reference
        assert!((tc - 12.017_777_321_124_581).abs() < tol);
        assert!(concurrence_at(&b, tc - tol) > 0.0);
        assert_eq!(concurrence_at(&b, tc + tol), 0.0);

        // fine scan at 1e-5 spacing: the indicator flips exactly once, inside
        // [T_c − tol, T_c + tol]
        let mut flips = Vec::new();
        let mut prev = concurrence_at(&b, tc - 1e-3) > ENTANGLEMENT_THRESHOLD;
        for k in 1..=200 {
            let t = tc - 1e-3 + k as f64 * 1e-5;
            let now = concurrence_at(&b, t) > ENTANGLEMENT_THRESHOLD;
            if now != prev {
                flips.push(t);
            }
            prev = now;
        }
        assert_eq!(flips.len(), 1, "{flips:?}");
        assert!((flips[0] - tc).abs() <= tol + 1e-5);

        let after = quantifiers::evaluate_point(&ModelParams {
            temperature: tc + tol,
            ..b
        })
        .unwrap();
        assert!(after.c_correlated > 1e-4);
    }

    #[test]
    fn sudden_death_needs_a_bracket() {
        let b = base(0.0, 2.0, 30.0, 1.0);
        assert!(matches!(
            find_sudden_death(&b, 20.0, 50.0, 1e-4),
            Err(Error::NoSuddenDeath { .. })
        ));
        assert!(matches!(
            find_sudden_death(&b, 0.1, 5.0, 1e-4),
            Err(Error::NoSuddenDeath { .. })
        ));
        assert!(find_sudden_death(&b, 0.1, 50.0, 0.0).is_err());
    }

    #[test]
    fn exact_crossing_at_zero_tunneling() {
        let b = base(15.0, 0.0, 1.0, 1.0);
        assert_eq!(crossing_gap(&b, 10.0).unwrap(), 10.0);
        assert_eq!(crossing_gap(&b, 20.0).unwrap(), 10.0);
        let c = find_level_crossing(&b, 1.0, 40.0, 1e-6).unwrap();
        assert!((c.coulomb - 15.0).abs() <= 1e-6);
        assert!(c.gap <= 4e-6);
    }

    #[test]
    fn avoided_crossing_at_finite_tunneling() {
        let b = base(15.0, 2.0, 1.0, 1.0);
        let c = find_level_crossing(&b, 1.0, 40.0, 1e-6).unwrap();
        // dense-scan oracle at 1e-3 spacing
        let (mut v_best, mut g_best) = (0.0, f64::INFINITY);
        let mut v = 1.0;
        while v <= 40.0 {
            let g = crossing_gap(&b, v).unwrap();
            if g < g_best {
                v_best = v;
                g_best = g;
            }
            v += 1e-3;
        }
        assert!(
            (c.coulomb - v_best).abs() < 2e-3,
            "{} vs {v_best}",
            c.coulomb
        );
        assert!(c.gap > 0.0 && c.gap <= g_best);
        // within O(δ²/ω) of ω
        assert!((c.coulomb - 15.0).abs() < 4.0 / 15.0);
    }

    #[test]
    fn no_crossing_without_stimulus() {
        for d in [0.0, 2.0] {
            let b = base(0.0, d, 1.0, 1.0);
            assert!(matches!(
                find_level_crossing(&b, 1.0, 40.0, 1e-6),
                Err(Error::NoInteriorMinimum { .. })
            ));
        }
    }
}
