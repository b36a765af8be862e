//! Parametric state families, their closed-form trace curves, and
//! detection-threshold solving.
//!
//! Two one-parameter families are built in: the mixture of |W_n⟩ with
//! |GHZ_n⟩ (trace c_n − p, slope exactly −1 because the two states have
//! disjoint supports) and the mixture of |W_n⟩ with white noise
//! (trace c_n − p − (1−p)/2^n). Thresholds where the curve crosses 0 and
//! the D_1 bound have closed forms and are cross-checked by bisection.

use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{self, PureState, StateEnsemble};
use crate::witness::{self, Verdict};

/// The white-noise ensemble enumerates all 2^n basis states as dense terms,
/// so it is capped well below the general state limit.
pub const MAX_WHITE_NOISE_QUBITS: usize = 12;

/// Built-in one-parameter families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    WGhzMix,
    WWhiteNoise,
}

impl FamilyName {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "w_ghz_mix" => Ok(Self::WGhzMix),
            "w_white_noise" => Ok(Self::WWhiteNoise),
            other => Err(Error::UnknownFamily {
                name: other.to_string(),
            }),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::WGhzMix => "w_ghz_mix",
            Self::WWhiteNoise => "w_white_noise",
        }
    }
}

impl std::fmt::Display for FamilyName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A family member: name, qubit count and mixing parameter p ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub n_qubits: usize,
    pub p: f64,
}

impl FamilySpec {
    pub fn new(name: FamilyName, n_qubits: usize, p: f64) -> Result<Self> {
        states::check_qubit_count(n_qubits)?;
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidField {
                field: "p".into(),
                message: format!("must lie in [0, 1], got {p}"),
            });
        }
        Ok(Self { name, n_qubits, p })
    }
}

fn basis_state(n: usize, index: usize) -> Result<PureState> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[index] = Complex64::new(1.0, 0.0);
    PureState::new(n, amps)
}

/// Materialize the family member as an ensemble; zero-weight terms are
/// dropped so the endpoints p = 0 and p = 1 stay valid.
pub fn realize(family: &FamilySpec) -> Result<StateEnsemble> {
    let n = family.n_qubits;
    let p = family.p;
    match family.name {
        FamilyName::WGhzMix => {
            let mut terms = Vec::new();
            if p > 0.0 {
                terms.push((p, states::make_w_state(n)?));
            }
            if p < 1.0 {
                terms.push((1.0 - p, states::make_ghz_state(n)?));
            }
            StateEnsemble::new(terms)
        }
        FamilyName::WWhiteNoise => {
            if n > MAX_WHITE_NOISE_QUBITS {
                return Err(Error::QubitCountOutOfRange {
                    n,
                    min: states::MIN_QUBITS,
                    max: MAX_WHITE_NOISE_QUBITS,
                });
            }
            let dim = 1usize << n;
            let mut terms = Vec::new();
            if p > 0.0 {
                terms.push((p, states::make_w_state(n)?));
            }
            if p < 1.0 {
                let weight = (1.0 - p) / dim as f64;
                for index in 0..dim {
                    terms.push((weight, basis_state(n, index)?));
                }
            }
            StateEnsemble::new(terms)
        }
    }
}

/// Tr(W_n ρ(p)) as an affine function of p.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceCurve {
    pub intercept: f64,
    pub slope: f64,
}

impl TraceCurve {
    pub fn eval(&self, p: f64) -> f64 {
        self.intercept + self.slope * p
    }
}

/// Closed-form trace curve of a family against the standard witness.
pub fn trace_curve(name: FamilyName, n: usize) -> Result<TraceCurve> {
    let c = witness::witness_coefficient(n)?;
    match name {
        // ⟨W|ρ|W⟩ = p, so t(p) = c − p.
        FamilyName::WGhzMix => Ok(TraceCurve {
            intercept: c,
            slope: -1.0,
        }),
        // ⟨W|ρ|W⟩ = p + (1−p)/2^n, so t(p) = c − 1/2^n − p(1 − 1/2^n).
        FamilyName::WWhiteNoise => {
            let inv_dim = 1.0 / (1u64 << n) as f64;
            Ok(TraceCurve {
                intercept: c - inv_dim,
                slope: -(1.0 - inv_dim),
            })
        }
    }
}

/// Detection thresholds of a family: closed forms alongside the numeric
/// crossings of the trace curve.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub family: FamilyName,
    pub n_qubits: usize,
    /// Smallest p beyond which the state is detected as entangled.
    pub p_entangled: f64,
    /// Smallest p beyond which the state is detected as genuine entangled.
    pub p_genuine: f64,
    pub p_entangled_bisection: f64,
    pub p_genuine_bisection: f64,
    pub entangled_abs_diff: f64,
    pub genuine_abs_diff: f64,
}

/// Bisection on the decreasing trace curve for t(p) = target over [0, 1].
fn crossing(curve: &TraceCurve, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if curve.eval(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form thresholds with bisection cross-checks.
pub fn thresholds(name: FamilyName, n: usize) -> Result<ThresholdReport> {
    let c = witness::witness_coefficient(n)?;
    let curve = trace_curve(name, n)?;
    let d1_bound = c - (n - 1) as f64 / n as f64;
    let (p_entangled, p_genuine) = match name {
        FamilyName::WGhzMix => (c, (n - 1) as f64 / n as f64),
        FamilyName::WWhiteNoise => {
            let dim = (1u64 << n) as f64;
            (
                (dim * c - 1.0) / (dim - 1.0),
                (dim * ((n - 1) as f64 / n as f64) - 1.0) / (dim - 1.0),
            )
        }
    };
    let p_entangled_bisection = crossing(&curve, 0.0);
    let p_genuine_bisection = crossing(&curve, d1_bound);
    Ok(ThresholdReport {
        family: name,
        n_qubits: n,
        p_entangled,
        p_genuine,
        p_entangled_bisection,
        p_genuine_bisection,
        entangled_abs_diff: (p_entangled - p_entangled_bisection).abs(),
        genuine_abs_diff: (p_genuine - p_genuine_bisection).abs(),
    })
}

/// One record of a parameter sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub p: f64,
    pub trace: f64,
    pub verdict: Verdict,
}

/// Evaluate the trace curve and classification over a p-grid, ascending.
pub fn sweep(
    name: FamilyName,
    n: usize,
    p_from: f64,
    p_to: f64,
    step: f64,
) -> Result<Vec<SweepPoint>> {
    if !(p_from.is_finite() && p_to.is_finite() && step.is_finite()) {
        return Err(Error::InvalidRange {
            reason: "sweep parameters must be finite".into(),
        });
    }
    if !(0.0..=1.0).contains(&p_from) || !(0.0..=1.0).contains(&p_to) || p_from > p_to {
        return Err(Error::InvalidRange {
            reason: format!("need 0 <= from <= to <= 1, got from={p_from}, to={p_to}"),
        });
    }
    if step <= 0.0 {
        return Err(Error::InvalidRange {
            reason: format!("step must be positive, got {step}"),
        });
    }
    let curve = trace_curve(name, n)?;
    let mut points = Vec::new();
    let mut i = 0u64;
    loop {
        let p = p_from + i as f64 * step;
        if p > p_to + step * 1e-9 {
            break;
        }
        let p = p.min(p_to);
        let trace = curve.eval(p);
        points.push(SweepPoint {
            p,
            trace,
            verdict: witness::classify(trace, n)?,
        });
        if p >= p_to {
            break;
        }
        i += 1;
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{build_witness, expectation};

    #[test]
    fn realize_endpoints_are_pure() {
        let spec = FamilySpec::new(FamilyName::WGhzMix, 3, 1.0).unwrap();
        let rho = realize(&spec).unwrap();
        assert_eq!(rho.terms().len(), 1);

        let spec = FamilySpec::new(FamilyName::WWhiteNoise, 3, 1.0).unwrap();
        assert_eq!(realize(&spec).unwrap().terms().len(), 1);
    }

    #[test]
    fn maximally_mixed_expectation() {
        let spec = FamilySpec::new(FamilyName::WWhiteNoise, 3, 0.0).unwrap();
        let rho = realize(&spec).unwrap();
        let w = build_witness(3).unwrap();
        let t = expectation(&w, &rho).unwrap();
        assert!((t - 23.0 / 72.0).abs() < 1e-13);
    }

    #[test]
    fn w_ghz_midpoint_n4() {
        let spec = FamilySpec::new(FamilyName::WGhzMix, 4, 0.5).unwrap();
        let rho = realize(&spec).unwrap();
        let w = build_witness(4).unwrap();
        let t = expectation(&w, &rho).unwrap();
        assert!((t - (27.0 / 64.0 - 0.5)).abs() < 1e-13);
        assert!((t + 5.0 / 64.0).abs() < 1e-13);
    }

    #[test]
    fn curve_values_at_named_points() {
        let curve = trace_curve(FamilyName::WGhzMix, 3).unwrap();
        assert!((curve.eval(2.0 / 3.0) + 2.0 / 9.0).abs() < 1e-15);

        let curve = trace_curve(FamilyName::WWhiteNoise, 3).unwrap();
        assert!(curve.eval(23.0 / 63.0).abs() < 1e-15);
        assert!((curve.eval(13.0 / 21.0) + 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_mix_slope_is_minus_one() {
        for n in 2..=10 {
            let curve = trace_curve(FamilyName::WGhzMix, n).unwrap();
            assert_eq!(curve.slope, -1.0);
        }
    }

    #[test]
    fn white_noise_thresholds_n3() {
        let report = thresholds(FamilyName::WWhiteNoise, 3).unwrap();
        assert!((report.p_entangled - 23.0 / 63.0).abs() < 1e-15);
        assert!((report.p_genuine - 13.0 / 21.0).abs() < 1e-15);
        assert!(report.entangled_abs_diff < 1e-12);
        assert!(report.genuine_abs_diff < 1e-12);
    }

    #[test]
    fn ghz_mix_thresholds_n3() {
        let report = thresholds(FamilyName::WGhzMix, 3).unwrap();
        assert!((report.p_entangled - 4.0 / 9.0).abs() < 1e-15);
        assert!((report.p_genuine - 2.0 / 3.0).abs() < 1e-15);
        assert!(report.entangled_abs_diff < 1e-12);
        assert!(report.genuine_abs_diff < 1e-12);
    }

    #[test]
    fn white_noise_thresholds_drift_with_size() {
        // p_entangled approaches 1/e from above, p_genuine approaches 1.
        let mut prev_gen = 0.0;
        for n in 3..=12 {
            let report = thresholds(FamilyName::WWhiteNoise, n).unwrap();
            assert!(report.p_entangled <= report.p_genuine);
            assert!(report.p_genuine > prev_gen);
            prev_gen = report.p_genuine;
        }
        let far = thresholds(FamilyName::WWhiteNoise, 12).unwrap();
        assert!((far.p_entangled - std::f64::consts::E.recip()).abs() < 2e-2);
    }

    #[test]
    fn sweep_flips_flags_at_crossings() {
        let points = sweep(FamilyName::WGhzMix, 3, 0.0, 1.0, 0.25).unwrap();
        assert_eq!(points.len(), 5);
        // c_3 = 4/9 ≈ 0.444: entangled from p = 0.5 on.
        assert!(!points[1].verdict.not_fully_separable);
        assert!(points[2].verdict.not_fully_separable);
        // genuine from p > 2/3: first grid point beyond is 0.75.
        assert!(!points[2].verdict.genuine_entangled);
        assert!(points[3].verdict.genuine_entangled);
    }

    #[test]
    fn sweep_single_point_range() {
        let points = sweep(FamilyName::WWhiteNoise, 3, 0.5, 0.5, 0.1).unwrap();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].p, 0.5);
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(sweep(FamilyName::WGhzMix, 3, 0.5, 0.4, 0.1).is_err());
        assert!(sweep(FamilyName::WGhzMix, 3, 0.0, 1.0, 0.0).is_err());
        assert!(sweep(FamilyName::WGhzMix, 3, -0.1, 1.0, 0.1).is_err());
    }

    #[test]
    fn white_noise_sweep_first_genuine_index_n4() {
        let points = sweep(FamilyName::WWhiteNoise, 4, 0.0, 1.0, 0.01).unwrap();
        let threshold = 11.0 / 15.0;
        let first = points
            .iter()
            .position(|pt| pt.verdict.genuine_entangled)
            .unwrap();
        assert_eq!(first, 74);
        assert!(points[first].p > threshold);
        assert!(points[first - 1].p < threshold);
    }
}
