//! W-state witness construction, expectation values, the bound hierarchy,
//! and separability verdicts.
//!
//! The witness for n qubits is W = c·I − |W_n⟩⟨W_n| with coefficient
//! c = ((n−1)/n)^(n−1), the squared overlap between |W_n⟩ and its closest
//! fully-separable pure state. Its expectation Tr(Wρ) is nonnegative on
//! fully separable states, at least c − (n−k)/n on the biseparable class
//! D_k, and confined to [c−1, 1−c] for arbitrary states; crossing a
//! threshold from above certifies exclusion from the corresponding class.

use serde::Serialize;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{self, DenseDensity, PureState, StateEnsemble};

/// Slack allowed before a trace value is rejected as inconsistent with the
/// global bounds.
pub const CLASSIFY_BOUNDS_SLACK: f64 = 1e-9;

/// Witness coefficient c_n = ((n−1)/n)^(n−1) as an exact reduced fraction.
///
/// n−1 and n are coprime, so the fraction is already in lowest terms; u128
/// holds every numerator and denominator up to the 24-qubit cap.
pub fn witness_coefficient_rational(n: usize) -> Result<(u128, u128)> {
    states::check_qubit_count(n)?;
    let exp = (n - 1) as u32;
    let num = (n as u128 - 1).pow(exp);
    let den = (n as u128).pow(exp);
    Ok((num, den))
}

/// Witness coefficient c_n = ((n−1)/n)^(n−1).
pub fn witness_coefficient(n: usize) -> Result<f64> {
    let (num, den) = witness_coefficient_rational(n)?;
    Ok(num as f64 / den as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ReferenceKind {
    /// Reference is |W_n⟩; overlaps use the n-entry single-excitation support.
    WState,
    Custom,
}

/// The pair (reference pure state, coefficient α) defining αI − |ψ⟩⟨ψ|.
#[derive(Debug, Clone)]
pub struct WitnessSpec {
    n_qubits: usize,
    reference: PureState,
    alpha: f64,
    kind: ReferenceKind,
}

impl WitnessSpec {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reference(&self) -> &PureState {
        &self.reference
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// ⟨ref|ψ⟩; O(n) for the W-state reference, O(2^n) otherwise.
    fn reference_overlap(&self, state: &PureState) -> Complex64 {
        match self.kind {
            ReferenceKind::WState => {
                let n = self.n_qubits;
                let weight = 1.0 / (n as f64).sqrt();
                let amps = state.amplitudes();
                let sum: Complex64 = (0..n).map(|q| amps[1 << q]).sum();
                weight * sum
            }
            ReferenceKind::Custom => {
                states::overlap(&self.reference, state).expect("dimensions checked by caller")
            }
        }
    }
}

/// Standard witness for |W_n⟩ with α = c_n.
pub fn build_witness(n: usize) -> Result<WitnessSpec> {
    Ok(WitnessSpec {
        n_qubits: n,
        reference: states::make_w_state(n)?,
        alpha: witness_coefficient(n)?,
        kind: ReferenceKind::WState,
    })
}

/// Witness αI − |ψ⟩⟨ψ| with a caller-supplied coefficient, e.g. the
/// biseparable-overlap coefficient 2/3 for three qubits.
pub fn build_custom_witness(reference: PureState, alpha: f64) -> Result<WitnessSpec> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    Ok(WitnessSpec {
        n_qubits: reference.n_qubits(),
        reference,
        alpha,
        kind: ReferenceKind::Custom,
    })
}

/// Tr(Wρ) = α − Σⱼ wⱼ|⟨ref|ψⱼ⟩|² for an ensemble; the witness operator is
/// never materialized.
pub fn expectation(witness: &WitnessSpec, rho: &StateEnsemble) -> Result<f64> {
    if witness.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: witness.n_qubits(),
            right: rho.n_qubits(),
        });
    }
    let fidelity: f64 = rho
        .terms()
        .iter()
        .map(|(weight, state)| weight * witness.reference_overlap(state).norm_sqr())
        .sum();
    Ok(witness.alpha() - fidelity)
}

/// Tr(Wρ) for a single pure state.
pub fn expectation_pure(witness: &WitnessSpec, state: &PureState) -> Result<f64> {
    if witness.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: witness.n_qubits(),
            right: state.n_qubits(),
        });
    }
    Ok(witness.alpha() - witness.reference_overlap(state).norm_sqr())
}

/// Tr(Wρ) = α − ⟨ref|ρ|ref⟩ for a dense density matrix.
pub fn expectation_dense(witness: &WitnessSpec, rho: &DenseDensity) -> Result<f64> {
    if witness.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: witness.n_qubits(),
            right: rho.n_qubits(),
        });
    }
    let amps = witness.reference().amplitudes();
    let m = rho.matrix();
    let dim = amps.len();
    let mut fidelity = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        if amps[r] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let row_sum: Complex64 = (0..dim).map(|c| m.get(r, c) * amps[c]).sum();
        fidelity += amps[r].conj() * row_sum;
    }
    Ok(witness.alpha() - fidelity.re)
}

/// Closed-form Tr(W_n|φ⟩⟨φ|) = c_n − |a_{0…01} + a_{0…10} + … + a_{10…0}|²/n
/// for a pure input; agrees with [`expectation`] on the standard witness.
pub fn single_excitation_trace(state: &PureState) -> f64 {
    let n = state.n_qubits();
    let c = witness_coefficient(n).expect("PureState keeps n within range");
    let amps = state.amplitudes();
    let sum: Complex64 = (0..n).map(|q| amps[1 << q]).sum();
    c - sum.norm_sqr() / n as f64
}

/// Per-class lower/upper bounds on Tr(Wρ).
#[derive(Debug, Clone, Serialize)]
pub struct BoundsTable {
    pub n_qubits: usize,
    /// Witness coefficient c_n.
    pub c: f64,
    /// Lower bound c − 1 for arbitrary states.
    pub global_min: f64,
    /// Upper bound 1 − c for arbitrary states.
    pub global_max: f64,
    /// Fully separable states satisfy Tr(Wρ) ≥ 0.
    pub full_sep_min: f64,
    /// `dk_min[k-1]` = c − (n−k)/n bounds the class D_k, k = 1..⌊n/2⌋.
    pub dk_min: Vec<f64>,
}

/// Bounds on Tr(W_n ρ) for arbitrary, biseparable (per D_k) and fully
/// separable states.
pub fn bounds_table(n: usize) -> Result<BoundsTable> {
    let c = witness_coefficient(n)?;
    let dk_min = (1..=n / 2)
        .map(|k| c - (n - k) as f64 / n as f64)
        .collect();
    Ok(BoundsTable {
        n_qubits: n,
        c,
        global_min: c - 1.0,
        global_max: 1.0 - c,
        full_sep_min: 0.0,
        dk_min,
    })
}

/// Classification of a trace value against the bound hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub trace_value: f64,
    /// Tr(Wρ) < 0: ρ is entangled (not fully separable).
    pub not_fully_separable: bool,
    /// `excluded_from_dk[k-1]`: Tr(Wρ) < c − (n−k)/n, so ρ is not in D_k.
    pub excluded_from_dk: Vec<bool>,
    /// Exclusion from D_1, the weakest biseparable class.
    pub genuine_entangled: bool,
}

/// Classify a trace value; all thresholds are strict, with no tolerance
/// slack (callers report margins and handle uncertainty).
pub fn classify(trace: f64, n: usize) -> Result<Verdict> {
    let bounds = bounds_table(n)?;
    if trace < bounds.global_min - CLASSIFY_BOUNDS_SLACK
        || trace > bounds.global_max + CLASSIFY_BOUNDS_SLACK
    {
        return Err(Error::TraceOutOfBounds {
            trace,
            min: bounds.global_min,
            max: bounds.global_max,
        });
    }
    let excluded_from_dk: Vec<bool> = bounds.dk_min.iter().map(|thr| trace < *thr).collect();
    let genuine_entangled = excluded_from_dk.first().copied().unwrap_or(false);
    Ok(Verdict {
        trace_value: trace,
        not_fully_separable: trace < 0.0,
        excluded_from_dk,
        genuine_entangled,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictThresholds {
    pub full_sep: f64,
    pub d_k: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictFlags {
    pub not_fully_separable: bool,
    pub excluded_from_dk: Vec<bool>,
    pub genuine_entangled: bool,
}

/// JSON-ready verdict: trace, coefficient, thresholds, flags, and the margin
/// to the nearest threshold.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub trace: f64,
    pub c: f64,
    pub thresholds: VerdictThresholds,
    pub flags: VerdictFlags,
    pub margin: f64,
}

/// Classify and package a trace value, with margin = trace − nearest
/// threshold among the fully-separable and D_k thresholds.
pub fn verdict_report(trace: f64, n: usize) -> Result<VerdictReport> {
    let bounds = bounds_table(n)?;
    let verdict = classify(trace, n)?;
    let mut nearest = bounds.full_sep_min;
    for thr in &bounds.dk_min {
        if (trace - thr).abs() < (trace - nearest).abs() {
            nearest = *thr;
        }
    }
    Ok(VerdictReport {
        trace,
        c: bounds.c,
        thresholds: VerdictThresholds {
            full_sep: bounds.full_sep_min,
            d_k: bounds.dk_min.clone(),
        },
        flags: VerdictFlags {
            not_fully_separable: verdict.not_fully_separable,
            excluded_from_dk: verdict.excluded_from_dk.clone(),
            genuine_entangled: verdict.genuine_entangled,
        },
        margin: trace - nearest,
    })
}
