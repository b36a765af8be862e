//! N-qubit pure states, ensembles, dense density matrices, and qubit
//! reindexing.
//!
//! Basis convention: a computational-basis index is read as an n-bit string
//! with qubit 1 as the most significant bit, so |100⟩ on three qubits sits at
//! index 4 and ket strings can be read off directly as binary literals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};

/// Smallest supported qubit count.
pub const MIN_QUBITS: usize = 2;
/// Largest supported qubit count for dense amplitude vectors.
pub const MAX_QUBITS: usize = 24;
/// Normalization tolerance for state and weight validation.
pub const NORM_TOL: f64 = 1e-10;
/// Dense density matrices are accepted only up to this many qubits.
pub const MAX_DENSE_QUBITS: usize = 10;
/// Eigenvalue slack allowed when validating positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-8;

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: MIN_QUBITS,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: ComplexVector,
}

impl PureState {
    /// Build a state from `2^n_qubits` amplitudes; rejects unnormalized input.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: amplitudes.len(),
            });
        }
        let amplitudes = ComplexVector::new(amplitudes)?;
        let norm_sq = amplitudes.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq,
                tol: NORM_TOL,
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amplitudes.entries()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes.entries()[index]
    }
}

/// W state: equal superposition of all single-excitation basis states.
pub fn make_w_state(n: usize) -> Result<PureState> {
    check_qubit_count(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let weight = 1.0 / (n as f64).sqrt();
    for q in 0..n {
        amps[1 << q] = Complex64::new(weight, 0.0);
    }
    PureState::new(n, amps)
}

/// GHZ state: (|0…0⟩ + |1…1⟩)/√2.
pub fn make_ghz_state(n: usize) -> Result<PureState> {
    check_qubit_count(n)?;
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let weight = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = weight;
    amps[dim - 1] = weight;
    PureState::new(n, amps)
}

/// Three-qubit state in the five-parameter canonical form
/// λ₀|000⟩ + λ₁e^{iθ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩.
///
/// The only single-excitation amplitude in this form is λ₁e^{iθ} at |100⟩,
/// so the W-state witness evaluates to 4/9 − λ₁²/3 ≥ 1/9 on every such
/// state: the witness applied verbatim never detects a state written in this
/// canonical form, whatever λ₁ is. Detection requires rotating the state so
/// its excitation weight aligns with the W basis first.
pub fn make_acin_state(lambdas: [f64; 5], theta: f64) -> Result<PureState> {
    for (i, l) in lambdas.iter().enumerate() {
        if !l.is_finite() || *l < 0.0 {
            return Err(Error::InvalidField {
                field: format!("lambdas[{i}]"),
                message: format!("must be a nonnegative finite real, got {l}"),
            });
        }
    }
    if !theta.is_finite() {
        return Err(Error::InvalidField {
            field: "theta".into(),
            message: "must be finite".into(),
        });
    }
    let norm_sq: f64 = lambdas.iter().map(|l| l * l).sum();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            norm_sq,
            tol: NORM_TOL,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b000] = Complex64::new(lambdas[0], 0.0);
    amps[0b100] = Complex64::from_polar(lambdas[1], theta);
    amps[0b101] = Complex64::new(lambdas[2], 0.0);
    amps[0b110] = Complex64::new(lambdas[3], 0.0);
    amps[0b111] = Complex64::new(lambdas[4], 0.0);
    PureState::new(3, amps)
}

/// n-fold tensor power of the single-qubit state a|0⟩ + b|1⟩.
pub fn make_symmetric_product(a: Complex64, b: Complex64, n: usize) -> Result<PureState> {
    check_qubit_count(n)?;
    let norm_sq = a.norm_sqr() + b.norm_sqr();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized {
            norm_sq,
            tol: NORM_TOL,
        });
    }
    let dim = 1usize << n;
    let mut amps = Vec::with_capacity(dim);
    for index in 0..dim {
        let ones = index.count_ones();
        amps.push(a.powu(n as u32 - ones) * b.powu(ones));
    }
    PureState::new(n, amps)
}

/// Relabel qubits: `perm[i]` is the new position of qubit `i + 1` (1-based).
pub fn permute_qubits(state: &PureState, perm: &[usize]) -> Result<PureState> {
    let n = state.n_qubits();
    if perm.len() != n {
        return Err(Error::InvalidPermutation {
            reason: format!("expected {n} entries, got {}", perm.len()),
        });
    }
    let mut seen = vec![false; n];
    for &target in perm {
        if target == 0 || target > n {
            return Err(Error::InvalidPermutation {
                reason: format!("index {target} outside 1..={n}"),
            });
        }
        if seen[target - 1] {
            return Err(Error::InvalidPermutation {
                reason: format!("index {target} appears twice"),
            });
        }
        seen[target - 1] = true;
    }

    let dim = state.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (index, &amp) in state.amplitudes().iter().enumerate() {
        let mut new_index = 0usize;
        for q in 1..=n {
            let bit = (index >> (n - q)) & 1;
            new_index |= bit << (n - perm[q - 1]);
        }
        amps[new_index] = amp;
    }
    PureState::new(n, amps)
}

/// ⟨s1|s2⟩, conjugate-linear in the first argument.
pub fn overlap(s1: &PureState, s2: &PureState) -> Result<Complex64> {
    if s1.n_qubits() != s2.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: s1.n_qubits(),
            right: s2.n_qubits(),
        });
    }
    s1.amplitudes.inner(&s2.amplitudes)
}

/// Convex mixture of pure states; represents a density operator without
/// materializing it.
#[derive(Debug, Clone)]
pub struct StateEnsemble {
    n_qubits: usize,
    terms: Vec<(f64, PureState)>,
}

impl StateEnsemble {
    pub fn new(terms: Vec<(f64, PureState)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidInput("ensemble must have at least one term".into()))?;
        let n_qubits = first.1.n_qubits();
        let mut sum = 0.0;
        for (weight, state) in &terms {
            if !(weight.is_finite() && *weight > 0.0 && *weight <= 1.0) {
                return Err(Error::InvalidWeight { weight: *weight });
            }
            if state.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: state.n_qubits(),
                });
            }
            sum += weight;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::WeightsNotNormalized { sum });
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn from_pure(state: PureState) -> Self {
        let n_qubits = state.n_qubits();
        Self {
            n_qubits,
            terms: vec![(1.0, state)],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PureState)] {
        &self.terms
    }

    /// Materialize ρ = Σ wⱼ|ψⱼ⟩⟨ψⱼ| as a dense matrix (small n only).
    pub fn to_dense(&self) -> Result<DenseDensity> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n: self.n_qubits,
                min: MIN_QUBITS,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (weight, state) in &self.terms {
            let amps = state.amplitudes();
            for r in 0..dim {
                if amps[r] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..dim {
                    let v = m.get(r, c) + weight * amps[r] * amps[c].conj();
                    m.set(r, c, v);
                }
            }
        }
        DenseDensity::new(self.n_qubits, m)
    }
}

/// Dense density matrix for small systems (n ≤ 10); validated Hermitian,
/// unit-trace and positive semidefinite on construction.
#[derive(Debug, Clone)]
pub struct DenseDensity {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DenseDensity {
    pub fn new(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        if !(MIN_QUBITS..=MAX_DENSE_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitCountOutOfRange {
                n: n_qubits,
                min: MIN_QUBITS,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << n_qubits;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: matrix.rows(),
            });
        }
        matrix.check_hermitian(NORM_TOL)?;
        let trace = matrix.trace()?;
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let min_eigenvalue = linalg::min_eigenvalue_hermitian(&matrix, NORM_TOL)?;
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { n_qubits, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}
