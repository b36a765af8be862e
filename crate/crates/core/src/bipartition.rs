//! Coefficient matrices of pure states across qubit bipartitions and the
//! largest Schmidt coefficient.
//!
//! Reshaping a state's amplitudes into a 2^k × 2^(n−k) matrix for a cut puts
//! the Schmidt coefficients into the singular values; the largest one equals
//! the maximum overlap with pure states product across that cut. For |W_n⟩
//! every size-k cut gives √((n−k)/n).

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::states::PureState;

/// A bipartition of qubits 1..n, stored canonically as the side containing
/// qubit 1 so each unordered partition has exactly one representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionSpec {
    n_qubits: usize,
    subset: Vec<usize>,
}

impl BipartitionSpec {
    /// Validate and canonicalize a subset of qubit indices (1-based).
    pub fn new(n_qubits: usize, subset: &[usize]) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidSubset {
                reason: format!("bipartitions need at least 2 qubits, got {n_qubits}"),
            });
        }
        if subset.is_empty() || subset.len() >= n_qubits {
            return Err(Error::InvalidSubset {
                reason: format!(
                    "subset size must be in 1..={}, got {}",
                    n_qubits - 1,
                    subset.len()
                ),
            });
        }
        let mut seen = vec![false; n_qubits];
        for &q in subset {
            if q == 0 || q > n_qubits {
                return Err(Error::InvalidSubset {
                    reason: format!("qubit {q} outside 1..={n_qubits}"),
                });
            }
            if seen[q - 1] {
                return Err(Error::InvalidSubset {
                    reason: format!("qubit {q} listed twice"),
                });
            }
            seen[q - 1] = true;
        }
        let side: Vec<usize> = if seen[0] {
            (1..=n_qubits).filter(|q| seen[q - 1]).collect()
        } else {
            (1..=n_qubits).filter(|q| !seen[q - 1]).collect()
        };
        Ok(Self {
            n_qubits,
            subset: side,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Canonical side (always contains qubit 1), sorted ascending.
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n_qubits)
            .filter(|q| !self.subset.contains(q))
            .collect()
    }

    /// Size of the smaller side; the k in D_k.
    pub fn k(&self) -> usize {
        self.subset.len().min(self.n_qubits - self.subset.len())
    }
}

/// Reshape a state's amplitudes into the coefficient matrix of a cut.
///
/// Row index i runs over the canonical subset's bits (first listed qubit is
/// the most significant), column index j over the complement's bits; entry
/// (i, j) is the amplitude of the basis state obtained by interleaving the
/// bits back into original qubit positions. The Frobenius norm is 1.
pub fn coefficient_matrix(state: &PureState, cut: &BipartitionSpec) -> Result<ComplexMatrix> {
    let n = state.n_qubits();
    if cut.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: cut.n_qubits(),
            right: n,
        });
    }
    let subset = cut.subset();
    let complement = cut.complement();
    let rows = 1usize << subset.len();
    let cols = 1usize << complement.len();
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (index, &amp) in state.amplitudes().iter().enumerate() {
        let mut i = 0usize;
        for (pos, &q) in subset.iter().enumerate() {
            let bit = (index >> (n - q)) & 1;
            i |= bit << (subset.len() - 1 - pos);
        }
        let mut j = 0usize;
        for (pos, &q) in complement.iter().enumerate() {
            let bit = (index >> (n - q)) & 1;
            j |= bit << (complement.len() - 1 - pos);
        }
        m.set(i, j, amp);
    }
    Ok(m)
}

/// Largest Schmidt coefficient across a cut: σ_max of the coefficient
/// matrix, which equals the maximum overlap |⟨φ|s⟩| over states φ product
/// across the cut.
pub fn largest_schmidt_coefficient(state: &PureState, cut: &BipartitionSpec) -> Result<f64> {
    largest_schmidt_coefficient_with(state, cut, linalg::DEFAULT_TOL, linalg::DEFAULT_MAX_ITER)
}

/// [`largest_schmidt_coefficient`] with explicit power-iteration settings.
pub fn largest_schmidt_coefficient_with(
    state: &PureState,
    cut: &BipartitionSpec,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let m = coefficient_matrix(state, cut)?;
    linalg::sigma_max(&m, tol, max_iter)
}

/// All distinct bipartitions separating k qubits from the rest.
///
/// For k < n/2 every size-k subset is its own partition; at k = n/2 only
/// subsets containing qubit 1 are enumerated so each partition appears once.
pub fn size_k_partitions(n: usize, k: usize) -> Result<Vec<BipartitionSpec>> {
    if k == 0 || k > n / 2 {
        return Err(Error::SubsetSizeOutOfRange { k, max: n / 2 });
    }
    let mut out = Vec::new();
    for subset in subsets_of_size(n, k) {
        if 2 * k == n && subset[0] != 1 {
            continue;
        }
        out.push(BipartitionSpec::new(n, &subset)?);
    }
    Ok(out)
}

/// Maximum of squared largest Schmidt coefficients over all size-k cuts: the
/// D_k analogue of the biseparable overlap α.
pub fn max_biseparable_overlap_sq(state: &PureState, k: usize) -> Result<f64> {
    let n = state.n_qubits();
    let mut best = 0.0f64;
    for cut in size_k_partitions(n, k)? {
        let sigma = largest_schmidt_coefficient(state, &cut)?;
        best = best.max(sigma * sigma);
    }
    Ok(best)
}

/// Lexicographic k-element subsets of 1..=n.
fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - (k - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}
