//! Shared test support: independent oracles and seeded random generators.
//!
//! The SVD here is a one-sided Jacobi implementation kept deliberately
//! separate from the library's power iteration so the two can certify each
//! other. Random data always comes from explicitly seeded ChaCha streams.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use wwitness::linalg::ComplexMatrix;
use wwitness::states::{PureState, StateEnsemble};
use wwitness::witness::WitnessSpec;

/// Singular values by one-sided Jacobi (descending): rotate column pairs of
/// the taller orientation until all pairs are orthogonal, then read off the
/// column norms.
pub fn jacobi_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let work = if m.rows() >= m.cols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let (rows, cols) = (work.rows(), work.cols());
    let mut col: Vec<Vec<Complex64>> = (0..cols)
        .map(|c| (0..rows).map(|r| work.get(r, c)).collect())
        .collect();

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let app: f64 = col[p].iter().map(|z| z.norm_sqr()).sum();
                let aqq: f64 = col[q].iter().map(|z| z.norm_sqr()).sum();
                let apq: Complex64 = col[p]
                    .iter()
                    .zip(&col[q])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let mag = apq.norm();
                if mag <= 1e-30 + 1e-16 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                // Diagonalize [[app, |apq|], [|apq|, aqq]] after the phase
                // similarity diag(1, e^{-i arg apq}).
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..rows {
                    let vp = col[p][r];
                    let vq = col[q][r] * phase.conj();
                    col[p][r] = c * vp - s * vq;
                    col[q][r] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigmas: Vec<f64> = col
        .iter()
        .map(|column| column.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sigmas.sort_by(|a, b| b.total_cmp(a));
    sigmas
}

/// Standard normal via Box-Muller.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = loop {
        let v = rng.gen::<f64>();
        if v > 0.0 {
            break v;
        }
    };
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Dense complex Gaussian matrix.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols).map(|_| random_complex(rng)).collect();
    ComplexMatrix::new(rows, cols, entries).unwrap()
}

/// Random Hermitian matrix (A + A†)/2.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(rng, dim, dim);
    let mut h = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            h.set(r, c, 0.5 * (a.get(r, c) + a.get(c, r).conj()));
        }
    }
    h
}

/// Haar-ish random unitary via modified Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let g = random_matrix(rng, dim, dim);
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|c| (0..dim).map(|r| g.get(r, c)).collect())
        .collect();
    for i in 0..dim {
        for j in 0..i {
            let proj: Complex64 = cols[j]
                .iter()
                .zip(&cols[i])
                .map(|(a, b)| a.conj() * b)
                .sum();
            for r in 0..dim {
                let correction = proj * cols[j][r];
                cols[i][r] -= correction;
            }
        }
        let norm: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[i] {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for c in 0..dim {
        for r in 0..dim {
            u.set(r, c, cols[c][r]);
        }
    }
    u
}

/// Random normalized pure state with Gaussian amplitudes.
pub fn random_pure_state(rng: &mut ChaCha8Rng, n: usize) -> PureState {
    let dim = 1usize << n;
    let mut amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    PureState::new(n, amps).unwrap()
}

/// Random single-qubit state.
pub fn random_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let mut f = [random_complex(rng), random_complex(rng)];
    let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
    f[0] /= norm;
    f[1] /= norm;
    f
}

/// Random n-fold product state (fully separable, pure).
pub fn random_product_state(rng: &mut ChaCha8Rng, n: usize) -> PureState {
    let factors: Vec<[Complex64; 2]> = (0..n).map(|_| random_qubit(rng)).collect();
    let dim = 1usize << n;
    let mut amps = Vec::with_capacity(dim);
    for index in 0..dim {
        let mut amp = Complex64::new(1.0, 0.0);
        for (q, f) in factors.iter().enumerate() {
            amp *= f[(index >> (n - 1 - q)) & 1];
        }
        amps.push(amp);
    }
    PureState::new(n, amps).unwrap()
}

/// Random pure state product across the given subset (1-based indices):
/// a random state on the subset tensored with a random state on the rest,
/// interleaved back into original qubit positions.
pub fn random_bipartite_product(rng: &mut ChaCha8Rng, n: usize, subset: &[usize]) -> PureState {
    let k = subset.len();
    let left = random_pure_state_raw(rng, k);
    let right = random_pure_state_raw(rng, n - k);
    let complement: Vec<usize> = (1..=n).filter(|q| !subset.contains(q)).collect();
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (index, amp) in amps.iter_mut().enumerate() {
        let mut i = 0usize;
        for (pos, &q) in subset.iter().enumerate() {
            i |= ((index >> (n - q)) & 1) << (k - 1 - pos);
        }
        let mut j = 0usize;
        for (pos, &q) in complement.iter().enumerate() {
            j |= ((index >> (n - q)) & 1) << (n - k - 1 - pos);
        }
        *amp = left[i] * right[j];
    }
    PureState::new(n, amps).unwrap()
}

fn random_pure_state_raw(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    amps
}

/// Random weights in (0,1] summing to one.
pub fn random_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..count).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let sum: f64 = w.iter().sum();
    for x in &mut w {
        *x /= sum;
    }
    w
}

/// Random ensemble of arbitrary pure states.
pub fn random_ensemble(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> StateEnsemble {
    let weights = random_weights(rng, terms);
    let states = (0..terms).map(|_| random_pure_state(rng, n));
    StateEnsemble::new(weights.into_iter().zip(states).collect()).unwrap()
}

/// Dense witness matrix αI − |ref⟩⟨ref| (test oracle, small n only).
pub fn dense_witness_matrix(witness: &WitnessSpec) -> ComplexMatrix {
    let amps = witness.reference().amplitudes();
    let dim = amps.len();
    assert!(dim <= 64, "dense witness oracle is for n <= 6");
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut v = -amps[r] * amps[c].conj();
            if r == c {
                v += witness.alpha();
            }
            m.set(r, c, v);
        }
    }
    m
}

/// Tr(A·B) for dense matrices.
pub fn dense_trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols(), b.rows());
    let mut sum = Complex64::new(0.0, 0.0);
    for r in 0..a.rows() {
        for k in 0..a.cols() {
            sum += a.get(r, k) * b.get(k, r);
        }
    }
    sum
}
