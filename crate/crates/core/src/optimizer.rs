//! Closest-product-state search: maximize |⟨φ|ψ⟩|² over fully separable
//! pure states φ by alternating single-site updates (higher-order power
//! method), plus brute-force grid oracles for certification.
//!
//! Each local step replaces one factor with the normalized contraction of
//! the target against the remaining factors, which is the closed-form
//! optimum for that site; the overlap magnitude therefore never decreases
//! and no step size is needed. Restarts cover the nonconvex landscape.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::states::PureState;

/// Factor normalization tolerance.
pub const FACTOR_TOL: f64 = 1e-12;
/// Largest qubit count accepted by [`closest_product_alpha`].
pub const MAX_OPTIMIZER_QUBITS: usize = 16;
/// Full-grid oracle qubit cap.
pub const MAX_FULL_GRID_QUBITS: usize = 3;
/// Cap on the number of product states a full grid may enumerate; a 60-step
/// full grid on three qubits needs ~4.7e10 and must stay admissible.
pub const MAX_FULL_GRID_POINTS: u128 = 100_000_000_000;
/// Cap on the (θ, φ) grid of the symmetric-ansatz oracle.
pub const MAX_SYMMETRIC_GRID_POINTS: u128 = 100_000_000;

/// A pure product state, one normalized single-qubit factor per site.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<[Complex64; 2]>,
}

impl ProductState {
    pub fn new(factors: Vec<[Complex64; 2]>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidInput(
                "product states need at least two factors".into(),
            ));
        }
        for f in &factors {
            let norm_sq = f[0].norm_sqr() + f[1].norm_sqr();
            if (norm_sq - 1.0).abs() > FACTOR_TOL {
                return Err(Error::NotNormalized {
                    norm_sq,
                    tol: FACTOR_TOL,
                });
            }
        }
        Ok(Self { factors })
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[[Complex64; 2]] {
        &self.factors
    }

    /// Expand ⊗ factors into a dense pure state.
    pub fn to_pure_state(&self) -> Result<PureState> {
        let n = self.factors.len();
        let dim = 1usize << n;
        let mut amps = Vec::with_capacity(dim);
        for index in 0..dim {
            let mut amp = Complex64::new(1.0, 0.0);
            for (q, f) in self.factors.iter().enumerate() {
                amp *= f[(index >> (n - 1 - q)) & 1];
            }
            amps.push(amp);
        }
        PureState::new(n, amps)
    }
}

/// ⟨⊗factors|target⟩, conjugate-linear in the product state.
pub fn product_overlap(product: &ProductState, target: &PureState) -> Result<Complex64> {
    let n = target.n_qubits();
    if product.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: product.n_qubits(),
            right: n,
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (index, &amp) in target.amplitudes().iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut weight = Complex64::new(1.0, 0.0);
        for (q, f) in product.factors().iter().enumerate() {
            weight *= f[(index >> (n - 1 - q)) & 1].conj();
        }
        sum += weight * amp;
    }
    Ok(sum)
}

/// Search configuration; restart r draws from the ChaCha stream (seed, r),
/// so results are reproducible and independent of evaluation order.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: 1e-12,
            max_sweeps: 500,
            seed: 0,
        }
    }
}

/// Result of [`closest_product_alpha`].
#[derive(Debug, Clone)]
pub struct AlphaResult {
    /// Best squared overlap found.
    pub alpha: f64,
    /// Product state achieving `alpha`.
    pub argmax: ProductState,
    /// Sweeps used by the winning restart.
    pub sweeps_used: usize,
    /// False when any restart hit the sweep cap before its gain fell
    /// below tolerance.
    pub converged: bool,
    /// Final squared overlap per restart, in restart order.
    pub per_restart_values: Vec<f64>,
}

/// Outcome of a single alternating step.
#[derive(Debug, Clone)]
pub struct LocalUpdate {
    pub state: ProductState,
    /// True when the contraction vanished and the factor was left unchanged.
    pub degenerate: bool,
}

/// Replace the factor at `site` (1-based) with the normalized contraction of
/// the target against all other factors; the overlap magnitude never drops.
pub fn local_update(
    target: &PureState,
    product: &ProductState,
    site: usize,
) -> Result<LocalUpdate> {
    let n = target.n_qubits();
    if product.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: product.n_qubits(),
            right: n,
        });
    }
    if site == 0 || site > n {
        return Err(Error::InvalidInput(format!(
            "site {site} outside 1..={n}"
        )));
    }
    let site_shift = n - site;
    let mut v = [Complex64::new(0.0, 0.0); 2];
    for (index, &amp) in target.amplitudes().iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut weight = Complex64::new(1.0, 0.0);
        for (q, f) in product.factors().iter().enumerate() {
            if q + 1 == site {
                continue;
            }
            weight *= f[(index >> (n - 1 - q)) & 1].conj();
        }
        v[(index >> site_shift) & 1] += weight * amp;
    }
    let norm_sq = v[0].norm_sqr() + v[1].norm_sqr();
    if norm_sq <= f64::MIN_POSITIVE {
        return Ok(LocalUpdate {
            state: product.clone(),
            degenerate: true,
        });
    }
    let norm = norm_sq.sqrt();
    let mut factors = product.factors().to_vec();
    factors[site - 1] = [v[0] / norm, v[1] / norm];
    Ok(LocalUpdate {
        state: ProductState { factors },
        degenerate: false,
    })
}

fn random_factor(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    // uniform on the Bloch sphere
    let cos_theta: f64 = 1.0 - 2.0 * rng.gen::<f64>();
    let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    let c = ((1.0 + cos_theta) / 2.0).sqrt();
    let s = ((1.0 - cos_theta) / 2.0).sqrt();
    [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]
}

/// Maximize |⟨φ|target⟩|² over product states φ with seeded restarts of
/// round-robin local updates; ties between restarts break toward the lowest
/// restart index.
pub fn closest_product_alpha(target: &PureState, cfg: &OptimizerConfig) -> Result<AlphaResult> {
    let n = target.n_qubits();
    if n > MAX_OPTIMIZER_QUBITS {
        return Err(Error::QubitCountOutOfRange {
            n,
            min: 2,
            max: MAX_OPTIMIZER_QUBITS,
        });
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidInput("restarts must be at least 1".into()));
    }
    if !(cfg.tol.is_finite() && cfg.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if cfg.max_sweeps == 0 {
        return Err(Error::InvalidInput("max_sweeps must be at least 1".into()));
    }

    let mut per_restart_values = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(f64, ProductState, usize)> = None;
    let mut all_converged = true;

    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let mut product = ProductState {
            factors: (0..n).map(|_| random_factor(&mut rng)).collect(),
        };
        let mut prev = product_overlap(&product, target)?.norm();
        let mut sweeps = 0;
        let mut converged = false;
        while sweeps < cfg.max_sweeps {
            sweeps += 1;
            for site in 1..=n {
                product = local_update(target, &product, site)?.state;
            }
            let cur = product_overlap(&product, target)?.norm();
            if cur - prev < cfg.tol {
                prev = cur.max(prev);
                converged = true;
                break;
            }
            prev = cur;
        }
        if !converged {
            all_converged = false;
        }
        let value = prev * prev;
        per_restart_values.push(value);
        let better = match &best {
            Some((best_value, _, _)) => value > *best_value,
            None => true,
        };
        if better {
            best = Some((value, product, sweeps));
        }
    }

    let (alpha, argmax, sweeps_used) = best.expect("restarts >= 1");
    Ok(AlphaResult {
        alpha,
        argmax,
        sweeps_used,
        converged: all_converged,
        per_restart_values,
    })
}

/// Grid mode of the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// Exhaustive factor-by-factor grid (≤ 3 qubits).
    Full,
    /// A single (θ, φ) shared across all qubits.
    Symmetric,
}

/// Exhaustive lower bound for |⟨φ|target⟩|² on a grid of product states.
///
/// Factors are cos θ|0⟩ + e^{iφ} sin θ|1⟩ with θ on `grid_steps` points over
/// [0, π/2] and φ on `grid_steps` points over [0, 2π). Full mode enumerates
/// the grid independently per qubit; symmetric mode shares one point across
/// all qubits. Both lower-bound the true maximum.
pub fn brute_force_alpha_grid(
    target: &PureState,
    grid_steps: usize,
    mode: GridMode,
) -> Result<f64> {
    if grid_steps < 2 {
        return Err(Error::InvalidInput("grid_steps must be at least 2".into()));
    }
    let n = target.n_qubits();
    let per_qubit = (grid_steps as u128) * (grid_steps as u128);
    match mode {
        GridMode::Full => {
            if n > MAX_FULL_GRID_QUBITS {
                return Err(Error::GridQubitsOutOfRange {
                    n,
                    max: MAX_FULL_GRID_QUBITS,
                });
            }
            let points = per_qubit.pow(n as u32);
            if points > MAX_FULL_GRID_POINTS {
                return Err(Error::GridTooLarge {
                    points,
                    max: MAX_FULL_GRID_POINTS,
                });
            }
            Ok(full_grid_max(target, grid_steps))
        }
        GridMode::Symmetric => {
            if per_qubit > MAX_SYMMETRIC_GRID_POINTS {
                return Err(Error::GridTooLarge {
                    points: per_qubit,
                    max: MAX_SYMMETRIC_GRID_POINTS,
                });
            }
            Ok(symmetric_grid_max(target, grid_steps))
        }
    }
}

struct GridPoints {
    /// (cos θ, sin θ·e^{iφ}) per grid point, for contracting outer qubits.
    factors: Vec<(f64, Complex64)>,
    /// Per-θ leaf tables: cos²θ, sin²θ, 2·cosθ·sinθ.
    theta_cc: Vec<f64>,
    theta_ss: Vec<f64>,
    theta_cs2: Vec<f64>,
    phi_step: f64,
}

fn grid_points(grid_steps: usize) -> GridPoints {
    let phi_step = 2.0 * std::f64::consts::PI / grid_steps as f64;
    let mut factors = Vec::with_capacity(grid_steps * grid_steps);
    let mut theta_cc = Vec::with_capacity(grid_steps);
    let mut theta_ss = Vec::with_capacity(grid_steps);
    let mut theta_cs2 = Vec::with_capacity(grid_steps);
    for ti in 0..grid_steps {
        let theta = std::f64::consts::FRAC_PI_2 * ti as f64 / (grid_steps - 1) as f64;
        let (st, ct) = theta.sin_cos();
        theta_cc.push(ct * ct);
        theta_ss.push(st * st);
        theta_cs2.push(2.0 * ct * st);
        for pi in 0..grid_steps {
            let phi = phi_step * pi as f64;
            let (sp, cp) = phi.sin_cos();
            factors.push((ct, Complex64::new(st * cp, st * sp)));
        }
    }
    GridPoints {
        factors,
        theta_cc,
        theta_ss,
        theta_cs2,
        phi_step,
    }
}

/// Exact max over the last qubit's (θ, φ) grid of |c·v0 + e^{−iφ}s·v1|².
///
/// The value is a·cos²θ + b·sin²θ + 2cosθsinθ·(p·cosφ + q·sinφ) with
/// (a, b, p + iq) = (|v0|², |v1|², conj(v0)·v1). Because 2cosθsinθ ≥ 0 on
/// [0, π/2], the inner φ-grid maximum factors out: it is attained at the
/// grid angle nearest to arg(p + iq), so only the θ axis needs scanning.
fn leaf_max(points: &GridPoints, v0: Complex64, v1: Complex64) -> f64 {
    let a = v0.norm_sqr();
    let b = v1.norm_sqr();
    let pq = v0.conj() * v1;
    let radius = pq.norm();
    let cross = if radius > 0.0 {
        let delta = pq.arg();
        let nearest = (delta / points.phi_step).round() * points.phi_step;
        radius * (delta - nearest).cos()
    } else {
        0.0
    };
    let mut best = f64::NEG_INFINITY;
    for i in 0..points.theta_cc.len() {
        let val = a * points.theta_cc[i] + b * points.theta_ss[i] + cross * points.theta_cs2[i];
        if val > best {
            best = val;
        }
    }
    best
}

/// Recursive exhaustive scan: contract the leading qubit with each grid
/// factor, recurse on the remainder, and close the last qubit with the
/// quadratic-form leaf table. The two-qubit tail stays on the stack.
fn full_grid_scan(points: &GridPoints, amps: &[Complex64]) -> f64 {
    if amps.len() == 2 {
        return leaf_max(points, amps[0], amps[1]);
    }
    if amps.len() == 4 {
        let mut best = f64::NEG_INFINITY;
        for &(ct, st_phase) in &points.factors {
            // ⟨factor| on the leading qubit: c·amp0 + e^{−iφ}s·amp1
            let st_conj = st_phase.conj();
            let v0 = ct * amps[0] + st_conj * amps[2];
            let v1 = ct * amps[1] + st_conj * amps[3];
            let val = leaf_max(points, v0, v1);
            if val > best {
                best = val;
            }
        }
        return best;
    }
    let half = amps.len() / 2;
    let (hi, lo) = amps.split_at(half);
    let mut reduced = vec![Complex64::new(0.0, 0.0); half];
    let mut best = f64::NEG_INFINITY;
    for &(ct, st_phase) in &points.factors {
        let st_conj = st_phase.conj();
        for i in 0..half {
            reduced[i] = ct * hi[i] + st_conj * lo[i];
        }
        let val = full_grid_scan(points, &reduced);
        if val > best {
            best = val;
        }
    }
    best
}

fn full_grid_max(target: &PureState, grid_steps: usize) -> f64 {
    let points = grid_points(grid_steps);
    full_grid_scan(&points, target.amplitudes())
}

fn symmetric_grid_max(target: &PureState, grid_steps: usize) -> f64 {
    let n = target.n_qubits();
    // Amplitude sums per excitation count collapse the overlap to O(n)
    // work per grid point.
    let mut sums = vec![Complex64::new(0.0, 0.0); n + 1];
    for (index, &amp) in target.amplitudes().iter().enumerate() {
        sums[index.count_ones() as usize] += amp;
    }
    let points = grid_points(grid_steps);
    let mut best = f64::NEG_INFINITY;
    for &(ct, st_phase) in &points.factors {
        let st_conj = st_phase.conj();
        let mut overlap = Complex64::new(0.0, 0.0);
        for (k, sum) in sums.iter().enumerate() {
            overlap += ct.powi((n - k) as i32) * st_conj.powu(k as u32) * sum;
        }
        let val = overlap.norm_sqr();
        if val > best {
            best = val;
        }
    }
    best
}
