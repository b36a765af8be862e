//! Entanglement witnesses for N-qubit W states.
//!
//! The witness W_n = c_n·I − |W_n⟩⟨W_n| with c_n = ((n−1)/n)^(n−1) detects
//! entanglement through one scalar: Tr(W_n ρ) is nonnegative on fully
//! separable states, bounded below by c_n − (n−k)/n on each biseparable
//! class D_k, and confined to [c_n − 1, 1 − c_n] overall. This crate builds
//! the witness, evaluates it on pure states, ensembles and small dense
//! density matrices, classifies the result against the bound hierarchy, and
//! certifies the closed-form claims (Schmidt coefficients, overlap maxima,
//! noise thresholds) with independent numerical routes.
//!
//! Everything is deterministic: random searches draw from per-restart
//! ChaCha streams derived from an explicit seed.

pub mod bipartition;
pub mod document;
pub mod error;
pub mod families;
pub mod linalg;
pub mod optimizer;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use states::{DenseDensity, PureState, StateEnsemble};
pub use witness::{BoundsTable, Verdict, WitnessSpec};
