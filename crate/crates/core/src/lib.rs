//! Counting and classifying square-tiled tori.
//!
//! An `n`-square-tiled torus is an index-`n` sublattice of `Z^2`; it is
//! cyclic when the quotient group is cyclic. There are `sigma(n)` of them
//! in total and `psi(n) = n * prod_{p | n} (1 + 1/p)` cyclic ones.
//!
//! - [`arith`]: exact `phi`, `psi`, `sigma`, square-free indicator, the two
//!   alternate sums for `psi`, and a linear sieve.
//! - [`lattice`]: generator pairs, the `(w, h, t)` cylinder form, content,
//!   Smith shape, enumeration at fixed index and the permutation encoding.
//! - [`asymptotics`]: `rho = psi / sigma`, its extremal behaviour and the
//!   mean-order ratio against `zeta(2)` and `zeta(4)`.

pub mod arith;
pub mod asymptotics;
pub mod lattice;

pub use arith::{
    dedekind_psi, divisors, euler_phi, factorize, psi_prime, psi_via_cylinders,
    sieve_multiplicative, sigma, squarefree_indicator, ArithError, MultiplicativeTables,
    PrimeFactorization,
};
pub use asymptotics::{
    extremal_sequence_rho, partial_sums, qd2_partial_sum, rho, rho_factored, sweep_records,
    AsymptoticsError, RatioValue, SweepRecord, ZetaConstants,
};
pub use lattice::{
    content, enumerate_lattices, hnf_reduce, is_cyclic, is_primitive, lattice_index,
    random_unimodular, smith_shape, to_permutation_pair, GeneratorPair, HnfLattice,
    LatticeError, PermutationPair, QuotientShape,
};
