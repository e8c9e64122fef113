//! Hypergeometric functions over finite fields and traces of Frobenius.
//!
//! - [`field`]: prime-power fields with log/exp tables and the trace map
//! - [`characters`]: the additive character `θ` and multiplicative `T^m`
//! - [`char_sums`]: Gauss and Jacobi sums, Greene binomials, identity checks
//! - [`hypergeo`]: Greene's `{n+1}F_n`
//! - [`curves`]: point counting and the `₂F₁` trace formulas
//! - [`verify`], [`identities`], [`bench`]: sweeps and reports behind the CLI

pub mod bench;
pub mod char_sums;
pub mod characters;
pub mod curves;
pub mod dft;
pub mod exec;
pub mod field;
pub mod hypergeo;
pub mod identities;
pub mod verify;

pub use char_sums::{
    check_identity, gauss_sum_table, gauss_sums, greene_binomial, jacobi_sum, jacobi_sum_direct,
    GaussMethod, GaussSumTable, Identity,
};
pub use characters::{additive_char, check_orthogonality, mult_char, CharIndex, Orthogonality};
pub use curves::{
    count_points, shift_substitution, trace_naive, trace_thm_1_1, trace_thm_1_2, trace_thm_3_1,
    trace_thm_3_2, CurveSpec, Method, TraceError, TraceFormulas, TraceReport,
};
pub use exec::Exec;
pub use field::{Elem, Field, FieldError};
pub use hypergeo::{hyper_2f1, hyper_npfn, HyperKernel, HyperSpec};
