//! Number-theoretic transforms for negacyclic polynomial multiplication in
//! Z_q[x]/(x^n + 1).
//!
//! Four engines share one interface ([`NttEngine`]):
//!
//! * `fast`: O(n log n) butterfly transform, the CPU reference;
//! * `matrix_naive`: `W_NTT`/`W_INTT` built by per-entry exponentiation;
//! * `matrix_lut`: the same matrices gathered from power lookup tables;
//! * `matrix_wide`: LUT matrices with deferred wide accumulation.
//!
//! [`poly::nwc_schoolbook`] is the O(n^2) oracle all of them are checked
//! against, and [`bench`] measures them.

pub mod bench;
pub mod engine;
pub mod error;
pub mod fast;
pub mod matrix;
pub mod modarith;
pub mod poly;

pub use engine::{make_engine, make_engine_for, Engine, EngineKind, NttEngine};
pub use error::{NttError, Result};
pub use modarith::{build_params, NttParams};
pub use poly::{nwc_schoolbook, random_polynomial, NttVector, PolyFile, Polynomial};
