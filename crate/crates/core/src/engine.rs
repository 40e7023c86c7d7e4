//! Uniform interface over the four transform strategies.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fast::{fast_forward, fast_inverse, FastNttTables};
use crate::matrix::{
    build_matrices_lut, build_matrices_naive, matrix_forward_with, matrix_inverse_with,
    Accumulation, TransformMatrices,
};
use crate::modarith::NttParams;
use crate::poly::{same_ring, NttVector, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    /// Butterfly transform, the CPU reference.
    Fast,
    /// Matrix form, entries by per-entry exponentiation.
    MatrixNaive,
    /// Matrix form, entries gathered from power lookup tables.
    MatrixLut,
    /// LUT-built matrices with wide deferred accumulation.
    MatrixWide,
}

impl EngineKind {
    pub const ALL: [EngineKind; 4] = [
        EngineKind::Fast,
        EngineKind::MatrixNaive,
        EngineKind::MatrixLut,
        EngineKind::MatrixWide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Fast => "fast",
            EngineKind::MatrixNaive => "matrix_naive",
            EngineKind::MatrixLut => "matrix_lut",
            EngineKind::MatrixWide => "matrix_wide",
        }
    }

    pub fn is_matrix(self) -> bool {
        self != EngineKind::Fast
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown engine `{0}` (expected fast, matrix_naive, matrix_lut or matrix_wide)")]
pub struct UnknownEngine(pub String);

impl FromStr for EngineKind {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        EngineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownEngine(s.to_string()))
    }
}

/// Closed-form byte count for an engine's persistent tables plus the
/// per-transform output buffer, with 4-byte residues:
/// fast = 4 (2(n-1) + n + n), matrix engines = 4 (2n^2 + n).
pub fn accounted_bytes(kind: EngineKind, n: usize) -> u64 {
    let n = n as u64;
    match kind {
        EngineKind::Fast => 4 * (2 * (n - 1) + 2 * n),
        _ => 4 * (2 * n * n + n),
    }
}

pub trait NttEngine: Send + Sync {
    fn kind(&self) -> EngineKind;
    fn params(&self) -> &NttParams;
    fn forward(&self, a: &Polynomial) -> Result<NttVector>;
    fn inverse(&self, a_prime: &NttVector) -> Result<Polynomial>;

    fn polymul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        same_ring(a.params(), b.params())?;
        let product = self.forward(a)?.pointwise(&self.forward(b)?)?;
        self.inverse(&product)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tables {
    Fast(FastNttTables),
    Matrix(TransformMatrices, Accumulation),
}

/// An engine with its offline phase done.
#[derive(Debug, Clone)]
pub struct Engine {
    kind: EngineKind,
    params: NttParams,
    tables: Tables,
    precompute: Duration,
}

impl PartialEq for Engine {
    /// Compares table contents; the recorded construction time is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.params == other.params && self.tables == other.tables
    }
}

impl Engine {
    pub fn precompute_time(&self) -> Duration {
        self.precompute
    }

    pub fn accounted_bytes(&self) -> u64 {
        match &self.tables {
            Tables::Fast(t) => t.accounted_bytes(),
            Tables::Matrix(m, _) => m.accounted_bytes(),
        }
    }

    pub fn matrices(&self) -> Option<&TransformMatrices> {
        match &self.tables {
            Tables::Matrix(m, _) => Some(m),
            Tables::Fast(_) => None,
        }
    }

    pub fn fast_tables(&self) -> Option<&FastNttTables> {
        match &self.tables {
            Tables::Fast(t) => Some(t),
            Tables::Matrix(..) => None,
        }
    }
}

impl NttEngine for Engine {
    fn kind(&self) -> EngineKind {
        self.kind
    }

    fn params(&self) -> &NttParams {
        &self.params
    }

    fn forward(&self, a: &Polynomial) -> Result<NttVector> {
        match &self.tables {
            Tables::Fast(t) => fast_forward(a, t),
            Tables::Matrix(m, acc) => matrix_forward_with(a, m, *acc),
        }
    }

    fn inverse(&self, a_prime: &NttVector) -> Result<Polynomial> {
        match &self.tables {
            Tables::Fast(t) => fast_inverse(a_prime, t),
            Tables::Matrix(m, acc) => matrix_inverse_with(a_prime, m, *acc),
        }
    }
}

pub fn make_engine(kind: EngineKind, params: &NttParams) -> Engine {
    let start = Instant::now();
    let tables = match kind {
        EngineKind::Fast => Tables::Fast(FastNttTables::new(params)),
        EngineKind::MatrixNaive => {
            Tables::Matrix(build_matrices_naive(params), Accumulation::PerProduct)
        }
        EngineKind::MatrixLut => {
            Tables::Matrix(build_matrices_lut(params), Accumulation::PerProduct)
        }
        EngineKind::MatrixWide => {
            Tables::Matrix(build_matrices_lut(params), Accumulation::Deferred)
        }
    };
    Engine {
        kind,
        params: *params,
        tables,
        precompute: start.elapsed(),
    }
}

/// Validates `(q, n)` and builds the engine.
pub fn make_engine_for(kind: EngineKind, q: u64, n: u64) -> Result<Engine> {
    Ok(make_engine(kind, &NttParams::new(q, n)?))
}
