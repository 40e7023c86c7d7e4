//! Matrix-form NTT: `a' = W_NTT a` and `c = n^-1 W_INTT c'` over Z_q.
//!
//! Two builders produce bit-identical matrices. The naive builder raises
//! psi to `2ij + j` for every entry; the LUT builder computes the 2n powers
//! of psi and psi^-1 once and gathers them through a shared exponent table
//! reduced mod 2n (psi has order exactly 2n, so the reduction is lossless).

use rayon::prelude::*;

use crate::error::{NttError, Result};
use crate::modarith::{mod_mul, mod_pow, NttParams};
use crate::poly::{same_ring, NttVector, Polynomial};

/// Rows below this many entries are not worth splitting across workers.
const PAR_MIN_ENTRIES: usize = 1 << 14;

/// Row-major matrix of residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ResidueMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(NttError::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(NttError::LengthMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[u32]>::to_vec)
            .collect()
    }
}

/// `entries[i][j] = (2ij + j) mod 2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentTable {
    n: usize,
    entries: Vec<u32>,
}

impl ExponentTable {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "ring degree must be a power of two");
        let mask = 2 * n as u64 - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n as u64 {
            entries.extend((0..n as u64).map(|j| ((2 * i * j + j) & mask) as u32));
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

pub fn build_exponent_table(n: usize) -> ExponentTable {
    ExponentTable::new(n)
}

/// `table[k] = base^k mod q` for k in [0, 2n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerLut {
    base: u32,
    table: Vec<u32>,
}

impl PowerLut {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn get(&self, exponent: u32) -> u32 {
        self.table[exponent as usize]
    }
}

pub fn build_lut(base: u32, params: &NttParams) -> PowerLut {
    let q = params.q();
    let mut table = Vec::with_capacity(2 * params.n());
    let mut power = 1 % q;
    for _ in 0..2 * params.n() {
        table.push(power);
        power = mod_mul(power, base, q);
    }
    PowerLut { base, table }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformMatrices {
    params: NttParams,
    /// `w_ntt[i][j] = psi^(2ij + j)`.
    w_ntt: ResidueMatrix,
    /// `w_intt[i][j] = psi^-(2ij + i)`.
    w_intt: ResidueMatrix,
}

impl TransformMatrices {
    pub fn params(&self) -> &NttParams {
        &self.params
    }

    pub fn w_ntt(&self) -> &ResidueMatrix {
        &self.w_ntt
    }

    pub fn w_intt(&self) -> &ResidueMatrix {
        &self.w_intt
    }

    /// Bytes of both matrices plus one length-n output buffer.
    pub fn accounted_bytes(&self) -> u64 {
        let word = std::mem::size_of::<u32>() as u64;
        (self.w_ntt.data.len() + self.w_intt.data.len() + self.params.n()) as u64 * word
    }
}

/// One `mod_pow` per entry with the unreduced exponent, as in the direct
/// construction. Serial; Theta(n^2 log n) multiplications.
pub fn build_matrices_naive(params: &NttParams) -> TransformMatrices {
    let n = params.n();
    let q = params.q();
    let (psi, psi_inv) = (params.psi(), params.psi_inv());
    let mut w_ntt = Vec::with_capacity(n * n);
    let mut w_intt = Vec::with_capacity(n * n);
    for i in 0..n as u64 {
        for j in 0..n as u64 {
            w_ntt.push(mod_pow(psi, 2 * i * j + j, q));
        }
    }
    for i in 0..n as u64 {
        for j in 0..n as u64 {
            w_intt.push(mod_pow(psi_inv, 2 * i * j + i, q));
        }
    }
    TransformMatrices {
        params: *params,
        w_ntt: ResidueMatrix::from_vec(n, n, w_ntt).expect("n x n"),
        w_intt: ResidueMatrix::from_vec(n, n, w_intt).expect("n x n"),
    }
}

pub fn build_matrices_lut(params: &NttParams) -> TransformMatrices {
    let exponents = build_exponent_table(params.n());
    let lut = build_lut(params.psi(), params);
    let lut_inv = build_lut(params.psi_inv(), params);
    build_matrices_from_luts(params, &exponents, &lut, &lut_inv)
}

/// Gathers both matrices from one exponent table.
///
/// `W_NTT = LUT_psi[exponents]`. The inverse pattern `2ij + i` is the
/// transpose of `2ij + j`, so `W_INTT = (LUT_psi_inv[exponents])^T`, which
/// is gathered directly as `W_INTT[i][j] = LUT_psi_inv[exponents[j][i]]`.
pub fn build_matrices_from_luts(
    params: &NttParams,
    exponents: &ExponentTable,
    lut: &PowerLut,
    lut_inv: &PowerLut,
) -> TransformMatrices {
    let n = params.n();
    assert_eq!(
        exponents.n(),
        n,
        "exponent table built for a different ring"
    );
    let mut w_ntt = vec![0u32; n * n];
    let mut w_intt = vec![0u32; n * n];
    let min_rows = (PAR_MIN_ENTRIES / n).max(1);
    w_ntt
        .par_chunks_mut(n)
        .with_min_len(min_rows)
        .enumerate()
        .for_each(|(i, out)| {
            for (o, &e) in out.iter_mut().zip(exponents.row(i)) {
                *o = lut.get(e);
            }
        });
    w_intt
        .par_chunks_mut(n)
        .with_min_len(min_rows)
        .enumerate()
        .for_each(|(i, out)| {
            for (j, o) in out.iter_mut().enumerate() {
                *o = lut_inv.get(exponents.get(j, i));
            }
        });
    TransformMatrices {
        params: *params,
        w_ntt: ResidueMatrix::from_vec(n, n, w_ntt).expect("n x n"),
        w_intt: ResidueMatrix::from_vec(n, n, w_intt).expect("n x n"),
    }
}

/// How a matrix-vector row sum is kept from overflowing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Accumulation {
    /// Every product is reduced before it is added; a row sum stays below
    /// n (q - 1) < 2^47 and fits `u64`.
    PerProduct,
    /// Raw products (< 2^62) are summed in `u128` and reduced once per row;
    /// the sum stays below n (q - 1)^2 < 2^78.
    Deferred,
}

fn check_matvec(m: &ResidueMatrix, v: &[u32]) -> Result<()> {
    if m.cols != v.len() {
        return Err(NttError::LengthMismatch {
            expected: m.cols,
            got: v.len(),
        });
    }
    Ok(())
}

fn row_dot(row: &[u32], v: &[u32], q: u32, accumulation: Accumulation) -> u32 {
    match accumulation {
        Accumulation::PerProduct => {
            let sum: u64 = row
                .iter()
                .zip(v)
                .map(|(&x, &y)| mod_mul(x, y, q) as u64)
                .sum();
            (sum % q as u64) as u32
        }
        Accumulation::Deferred => {
            let sum: u128 = row
                .iter()
                .zip(v)
                .map(|(&x, &y)| (x as u64 * y as u64) as u128)
                .sum();
            (sum % q as u128) as u32
        }
    }
}

/// Exact `m v mod q`, rows distributed across the rayon pool. The result
/// does not depend on how rows are scheduled.
pub fn matvec_mod_with(
    m: &ResidueMatrix,
    v: &[u32],
    q: u32,
    accumulation: Accumulation,
) -> Result<Vec<u32>> {
    check_matvec(m, v)?;
    if m.cols == 0 {
        return Ok(vec![0; m.rows]);
    }
    let min_rows = (PAR_MIN_ENTRIES / m.cols).max(1);
    Ok(m.data
        .par_chunks_exact(m.cols)
        .with_min_len(min_rows)
        .map(|row| row_dot(row, v, q, accumulation))
        .collect())
}

pub fn matvec_mod(m: &ResidueMatrix, v: &[u32], q: u32) -> Result<Vec<u32>> {
    matvec_mod_with(m, v, q, Accumulation::PerProduct)
}

/// Overflow-safe wide-accumulator variant for large moduli.
pub fn matvec_mod_wide(m: &ResidueMatrix, v: &[u32], q: u32) -> Result<Vec<u32>> {
    matvec_mod_with(m, v, q, Accumulation::Deferred)
}

pub fn matrix_forward_with(
    a: &Polynomial,
    m: &TransformMatrices,
    accumulation: Accumulation,
) -> Result<NttVector> {
    same_ring(a.params(), &m.params)?;
    let values = matvec_mod_with(&m.w_ntt, a.coeffs(), m.params.q(), accumulation)?;
    Ok(NttVector::from_reduced(values, m.params))
}

pub fn matrix_inverse_with(
    a_prime: &NttVector,
    m: &TransformMatrices,
    accumulation: Accumulation,
) -> Result<Polynomial> {
    same_ring(a_prime.params(), &m.params)?;
    let q = m.params.q();
    let n_inv = m.params.n_inv();
    let mut coeffs = matvec_mod_with(&m.w_intt, a_prime.values(), q, accumulation)?;
    for c in &mut coeffs {
        *c = mod_mul(*c, n_inv, q);
    }
    Ok(Polynomial::from_reduced(coeffs, m.params))
}

pub fn matrix_polymul_with(
    a: &Polynomial,
    b: &Polynomial,
    m: &TransformMatrices,
    accumulation: Accumulation,
) -> Result<Polynomial> {
    same_ring(a.params(), b.params())?;
    let fa = matrix_forward_with(a, m, accumulation)?;
    let fb = matrix_forward_with(b, m, accumulation)?;
    matrix_inverse_with(&fa.pointwise(&fb)?, m, accumulation)
}

pub fn matrix_forward(a: &Polynomial, m: &TransformMatrices) -> Result<NttVector> {
    matrix_forward_with(a, m, Accumulation::PerProduct)
}

pub fn matrix_inverse(a_prime: &NttVector, m: &TransformMatrices) -> Result<Polynomial> {
    matrix_inverse_with(a_prime, m, Accumulation::PerProduct)
}

pub fn matrix_polymul(a: &Polynomial, b: &Polynomial, m: &TransformMatrices) -> Result<Polynomial> {
    matrix_polymul_with(a, b, m, Accumulation::PerProduct)
}
