//! O(n log n) negacyclic NTT with the psi-weighting merged into the twiddles.
//!
//! The forward transform bit-reverses its input and runs log2(n)
//! decimation-in-time stages. A stage over blocks of length L combines the
//! two half-length negacyclic transforms E and O of a block as
//!
//! ```text
//! A[i]       = E[i] + psi^{(n/L)(2i+1)} * O[i]
//! A[i + L/2] = E[i] - psi^{(n/L)(2i+1)} * O[i]
//! ```
//!
//! so the output lands in natural order and equals `W_NTT * a`. The inverse
//! runs the mirrored Gentleman-Sande stages, bit-reverses, then scales by n^-1.

use crate::error::{NttError, Result};
use crate::modarith::{mod_add, mod_mul, mod_pow, mod_sub, NttParams};
use crate::poly::{same_ring, NttVector, Polynomial};

/// Index permutation reversing the low `log2(n)` bits.
pub fn bit_reverse_table(n: usize) -> Result<Vec<u32>> {
    if !n.is_power_of_two() {
        return Err(NttError::NotPowerOfTwo { n: n as u64 });
    }
    let bits = n.trailing_zeros();
    Ok((0..n as u32)
        .map(|i| {
            if bits == 0 {
                0
            } else {
                i.reverse_bits() >> (32 - bits)
            }
        })
        .collect())
}

pub fn bit_reverse_permutation<T: Copy>(v: &[T]) -> Result<Vec<T>> {
    let table = bit_reverse_table(v.len())?;
    Ok(table.iter().map(|&j| v[j as usize]).collect())
}

/// Precomputed twiddles and bit-reversal indices for one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastNttTables {
    params: NttParams,
    /// Stage with half-length h occupies `[h - 1, 2h - 1)`; n - 1 entries total.
    fwd_twiddles: Vec<u32>,
    inv_twiddles: Vec<u32>,
    bitrev: Vec<u32>,
}

impl FastNttTables {
    pub fn new(params: &NttParams) -> Self {
        let n = params.n();
        let q = params.q();
        let mut fwd_twiddles = Vec::with_capacity(n - 1);
        let mut inv_twiddles = Vec::with_capacity(n - 1);
        let mut half = 1;
        while half < n {
            // Stage root psi^(n/L) with L = 2 * half.
            let step = (n / (2 * half)) as u64;
            let root = mod_pow(params.psi(), step, q);
            let root_inv = mod_pow(params.psi_inv(), step, q);
            let root_sq = mod_mul(root, root, q);
            let root_inv_sq = mod_mul(root_inv, root_inv, q);
            let (mut w, mut w_inv) = (root, root_inv);
            for _ in 0..half {
                fwd_twiddles.push(w);
                inv_twiddles.push(w_inv);
                w = mod_mul(w, root_sq, q);
                w_inv = mod_mul(w_inv, root_inv_sq, q);
            }
            half *= 2;
        }
        Self {
            params: *params,
            fwd_twiddles,
            inv_twiddles,
            bitrev: bit_reverse_table(n).expect("n is a power of two"),
        }
    }

    pub fn params(&self) -> &NttParams {
        &self.params
    }

    pub fn fwd_twiddles(&self) -> &[u32] {
        &self.fwd_twiddles
    }

    pub fn inv_twiddles(&self) -> &[u32] {
        &self.inv_twiddles
    }

    pub fn bitrev(&self) -> &[u32] {
        &self.bitrev
    }

    /// Bytes held by the tables plus the one working buffer a transform allocates.
    pub fn accounted_bytes(&self) -> u64 {
        let word = std::mem::size_of::<u32>() as u64;
        let tables = (self.fwd_twiddles.len() + self.inv_twiddles.len() + self.bitrev.len()) as u64;
        (tables + self.params.n() as u64) * word
    }

    fn permute(&self, v: &[u32]) -> Vec<u32> {
        self.bitrev.iter().map(|&j| v[j as usize]).collect()
    }
}

/// Runs the forward stages in place; returns the number of butterflies.
pub(crate) fn forward_stages(x: &mut [u32], tables: &FastNttTables) -> usize {
    let n = x.len();
    let q = tables.params.q();
    let mut butterflies = 0;
    let mut half = 1;
    while half < n {
        let tw = &tables.fwd_twiddles[half - 1..2 * half - 1];
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let t = mod_mul(w, *v, q);
                *v = mod_sub(*u, t, q);
                *u = mod_add(*u, t, q);
                butterflies += 1;
            }
        }
        half *= 2;
    }
    butterflies
}

pub(crate) fn inverse_stages(x: &mut [u32], tables: &FastNttTables) -> usize {
    let n = x.len();
    let q = tables.params.q();
    let mut butterflies = 0;
    let mut half = n / 2;
    while half >= 1 {
        let tw = &tables.inv_twiddles[half - 1..2 * half - 1];
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
                let (a, b) = (*u, *v);
                *u = mod_add(a, b, q);
                *v = mod_mul(mod_sub(a, b, q), w, q);
                butterflies += 1;
            }
        }
        half /= 2;
    }
    butterflies
}

pub fn fast_forward(a: &Polynomial, tables: &FastNttTables) -> Result<NttVector> {
    same_ring(a.params(), &tables.params)?;
    let mut x = tables.permute(a.coeffs());
    forward_stages(&mut x, tables);
    Ok(NttVector::from_reduced(x, tables.params))
}

pub fn fast_inverse(a_prime: &NttVector, tables: &FastNttTables) -> Result<Polynomial> {
    same_ring(a_prime.params(), &tables.params)?;
    let q = tables.params.q();
    let mut x = a_prime.values().to_vec();
    inverse_stages(&mut x, tables);
    let n_inv = tables.params.n_inv();
    let coeffs = tables
        .bitrev
        .iter()
        .map(|&j| mod_mul(x[j as usize], n_inv, q))
        .collect();
    Ok(Polynomial::from_reduced(coeffs, tables.params))
}

pub fn fast_polymul(a: &Polynomial, b: &Polynomial, tables: &FastNttTables) -> Result<Polynomial> {
    same_ring(a.params(), b.params())?;
    let product = fast_forward(a, tables)?.pointwise(&fast_forward(b, tables)?)?;
    fast_inverse(&product, tables)
}
