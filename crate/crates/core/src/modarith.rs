//! Exact arithmetic over Z_q for primes q < 2^31.
//!
//! Residues are stored as `u32`; every product is formed in `u64`, which
//! cannot wrap because (q - 1)^2 < 2^62.

use serde::{Deserialize, Serialize};

use crate::error::{NttError, Result};

/// Exclusive upper bound on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 31;

#[inline(always)]
pub fn mod_mul(x: u32, y: u32, q: u32) -> u32 {
    ((x as u64 * y as u64) % q as u64) as u32
}

#[inline(always)]
pub fn mod_add(x: u32, y: u32, q: u32) -> u32 {
    // x + y < 2^32 since both are below 2^31.
    let s = x + y;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline(always)]
pub fn mod_sub(x: u32, y: u32, q: u32) -> u32 {
    if x >= y {
        x - y
    } else {
        q - y + x
    }
}

#[inline(always)]
pub fn mod_neg(x: u32, q: u32) -> u32 {
    if x == 0 {
        0
    } else {
        q - x
    }
}

/// Square-and-multiply, consuming the exponent one bit at a time.
pub fn mod_pow(base: u32, mut exp: u64, q: u32) -> u32 {
    let mut result = 1 % q;
    let mut base = base % q;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mod_mul(result, base, q);
        }
        base = mod_mul(base, base, q);
        exp >>= 1;
    }
    result
}

/// Inverse via Fermat's little theorem: x^-1 = x^(q-2) mod q. Requires q prime.
pub fn mod_inv(x: u32, q: u32) -> Result<u32> {
    if x.is_multiple_of(q) {
        return Err(NttError::NoInverse);
    }
    Ok(mod_pow(x, q as u64 - 2, q))
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod_u64(result, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller-Rabin. The first twelve primes as witnesses are
/// exact for every n < 3.3 * 10^24, which covers all of u64.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Checks that Z_q[x]/(x^n + 1) admits a negacyclic NTT with supported widths.
pub fn validate_params(q: u64, n: u64) -> Result<()> {
    if !(2..MAX_MODULUS).contains(&q) {
        return Err(NttError::ModulusOutOfRange { q });
    }
    if !is_prime(q) {
        return Err(NttError::CompositeModulus { q });
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(NttError::NotPowerOfTwo { n });
    }
    if !(q - 1).is_multiple_of(2 * n) {
        return Err(NttError::NoRootOfUnity {
            two_n: 2 * n,
            q_minus_one: q - 1,
        });
    }
    Ok(())
}

/// Smallest psi in [2, q) with psi^n = -1 (mod q).
///
/// Because n is a power of two, psi^n = -1 forces the multiplicative order
/// of psi to be exactly 2n, so psi is a primitive 2n-th root of unity.
pub fn find_psi(q: u32, n: usize) -> Result<u32> {
    validate_params(q as u64, n as u64)?;
    let minus_one = q - 1;
    (2..q)
        .find(|&x| mod_pow(x, n as u64, q) == minus_one)
        .ok_or(NttError::NoRootOfUnity {
            two_n: 2 * n as u64,
            q_minus_one: q as u64 - 1,
        })
}

/// Ring context shared by every engine built over Z_q[x]/(x^n + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NttParams {
    q: u32,
    n: usize,
    psi: u32,
    psi_inv: u32,
    n_inv: u32,
}

impl NttParams {
    pub fn new(q: u64, n: u64) -> Result<Self> {
        build_params(q, n)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn psi(&self) -> u32 {
        self.psi
    }

    pub fn psi_inv(&self) -> u32 {
        self.psi_inv
    }

    pub fn n_inv(&self) -> u32 {
        self.n_inv
    }

    pub fn log_n(&self) -> u32 {
        self.n.trailing_zeros()
    }
}

pub fn build_params(q: u64, n: u64) -> Result<NttParams> {
    validate_params(q, n)?;
    let (q, n) = (q as u32, n as usize);
    let psi = find_psi(q, n)?;
    Ok(NttParams {
        q,
        n,
        psi,
        psi_inv: mod_inv(psi, q)?,
        n_inv: mod_inv((n as u64 % q as u64) as u32, q)?,
    })
}
