//! Elements of Z_q[x]/(x^n + 1) and the schoolbook negacyclic product.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NttError, Result};
use crate::modarith::{mod_add, mod_mul, mod_sub, NttParams};

fn check_reduced(values: &[u32], params: &NttParams) -> Result<()> {
    if values.len() != params.n() {
        return Err(NttError::LengthMismatch {
            expected: params.n(),
            got: values.len(),
        });
    }
    match values.iter().position(|&c| c >= params.q()) {
        Some(index) => Err(NttError::CoefficientOutOfRange {
            index,
            value: values[index] as u64,
            q: params.q(),
        }),
        None => Ok(()),
    }
}

/// Coefficient vector of a ring element; `coeffs[i]` multiplies x^i.
///
/// Coefficients are always canonical residues in [0, q); constructors
/// reject unreduced input instead of reducing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<u32>,
    params: NttParams,
}

impl Polynomial {
    pub fn new(coeffs: Vec<u32>, params: NttParams) -> Result<Self> {
        check_reduced(&coeffs, &params)?;
        Ok(Self { coeffs, params })
    }

    pub fn zero(params: NttParams) -> Self {
        Self {
            coeffs: vec![0; params.n()],
            params,
        }
    }

    /// The monomial x^k for k < n.
    pub fn monomial(k: usize, params: NttParams) -> Self {
        let mut p = Self::zero(params);
        p.coeffs[k] = 1;
        p
    }

    pub(crate) fn from_reduced(coeffs: Vec<u32>, params: NttParams) -> Self {
        debug_assert!(check_reduced(&coeffs, &params).is_ok());
        Self { coeffs, params }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn params(&self) -> &NttParams {
        &self.params
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        same_ring(&self.params, &other.params)?;
        let q = self.params.q();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| mod_add(x, y, q))
            .collect();
        Ok(Self::from_reduced(coeffs, self.params))
    }

    pub fn scale(&self, factor: u32) -> Self {
        let q = self.params.q();
        let factor = factor % q;
        let coeffs = self.coeffs.iter().map(|&c| mod_mul(c, factor, q)).collect();
        Self::from_reduced(coeffs, self.params)
    }
}

/// Evaluation-domain vector: `values[i]` is the polynomial at psi^(2i+1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NttVector {
    values: Vec<u32>,
    params: NttParams,
}

impl NttVector {
    pub fn new(values: Vec<u32>, params: NttParams) -> Result<Self> {
        check_reduced(&values, &params)?;
        Ok(Self { values, params })
    }

    pub(crate) fn from_reduced(values: Vec<u32>, params: NttParams) -> Self {
        debug_assert!(check_reduced(&values, &params).is_ok());
        Self { values, params }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    pub fn params(&self) -> &NttParams {
        &self.params
    }

    /// Element-wise product, the pointwise stage of NTT multiplication.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        same_ring(&self.params, &other.params)?;
        let q = self.params.q();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| mod_mul(x, y, q))
            .collect();
        Ok(Self::from_reduced(values, self.params))
    }
}

pub(crate) fn same_ring(a: &NttParams, b: &NttParams) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(NttError::ParamsMismatch)
    }
}

/// O(n^2) negative wrapped convolution:
/// c_k = sum_{i<=k} a_i b_{k-i} - sum_{i>k} a_i b_{k+n-i}  (mod q).
pub fn nwc_schoolbook(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    same_ring(&a.params, &b.params)?;
    let params = a.params;
    let (n, q) = (params.n(), params.q());
    let (a, b) = (&a.coeffs, &b.coeffs);
    let coeffs = (0..n)
        .map(|k| {
            // Each reduced product is < 2^31, so n <= 2^16 of them fit in u64.
            let pos: u64 = (0..=k).map(|i| mod_mul(a[i], b[k - i], q) as u64).sum();
            let neg: u64 = (k + 1..n)
                .map(|i| mod_mul(a[i], b[k + n - i], q) as u64)
                .sum();
            mod_sub((pos % q as u64) as u32, (neg % q as u64) as u32, q)
        })
        .collect();
    Ok(Polynomial::from_reduced(coeffs, params))
}

/// Uniform coefficients in [0, q) drawn from ChaCha8 seeded with `seed`
/// (`ChaCha8Rng::seed_from_u64`), one `gen_range(0..q)` draw per coefficient
/// in index order.
pub fn random_polynomial(params: &NttParams, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..params.n())
        .map(|_| rng.gen_range(0..params.q()))
        .collect();
    Polynomial::from_reduced(coeffs, *params)
}

/// On-disk polynomial document: `{"q": .., "n": .., "coeffs": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub q: u64,
    pub n: u64,
    pub coeffs: Vec<u64>,
}

impl PolyFile {
    pub fn from_polynomial(p: &Polynomial) -> Self {
        Self {
            q: p.params.q() as u64,
            n: p.params.n() as u64,
            coeffs: p.coeffs.iter().map(|&c| c as u64).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| NttError::PolyFormat(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poly file serializes")
    }

    /// Builds the polynomial, checking the header against `params`.
    pub fn into_polynomial(self, params: &NttParams) -> Result<Polynomial> {
        if self.q != params.q() as u64 || self.n != params.n() as u64 {
            return Err(NttError::PolyFormat(format!(
                "file declares q = {}, n = {} but the ring is q = {}, n = {}",
                self.q,
                self.n,
                params.q(),
                params.n()
            )));
        }
        if let Some(index) = self.coeffs.iter().position(|&c| c >= params.q() as u64) {
            return Err(NttError::CoefficientOutOfRange {
                index,
                value: self.coeffs[index],
                q: params.q(),
            });
        }
        Polynomial::new(self.coeffs.into_iter().map(|c| c as u32).collect(), *params)
    }
}
