//! Exact arithmetic in `Z[ζ_m]` for m ∈ {p, 4p}, complex embeddings,
//! quadratic Gauss sums, and reduction into residue fields.
//!
//! Elements are integer coefficient vectors over the power basis
//! {ζ_m^i : 0 ≤ i < φ(m)}, kept fully reduced by the cyclotomic polynomial
//! Φ_m so that the representation is unique and equality is coefficient
//! equality. For m = p this is the rewrite ζ^{p−1} = −1 − ζ − ⋯ − ζ^{p−2};
//! for m = 4p the reduction polynomial is Φ_{4p}(x) = Φ_p(−x²).
//!
//! Coefficients are arbitrary-precision: unnormalized Kloosterman sums
//! reach magnitude q^{(n−1)/2}·q and Gauss-sum squares leave i64 range well
//! before the supported field sizes do.

mod reduction;

pub use reduction::{make_reduction, make_reduction_seeded, split_prime, ReductionCtx};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{FieldCtx, FieldError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("conductor must be an odd prime p or 4p (got {0})")]
    BadConductor(u64),
    #[error("element has conductor {elem} but the ring has conductor {ring}")]
    ConductorMismatch { ring: u64, elem: u64 },
    #[error("{u} is not coprime to the conductor {m}")]
    NotCoprime { u: u64, m: u64 },
    #[error("ring has characteristic {ring_p} but the field has characteristic {ctx_p}")]
    CharMismatch { ring_p: u64, ctx_p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ℓ = {0} divides the conductor")]
    EllDividesConductor(u64),
    #[error("unexpected factor degrees while splitting the cyclotomic polynomial")]
    BadFactorization,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The ring `Z[ζ_m]` with its power basis and reduction rule.
#[derive(Debug, Clone)]
pub struct CycloRing {
    m: u64,
    p: u64,
    phi: usize,
    /// Φ_m, constant first, length φ(m)+1, coefficients in {−1, 0, 1}.
    phi_poly: Vec<i64>,
}

/// An exact element of `Z[ζ_m]` in canonical (fully reduced) form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloInt {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer value, if the element is rational.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }
}

impl CycloRing {
    /// Build `Z[ζ_m]` for m an odd prime p, or m = 4p.
    pub fn new(m: u64) -> Result<CycloRing, CycloError> {
        let p = if m.is_multiple_of(4) { m / 4 } else { m };
        if p < 3 || p % 2 == 0 || !crate::field::is_prime(p) || (m != p && m != 4 * p) {
            return Err(CycloError::BadConductor(m));
        }
        let phi_poly = if m == p {
            vec![1i64; p as usize]
        } else {
            // Φ_{4p}(x) = Φ_p(−x²) = Σ (−1)^i x^{2i}
            let mut v = vec![0i64; 2 * (p as usize - 1) + 1];
            for i in 0..p as usize {
                v[2 * i] = if i % 2 == 0 { 1 } else { -1 };
            }
            v
        };
        let phi = phi_poly.len() - 1;
        Ok(CycloRing { m, p, phi, phi_poly })
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// The odd prime p underlying the conductor.
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    fn check(&self, x: &CycloInt) -> Result<(), CycloError> {
        if x.m != self.m {
            Err(CycloError::ConductorMismatch {
                ring: self.m,
                elem: x.m,
            })
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> CycloInt {
        CycloInt {
            m: self.m,
            coeffs: vec![BigInt::zero(); self.phi],
        }
    }

    pub fn from_bigint(&self, v: BigInt) -> CycloInt {
        let mut out = self.zero();
        out.coeffs[0] = v;
        out
    }

    pub fn from_i64(&self, v: i64) -> CycloInt {
        self.from_bigint(BigInt::from(v))
    }

    pub fn one(&self) -> CycloInt {
        self.from_i64(1)
    }

    /// ζ_m^e, canonicalized.
    pub fn zeta_pow(&self, e: u64) -> CycloInt {
        let mut raw = vec![BigInt::zero(); (e % self.m) as usize + 1];
        let last = raw.len() - 1;
        raw[last] = BigInt::from(1);
        self.from_raw(raw)
    }

    /// Canonicalize a plain polynomial in ζ given by its coefficient vector
    /// (constant first, any length).
    pub fn from_raw(&self, mut raw: Vec<BigInt>) -> CycloInt {
        if raw.len() < self.phi {
            raw.resize(self.phi, BigInt::zero());
        }
        for i in (self.phi..raw.len()).rev() {
            if raw[i].is_zero() {
                continue;
            }
            let lead = std::mem::replace(&mut raw[i], BigInt::zero());
            for (j, &c) in self.phi_poly.iter().enumerate().take(self.phi) {
                match c {
                    1 => {
                        let v = &raw[i - self.phi + j] - &lead;
                        raw[i - self.phi + j] = v;
                    }
                    -1 => {
                        let v = &raw[i - self.phi + j] + &lead;
                        raw[i - self.phi + j] = v;
                    }
                    _ => {}
                }
            }
        }
        raw.truncate(self.phi);
        CycloInt {
            m: self.m,
            coeffs: raw,
        }
    }

    /// Convenience constructor from small coefficients over the power basis.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> CycloInt {
        self.from_raw(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn add(&self, x: &CycloInt, y: &CycloInt) -> Result<CycloInt, CycloError> {
        self.check(x)?;
        self.check(y)?;
        let coeffs = x
            .coeffs
            .iter()
            .zip(y.coeffs.iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloInt {
            m: self.m,
            coeffs,
        })
    }

    pub fn sub(&self, x: &CycloInt, y: &CycloInt) -> Result<CycloInt, CycloError> {
        self.check(x)?;
        self.check(y)?;
        let coeffs = x
            .coeffs
            .iter()
            .zip(y.coeffs.iter())
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloInt {
            m: self.m,
            coeffs,
        })
    }

    pub fn neg(&self, x: &CycloInt) -> Result<CycloInt, CycloError> {
        self.check(x)?;
        Ok(CycloInt {
            m: self.m,
            coeffs: x.coeffs.iter().map(|c| -c).collect(),
        })
    }

    pub fn mul(&self, x: &CycloInt, y: &CycloInt) -> Result<CycloInt, CycloError> {
        self.check(x)?;
        self.check(y)?;
        let mut raw = vec![BigInt::zero(); 2 * self.phi - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let v = &raw[i + j] + a * b;
                raw[i + j] = v;
            }
        }
        Ok(self.from_raw(raw))
    }

    pub fn mul_scalar(&self, x: &CycloInt, s: i64) -> Result<CycloInt, CycloError> {
        self.check(x)?;
        Ok(CycloInt {
            m: self.m,
            coeffs: x.coeffs.iter().map(|c| c * s).collect(),
        })
    }

    /// Apply the Galois automorphism ζ_m ↦ ζ_m^u, gcd(u, m) = 1.
    pub fn galois_conjugate(&self, x: &CycloInt, u: u64) -> Result<CycloInt, CycloError> {
        self.check(x)?;
        if num_integer::gcd(u, self.m) != 1 {
            return Err(CycloError::NotCoprime { u, m: self.m });
        }
        let mut raw = vec![BigInt::zero(); self.m as usize];
        for (i, c) in x.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((i as u64 * u) % self.m) as usize;
                let v = &raw[idx] + c;
                raw[idx] = v;
            }
        }
        Ok(self.from_raw(raw))
    }

    /// Evaluate the embedding ζ_m ↦ e(u/m) in double precision.
    pub fn embed(&self, x: &CycloInt, u: u64) -> Result<num_complex::Complex64, CycloError> {
        self.check(x)?;
        if num_integer::gcd(u, self.m) != 1 {
            return Err(CycloError::NotCoprime { u, m: self.m });
        }
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        let tau = std::f64::consts::TAU;
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = tau * ((u as u128 * i as u128 % self.m as u128) as f64) / self.m as f64;
            let (s, co) = angle.sin_cos();
            let cf = c.to_f64().expect("coefficient out of f64 range");
            acc += num_complex::Complex64::new(co * cf, s * cf);
        }
        Ok(acc)
    }

    /// Lift an element of `Z[ζ_p]` into this ring of conductor 4p via
    /// ζ_p = ζ_{4p}^4.
    pub fn lift_from_prime_conductor(&self, x: &CycloInt) -> Result<CycloInt, CycloError> {
        if self.m != 4 * self.p {
            return Err(CycloError::BadConductor(self.m));
        }
        if x.m != self.p {
            return Err(CycloError::ConductorMismatch {
                ring: self.p,
                elem: x.m,
            });
        }
        let mut raw = vec![BigInt::zero(); 4 * (self.p as usize - 1) + 1];
        for (i, c) in x.coeffs.iter().enumerate() {
            raw[4 * i] = c.clone();
        }
        Ok(self.from_raw(raw))
    }

    /// ζ_4 = ζ_{4p}^p, only available in conductor-4p rings.
    pub fn zeta4(&self) -> Result<CycloInt, CycloError> {
        if self.m != 4 * self.p {
            return Err(CycloError::BadConductor(self.m));
        }
        Ok(self.zeta_pow(self.p))
    }
}

/// The quadratic Gauss sum G_q = Σ_{x ∈ F_q^×} χ₂(x)·ζ_p^{tr(x)}, where χ₂
/// is the quadratic character of F_q^×. Satisfies G_q² = χ₂(−1)·q exactly.
pub fn gauss_sum(ring: &CycloRing, ctx: &FieldCtx) -> Result<CycloInt, CycloError> {
    if ring.p() != ctx.p() {
        return Err(CycloError::CharMismatch {
            ring_p: ring.p(),
            ctx_p: ctx.p(),
        });
    }
    // ζ_p inside the ring: ζ_m itself for m = p, ζ_{4p}^4 for m = 4p
    let stride = if ring.conductor() == ring.p() { 1 } else { 4 };
    let mut counts = vec![0i64; ring.conductor() as usize];
    for (j, x) in ctx.units().enumerate() {
        let chi = if j % 2 == 0 { 1 } else { -1 }; // χ₂(g^j) = (−1)^j
        let e = (stride * ctx.trace(x)) % ring.conductor();
        counts[e as usize] += chi;
    }
    Ok(ring.from_raw(counts.into_iter().map(BigInt::from).collect()))
}

/// χ₂(−1) for F_q: +1 iff q ≡ 1 (mod 4).
pub fn chi2_minus_one(q: u64) -> i64 {
    if ((q - 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}
