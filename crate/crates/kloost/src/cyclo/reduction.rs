//! Prime splitting in `Z[ζ_m]` and reduction modulo a chosen prime ideal.
//!
//! For ℓ ∤ m the residue degree is f = ord(ℓ mod m) and Φ_m mod ℓ splits
//! into φ(m)/f irreducible factors of degree f, each cutting out a prime
//! ideal 𝔩 with residue field F_λ = F_{ℓ^f}. Every choice of factor differs
//! by Galois conjugation, so a canonical pick is safe; we take the factor
//! with the least root set: concretely, the factor whose negated
//! coefficient sequence (constant first) is lexicographically least, which
//! for split primes (f = 1) selects the least root of unity in F_ℓ.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CycloError, CycloInt, CycloRing};
use crate::field::{is_prime, FieldCtx, FqElem};
use crate::polyarith;

/// Residue degree f and number of primes g above ℓ in `Z[ζ_m]`.
pub fn split_prime(m: u64, ell: u64) -> Result<(u32, u32), CycloError> {
    let p = if m.is_multiple_of(4) { m / 4 } else { m };
    if p < 3 || p.is_multiple_of(2) || !is_prime(p) || (m != p && m != 4 * p) {
        return Err(CycloError::BadConductor(m));
    }
    if !is_prime(ell) {
        return Err(CycloError::NotPrime(ell));
    }
    if m.is_multiple_of(ell) {
        return Err(CycloError::EllDividesConductor(ell));
    }
    let phi = if m.is_multiple_of(4) { (m / 4 - 1) * 2 } else { m - 1 };
    let mut f = 1u32;
    let mut pw = ell % m;
    while pw != 1 {
        pw = (pw as u128 * ell as u128 % m as u128) as u64;
        f += 1;
    }
    Ok((f, phi as u32 / f))
}

/// A prime ideal 𝔩 above ℓ in `Z[ζ_m]` together with its residue field and
/// the reduction homomorphism.
#[derive(Debug, Clone)]
pub struct ReductionCtx {
    m: u64,
    p: u64,
    ell: u64,
    f: u32,
    factor: Vec<u64>,
    field: FieldCtx,
    root: FqElem,
}

impl ReductionCtx {
    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn residue_degree(&self) -> u32 {
        self.f
    }

    /// The chosen irreducible factor of Φ_m mod ℓ, constant first.
    pub fn factor(&self) -> &[u64] {
        &self.factor
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// Image of ζ_m in F_λ; has exact multiplicative order m.
    pub fn root(&self) -> FqElem {
        self.root
    }

    /// The reduction homomorphism `Z[ζ_m]` → F_λ.
    pub fn reduce(&self, x: &CycloInt) -> Result<FqElem, CycloError> {
        if x.conductor() != self.m {
            return Err(CycloError::ConductorMismatch {
                ring: self.m,
                elem: x.conductor(),
            });
        }
        let ell_big = BigInt::from(self.ell);
        let mut acc = FqElem::ZERO;
        for c in x.coeffs().iter().rev() {
            acc = self.field.mul(acc, self.root);
            let mut r = c % &ell_big;
            if r.is_negative() {
                r += &ell_big;
            }
            let r = r.to_u64().expect("residue fits u64");
            acc = self.field.add(acc, self.field.from_base(r));
        }
        Ok(acc)
    }

    /// Reduce a coefficient row over the ζ_p power basis (canonical form of
    /// a conductor-p element) without building BigInt coefficients. Used by
    /// the Kloosterman table pipeline; for a conductor-4p context the
    /// exponents are scaled through ζ_p = ζ_{4p}^4.
    pub fn reduce_prime_basis_row(&self, coeffs: &[i64]) -> FqElem {
        let stride = if self.m == self.p { 1u64 } else { 4 };
        let mut acc = FqElem::ZERO;
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = c.rem_euclid(self.ell as i64) as u64;
            let zp = self.field.pow(self.root, (stride * i as u64) as u128);
            acc = self.field.add(acc, self.field.mul(self.field.from_base(r), zp));
        }
        acc
    }
}

/// Factor Φ_m mod ℓ and fix the canonical prime ideal above ℓ.
pub fn make_reduction(ring: &CycloRing, ell: u64) -> Result<ReductionCtx, CycloError> {
    make_reduction_seeded(ring, ell, 0)
}

pub fn make_reduction_seeded(
    ring: &CycloRing,
    ell: u64,
    seed: u64,
) -> Result<ReductionCtx, CycloError> {
    let m = ring.conductor();
    let (f, g) = split_prime(m, ell)?;

    // Φ_m mod ℓ
    let phi_mod: Vec<u64> = (0..=ring.phi())
        .map(|i| {
            let c = ring.phi_poly[i];
            c.rem_euclid(ell as i64) as u64
        })
        .collect();

    // distinct-degree first (must find a single class of degree f), then
    // equal-degree splitting
    let dd = polyarith::distinct_degree(&phi_mod, ell);
    if dd.len() != 1 || dd[0].0 != f as usize {
        return Err(CycloError::BadFactorization);
    }
    let mut factors = polyarith::equal_degree_factor(&dd[0].1, f as usize, ell, seed);
    if factors.len() != g as usize {
        return Err(CycloError::BadFactorization);
    }
    // canonical choice: lexicographically least negated-coefficient key,
    // i.e. least root for degree-1 factors
    factors.sort_by_key(|fac| {
        fac.iter()
            .take(f as usize)
            .map(|&c| (ell - c) % ell)
            .collect::<Vec<u64>>()
    });
    let factor = factors.into_iter().next().unwrap();

    let field = if ell == 2 {
        FieldCtx::new_char2(f, Some(&factor))?
    } else {
        FieldCtx::new(ell, f, Some(&factor))?
    };
    let root = if f == 1 {
        FqElem((ell - factor[0]) % ell)
    } else {
        FqElem(ell) // the class of t
    };
    debug_assert_eq!(field.order(root).unwrap(), m, "root must have order m");

    let rc = ReductionCtx {
        m,
        p: ring.p(),
        ell,
        f,
        factor,
        field,
        root,
    };

    // construction-time spot check: the map respects + and · on random pairs
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x00C0_FFEE));
    for _ in 0..8 {
        let a: Vec<i64> = (0..ring.phi()).map(|_| rng.gen_range(-1000..1000)).collect();
        let b: Vec<i64> = (0..ring.phi()).map(|_| rng.gen_range(-1000..1000)).collect();
        let x = ring.from_coeffs(&a);
        let y = ring.from_coeffs(&b);
        let sum = rc.reduce(&ring.add(&x, &y)?)?;
        let prod = rc.reduce(&ring.mul(&x, &y)?)?;
        assert_eq!(sum, rc.field.add(rc.reduce(&x)?, rc.reduce(&y)?));
        assert_eq!(prod, rc.field.mul(rc.reduce(&x)?, rc.reduce(&y)?));
    }

    Ok(rc)
}
