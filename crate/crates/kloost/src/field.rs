//! Arithmetic in F_q = F_{p^k}, its multiplicative structure, and the
//! absolute trace.
//!
//! A [`FieldCtx`] fixes a canonical monic irreducible modulus and a
//! canonical generator g of F_q^×, both chosen least under the integer
//! encoding Σ c_i p^i, so that every run (and every implementation) agrees
//! on the labels of field elements. Elements are stored as their integer
//! encoding; a full exp/dlog table pair is built once per context, which
//! keeps multiplication, inversion and powering O(1) at desk scale
//! (q ≤ ~10^6). Contexts are immutable after construction and safe to
//! share across threads.

use thiserror::Error;

use crate::polyarith;

/// Largest supported field size. Above this the dlog table itself becomes
/// the bottleneck and the exact pipelines stop being desk-scale.
pub const MAX_FIELD_SIZE: u64 = 1 << 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic must be odd (got p = 2)")]
    EvenCharacteristic,
    #[error("extension degree must be ≥ 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree k with coefficients in [0, p)")]
    MalformedModulus,
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("field size {0} exceeds the supported scale {MAX_FIELD_SIZE}")]
    ScaleExceeded(u64),
    #[error("discrete log of zero")]
    DlogOfZero,
    #[error("zero is not invertible")]
    ZeroInverse,
    #[error("cached table is inconsistent with (p, k, modulus, g)")]
    BadCachedTable,
}

/// An element of F_q, stored as its integer encoding Σ c_i p^i with the
/// coefficients of the defining polynomial basis (constant first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub u64);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);
}

/// A finite field F_{p^k} with fixed modulus, generator and dlog table.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    k: u32,
    q: u64,
    /// Monic defining polynomial, constant first, length k+1.
    modulus: Vec<u64>,
    g: FqElem,
    /// exp[j] = encoding of g^j, j ∈ [0, q−1).
    exp: Vec<u32>,
    /// dlog[enc] = j with g^j = enc; dlog[0] is a sentinel.
    dlog: Vec<u32>,
    /// tr(t^i) for i ∈ [0, k).
    tr_pow: Vec<u64>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Bootstrap multiplication used before the exp table exists: decode,
/// multiply as polynomials, reduce by the modulus.
fn raw_mul(p: u64, k: u32, modulus: &[u64], x: u64, y: u64) -> u64 {
    if k == 1 {
        return x * y % p;
    }
    let k = k as usize;
    let mut xc = vec![0u64; k];
    let mut yc = vec![0u64; k];
    decode(p, k, x, &mut xc);
    decode(p, k, y, &mut yc);
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &a) in xc.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in yc.iter().enumerate() {
            prod[i + j] += a * b % p;
        }
    }
    // reduce: t^k = -(modulus minus leading term)
    for i in (k..prod.len()).rev() {
        let lead = prod[i] % p;
        if lead != 0 {
            for j in 0..k {
                let sub = lead * modulus[j] % p;
                prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
            }
        }
        prod[i] = 0;
    }
    encode(p, &prod[..k])
}

fn raw_pow(p: u64, k: u32, modulus: &[u64], x: u64, mut e: u64) -> u64 {
    let mut result = 1u64;
    let mut b = x;
    while e > 0 {
        if e & 1 == 1 {
            result = raw_mul(p, k, modulus, result, b);
        }
        b = raw_mul(p, k, modulus, b, b);
        e >>= 1;
    }
    result
}

fn decode(p: u64, k: usize, mut enc: u64, out: &mut [u64]) {
    for c in out.iter_mut().take(k) {
        *c = enc % p;
        enc /= p;
    }
}

fn encode(p: u64, coeffs: &[u64]) -> u64 {
    let mut enc = 0u64;
    for &c in coeffs.iter().rev() {
        enc = enc * p + c % p;
    }
    enc
}

fn order_is_full(p: u64, k: u32, modulus: &[u64], x: u64, qm1: u64, primes: &[(u64, u32)]) -> bool {
    for &(r, _) in primes {
        if raw_pow(p, k, modulus, x, qm1 / r) == 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Build F_{p^k} for an odd prime p. When `modulus` is omitted, the
    /// least monic irreducible of degree k under the integer encoding is
    /// used (for k = 1 this is t itself).
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<FieldCtx, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        Self::new_any_char(p, k, modulus)
    }

    /// Characteristic-2 contexts for matrix-group experiments. The
    /// character-sum pipelines reject these at their own preconditions.
    pub fn new_char2(k: u32, modulus: Option<&[u64]>) -> Result<FieldCtx, FieldError> {
        Self::new_any_char(2, k, modulus)
    }

    fn new_any_char(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let mut q = 1u64;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(FieldError::ScaleExceeded(u64::MAX))?;
            if q > MAX_FIELD_SIZE {
                return Err(FieldError::ScaleExceeded(q));
            }
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1
                    || *m.last().unwrap() != 1
                    || m.iter().any(|&c| c >= p)
                {
                    return Err(FieldError::MalformedModulus);
                }
                if !polyarith::is_irreducible(&m.to_vec(), p) {
                    return Err(FieldError::ReducibleModulus);
                }
                m.to_vec()
            }
            None => Self::canonical_modulus(p, k),
        };
        let qm1 = q - 1;
        let primes = factorize(qm1);
        let mut g_enc = 0u64;
        for cand in 1..q {
            if order_is_full(p, k, &modulus, cand, qm1, &primes) {
                g_enc = cand;
                break;
            }
        }
        debug_assert!(g_enc != 0, "F_q^× is cyclic; a generator must exist");

        // exp table by repeated multiplication, dlog by inversion
        let mut exp = vec![0u32; qm1 as usize];
        let mut dlog = vec![u32::MAX; q as usize];
        let mut cur = 1u64;
        for (j, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u32;
            dlog[cur as usize] = j as u32;
            cur = raw_mul(p, k, &modulus, cur, g_enc);
        }
        debug_assert_eq!(cur, 1, "generator order must be exactly q − 1");

        let tr_pow = Self::trace_of_basis(p, k, &modulus);
        Ok(FieldCtx {
            p,
            k,
            q,
            modulus,
            g: FqElem(g_enc),
            exp,
            dlog,
            tr_pow,
        })
    }

    /// Canonical (modulus, generator) for (p, k) without building tables;
    /// this is the cache key for persisted dlog tables.
    pub fn canonical_parts(
        p: u64,
        k: u32,
        modulus: Option<&[u64]>,
    ) -> Result<(Vec<u64>, u64), FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let mut q = 1u64;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(FieldError::ScaleExceeded(u64::MAX))?;
            if q > MAX_FIELD_SIZE {
                return Err(FieldError::ScaleExceeded(q));
            }
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1
                    || *m.last().unwrap() != 1
                    || m.iter().any(|&c| c >= p)
                {
                    return Err(FieldError::MalformedModulus);
                }
                if !polyarith::is_irreducible(&m.to_vec(), p) {
                    return Err(FieldError::ReducibleModulus);
                }
                m.to_vec()
            }
            None => Self::canonical_modulus(p, k),
        };
        let qm1 = q - 1;
        let primes = factorize(qm1);
        let g = (1..q)
            .find(|&cand| order_is_full(p, k, &modulus, cand, qm1, &primes))
            .expect("F_q^× is cyclic");
        Ok((modulus, g))
    }

    /// Rebuild a context from a cached exp table, validating consistency.
    pub fn from_parts(
        p: u64,
        k: u32,
        modulus: &[u64],
        g: u64,
        exp: Vec<u32>,
    ) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).pow(k) as u64;
        if modulus.len() != k as usize + 1 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::MalformedModulus);
        }
        if exp.len() != (q - 1) as usize || exp[0] != 1 || (q > 2 && exp[1] as u64 != g) {
            return Err(FieldError::BadCachedTable);
        }
        let mut dlog = vec![u32::MAX; q as usize];
        for (j, &e) in exp.iter().enumerate() {
            if e == 0 || e as u64 >= q || dlog[e as usize] != u32::MAX {
                return Err(FieldError::BadCachedTable);
            }
            dlog[e as usize] = j as u32;
        }
        // spot-check the chain exp[j+1] = exp[j]·g
        let step = (exp.len() / 64).max(1);
        for j in (0..exp.len() - 1).step_by(step) {
            if raw_mul(p, k, modulus, exp[j] as u64, g) != exp[j + 1] as u64 {
                return Err(FieldError::BadCachedTable);
            }
        }
        let tr_pow = Self::trace_of_basis(p, k, modulus);
        Ok(FieldCtx {
            p,
            k,
            q,
            modulus: modulus.to_vec(),
            g: FqElem(g),
            exp,
            dlog,
            tr_pow,
        })
    }

    fn canonical_modulus(p: u64, k: u32) -> Vec<u64> {
        let kk = k as usize;
        let mut lower = vec![0u64; kk];
        loop {
            let mut f = lower.clone();
            f.push(1);
            if polyarith::is_irreducible(&f, p) {
                return f;
            }
            // increment the base-p counter on the lower coefficients
            for c in lower.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
    }

    /// tr(t^i) for the basis monomials; trace of a general element is the
    /// F_p-linear combination of these.
    fn trace_of_basis(p: u64, k: u32, modulus: &[u64]) -> Vec<u64> {
        let kk = k as usize;
        if kk == 1 {
            return vec![1];
        }
        let t = p; // encoding of the generator t of the polynomial basis
        let mut out = Vec::with_capacity(kk);
        for i in 0..k as u64 {
            let t_i = raw_pow(p, k, modulus, t, i);
            // sum of Frobenius conjugates, coefficient-wise
            let mut sum = vec![0u64; kk];
            let mut cur = t_i;
            for _ in 0..k {
                let mut c = vec![0u64; kk];
                decode(p, kk, cur, &mut c);
                for (s, cc) in sum.iter_mut().zip(c.iter()) {
                    *s = (*s + cc) % p;
                }
                cur = raw_pow(p, k, modulus, cur, p);
            }
            debug_assert!(sum[1..].iter().all(|&c| c == 0), "trace must lie in F_p");
            out.push(sum[0]);
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.g
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    /// g^j for j taken mod q−1.
    #[inline]
    pub fn exp(&self, j: u64) -> FqElem {
        FqElem(self.exp[(j % (self.q - 1)) as usize] as u64)
    }

    /// Discrete log base g. Errors on 0.
    #[inline]
    pub fn dlog(&self, x: FqElem) -> Result<u64, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::DlogOfZero);
        }
        debug_assert!(x.0 < self.q);
        Ok(self.dlog[x.0 as usize] as u64)
    }

    /// Embed a residue c mod p as the constant element.
    #[inline]
    pub fn from_base(&self, c: u64) -> FqElem {
        FqElem(c % self.p)
    }

    pub fn decode(&self, x: FqElem) -> Vec<u64> {
        let mut out = vec![0u64; self.k as usize];
        decode(self.p, self.k as usize, x.0, &mut out);
        out
    }

    pub fn encode(&self, coeffs: &[u64]) -> FqElem {
        FqElem(encode(self.p, coeffs))
    }

    #[inline]
    pub fn add(&self, x: FqElem, y: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem((x.0 + y.0) % self.p);
        }
        let k = self.k as usize;
        let mut xc = vec![0u64; k];
        let mut yc = vec![0u64; k];
        decode(self.p, k, x.0, &mut xc);
        decode(self.p, k, y.0, &mut yc);
        for (a, b) in xc.iter_mut().zip(yc.iter()) {
            *a = (*a + b) % self.p;
        }
        FqElem(encode(self.p, &xc))
    }

    #[inline]
    pub fn neg(&self, x: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem((self.p - x.0) % self.p);
        }
        let k = self.k as usize;
        let mut xc = vec![0u64; k];
        decode(self.p, k, x.0, &mut xc);
        for a in xc.iter_mut() {
            *a = (self.p - *a) % self.p;
        }
        FqElem(encode(self.p, &xc))
    }

    #[inline]
    pub fn sub(&self, x: FqElem, y: FqElem) -> FqElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FqElem, y: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem(x.0 * y.0 % self.p);
        }
        if x.0 == 0 || y.0 == 0 {
            return FqElem::ZERO;
        }
        let j = self.dlog[x.0 as usize] as u64 + self.dlog[y.0 as usize] as u64;
        self.exp(j)
    }

    #[inline]
    pub fn inv(&self, x: FqElem) -> Result<FqElem, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let j = self.dlog[x.0 as usize] as u64;
        Ok(self.exp((self.q - 1 - j) % (self.q - 1)))
    }

    pub fn pow(&self, x: FqElem, e: u128) -> FqElem {
        if x.0 == 0 {
            return if e == 0 { FqElem::ONE } else { FqElem::ZERO };
        }
        let qm1 = (self.q - 1) as u128;
        let j = self.dlog[x.0 as usize] as u128;
        self.exp(((j * (e % qm1)) % qm1) as u64)
    }

    /// x^p, the arithmetic Frobenius.
    pub fn frobenius(&self, x: FqElem) -> FqElem {
        self.pow(x, self.p as u128)
    }

    /// Absolute trace tr_{F_q/F_p}(x) = Σ x^{p^i}, as a residue mod p.
    pub fn trace(&self, x: FqElem) -> u64 {
        if self.k == 1 {
            return x.0;
        }
        let k = self.k as usize;
        let mut xc = vec![0u64; k];
        decode(self.p, k, x.0, &mut xc);
        let mut acc = 0u64;
        for (c, t) in xc.iter().zip(self.tr_pow.iter()) {
            acc = (acc + c * t) % self.p;
        }
        acc
    }

    /// Multiplicative order of x ≠ 0.
    pub fn order(&self, x: FqElem) -> Result<u64, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::DlogOfZero);
        }
        let mut ord = self.q - 1;
        for (r, _) in factorize(self.q - 1) {
            while ord.is_multiple_of(r) && self.pow(x, (ord / r) as u128) == FqElem::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// True iff x lies in the subfield F_{p^d} (requires d | k).
    pub fn in_subfield(&self, x: FqElem, d: u32) -> bool {
        debug_assert_eq!(self.k % d, 0);
        let sub_size = (self.p as u128).pow(d);
        self.pow(x, sub_size) == x
    }

    /// All elements, 0 first then by encoding.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(FqElem)
    }

    /// The units in generator order g^0, g^1, ….
    pub fn units(&self) -> impl Iterator<Item = FqElem> + '_ {
        self.exp.iter().map(|&e| FqElem(e as u64))
    }
}
