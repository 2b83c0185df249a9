//! Dense polynomial arithmetic over a prime field Z/ℓ.
//!
//! Internal helper shared by the finite-field constructor (irreducibility
//! testing) and the cyclotomic reduction machinery (factoring Φ_m mod ℓ).
//! Polynomials are coefficient vectors, constant term first, with the
//! leading coefficient nonzero (the zero polynomial is the empty vector).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Poly = Vec<u64>;

#[inline]
pub fn mulmod(a: u64, b: u64, ell: u64) -> u64 {
    ((a as u128 * b as u128) % ell as u128) as u64
}

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn deg(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(a: &Poly, b: &Poly, ell: u64) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = *c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (out[i] + c) % ell;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &Poly, b: &Poly, ell: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(ai, bj, ell)) % ell;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m`.
pub fn rem(a: &Poly, m: &Poly, ell: u64) -> Poly {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let md = m.len() - 1;
    let mut r = a.clone();
    while r.len() > md {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - md;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = i + shift;
                let sub = mulmod(lead, mc, ell);
                r[idx] = (r[idx] + ell - sub) % ell;
            }
        }
        r.pop();
    }
    trim(&mut r);
    r
}

pub fn mulrem(a: &Poly, b: &Poly, m: &Poly, ell: u64) -> Poly {
    rem(&mul(a, b, ell), m, ell)
}

/// x^e modulo monic `m`, with the exponent given in binary.
pub fn powmod(base: &Poly, mut e: u128, m: &Poly, ell: u64) -> Poly {
    let mut result = vec![1u64];
    let mut b = rem(base, m, ell);
    while e > 0 {
        if e & 1 == 1 {
            result = mulrem(&result, &b, m, ell);
        }
        b = mulrem(&b, &b, m, ell);
        e >>= 1;
    }
    result
}

fn inv_mod(a: u64, ell: u64) -> u64 {
    // ell prime, a != 0
    let mut result = 1u64;
    let mut b = a % ell;
    let mut e = ell - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, b, ell);
        }
        b = mulmod(b, b, ell);
        e >>= 1;
    }
    result
}

pub fn monic(p: &Poly, ell: u64) -> Poly {
    match p.last() {
        None | Some(&1) => p.clone(),
        Some(&lead) => {
            let inv = inv_mod(lead, ell);
            p.iter().map(|&c| mulmod(c, inv, ell)).collect()
        }
    }
}

pub fn gcd(a: &Poly, b: &Poly, ell: u64) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let m = monic(&b, ell);
        let r = rem(&a, &m, ell);
        a = b;
        b = r;
    }
    monic(&a, ell)
}

fn divide_exact(a: &Poly, b: &Poly, ell: u64) -> Poly {
    // b monic, b | a
    let mut r = a.clone();
    let bd = b.len() - 1;
    let mut q = vec![0u64; a.len() - bd];
    while r.len() > bd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - bd;
        q[shift] = lead;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let sub = mulmod(lead, bc, ell);
                r[i + shift] = (r[i + shift] + ell - sub) % ell;
            }
        }
        r.pop();
    }
    trim(&mut r);
    debug_assert!(r.is_empty(), "division was not exact");
    q
}

/// Rabin irreducibility test for a monic polynomial of degree k ≥ 1 over Z/ℓ.
///
/// Checks t^{ℓ^k} ≡ t (mod f) together with gcd(t^{ℓ^{k/r}} − t, f) = 1 for
/// every prime r | k; the gcd conditions say f has no root in any proper
/// subfield F_{ℓ^d}, d | k.
pub fn is_irreducible(f: &Poly, ell: u64) -> bool {
    let k = match deg(f) {
        Some(0) | None => return false,
        Some(1) => return true,
        Some(k) => k,
    };
    if *f.last().unwrap() != 1 {
        return false;
    }
    let x = vec![0u64, 1];
    // t^{ℓ^k} mod f by k successive ℓ-th powers
    let mut xp = x.clone();
    let mut at_subdegree: Vec<(usize, Poly)> = Vec::new();
    for d in 1..=k {
        xp = powmod(&xp, ell as u128, f, ell);
        if d < k && k % d == 0 {
            at_subdegree.push((d, xp.clone()));
        }
    }
    let mut closed = xp.clone();
    if !closed.is_empty() {
        // t^{ℓ^k} − t must vanish mod f
        closed = add(&closed, &vec![0, ell - 1], ell);
    } else {
        closed = vec![0, ell - 1];
    }
    if !closed.is_empty() {
        return false;
    }
    for (d, xd) in at_subdegree {
        // only the maximal proper subfields k/r matter, but checking every
        // divisor is just as cheap at these degrees
        let _ = d;
        let diff = add(&xd, &vec![0, ell - 1], ell);
        if diff.is_empty() {
            return false;
        }
        let g = gcd(&diff, f, ell);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Distinct-degree decomposition of a squarefree monic polynomial:
/// returns pairs (d, product of all irreducible factors of degree d).
pub fn distinct_degree(f: &Poly, ell: u64) -> Vec<(usize, Poly)> {
    let mut out = Vec::new();
    let mut rest = monic(f, ell);
    let mut xp = vec![0u64, 1];
    let mut d = 0usize;
    while deg(&rest).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > deg(&rest).unwrap() {
            out.push((deg(&rest).unwrap(), rest));
            break;
        }
        xp = powmod(&xp, ell as u128, &rest, ell);
        let diff = add(&xp, &vec![0, ell - 1], ell);
        let g = if diff.is_empty() {
            rest.clone()
        } else {
            gcd(&diff, &rest, ell)
        };
        if deg(&g).unwrap_or(0) > 0 {
            out.push((d, g.clone()));
            rest = divide_exact(&rest, &g, ell);
            xp = rem(&xp, &rest, ell);
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting: factor a squarefree monic
/// polynomial all of whose irreducible factors have degree `d`.
pub fn equal_degree_factor(f: &Poly, d: usize, ell: u64, seed: u64) -> Vec<Poly> {
    let mut factors = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut stack = vec![monic(f, ell)];
    while let Some(g) = stack.pop() {
        let gd = deg(&g).unwrap();
        if gd == d {
            factors.push(g);
            continue;
        }
        // random splitting element
        let split = loop {
            let mut r: Poly = (0..gd).map(|_| rng.gen_range(0..ell)).collect();
            trim(&mut r);
            if deg(&r).unwrap_or(0) < 1 && gd > 1 {
                continue;
            }
            let h = if ell == 2 {
                // char-2 variant: trace map r + r^2 + ... + r^{2^{d-1}}
                let mut acc = r.clone();
                let mut cur = r.clone();
                for _ in 1..d {
                    cur = mulrem(&cur, &cur, &g, ell);
                    acc = add(&acc, &cur, ell);
                }
                acc
            } else {
                // r^{(ℓ^d − 1)/2} − 1
                let e = (pow_u128(ell, d as u32) - 1) / 2;
                let mut p = powmod(&r, e, &g, ell);
                p = add(&p, &vec![ell - 1], ell);
                p
            };
            if h.is_empty() {
                continue;
            }
            let w = gcd(&h, &g, ell);
            let wd = deg(&w).unwrap_or(0);
            if wd > 0 && wd < gd {
                break w;
            }
        };
        let other = divide_exact(&g, &split, ell);
        stack.push(split);
        stack.push(other);
    }
    factors
}

pub fn pow_u128(base: u64, e: u32) -> u128 {
    (base as u128).pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_known_cases() {
        // t^2 + 1 over F_3: -1 is a nonsquare mod 3
        assert!(is_irreducible(&vec![1, 0, 1], 3));
        // t^2 + 1 over F_5: (t-2)(t+2)
        assert!(!is_irreducible(&vec![1, 0, 1], 5));
        // t^3 + t + 1 over F_2
        assert!(is_irreducible(&vec![1, 1, 0, 1], 2));
        assert!(is_irreducible(&vec![0, 1], 7));
    }

    #[test]
    fn irreducible_rejects_rootless_products() {
        // (t^2 + 1)(t^3 + 2t + 1) over F_3: both factors irreducible, so the
        // degree-5 product has no root in F_3 yet must be rejected.
        let a = vec![1, 0, 1];
        let b = vec![1, 2, 0, 1];
        assert!(is_irreducible(&b, 3));
        let prod = mul(&a, &b, 3);
        assert_eq!(deg(&prod), Some(5));
        assert!(!is_irreducible(&prod, 3));
    }

    #[test]
    fn factor_phi5_mod_11() {
        // Φ_5 = 1 + t + t^2 + t^3 + t^4 splits completely mod 11
        let phi = vec![1u64, 1, 1, 1, 1];
        let parts = distinct_degree(&phi, 11);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, 1);
        let mut factors = equal_degree_factor(&phi, 1, 11, 0);
        factors.sort();
        // (t - r) is stored as [11 - r, 1]; the roots must be the elements
        // of order 5 mod 11, namely {3, 4, 5, 9}
        let mut roots: Vec<u64> = factors.iter().map(|f| (11 - f[0]) % 11).collect();
        roots.sort();
        assert_eq!(roots, vec![3, 4, 5, 9]);
    }

    #[test]
    fn factor_equal_degree_quartic() {
        // Φ_5 mod 3 is irreducible (3 has order 4 mod 5)
        let phi = vec![1u64, 1, 1, 1, 1];
        assert!(is_irreducible(&phi, 3));
        let factors = equal_degree_factor(&phi, 4, 3, 0);
        assert_eq!(factors.len(), 1);
    }

    #[test]
    fn gcd_and_rem_consistent() {
        let a = vec![2u64, 0, 1, 4, 3];
        let b = vec![1u64, 1, 1];
        let r = rem(&a, &b, 5);
        assert!(deg(&r).unwrap_or(0) < 2);
        let g = gcd(&a, &b, 5);
        assert!(deg(&g).is_some());
    }
}
