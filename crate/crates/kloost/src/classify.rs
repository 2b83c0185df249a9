//! Classification data for finite simple groups of Lie type: exact orders
//! of the classical groups, the minimal faithful projective dimension
//! m(S), outer automorphism group orders, the candidate survey over a
//! dimension bound, and the per-class exclusion arithmetic for the
//! geometric (non-almost-simple) maximal subgroup classes C2–C5.

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("rank {l} is out of range for family {family}")]
    BadRank { family: &'static str, l: u32 },
    #[error("symplectic groups need even dimension (got {0})")]
    OddSymplectic(u32),
    #[error("residue of r = ℓ^a mod {0} is undefined for even ℓ")]
    MissingResidue(u64),
    #[error("r = ℓ^a overflows the supported range")]
    Overflow,
}

/// Families of finite simple groups of Lie type in odd characteristic;
/// Suzuki and Ree families do not arise here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    TwistedA,
    B,
    C,
    D,
    TwistedD,
    TripleD4,
    G2,
    F4,
    E6,
    TwistedE6,
    E7,
    E8,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::A,
        Family::TwistedA,
        Family::B,
        Family::C,
        Family::D,
        Family::TwistedD,
        Family::TripleD4,
        Family::G2,
        Family::F4,
        Family::E6,
        Family::TwistedE6,
        Family::E7,
        Family::E8,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::TwistedA => "2A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::TwistedD => "2D",
            Family::TripleD4 => "3D4",
            Family::G2 => "G2",
            Family::F4 => "F4",
            Family::E6 => "E6",
            Family::TwistedE6 => "2E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
        }
    }

    /// Inclusive rank range: the exceptional families have one rank each,
    /// C starts at 2 (C_2 ≅ B_2 is kept: the survey enumerates descriptors,
    /// not isomorphism classes), D at 4 (D_3 ≅ A_3 is dropped).
    fn rank_range(&self) -> (u32, u32) {
        match self {
            Family::A => (1, u32::MAX),
            Family::TwistedA => (2, u32::MAX),
            Family::B => (2, u32::MAX),
            Family::C => (2, u32::MAX),
            Family::D | Family::TwistedD => (4, u32::MAX),
            Family::TripleD4 => (4, 4),
            Family::G2 => (2, 2),
            Family::F4 => (4, 4),
            Family::E6 | Family::TwistedE6 => (6, 6),
            Family::E7 => (7, 7),
            Family::E8 => (8, 8),
        }
    }
}

/// A finite simple group of Lie type over F_r, r = ℓ^a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub family: Family,
    pub l: u32,
    pub ell: u64,
    pub a: u32,
}

impl GroupDescriptor {
    pub fn new(family: Family, l: u32, ell: u64, a: u32) -> Result<Self, ClassifyError> {
        let (lo, hi) = family.rank_range();
        if l < lo || l > hi {
            return Err(ClassifyError::BadRank {
                family: family.as_str(),
                l,
            });
        }
        Ok(GroupDescriptor { family, l, ell, a })
    }

    /// r = ℓ^a.
    pub fn r(&self) -> Result<u128, ClassifyError> {
        (self.ell as u128)
            .checked_pow(self.a)
            .ok_or(ClassifyError::Overflow)
    }
}

/// Minimal dimension of a faithful irreducible projective representation
/// in the defining characteristic.
pub fn m_lower(d: &GroupDescriptor) -> Result<u64, ClassifyError> {
    let l = d.l as u64;
    Ok(match d.family {
        Family::A | Family::TwistedA => l + 1,
        Family::B => 2 * l + 1,
        Family::C | Family::D | Family::TwistedD => 2 * l,
        Family::TripleD4 => 8,
        Family::G2 => 7,
        Family::F4 => 26,
        Family::E6 | Family::TwistedE6 => 27,
        Family::E7 => 56,
        Family::E8 => 248,
    })
}

fn gcd64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// |Out(S)| for S over F_r, r = ℓ^a odd.
pub fn out_order(d: &GroupDescriptor) -> Result<u64, ClassifyError> {
    let a = d.a as u64;
    let r = d.r()?;
    let l = d.l;
    let r_mod = |m: u64| -> Result<u64, ClassifyError> {
        if d.ell.is_multiple_of(2) {
            return Err(ClassifyError::MissingResidue(m));
        }
        Ok((r % m as u128) as u64)
    };
    Ok(match d.family {
        Family::A => {
            if l == 1 || l.is_multiple_of(2) {
                2 * a
            } else {
                let rm1 = (r - 1).min(u64::MAX as u128) as u64;
                2 * a * gcd64(l as u64 + 1, rm1)
            }
        }
        Family::TwistedA => {
            if l.is_multiple_of(2) {
                2 * a
            } else {
                let rp1 = (r + 1).min(u64::MAX as u128) as u64;
                2 * a * gcd64(l as u64 + 1, rp1)
            }
        }
        Family::B | Family::C => 2 * a,
        Family::D => {
            if l == 4 {
                12 * a
            } else if l.is_multiple_of(2) {
                8 * a
            } else {
                match r_mod(4)? {
                    1 => 8 * a,
                    3 => 4 * a,
                    _ => return Err(ClassifyError::MissingResidue(4)),
                }
            }
        }
        Family::TwistedD => match r_mod(4)? {
            1 => 4 * a,
            3 => {
                if l % 2 == 1 {
                    8 * a
                } else {
                    4 * a
                }
            }
            _ => return Err(ClassifyError::MissingResidue(4)),
        },
        Family::TripleD4 => a,
        Family::E6 => match r_mod(3)? {
            1 => 6 * a,
            2 => 2 * a,
            _ => return Err(ClassifyError::MissingResidue(3)),
        },
        Family::TwistedE6 => match r_mod(3)? {
            1 => 2 * a,
            2 => 6 * a,
            _ => return Err(ClassifyError::MissingResidue(3)),
        },
        Family::E7 => 2 * a,
        Family::E8 | Family::F4 | Family::G2 => a,
    })
}

/// Classical group families with exact order formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalFamily {
    Sl,
    Sp,
    Su,
}

/// |SL_n(q)|, |Sp_n(q)| (n even) or |SU_n(q)| as an exact integer.
pub fn group_order(family: ClassicalFamily, n: u32, q: u64) -> Result<BigUint, ClassifyError> {
    let q = BigUint::from(q);
    match family {
        ClassicalFamily::Sl => {
            let mut ord = q.pow(n * (n - 1) / 2);
            for i in 2..=n {
                ord *= q.pow(i) - BigUint::one();
            }
            Ok(ord)
        }
        ClassicalFamily::Sp => {
            if !n.is_multiple_of(2) {
                return Err(ClassifyError::OddSymplectic(n));
            }
            let m = n / 2;
            let mut ord = q.pow(m * m);
            for i in 1..=m {
                ord *= q.pow(2 * i) - BigUint::one();
            }
            Ok(ord)
        }
        ClassicalFamily::Su => {
            let mut ord = q.pow(n * (n - 1) / 2);
            for i in 2..=n {
                if i % 2 == 0 {
                    ord *= q.pow(i) - BigUint::one();
                } else {
                    ord *= q.pow(i) + BigUint::one();
                }
            }
            Ok(ord)
        }
    }
}

/// m^a ≤ n^g exactly, in integers.
fn dim_bound_holds(m: u64, a: u32, n: u64, g: u32) -> bool {
    let lhs = (m as u128).checked_pow(a);
    let rhs = (n as u128).checked_pow(g);
    match (lhs, rhs) {
        (Some(l), Some(r)) => l <= r,
        (None, _) => false,    // m^a astronomically large
        (Some(_), None) => true,
    }
}

/// All descriptors S with l ≤ m(S) and m(S) ≤ n^{(f,a)/a}, enumerating the
/// field exponent a up to ⌊log₂ n⌋·f (the dimension bound forces
/// a/(f,a) ≤ log₂ n since m(S) ≥ 2, so this cutoff is exhaustive).
/// Deterministic order: (family, l, a).
pub fn candidate_survey(n: u32, ell: u64, f: u32) -> Vec<GroupDescriptor> {
    let mut out = Vec::new();
    let log2n = 63 - (n as u64).leading_zeros() as u64; // ⌊log₂ n⌋ for n ≥ 1
    let a_max = ((log2n as u32) * f).max(1);
    for family in Family::ALL {
        let (lo, hi) = family.rank_range();
        let mut l = lo;
        loop {
            if l > hi {
                break;
            }
            let Ok(d0) = GroupDescriptor::new(family, l, ell, 1) else {
                break;
            };
            let m = m_lower(&d0).expect("table covers every family");
            if m > n as u64 && matches!(family, Family::A | Family::TwistedA | Family::B | Family::C | Family::D | Family::TwistedD)
            {
                break; // m(S) grows with the rank: nothing further fits
            }
            for a in 1..=a_max {
                let g = num_integer::gcd(f, a);
                if l as u64 <= m && dim_bound_holds(m, a, n as u64, g) {
                    out.push(GroupDescriptor { family, l, ell, a });
                }
            }
            if matches!(
                family,
                Family::TripleD4
                    | Family::G2
                    | Family::F4
                    | Family::E6
                    | Family::TwistedE6
                    | Family::E7
                    | Family::E8
            ) {
                break;
            }
            l += 1;
        }
    }
    out.sort_by_key(|d| (d.family, d.l, d.a));
    out
}

/// Exclusion report for one Aschbacher-style geometric class.
#[derive(Debug, Clone)]
pub struct ClassExclusion {
    pub class: &'static str,
    pub applicable: bool,
    pub excluded: bool,
    pub bound: Option<BigUint>,
    pub detail: String,
}

fn as_prime_power(n: u64) -> Option<(u64, u32)> {
    let factors = crate::field::factorize(n);
    if factors.len() == 1 {
        Some(factors[0])
    } else {
        None
    }
}

/// Per-class exclusion arithmetic for the imprimitive (C2/C3), tensor (C4)
/// and symplectic-type (C5) classes at a given (n, ℓ).
pub fn geometric_exclusions(n: u32, ell: u64) -> Vec<ClassExclusion> {
    let mut out = Vec::new();
    let n64 = n as u64;

    // C2/C3: a regular unipotent of order ℓ permuting the blocks forces
    // ℓ | n or ℓ | n−1
    let c23_excluded = ell > n64 && !n64.is_multiple_of(ell) && !(n64 - 1).is_multiple_of(ell);
    for class in ["C2", "C3"] {
        out.push(ClassExclusion {
            class,
            applicable: true,
            excluded: c23_excluded,
            bound: Some(BigUint::from(n64)),
            detail: format!(
                "excluded iff ℓ > n and ℓ ∤ n(n−1): ℓ = {ell}, n = {n}, n(n−1) = {}",
                n64 * (n64 - 1)
            ),
        });
    }

    // C4: the outer image of the unipotent has order dividing 2^t·t!, t ≤ n
    let mut c4_bound = BigUint::one();
    for t in 1..=n64 {
        c4_bound *= BigUint::from(2u64 * t);
    }
    let c4_excluded = BigUint::from(ell) > c4_bound;
    out.push(ClassExclusion {
        class: "C4",
        applicable: true,
        excluded: c4_excluded,
        bound: Some(c4_bound.clone()),
        detail: format!(
            "bound 2^n·n! = {c4_bound}; tensor-factor elements have ≥ 2 Jordan blocks \
             (cited, not re-verified)"
        ),
    });

    // C5: only for n = r^m a prime power; ℓ | |Sp_2m(F_r)| ≤ r^{m(2m+1)}
    match as_prime_power(n64) {
        Some((r, m)) => {
            let bound = BigUint::from(r).pow(m * (2 * m + 1));
            let excluded = BigUint::from(ell) > bound;
            out.push(ClassExclusion {
                class: "C5",
                applicable: true,
                excluded,
                bound: Some(bound.clone()),
                detail: format!("n = {r}^{m}; excluded iff ℓ > r^(m(2m+1)) = {bound}"),
            });
        }
        None => out.push(ClassExclusion {
            class: "C5",
            applicable: false,
            excluded: false,
            bound: None,
            detail: format!("vacuous: n = {n} is not a prime power"),
        }),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_orders() {
        assert_eq!(
            group_order(ClassicalFamily::Sl, 3, 3).unwrap(),
            BigUint::from(5616u64)
        );
        assert_eq!(
            group_order(ClassicalFamily::Sp, 4, 3).unwrap(),
            BigUint::from(51840u64)
        );
        assert_eq!(
            group_order(ClassicalFamily::Sl, 2, 2).unwrap(),
            BigUint::from(6u64)
        );
        assert_eq!(
            group_order(ClassicalFamily::Su, 3, 2).unwrap(),
            BigUint::from(216u64)
        );
        assert_eq!(
            group_order(ClassicalFamily::Sl, 3, 5).unwrap(),
            BigUint::from(372000u64)
        );
        assert_eq!(
            group_order(ClassicalFamily::Sp, 3, 3).unwrap_err(),
            ClassifyError::OddSymplectic(3)
        );
    }

    #[test]
    fn minimal_dimensions() {
        let d = |f, l| GroupDescriptor::new(f, l, 5, 1).unwrap();
        assert_eq!(m_lower(&d(Family::G2, 2)).unwrap(), 7);
        assert_eq!(m_lower(&d(Family::E8, 8)).unwrap(), 248);
        assert_eq!(m_lower(&d(Family::A, 1)).unwrap(), 2);
        assert_eq!(m_lower(&d(Family::B, 2)).unwrap(), 5);
        assert_eq!(m_lower(&d(Family::C, 2)).unwrap(), 4);
        assert_eq!(m_lower(&d(Family::TripleD4, 4)).unwrap(), 8);
        assert!(GroupDescriptor::new(Family::B, 1, 5, 1).is_err());
        assert!(GroupDescriptor::new(Family::TripleD4, 5, 5, 1).is_err());
    }

    #[test]
    fn outer_automorphism_orders() {
        let d = |f, l, ell, a| GroupDescriptor::new(f, l, ell, a).unwrap();
        assert_eq!(out_order(&d(Family::A, 1, 7, 1)).unwrap(), 2); // 2a
        assert_eq!(out_order(&d(Family::A, 1, 7, 3)).unwrap(), 6);
        assert_eq!(out_order(&d(Family::D, 4, 5, 1)).unwrap(), 12); // 12a
        assert_eq!(out_order(&d(Family::TripleD4, 4, 5, 2)).unwrap(), 2); // a
        // A_3(r), r ≡ 1 mod 4: 2a·(4, r−1) = 8a
        assert_eq!(out_order(&d(Family::A, 3, 5, 1)).unwrap(), 8);
        // A_3(r), r ≡ 3 mod 4: (4, r−1) = 2
        assert_eq!(out_order(&d(Family::A, 3, 7, 1)).unwrap(), 4);
        // ²A_3(3): 2a·(4, 4) = 8
        assert_eq!(out_order(&d(Family::TwistedA, 3, 3, 1)).unwrap(), 8);
        assert_eq!(out_order(&d(Family::E6, 6, 7, 1)).unwrap(), 6); // 7 ≡ 1 mod 3
        assert_eq!(out_order(&d(Family::E6, 6, 5, 1)).unwrap(), 2); // 5 ≡ 2 mod 3
        assert_eq!(out_order(&d(Family::TwistedE6, 6, 5, 1)).unwrap(), 6);
        assert_eq!(out_order(&d(Family::E7, 7, 5, 1)).unwrap(), 2);
        assert_eq!(out_order(&d(Family::G2, 2, 5, 2)).unwrap(), 2);
        // D_5(r), r ≡ 3 mod 4: 4a; r ≡ 1 mod 4: 8a
        assert_eq!(out_order(&d(Family::D, 5, 7, 1)).unwrap(), 4);
        assert_eq!(out_order(&d(Family::D, 5, 5, 1)).unwrap(), 8);
        // even ℓ leaves the mod-4 residue branches undefined
        assert_eq!(
            out_order(&d(Family::D, 5, 2, 1)).unwrap_err(),
            ClassifyError::MissingResidue(4)
        );
    }

    #[test]
    fn out_orders_match_the_normal_form() {
        // every |Out| is N·a with small constant N, except the odd-rank
        // A/²A rows whose diagonal part grows with the rank. The table
        // realizes N ∈ {1,2,4,6,8,12} (4 from the odd-rank D/²D rows).
        for family in Family::ALL {
            let (lo, _) = family.rank_range();
            for l in lo..lo + 4 {
                for (ell, a) in [(5u64, 1u32), (7, 2), (11, 1)] {
                    let Ok(d) = GroupDescriptor::new(family, l, ell, a) else {
                        continue;
                    };
                    let Ok(out) = out_order(&d) else { continue };
                    let exempt = matches!(family, Family::A | Family::TwistedA)
                        && l >= 3
                        && l % 2 == 1;
                    if !exempt {
                        let n_part = out / a as u64;
                        assert!(
                            [1, 2, 4, 6, 8, 12].contains(&n_part),
                            "{family:?} l={l} r={ell}^{a}: N = {n_part}"
                        );
                        assert_eq!(out % a as u64, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn survey_rank_two() {
        // n = 2: only A_1 fits (every other family has m(S) ≥ 3)
        let survey = candidate_survey(2, 97, 1);
        assert!(!survey.is_empty());
        assert!(survey
            .iter()
            .all(|d| d.family == Family::A && d.l == 1));
    }

    #[test]
    fn survey_rank_five() {
        let survey = candidate_survey(5, 97, 1);
        let has = |fam, l| survey.iter().any(|d| d.family == fam && d.l == l);
        assert!(has(Family::A, 1));
        assert!(has(Family::A, 4));
        assert!(!has(Family::A, 5));
        assert!(has(Family::B, 2)); // m = 5
        assert!(has(Family::C, 2)); // m = 4
        assert!(!has(Family::G2, 2)); // m = 7 > 5
    }

    #[test]
    fn survey_rank_seven_includes_g2() {
        let survey = candidate_survey(7, 1_000_003, 1);
        assert!(survey
            .iter()
            .any(|d| d.family == Family::G2 && d.a == 1));
    }

    #[test]
    fn survey_is_monotone_in_n() {
        for f in [1u32, 2] {
            let small = candidate_survey(5, 13, f);
            let large = candidate_survey(6, 13, f);
            for d in &small {
                assert!(large.contains(d), "{d:?} dropped when n grew");
            }
        }
    }

    #[test]
    fn survey_rank_bound() {
        for d in candidate_survey(9, 11, 2) {
            assert!(d.l as u64 <= m_lower(&d).unwrap());
        }
    }

    #[test]
    fn exclusion_examples() {
        // (n=5, ℓ=7): C2 excluded since 7 > 5 and 7 ∤ 20
        let rep = geometric_exclusions(5, 7);
        let c2 = rep.iter().find(|c| c.class == "C2").unwrap();
        assert!(c2.excluded);
        // (n=9): C5 bound 3^10 = 59049
        let rep = geometric_exclusions(9, 59050);
        let c5 = rep.iter().find(|c| c.class == "C5").unwrap();
        assert!(c5.applicable);
        assert_eq!(c5.bound.as_ref().unwrap(), &BigUint::from(59049u64));
        assert!(c5.excluded);
        let rep = geometric_exclusions(9, 59049);
        assert!(!rep.iter().find(|c| c.class == "C5").unwrap().excluded);
        // (n=6): C5 vacuous
        let rep = geometric_exclusions(6, 1009);
        let c5 = rep.iter().find(|c| c.class == "C5").unwrap();
        assert!(!c5.applicable);
        // small ℓ dividing n is not excluded in C2
        let rep = geometric_exclusions(5, 5);
        assert!(!rep.iter().find(|c| c.class == "C2").unwrap().excluded);
    }
}
