//! Explicit matrix model of the inertia group at ∞.
//!
//! The group elements are pairs σ(a₀, i₀) with a₀ ∈ F_q and i₀ ∈ Z/2n,
//! acting on the Kummer/Artin-Schreier tower by Z ↦ ζ_{2n}^{i₀}Z and
//! W ↦ ζ_{2n}^{2i₀}(W + a₀); composing the field automorphisms gives
//!
//! ```text
//! (a, i)·(b, j) = (a + ζ_{2n}^{−2i}·b, i + j mod 2n),
//! ```
//!
//! a semidirect product of order q·2n. The induced n-dimensional
//! representation sends σ(a₀, i₀) to the matrix with (i, j) entry
//!
//! ```text
//! (−1)^{(n+1)(j−i+i₀)/n} · ζ_p^{tr(n·a₀·ζ_n^i)}   when i − j ≡ i₀ (mod n)
//! ```
//!
//! and 0 otherwise (1-based indices). Entries live in `Z[ζ_p]` exactly, or
//! in a residue field F_λ after reduction. σ(0, 1) reproduces the signed
//! cyclic shift m, and {σ(a, 0)} is the wild part (diagonal matrices).

use super::{MatError, MatFin};
use crate::cyclo::{CycloError, CycloInt, CycloRing, ReductionCtx};
use crate::field::{FieldCtx, FqElem};

/// An element σ(a₀, i₀) of the inertia group at ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InertiaElement {
    pub a0: FqElem,
    /// Residue class mod 2n.
    pub i0: u64,
}

fn require_root(ctx: &FieldCtx, n: usize) -> Result<u64, MatError> {
    if n < 2 {
        return Err(MatError::DimensionTooSmall);
    }
    let two_n = 2 * n as u64;
    if !(ctx.q() - 1).is_multiple_of(two_n) {
        return Err(MatError::NoRootOfUnity);
    }
    Ok(two_n)
}

/// The fixed primitive 2n-th root of unity ζ_{2n} = g^{(q−1)/2n}.
fn zeta_2n(ctx: &FieldCtx, n: usize) -> Result<FqElem, MatError> {
    let two_n = require_root(ctx, n)?;
    Ok(ctx.exp((ctx.q() - 1) / two_n))
}

pub fn inertia_identity() -> InertiaElement {
    InertiaElement {
        a0: FqElem::ZERO,
        i0: 0,
    }
}

/// (a, i)·(b, j) = (a + ζ_{2n}^{−2i}·b, i + j mod 2n).
pub fn inertia_compose(
    ctx: &FieldCtx,
    n: usize,
    s: InertiaElement,
    t: InertiaElement,
) -> Result<InertiaElement, MatError> {
    let two_n = require_root(ctx, n)?;
    let zeta_inv = ctx.inv(zeta_2n(ctx, n)?).expect("root of unity is a unit");
    let twist = ctx.pow(zeta_inv, (2 * (s.i0 % two_n)) as u128);
    Ok(InertiaElement {
        a0: ctx.add(s.a0, ctx.mul(twist, t.a0)),
        i0: (s.i0 + t.i0) % two_n,
    })
}

pub fn inertia_inverse(
    ctx: &FieldCtx,
    n: usize,
    s: InertiaElement,
) -> Result<InertiaElement, MatError> {
    let two_n = require_root(ctx, n)?;
    let zeta = zeta_2n(ctx, n)?;
    let twist = ctx.pow(zeta, (2 * (s.i0 % two_n)) as u128);
    Ok(InertiaElement {
        a0: ctx.neg(ctx.mul(twist, s.a0)),
        i0: (two_n - s.i0 % two_n) % two_n,
    })
}

/// All q·2n elements of the inertia group.
pub fn enumerate_inertia_group(
    ctx: &FieldCtx,
    n: usize,
) -> Result<Vec<InertiaElement>, MatError> {
    let two_n = require_root(ctx, n)?;
    let mut out = Vec::with_capacity((ctx.q() * two_n) as usize);
    for a in ctx.elements() {
        for i0 in 0..two_n {
            out.push(InertiaElement { a0: a, i0 });
        }
    }
    Ok(out)
}

/// The wild part {σ(a, 0) : a ∈ F_q}, whose matrices are diagonal.
pub fn wild_part(ctx: &FieldCtx, n: usize) -> Result<Vec<InertiaElement>, MatError> {
    require_root(ctx, n)?;
    Ok(ctx
        .elements()
        .map(|a| InertiaElement { a0: a, i0: 0 })
        .collect())
}

/// A square matrix with entries in `Z[ζ_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatCyclo {
    n: usize,
    a: Vec<CycloInt>,
}

impl MatCyclo {
    pub fn zero(ring: &CycloRing, n: usize) -> MatCyclo {
        MatCyclo {
            n,
            a: vec![ring.zero(); n * n],
        }
    }

    pub fn identity(ring: &CycloRing, n: usize) -> MatCyclo {
        let mut m = Self::zero(ring, n);
        for i in 0..n {
            m.a[i * n + i] = ring.one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &CycloInt {
        &self.a[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: CycloInt) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, ring: &CycloRing, other: &MatCyclo) -> Result<MatCyclo, CycloError> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(ring, n);
        for i in 0..n {
            for l in 0..n {
                let x = self.entry(i, l);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = other.entry(l, j);
                    if y.is_zero() {
                        continue;
                    }
                    let prod = ring.mul(x, y)?;
                    out.a[i * n + j] = ring.add(&out.a[i * n + j], &prod)?;
                }
            }
        }
        Ok(out)
    }

    /// Determinant by Laplace expansion along the first row (the matrices
    /// here are small and sparse).
    pub fn det(&self, ring: &CycloRing) -> Result<CycloInt, CycloError> {
        if self.n == 1 {
            return Ok(self.a[0].clone());
        }
        let n = self.n;
        let mut acc = ring.zero();
        for j in 0..n {
            let top = self.entry(0, j);
            if top.is_zero() {
                continue;
            }
            let mut minor = MatCyclo::zero(ring, n - 1);
            for r in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor.a[(r - 1) * (n - 1) + cc] = self.entry(r, c).clone();
                    cc += 1;
                }
            }
            let mut term = ring.mul(top, &minor.det(ring)?)?;
            if j % 2 == 1 {
                term = ring.neg(&term)?;
            }
            acc = ring.add(&acc, &term)?;
        }
        Ok(acc)
    }
}

/// The exact inertia matrix of σ over `Z[ζ_p]` (ring conductor must be p).
pub fn inertia_matrix_exact(
    ctx: &FieldCtx,
    ring: &CycloRing,
    n: usize,
    s: InertiaElement,
) -> Result<MatCyclo, MatError> {
    let two_n = require_root(ctx, n)?;
    if ring.p() != ctx.p() || ring.conductor() != ctx.p() {
        return Err(MatError::Cyclo(CycloError::CharMismatch {
            ring_p: ring.p(),
            ctx_p: ctx.p(),
        }));
    }
    let zeta_n = ctx.exp((ctx.q() - 1) / n as u64);
    let n_elem = ctx.from_base(n as u64 % ctx.p());
    let i0 = s.i0 % two_n;
    let mut out = MatCyclo::zero(ring, n);
    for i in 1..=n {
        for j in 1..=n {
            let e = j as i64 - i as i64 + i0 as i64;
            if e.rem_euclid(n as i64) != 0 {
                continue;
            }
            let sign_neg = n.is_multiple_of(2) && (e / n as i64) % 2 != 0;
            let arg = ctx.mul(ctx.mul(n_elem, s.a0), ctx.pow(zeta_n, i as u128));
            let mut entry = ring.zeta_pow(ctx.trace(arg));
            if sign_neg {
                entry = ring.neg(&entry).map_err(MatError::Cyclo)?;
            }
            out.set_entry(i - 1, j - 1, entry);
        }
    }
    Ok(out)
}

/// The inertia matrix of σ reduced into F_λ (conductor p or 4p over p).
pub fn inertia_matrix_reduced(
    ctx: &FieldCtx,
    rc: &ReductionCtx,
    n: usize,
    s: InertiaElement,
) -> Result<MatFin, MatError> {
    let two_n = require_root(ctx, n)?;
    let p = ctx.p();
    if rc.conductor() != p && rc.conductor() != 4 * p {
        return Err(MatError::Cyclo(CycloError::ConductorMismatch {
            ring: rc.conductor(),
            elem: p,
        }));
    }
    let stride = if rc.conductor() == p { 1u64 } else { 4 };
    let field = rc.field();
    let zeta_n = ctx.exp((ctx.q() - 1) / n as u64);
    let n_elem = ctx.from_base(n as u64 % p);
    let i0 = s.i0 % two_n;
    let mut out = MatFin::zero(n);
    for i in 1..=n {
        for j in 1..=n {
            let e = j as i64 - i as i64 + i0 as i64;
            if e.rem_euclid(n as i64) != 0 {
                continue;
            }
            let sign_neg = n.is_multiple_of(2) && (e / n as i64) % 2 != 0;
            let arg = ctx.mul(ctx.mul(n_elem, s.a0), ctx.pow(zeta_n, i as u128));
            let mut entry = field.pow(rc.root(), (stride * ctx.trace(arg)) as u128);
            if sign_neg {
                entry = field.neg(entry);
            }
            out[(i - 1, j - 1)] = entry;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::make_reduction;
    use crate::matgroup::elem_m;

    #[test]
    fn matrix_of_0_1_is_the_signed_shift() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let ring = CycloRing::new(13).unwrap();
        let s = InertiaElement {
            a0: FqElem::ZERO,
            i0: 1,
        };
        let m2 = inertia_matrix_exact(&ctx, &ring, 2, s).unwrap();
        assert_eq!(*m2.entry(0, 0), ring.zero());
        assert_eq!(*m2.entry(0, 1), ring.from_i64(-1));
        assert_eq!(*m2.entry(1, 0), ring.one());
        assert_eq!(*m2.entry(1, 1), ring.zero());
        let m3 = inertia_matrix_exact(&ctx, &ring, 3, s).unwrap();
        // [[0,0,1],[1,0,0],[0,1,0]]: no signs for odd n
        assert_eq!(*m3.entry(0, 2), ring.one());
        assert_eq!(*m3.entry(1, 0), ring.one());
        assert_eq!(*m3.entry(2, 1), ring.one());
        assert_eq!(*m3.entry(0, 0), ring.zero());
    }

    #[test]
    fn matrix_of_identity_element() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let ring = CycloRing::new(13).unwrap();
        for n in [2usize, 3] {
            let m = inertia_matrix_exact(&ctx, &ring, n, inertia_identity()).unwrap();
            assert_eq!(m, MatCyclo::identity(&ring, n));
        }
    }

    #[test]
    fn wild_part_matrices_are_diagonal_with_trace_entries() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let ring = CycloRing::new(13).unwrap();
        let n = 3;
        let zeta3 = ctx.exp((13 - 1) / 3);
        for a in [FqElem(1), FqElem(5)] {
            let s = InertiaElement { a0: a, i0: 0 };
            let m = inertia_matrix_exact(&ctx, &ring, n, s).unwrap();
            for i in 1..=n {
                let arg = ctx.mul(ctx.mul(ctx.from_base(3), a), ctx.pow(zeta3, i as u128));
                assert_eq!(*m.entry(i - 1, i - 1), ring.zeta_pow(ctx.trace(arg)));
                for j in 1..=n {
                    if i != j {
                        assert!(m.entry(i - 1, j - 1).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn composition_law_and_group_axioms() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let n = 2;
        let e = inertia_identity();
        let s = InertiaElement {
            a0: FqElem(1),
            i0: 1,
        };
        // (a,i)·(0,0) = (a,i) and (0,1)² = (0,2)
        assert_eq!(inertia_compose(&ctx, n, s, e).unwrap(), s);
        let r = InertiaElement {
            a0: FqElem::ZERO,
            i0: 1,
        };
        let rr = inertia_compose(&ctx, n, r, r).unwrap();
        assert_eq!(rr.i0, 2);
        assert_eq!(rr.a0, FqElem::ZERO);
        // (1,1)·(1,0) = (1 + ζ₄^{−2}·1, 1) = (0, 1) since ζ₄² = −1
        let t = InertiaElement {
            a0: FqElem(1),
            i0: 0,
        };
        let st = inertia_compose(&ctx, n, s, t).unwrap();
        assert_eq!(st, InertiaElement { a0: FqElem::ZERO, i0: 1 });
        // inverses and associativity over the full group
        let els = enumerate_inertia_group(&ctx, n).unwrap();
        assert_eq!(els.len(), 13 * 4);
        for &x in els.iter().take(10) {
            let xi = inertia_inverse(&ctx, n, x).unwrap();
            assert_eq!(inertia_compose(&ctx, n, x, xi).unwrap(), e);
            assert_eq!(inertia_compose(&ctx, n, xi, x).unwrap(), e);
            for &y in els.iter().take(10) {
                for &z in els.iter().take(5) {
                    let xy_z = inertia_compose(
                        &ctx,
                        n,
                        inertia_compose(&ctx, n, x, y).unwrap(),
                        z,
                    )
                    .unwrap();
                    let x_yz = inertia_compose(
                        &ctx,
                        n,
                        x,
                        inertia_compose(&ctx, n, y, z).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(xy_z, x_yz);
                }
            }
        }
    }

    #[test]
    fn homomorphism_exhaustive_small() {
        // q = 5, n = 2: 2n = 4 | q−1; the 20-element group maps
        // multiplicatively onto its matrices over Z[ζ_5]
        let ctx = FieldCtx::new(5, 1, None).unwrap();
        let ring = CycloRing::new(5).unwrap();
        let n = 2;
        let els = enumerate_inertia_group(&ctx, n).unwrap();
        for &s in &els {
            let ms = inertia_matrix_exact(&ctx, &ring, n, s).unwrap();
            for &t in &els {
                let mt = inertia_matrix_exact(&ctx, &ring, n, t).unwrap();
                let st = inertia_compose(&ctx, n, s, t).unwrap();
                let mst = inertia_matrix_exact(&ctx, &ring, n, st).unwrap();
                assert_eq!(ms.mul(&ring, &mt).unwrap(), mst);
            }
        }
    }

    #[test]
    fn determinants_are_one() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let ring = CycloRing::new(13).unwrap();
        for n in [2usize, 3] {
            for &s in enumerate_inertia_group(&ctx, n).unwrap().iter() {
                let m = inertia_matrix_exact(&ctx, &ring, n, s).unwrap();
                assert_eq!(m.det(&ring).unwrap(), ring.one(), "n={n} {s:?}");
            }
        }
    }

    #[test]
    fn reduced_matrices_match_exact_ones() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let ring = CycloRing::new(13).unwrap();
        let rc = make_reduction(&ring, 5).unwrap();
        let n = 2;
        let s = InertiaElement {
            a0: FqElem(7),
            i0: 3,
        };
        let exact = inertia_matrix_exact(&ctx, &ring, n, s).unwrap();
        let reduced = inertia_matrix_reduced(&ctx, &rc, n, s).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(rc.reduce(exact.entry(i, j)).unwrap(), reduced[(i, j)]);
            }
        }
    }

    #[test]
    fn requires_2n_th_root() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        // 2n = 8 does not divide 12
        assert_eq!(
            enumerate_inertia_group(&ctx, 4).unwrap_err(),
            MatError::NoRootOfUnity
        );
        // but it divides 168 = 13² − 1
        let ctx169 = FieldCtx::new(13, 2, None).unwrap();
        assert!(enumerate_inertia_group(&ctx169, 4).is_ok());
    }

    #[test]
    fn reduced_signed_shift_equals_elem_m() {
        let ctx = FieldCtx::new(13, 1, None).unwrap();
        let ring = CycloRing::new(13).unwrap();
        let rc = make_reduction(&ring, 5).unwrap();
        for n in [2usize, 3] {
            let s = InertiaElement {
                a0: FqElem::ZERO,
                i0: 1,
            };
            let reduced = inertia_matrix_reduced(&ctx, &rc, n, s).unwrap();
            let m = elem_m(rc.field(), n).unwrap();
            assert_eq!(reduced, m);
        }
    }
}
