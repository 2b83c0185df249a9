//! Matrices over finite fields and the group-theoretic checks attached to
//! the local monodromy of Kloosterman sums: the distinguished elements u
//! (regular unipotent) and m (signed cyclic shift), breadth-first group
//! closure, invariant bilinear forms, the explicit inertia representation
//! at ∞, and the normalizer power test.

mod bilinear;
mod closure;
mod inertia;
mod normalizer;

pub use bilinear::{invariant_bilinear, BilinearReport};
pub use closure::{closure_elements, group_closure, ClosureOutcome, ClosureResult, DEFAULT_CAP as DEFAULT_CLOSURE_CAP};
pub use inertia::{
    enumerate_inertia_group, inertia_compose, inertia_identity, inertia_inverse,
    inertia_matrix_exact, inertia_matrix_reduced, wild_part, InertiaElement, MatCyclo,
};
pub use normalizer::{
    normalizer_power_check, sl_generators, sp_generators, symplectic_form, CheckMode,
    GroupFamily, NormalizerReport,
};

use thiserror::Error;

use crate::cyclo::CycloError;
use crate::field::{FieldCtx, FieldError, FqElem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatError {
    #[error("dimension must be ≥ 2")]
    DimensionTooSmall,
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    #[error("F_q must contain a primitive 2n-th root of unity (2n ∤ q−1 here)")]
    NoRootOfUnity,
    #[error("generator set is empty")]
    NoGenerators,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// A square matrix over a finite field, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatFin {
    n: usize,
    a: Vec<FqElem>,
}

impl MatFin {
    pub fn zero(n: usize) -> MatFin {
        MatFin {
            n,
            a: vec![FqElem::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> MatFin {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = FqElem::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[FqElem]]) -> MatFin {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            a.extend_from_slice(r);
        }
        MatFin { n, a }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[FqElem] {
        &self.a
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().enumerate().all(|(idx, &v)| {
            v == if idx / self.n == idx % self.n {
                FqElem::ONE
            } else {
                FqElem::ZERO
            }
        })
    }

    pub fn transpose(&self) -> MatFin {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &MatFin) -> MatFin {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for l in 0..n {
                let x = self[(i, l)];
                if x == FqElem::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = ctx.add(out[(i, j)], ctx.mul(x, other[(l, j)]));
                }
            }
        }
        out
    }

    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> MatFin {
        let mut result = Self::identity(self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(ctx, &b);
            }
            b = b.mul(ctx, &b);
            e >>= 1;
        }
        result
    }

    /// Multiplicative order by direct powering (caller bounds the search).
    pub fn multiplicative_order(&self, ctx: &FieldCtx, cap: u64) -> Option<u64> {
        let mut cur = self.clone();
        for ord in 1..=cap {
            if cur.is_identity() {
                return Some(ord);
            }
            cur = cur.mul(ctx, self);
        }
        None
    }

    pub fn det(&self, ctx: &FieldCtx) -> FqElem {
        let n = self.n;
        let mut m = self.a.clone();
        let mut det = FqElem::ONE;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != FqElem::ZERO);
            let Some(pivot) = pivot else {
                return FqElem::ZERO;
            };
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = ctx.neg(det);
            }
            let pv = m[col * n + col];
            det = ctx.mul(det, pv);
            let pv_inv = ctx.inv(pv).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = ctx.mul(m[r * n + col], pv_inv);
                if factor == FqElem::ZERO {
                    continue;
                }
                for j in col..n {
                    let sub = ctx.mul(factor, m[col * n + j]);
                    m[r * n + j] = ctx.sub(m[r * n + j], sub);
                }
            }
        }
        det
    }

    pub fn inv(&self, ctx: &FieldCtx) -> Result<MatFin, MatError> {
        let n = self.n;
        let mut m = self.a.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| m[r * n + col] != FqElem::ZERO)
                .ok_or(MatError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                    inv.a.swap(pivot * n + j, col * n + j);
                }
            }
            let pv_inv = ctx.inv(m[col * n + col]).expect("pivot is nonzero");
            for j in 0..n {
                m[col * n + j] = ctx.mul(m[col * n + j], pv_inv);
                inv.a[col * n + j] = ctx.mul(inv.a[col * n + j], pv_inv);
            }
            for r in 0..n {
                if r == col || m[r * n + col] == FqElem::ZERO {
                    continue;
                }
                let factor = m[r * n + col];
                for j in 0..n {
                    let s = ctx.mul(factor, m[col * n + j]);
                    m[r * n + j] = ctx.sub(m[r * n + j], s);
                    let s = ctx.mul(factor, inv.a[col * n + j]);
                    inv.a[r * n + j] = ctx.sub(inv.a[r * n + j], s);
                }
            }
        }
        Ok(inv)
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let n = self.n;
        let mut m = self.a.clone();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| m[r * n + col] != FqElem::ZERO);
            let Some(pivot) = pivot else { continue };
            if pivot != rank {
                for j in 0..n {
                    m.swap(pivot * n + j, rank * n + j);
                }
            }
            let pv_inv = ctx.inv(m[rank * n + col]).expect("pivot is nonzero");
            for r in rank + 1..n {
                let factor = ctx.mul(m[r * n + col], pv_inv);
                if factor == FqElem::ZERO {
                    continue;
                }
                for j in col..n {
                    let s = ctx.mul(factor, m[rank * n + j]);
                    m[r * n + j] = ctx.sub(m[r * n + j], s);
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &MatFin) -> MatFin {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (o, (x, y)) in out.a.iter_mut().zip(self.a.iter().zip(other.a.iter())) {
            *o = ctx.sub(*x, *y);
        }
        out
    }

    /// True iff every entry lies in the subfield F_{p^d}.
    pub fn in_subfield(&self, ctx: &FieldCtx, d: u32) -> bool {
        self.a.iter().all(|&x| ctx.in_subfield(x, d))
    }

    /// rank((M − I)^j) for j = 0, …, n: the Jordan structure of a unipotent
    /// element is determined by this sequence.
    pub fn nilpotency_ranks(&self, ctx: &FieldCtx) -> Vec<usize> {
        let nil = self.sub(ctx, &Self::identity(self.n));
        (0..=self.n as u64)
            .map(|j| nil.pow(ctx, j).rank(ctx))
            .collect()
    }

    /// True iff M is unipotent with a single Jordan block:
    /// rank((M − I)^j) = n − j for every j.
    pub fn is_regular_unipotent(&self, ctx: &FieldCtx) -> bool {
        self.nilpotency_ranks(ctx)
            .iter()
            .enumerate()
            .all(|(j, &r)| r == self.n - j)
    }
}

impl std::ops::Index<(usize, usize)> for MatFin {
    type Output = FqElem;
    fn index(&self, (i, j): (usize, usize)) -> &FqElem {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatFin {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FqElem {
        &mut self.a[i * self.n + j]
    }
}

/// The upper unitriangular element with ones on the superdiagonal: a
/// regular unipotent (single Jordan block).
pub fn elem_u(n: usize) -> Result<MatFin, MatError> {
    if n < 2 {
        return Err(MatError::DimensionTooSmall);
    }
    let mut m = MatFin::identity(n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = FqElem::ONE;
    }
    Ok(m)
}

/// The signed cyclic shift: ones on the subdiagonal, (−1)^{n+1} in the top
/// right. Has order n for n odd and 2n for n even.
pub fn elem_m(ctx: &FieldCtx, n: usize) -> Result<MatFin, MatError> {
    if n < 2 {
        return Err(MatError::DimensionTooSmall);
    }
    let mut m = MatFin::zero(n);
    for i in 1..n {
        m[(i, i - 1)] = FqElem::ONE;
    }
    m[(0, n - 1)] = if n % 2 == 1 {
        FqElem::ONE
    } else {
        ctx.neg(FqElem::ONE)
    };
    Ok(m)
}

/// Order of the regular unipotent in GL_n(F_ℓ): ℓ^{⌈log_ℓ n⌉} (Lucas),
/// cross-validated by direct matrix powering.
pub fn unipotent_order(n: usize, ell: u64) -> Result<u64, MatError> {
    let ctx = if ell == 2 {
        FieldCtx::new_char2(1, None)?
    } else {
        FieldCtx::new(ell, 1, None)?
    };
    let mut formula = 1u64;
    while formula < n as u64 {
        formula *= ell;
    }
    if n >= 2 {
        let u = elem_u(n)?;
        let direct = u
            .multiplicative_order(&ctx, 4 * formula)
            .expect("unipotent order is bounded");
        assert_eq!(direct, formula, "Lucas formula must match direct powering");
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_m_small_cases() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let m2 = elem_m(&f5, 2).unwrap();
        // [[0, −1], [1, 0]]
        assert_eq!(m2[(0, 0)], FqElem(0));
        assert_eq!(m2[(0, 1)], FqElem(4));
        assert_eq!(m2[(1, 0)], FqElem(1));
        assert_eq!(m2[(1, 1)], FqElem(0));
        assert!(elem_m(&f5, 1).is_err());
    }

    #[test]
    fn elem_m_order() {
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        for n in 2..=6usize {
            let m = elem_m(&f7, n).unwrap();
            let expect = if n % 2 == 1 { n as u64 } else { 2 * n as u64 };
            assert_eq!(m.multiplicative_order(&f7, 100).unwrap(), expect);
            // m^n = (−1)^{n+1}·Id
            let mn = m.pow(&f7, n as u64);
            let scalar = if n % 2 == 1 {
                FqElem::ONE
            } else {
                f7.neg(FqElem::ONE)
            };
            let mut expect_mat = MatFin::zero(n);
            for i in 0..n {
                expect_mat[(i, i)] = scalar;
            }
            assert_eq!(mn, expect_mat);
        }
    }

    #[test]
    fn elem_u_fixes_e1_and_has_single_jordan_block() {
        let f5 = FieldCtx::new(5, 1, None).unwrap();
        let n = 3;
        let u = elem_u(n).unwrap();
        // u·e_1 = e_1
        assert_eq!(u[(0, 0)], FqElem::ONE);
        assert_eq!(u[(1, 0)], FqElem::ZERO);
        assert_eq!(u[(2, 0)], FqElem::ZERO);
        // rank((u − I)^j) = n − j for 1 ≤ j ≤ n
        let id = MatFin::identity(n);
        for j in 1..=n as u64 {
            let nil = u.sub(&f5, &id).pow(&f5, j);
            assert_eq!(nil.rank(&f5), n - j as usize);
        }
    }

    #[test]
    fn jordan_structure_queries() {
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        for n in 2..=6usize {
            assert!(elem_u(n).unwrap().is_regular_unipotent(&f7));
            assert!(!MatFin::identity(n).is_regular_unipotent(&f7));
        }
        // u ⊕ u (two blocks) is unipotent but not regular
        let mut two_blocks = MatFin::identity(4);
        two_blocks[(0, 1)] = FqElem::ONE;
        two_blocks[(2, 3)] = FqElem::ONE;
        assert!(!two_blocks.is_regular_unipotent(&f7));
        assert_eq!(two_blocks.nilpotency_ranks(&f7), vec![4, 2, 0, 0, 0]);
        // elem_m is not unipotent at all: M − I stays invertible in F_7
        let m = elem_m(&f7, 3).unwrap();
        assert!(!m.is_regular_unipotent(&f7));
    }

    #[test]
    fn unipotent_orders() {
        assert_eq!(unipotent_order(5, 7).unwrap(), 7);
        assert_eq!(unipotent_order(3, 2).unwrap(), 4);
        assert_eq!(unipotent_order(4, 3).unwrap(), 9);
        assert_eq!(unipotent_order(1, 5).unwrap(), 1);
    }

    #[test]
    fn det_inv_rank() {
        let f7 = FieldCtx::new(7, 1, None).unwrap();
        let m = MatFin::from_rows(&[
            &[FqElem(1), FqElem(2), FqElem(3)],
            &[FqElem(0), FqElem(4), FqElem(5)],
            &[FqElem(1), FqElem(0), FqElem(6)],
        ]);
        // det = 1·(24−0) − 2·(0−5) + 3·(0−4) = 24 + 10 − 12 = 22 ≡ 1 mod 7
        assert_eq!(m.det(&f7), FqElem(1));
        let mi = m.inv(&f7).unwrap();
        assert!(m.mul(&f7, &mi).is_identity());
        assert_eq!(m.rank(&f7), 3);
        assert_eq!(MatFin::zero(3).rank(&f7), 0);
        assert!(MatFin::zero(3).inv(&f7).is_err());
    }
}
