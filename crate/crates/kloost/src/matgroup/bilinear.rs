//! Solver for the space of invariant bilinear forms {A : gᵀAg = A for all
//! generators g}, split into symmetric and alternating parts.
//!
//! The space is an exact nullspace computation on n² unknowns over F_q. It
//! is transpose-stable, so in odd characteristic it decomposes as
//! Sym ⊕ Alt; the report carries bases of both parts and whether the
//! alternating part contains a nondegenerate form (a perfect pairing).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{MatError, MatFin};
use crate::field::{FieldCtx, FqElem};

#[derive(Debug, Clone)]
pub struct BilinearReport {
    pub dim_total: usize,
    pub dim_sym: usize,
    pub dim_alt: usize,
    pub sym_basis: Vec<MatFin>,
    pub alt_basis: Vec<MatFin>,
    /// Whether some alternating invariant form is nondegenerate.
    pub nondegenerate_alternating: Option<MatFin>,
}

/// Row-reduce a matrix over F_q in place; returns the pivot columns.
fn rref(ctx: &FieldCtx, rows: &mut Vec<Vec<FqElem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != FqElem::ZERO) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = ctx.inv(rows[rank][col]).expect("pivot nonzero");
        for v in rows[rank].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == FqElem::ZERO {
                continue;
            }
            let f = rows[r][col];
            for c in 0..ncols {
                let s = ctx.mul(f, rows[rank][c]);
                rows[r][c] = ctx.sub(rows[r][c], s);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Nullspace basis of the system given by `rows` (each row: coefficients of
/// the n²-vector of unknowns).
fn nullspace(ctx: &FieldCtx, mut rows: Vec<Vec<FqElem>>, ncols: usize) -> Vec<Vec<FqElem>> {
    rows.retain(|r| r.iter().any(|&v| v != FqElem::ZERO));
    let pivots = rref(ctx, &mut rows);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![FqElem::ZERO; ncols];
        v[free] = FqElem::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            // pivot variable = −(coefficient of the free variable)
            v[pc] = ctx.neg(rows[r][free]);
        }
        basis.push(v);
    }
    basis
}

fn constraint_rows(ctx: &FieldCtx, gens: &[MatFin], n: usize) -> Vec<Vec<FqElem>> {
    let mut rows = Vec::new();
    for g in gens {
        for i in 0..n {
            for j in 0..n {
                // Σ_{k,l} g[k][i]·g[l][j]·A[k][l] − A[i][j] = 0
                let mut row = vec![FqElem::ZERO; n * n];
                for k in 0..n {
                    let gki = g[(k, i)];
                    if gki == FqElem::ZERO {
                        continue;
                    }
                    for l in 0..n {
                        row[k * n + l] = ctx.add(row[k * n + l], ctx.mul(gki, g[(l, j)]));
                    }
                }
                row[i * n + j] = ctx.sub(row[i * n + j], FqElem::ONE);
                rows.push(row);
            }
        }
    }
    rows
}

fn to_mat(v: &[FqElem], n: usize) -> MatFin {
    let mut m = MatFin::zero(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = v[i * n + j];
        }
    }
    m
}

/// Exact solve of gᵀAg = A over all generators.
pub fn invariant_bilinear(ctx: &FieldCtx, gens: &[MatFin]) -> Result<BilinearReport, MatError> {
    let Some(first) = gens.first() else {
        return Err(MatError::NoGenerators);
    };
    let n = first.dim();
    for g in gens {
        if g.dim() != n {
            return Err(MatError::DimensionMismatch);
        }
        if g.det(ctx) == FqElem::ZERO {
            return Err(MatError::Singular);
        }
    }
    let base_rows = constraint_rows(ctx, gens, n);
    let total = nullspace(ctx, base_rows.clone(), n * n);

    // symmetric part: add A[i][j] − A[j][i] = 0
    let mut sym_rows = base_rows.clone();
    for i in 0..n {
        for j in i + 1..n {
            let mut row = vec![FqElem::ZERO; n * n];
            row[i * n + j] = FqElem::ONE;
            row[j * n + i] = ctx.neg(FqElem::ONE);
            sym_rows.push(row);
        }
    }
    let sym = nullspace(ctx, sym_rows, n * n);

    // alternating part: A[i][j] + A[j][i] = 0 and zero diagonal
    let mut alt_rows = base_rows;
    for i in 0..n {
        for j in i + 1..n {
            let mut row = vec![FqElem::ZERO; n * n];
            row[i * n + j] = FqElem::ONE;
            row[j * n + i] = FqElem::ONE;
            alt_rows.push(row);
        }
        let mut row = vec![FqElem::ZERO; n * n];
        row[i * n + i] = FqElem::ONE;
        alt_rows.push(row);
    }
    let alt = nullspace(ctx, alt_rows, n * n);

    let alt_basis: Vec<MatFin> = alt.iter().map(|v| to_mat(v, n)).collect();
    let nondegenerate_alternating = find_nondegenerate(ctx, &alt_basis);

    Ok(BilinearReport {
        dim_total: total.len(),
        dim_sym: sym.len(),
        dim_alt: alt.len(),
        sym_basis: sym.iter().map(|v| to_mat(v, n)).collect(),
        alt_basis,
        nondegenerate_alternating,
    })
}

/// Search the span of `basis` for a matrix with nonzero determinant:
/// exhaustive when q^dim is small, sampled otherwise.
fn find_nondegenerate(ctx: &FieldCtx, basis: &[MatFin]) -> Option<MatFin> {
    if basis.is_empty() {
        return None;
    }
    let n = basis[0].dim();
    let q = ctx.q();
    let dim = basis.len() as u32;
    let combine = |coeffs: &[FqElem]| {
        let mut m = MatFin::zero(n);
        for (c, b) in coeffs.iter().zip(basis.iter()) {
            if *c == FqElem::ZERO {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = ctx.add(m[(i, j)], ctx.mul(*c, b[(i, j)]));
                }
            }
        }
        m
    };
    let total = q.checked_pow(dim).unwrap_or(u64::MAX);
    if total <= 65536 {
        for idx in 1..total {
            let mut coeffs = Vec::with_capacity(dim as usize);
            let mut rem = idx;
            for _ in 0..dim {
                coeffs.push(FqElem(rem % q));
                rem /= q;
            }
            let m = combine(&coeffs);
            if m.det(ctx) != FqElem::ZERO {
                return Some(m);
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10_000 {
            let coeffs: Vec<FqElem> = (0..dim).map(|_| FqElem(rng.gen_range(0..q))).collect();
            let m = combine(&coeffs);
            if !m.entries().iter().all(|&e| e == FqElem::ZERO) && m.det(ctx) != FqElem::ZERO {
                return Some(m);
            }
        }
        None
    }
}
