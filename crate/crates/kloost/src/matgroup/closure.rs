//! Breadth-first closure of a matrix generating set under multiplication.
//!
//! States are packed base-q into u128 keys; the frontier holds packed
//! states too, so memory stays near 16 bytes per visited element plus hash
//! overhead. Closure under multiplication alone suffices: in a finite
//! group every inverse is a positive power.

use std::collections::{HashSet, VecDeque};

use super::{MatError, MatFin};
use crate::field::{FieldCtx, FqElem};

/// Default element cap, per the 10^7-element memory budget.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureOutcome {
    /// Exact order of the generated group.
    Order(u64),
    /// More than `cap` elements were reached; the closure was abandoned.
    CapExceeded { cap: u64 },
}

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub outcome: ClosureOutcome,
    /// Elements enumerated before stopping.
    pub visited: u64,
    /// Rough memory footprint of the visited set and frontier.
    pub approx_bytes: u64,
}

fn pack(m: &MatFin, q: u64) -> u128 {
    let mut key = 0u128;
    for &e in m.entries().iter().rev() {
        key = key * q as u128 + e.0 as u128;
    }
    key
}

fn unpack(mut key: u128, n: usize, q: u64) -> MatFin {
    let mut m = MatFin::zero(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = FqElem((key % q as u128) as u64);
            key /= q as u128;
        }
    }
    m
}

fn validate_gens(ctx: &FieldCtx, gens: &[MatFin]) -> Result<usize, MatError> {
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
    // the packed key must fit u128
    let bits = (n * n) as u32 * (64 - (ctx.q() - 1).leading_zeros());
    if bits > 127 {
        return Err(MatError::ScaleExceeded(format!(
            "{n}×{n} matrices over F_{} cannot be packed into 128 bits",
            ctx.q()
        )));
    }
    Ok(n)
}

fn bfs(
    ctx: &FieldCtx,
    gens: &[MatFin],
    cap: u64,
    mut sink: Option<&mut Vec<MatFin>>,
) -> Result<ClosureResult, MatError> {
    let n = validate_gens(ctx, gens)?;
    let q = ctx.q();
    let mut visited: HashSet<u128> = HashSet::new();
    let mut frontier: VecDeque<u128> = VecDeque::new();
    let id = MatFin::identity(n);
    let id_key = pack(&id, q);
    visited.insert(id_key);
    frontier.push_back(id_key);
    if let Some(sink) = sink.as_deref_mut() {
        sink.push(id);
    }
    let mut exceeded = false;
    'outer: while let Some(key) = frontier.pop_front() {
        let cur = unpack(key, n, q);
        for g in gens {
            let next = cur.mul(ctx, g);
            let next_key = pack(&next, q);
            if visited.insert(next_key) {
                if visited.len() as u64 > cap {
                    exceeded = true;
                    break 'outer;
                }
                frontier.push_back(next_key);
                if let Some(sink) = sink.as_deref_mut() {
                    sink.push(next);
                }
            }
        }
    }
    let visited_count = visited.len() as u64;
    let approx_bytes = visited_count * 32 + frontier.len() as u64 * 16;
    Ok(ClosureResult {
        outcome: if exceeded {
            ClosureOutcome::CapExceeded { cap }
        } else {
            ClosureOutcome::Order(visited_count)
        },
        visited: visited_count,
        approx_bytes,
    })
}

/// Order of ⟨gens⟩ if it has at most `cap` elements, else `CapExceeded`.
pub fn group_closure(ctx: &FieldCtx, gens: &[MatFin], cap: u64) -> Result<ClosureResult, MatError> {
    bfs(ctx, gens, cap, None)
}

/// Materialize every element of ⟨gens⟩ (errors if the cap is exceeded).
pub fn closure_elements(
    ctx: &FieldCtx,
    gens: &[MatFin],
    cap: u64,
) -> Result<Vec<MatFin>, MatError> {
    let mut out = Vec::new();
    let res = bfs(ctx, gens, cap, Some(&mut out))?;
    match res.outcome {
        ClosureOutcome::Order(_) => Ok(out),
        ClosureOutcome::CapExceeded { cap } => Err(MatError::ScaleExceeded(format!(
            "group larger than the {cap}-element cap"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{elem_m, elem_u};

    #[test]
    fn closure_of_identity() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let r = group_closure(&f3, &[MatFin::identity(3)], 10).unwrap();
        assert_eq!(r.outcome, ClosureOutcome::Order(1));
    }

    #[test]
    fn sl2_f3_from_u_and_m() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let gens = [elem_u(2).unwrap(), elem_m(&f3, 2).unwrap()];
        let r = group_closure(&f3, &gens, 1000).unwrap();
        assert_eq!(r.outcome, ClosureOutcome::Order(24)); // |SL_2(F_3)| = 3·(9−1)
    }

    #[test]
    fn sl3_f3_from_u_and_m() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let gens = [elem_u(3).unwrap(), elem_m(&f3, 3).unwrap()];
        let r = group_closure(&f3, &gens, 10_000).unwrap();
        assert_eq!(r.outcome, ClosureOutcome::Order(5616)); // |SL_3(F_3)|
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let gens = [elem_u(3).unwrap(), elem_m(&f3, 3).unwrap()];
        let r = group_closure(&f3, &gens, 100).unwrap();
        assert_eq!(r.outcome, ClosureOutcome::CapExceeded { cap: 100 });
        assert!(closure_elements(&f3, &gens, 100).is_err());
    }

    #[test]
    fn elements_are_closed_under_product() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        let gens = [elem_u(2).unwrap(), elem_m(&f3, 2).unwrap()];
        let els = closure_elements(&f3, &gens, 1000).unwrap();
        assert_eq!(els.len(), 24);
        let set: std::collections::HashSet<&MatFin> = els.iter().collect();
        for a in els.iter().take(6) {
            for b in els.iter().take(6) {
                assert!(set.contains(&a.mul(&f3, b)));
            }
        }
    }
}
