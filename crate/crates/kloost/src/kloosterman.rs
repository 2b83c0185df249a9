//! Exact and floating computation of hyper-Kloosterman sums, their
//! normalizations, reductions, Galois twists, trace-field analysis,
//! square-root-bound verification, and vertical Sato-Tate statistics.
//!
//! The unnormalized sum
//!
//! ```text
//! S_n(a) = Σ_{x_1⋯x_n = a, x_i ∈ F_q^×}  ζ_p^{tr(x_1 + ⋯ + x_n)}
//! ```
//!
//! lives in `Z[ζ_p]`; the normalized value is
//! Kl_{n,q}(a) = (−1)^{n−1}·S_n(a)/q^{(n−1)/2}. Exact tables are built by
//! multiplicative convolution on F_q^× in discrete-log coordinates: each
//! rank step is S_r = S_{r−1} ⊛ S_1 with S_1(a) = ζ_p^{tr a}, carried out
//! on integer count vectors indexed by the exponent of ζ_p (naive O(q²·p)
//! per step, exact). The floating path evaluates one complex embedding of
//! the whole table in O(q log q) with an FFT over the cyclic group
//! Z/(q−1): the n-fold multiplicative autoconvolution of the embedded
//! S_1 row is a pointwise n-th power in the frequency domain.
//!
//! Normalization never divides inside `Z[ζ_p]`: exact tables stay
//! unnormalized (the implied denominator is a power of the canonical
//! square root of q), and the division happens after reduction — where the
//! square root is a unit — or after embedding, where it is the positive
//! real root.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::cyclo::{self, CycloError, CycloInt, CycloRing, ReductionCtx};
use crate::field::{FieldCtx, FieldError, FqElem};

/// Cap on q^{n−1} for the brute-force oracle.
pub const ORACLE_SCALE: u64 = 10_000_000;

/// Cap on (q−1)·(p−1) coefficient cells for exact tables.
pub const MAX_EXACT_CELLS: u64 = 1 << 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KlError {
    #[error("a must be a unit (got 0)")]
    ZeroArgument,
    #[error("rank must be ≥ {0}")]
    RankTooSmall(u32),
    #[error("scale exceeded: {what}")]
    ScaleExceeded { what: String },
    #[error("table was built over F_{{{table_q}}}, got a context for F_{{{ctx_q}}}")]
    CtxMismatch { table_q: u64, ctx_q: u64 },
    #[error(
        "conductor {m} cannot normalize rank {n} over F_{q}: \
         q ≡ 3 (mod 4) needs conductor 4p for even rank"
    )]
    SqrtUnavailable { m: u64, n: u32, q: u64 },
    #[error("embedding u = {0} is not coprime to p")]
    BadEmbedding(u64),
    #[error("characteristic 2 is not supported for character sums")]
    EvenCharacteristic,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Sign convention for the canonical square root of q in F_λ.
///
/// `Plus` takes s = image of the quadratic Gauss sum (divided by ζ₄ when
/// q ≡ 3 mod 4); `Minus` is its negative. Both square to q; reduced value
/// tables for even rank flip by ±1 accordingly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtSign {
    #[default]
    Plus,
    Minus,
}

/// Exact table of unnormalized sums S_n(a) for all a ∈ F_q^×, in the
/// iteration order a = g^0, g^1, …, g^{q−2}.
///
/// Rows are canonical coefficient vectors over the power basis
/// {ζ_p^i : i < p−1}, stored as i64 (counts never exceed q^{n−1}).
#[derive(Debug, Clone)]
pub struct KlTable {
    p: u64,
    k: u32,
    q: u64,
    n: u32,
    stride: usize,
    coeffs: Vec<i64>,
    ring: CycloRing,
}

impl KlTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    /// Number of entries, q − 1.
    pub fn len(&self) -> usize {
        self.coeffs.len() / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    /// Canonical coefficient row of S_n(g^j).
    pub fn row(&self, j: usize) -> &[i64] {
        &self.coeffs[j * self.stride..(j + 1) * self.stride]
    }

    /// S_n(g^j) as a ring element.
    pub fn value(&self, j: usize) -> CycloInt {
        self.ring.from_coeffs(self.row(j))
    }

    /// Σ_a S_n(a); equals (−1)^n for every valid table.
    pub fn global_sum(&self) -> CycloInt {
        let mut acc = vec![0i64; self.stride];
        for j in 0..self.len() {
            for (s, c) in acc.iter_mut().zip(self.row(j)) {
                *s += c;
            }
        }
        self.ring.from_coeffs(&acc)
    }

    fn check_ctx(&self, ctx: &FieldCtx) -> Result<(), KlError> {
        if ctx.q() != self.q || ctx.p() != self.p {
            return Err(KlError::CtxMismatch {
                table_q: self.q,
                ctx_q: ctx.q(),
            });
        }
        Ok(())
    }
}

fn require_odd_char(ctx: &FieldCtx) -> Result<(), KlError> {
    if ctx.p() == 2 {
        return Err(KlError::EvenCharacteristic);
    }
    Ok(())
}

/// Traces of the units in generator order: tr(g^j).
fn unit_traces(ctx: &FieldCtx) -> Vec<u64> {
    ctx.units().map(|x| ctx.trace(x)).collect()
}

/// Brute-force oracle: S_n(a) by direct enumeration of (x_1, …, x_{n−1}).
pub fn kl_raw_direct(ctx: &FieldCtx, n: u32, a: FqElem) -> Result<CycloInt, KlError> {
    require_odd_char(ctx)?;
    if n < 1 {
        return Err(KlError::RankTooSmall(1));
    }
    if a == FqElem::ZERO {
        return Err(KlError::ZeroArgument);
    }
    let q = ctx.q();
    let in_scale = (1..n)
        .try_fold(1u64, |acc, _| {
            acc.checked_mul(q).filter(|&v| v <= ORACLE_SCALE)
        })
        .is_some();
    if !in_scale {
        return Err(KlError::ScaleExceeded {
            what: format!(
                "q^(n-1) = {q}^{} exceeds the oracle cap {ORACLE_SCALE}",
                n - 1
            ),
        });
    }
    let ring = CycloRing::new(ctx.p())?;
    let l = (q - 1) as usize;
    let tr = unit_traces(ctx);
    let ja = ctx.dlog(a)? as usize;
    let p = ctx.p() as usize;
    let mut counts = vec![0i64; p];
    // odometer over the dlogs of x_1, …, x_{n−1}
    let mut idx = vec![0usize; (n - 1) as usize];
    loop {
        let mut tsum = 0u64;
        let mut jsum = 0usize;
        for &j in &idx {
            tsum += tr[j];
            jsum += j;
        }
        let jn = (ja + (n as usize - 1) * l - jsum % l) % l;
        counts[((tsum + tr[jn]) % p as u64) as usize] += 1;
        let mut carry = true;
        for d in idx.iter_mut() {
            *d += 1;
            if *d < l {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            break;
        }
    }
    Ok(ring.from_coeffs(&counts))
}

/// Exact table of S_n(a) for all a, via multiplicative convolution in
/// dlog coordinates. Agrees with [`kl_raw_direct`] pointwise.
pub fn kl_raw_all(ctx: &FieldCtx, n: u32) -> Result<KlTable, KlError> {
    require_odd_char(ctx)?;
    if n < 1 {
        return Err(KlError::RankTooSmall(1));
    }
    let q = ctx.q();
    let p = ctx.p() as usize;
    let l = (q - 1) as usize;
    if (q - 1) * (ctx.p() - 1) > MAX_EXACT_CELLS {
        return Err(KlError::ScaleExceeded {
            what: format!(
                "exact table needs {} cells (cap {MAX_EXACT_CELLS}); use the floating path",
                (q - 1) * (ctx.p() - 1)
            ),
        });
    }
    let q_bits = 64 - q.leading_zeros() as u64;
    if (n as u64 - 1) * q_bits > 62 {
        return Err(KlError::ScaleExceeded {
            what: format!("counts q^(n-1) = {q}^{} overflow i64", n - 1),
        });
    }
    let tr = unit_traces(ctx);

    // count rows in the exponent space Z/p; S_1 rows are one-hot, so the
    // first convolution step is a plain O(q²) histogram and only the later
    // steps pay the O(q²·p) dense shift-adds
    let mut cur = vec![0i64; l * p];
    if n == 1 {
        for j in 0..l {
            cur[j * p + tr[j] as usize] = 1;
        }
    } else {
        cur.par_chunks_mut(p).enumerate().for_each(|(j, acc)| {
            for i in 0..l {
                let e = (tr[i] + tr[(j + l - i) % l]) as usize;
                acc[if e >= p { e - p } else { e }] += 1;
            }
        });
    }
    for _ in 2..n {
        let prev = cur;
        let mut next = vec![0i64; l * p];
        next.par_chunks_mut(p).enumerate().for_each(|(j, acc)| {
            for i in 0..l {
                let t = tr[(j + l - i) % l] as usize;
                let row = &prev[i * p..(i + 1) * p];
                let cut = p - t;
                for e in 0..cut {
                    acc[e + t] += row[e];
                }
                for e in cut..p {
                    acc[e + t - p] += row[e];
                }
            }
        });
        cur = next;
    }

    // canonicalize each row: subtract the count at exponent p−1
    let stride = p - 1;
    let mut coeffs = vec![0i64; l * stride];
    for j in 0..l {
        let last = cur[j * p + p - 1];
        for e in 0..stride {
            coeffs[j * stride + e] = cur[j * p + e] - last;
        }
    }
    Ok(KlTable {
        p: ctx.p(),
        k: ctx.k(),
        q,
        n,
        stride,
        coeffs,
        ring: CycloRing::new(ctx.p())?,
    })
}

/// Embed a canonical coefficient row at ζ_p ↦ e(u/p).
pub fn embed_row(row: &[i64], p: u64, u: u64) -> Complex64 {
    let tau = std::f64::consts::TAU;
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, &c) in row.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let angle = tau * ((u * e as u64 % p) as f64) / p as f64;
        let (s, co) = angle.sin_cos();
        acc += Complex64::new(co * c as f64, s * c as f64);
    }
    acc
}

/// Normalized values Kl_{n,q}(a) = (−1)^{n−1}·S_n(a)/q^{(n−1)/2} for every
/// a, under the embedding ζ_p ↦ e(u/p), via one length-(q−1) FFT.
pub fn kl_all_float(ctx: &FieldCtx, n: u32, u: u64) -> Result<Vec<Complex64>, KlError> {
    require_odd_char(ctx)?;
    if n < 1 {
        return Err(KlError::RankTooSmall(1));
    }
    let p = ctx.p();
    if u.is_multiple_of(p) {
        return Err(KlError::BadEmbedding(u));
    }
    let l = (ctx.q() - 1) as usize;
    let tau = std::f64::consts::TAU;
    let roots: Vec<Complex64> = (0..p)
        .map(|c| {
            let (s, co) = (tau * ((u % p * c % p) as f64) / p as f64).sin_cos();
            Complex64::new(co, s)
        })
        .collect();
    let mut buf: Vec<Complex64> = ctx.units().map(|x| roots[ctx.trace(x) as usize]).collect();

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(l).process(&mut buf);
    for v in buf.iter_mut() {
        *v = v.powu(n);
    }
    planner.plan_fft_inverse(l).process(&mut buf);

    let norm = 1.0 / l as f64;
    let scale = (ctx.q() as f64).powf((n as f64 - 1.0) / 2.0);
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    for v in buf.iter_mut() {
        *v *= sign * norm / scale;
    }
    Ok(buf)
}

/// True iff applying ζ_p ↦ ζ_p^u to S_n(a) yields S_n(a·u^n) for every a.
pub fn galois_twist_check(ctx: &FieldCtx, table: &KlTable, u: u64) -> Result<bool, KlError> {
    table.check_ctx(ctx)?;
    let p = table.p;
    let u = u % p;
    if u == 0 {
        return Err(KlError::BadEmbedding(u));
    }
    let l = table.len();
    let du = ctx.dlog(ctx.from_base(u))? as usize;
    let shift = table.n as usize * du % l;
    let stride = table.stride;
    let mut raw = vec![0i64; p as usize];
    for j in 0..l {
        raw.iter_mut().for_each(|c| *c = 0);
        for (e, &c) in table.row(j).iter().enumerate() {
            raw[(e as u64 * u % p) as usize] += c;
        }
        let last = raw[p as usize - 1];
        let target = table.row((j + shift) % l);
        for e in 0..stride {
            if raw[e] - last != target[e] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Max over all a and all embeddings of |Kl_{n,q}(a)|/n on an exact table;
/// passes iff the maximum is ≤ 1 + 1e−9.
pub fn weil_bound_of_table(table: &KlTable) -> (bool, f64) {
    let p = table.p;
    let scale = (table.q as f64).powf((table.n as f64 - 1.0) / 2.0);
    let max_ratio = (1..p)
        .into_par_iter()
        .map(|u| {
            let mut local: f64 = 0.0;
            for j in 0..table.len() {
                let v = embed_row(table.row(j), p, u).norm() / scale / table.n as f64;
                local = local.max(v);
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    (max_ratio <= 1.0 + 1e-9, max_ratio)
}

/// Build the exact table and verify |Kl_{n,q}(a)| ≤ n under every embedding.
pub fn weil_bound_check(ctx: &FieldCtx, n: u32) -> Result<(bool, f64), KlError> {
    let table = kl_raw_all(ctx, n)?;
    Ok(weil_bound_of_table(&table))
}

/// The canonical square root of q in F_λ: the reduced quadratic Gauss sum,
/// corrected by ζ₄ when q ≡ 3 (mod 4) (which requires conductor 4p).
pub fn sqrt_q_in_residue_field(
    ctx: &FieldCtx,
    rc: &ReductionCtx,
    sign: SqrtSign,
) -> Result<FqElem, KlError> {
    let ring = CycloRing::new(rc.conductor())?;
    let g = cyclo::gauss_sum(&ring, ctx)?;
    let f = rc.field();
    let mut s = if cyclo::chi2_minus_one(ctx.q()) == 1 {
        rc.reduce(&g)?
    } else {
        if rc.conductor() == ctx.p() {
            return Err(KlError::SqrtUnavailable {
                m: rc.conductor(),
                n: 0,
                q: ctx.q(),
            });
        }
        let z4 = rc.reduce(&ring.zeta4()?)?;
        f.mul(rc.reduce(&g)?, f.inv(z4)?)
    };
    if sign == SqrtSign::Minus {
        s = f.neg(s);
    }
    // s is a unit (ℓ ≠ p) and must square to q
    assert_eq!(
        f.mul(s, s),
        f.from_base(ctx.q() % rc.ell()),
        "square root of q must square to q"
    );
    Ok(s)
}

/// Reduce a whole table modulo 𝔩 and normalize:
/// (−1)^{n−1}·S_n(a)·s^{−(n−1)} with s the canonical square root of q.
pub fn kl_reduce_all(
    ctx: &FieldCtx,
    table: &KlTable,
    rc: &ReductionCtx,
    sign: SqrtSign,
) -> Result<Vec<FqElem>, KlError> {
    table.check_ctx(ctx)?;
    let p = table.p;
    if rc.conductor() != p && rc.conductor() != 4 * p {
        return Err(KlError::Cyclo(CycloError::ConductorMismatch {
            ring: rc.conductor(),
            elem: p,
        }));
    }
    if table.n.is_multiple_of(2) && cyclo::chi2_minus_one(table.q) == -1 && rc.conductor() == p {
        return Err(KlError::SqrtUnavailable {
            m: rc.conductor(),
            n: table.n,
            q: table.q,
        });
    }
    let f = rc.field();
    let s = sqrt_q_in_residue_field(ctx, rc, sign)?;
    let s_pow = f.pow(f.inv(s)?, (table.n - 1) as u128);
    let negate = table.n.is_multiple_of(2);
    let mut out = Vec::with_capacity(table.len());
    for j in 0..table.len() {
        let mut v = f.mul(rc.reduce_prime_basis_row(table.row(j)), s_pow);
        if negate {
            v = f.neg(v);
        }
        out.push(v);
    }
    Ok(out)
}

/// Smallest d | f with v^{ℓ^d} = v for all values: the degree over F_ℓ of
/// the subfield of F_λ generated by the values.
pub fn trace_field(values: &[FqElem], rc: &ReductionCtx) -> u32 {
    let f = rc.residue_degree();
    let field = rc.field();
    for d in 1..f {
        if !f.is_multiple_of(d) {
            continue;
        }
        if values.iter().all(|&v| field.in_subfield(v, d)) {
            return d;
        }
    }
    f
}

/// CDF of the semicircle distribution with density √(4−x²)/(2π) on [−2, 2].
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    0.5 + x * (4.0 - x * x).sqrt() / (4.0 * std::f64::consts::PI)
        + (x / 2.0).asin() / std::f64::consts::PI
}

/// One-sample Kolmogorov–Smirnov distance of a sorted sample against a CDF.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        d = d.max((fx - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - fx).abs());
    }
    d
}

/// Per-prime vertical Sato-Tate report for rank 2.
#[derive(Debug, Clone)]
pub struct SatoTateReport {
    pub p: u64,
    /// Empirical moments m_1 … m_{2K}.
    pub moments: Vec<f64>,
    /// Kolmogorov–Smirnov distance to the semicircle CDF on [−2, 2].
    pub ks: f64,
}

/// Empirical moments and KS distance of {Kl_{2,p}(a)} for each listed prime.
pub fn sato_tate_stats(p_list: &[u64], k_max: usize) -> Result<Vec<SatoTateReport>, KlError> {
    for &p in p_list {
        if !crate::field::is_prime(p) || p == 2 {
            return Err(KlError::Cyclo(CycloError::NotPrime(p)));
        }
        if p > 1_000_000 {
            return Err(KlError::ScaleExceeded {
                what: format!("prime {p} above the 10^6 experiment cap"),
            });
        }
    }
    p_list
        .par_iter()
        .map(|&p| {
            let ctx = FieldCtx::new(p, 1, None)?;
            let vals = kl_all_float(&ctx, 2, 1)?;
            let mut xs: Vec<f64> = vals
                .iter()
                .map(|v| {
                    debug_assert!(v.im.abs() < 1e-8, "rank-2 values are real");
                    v.re
                })
                .collect();
            let inv = 1.0 / xs.len() as f64;
            let mut moments = vec![0.0f64; 2 * k_max];
            for &x in &xs {
                let mut pw = 1.0;
                for m in moments.iter_mut() {
                    pw *= x;
                    *m += pw;
                }
            }
            for m in moments.iter_mut() {
                *m *= inv;
            }
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ks = ks_distance(&xs, semicircle_cdf);
            Ok(SatoTateReport { p, moments, ks })
        })
        .collect()
}
