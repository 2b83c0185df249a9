//! Exact-arithmetic toolkit for hyper-Kloosterman sums over finite fields.
//!
//! The crate computes the unnormalized sums
//!
//! ```text
//! S_n(a) = Σ_{x_1⋯x_n = a}  ζ_p^{tr(x_1 + ⋯ + x_n)}      (a ∈ F_q^×, q = p^k)
//! ```
//!
//! as elements of the cyclotomic ring `Z[ζ_p]`, reduces them modulo prime
//! ideals 𝔩 above an auxiliary prime ℓ, and verifies the matrix-level
//! facts attached to the monodromy of these sums: the square-root
//! cancellation bound under every complex embedding, Galois twisting,
//! trace fields of the reductions, the explicit wild-inertia matrices and
//! their invariant bilinear forms, generation of SL_n(F_ℓ) by the two
//! distinguished elements, and the classification data (group orders,
//! minimal faithful projective dimensions, outer automorphism orders)
//! used to survey candidate subgroups.
//!
//! Modules:
//! - [`field`]: arithmetic in F_{p^k} with canonical modulus, generator and
//!   a full discrete-log table.
//! - [`cyclo`]: `Z[ζ_m]` for m ∈ {p, 4p}, complex embeddings, quadratic Gauss
//!   sums, prime splitting and reduction into residue fields.
//! - [`kloosterman`]: exact and floating Kloosterman tables, reductions,
//!   twist and bound checks, Sato-Tate statistics.
//! - [`matgroup`]: matrices over finite fields, breadth-first group
//!   closure, invariant bilinear forms, the explicit inertia representation
//!   and the normalizer power check.
//! - [`classify`]: classical group orders, the m(S) and |Out(S)| tables,
//!   candidate surveys and geometric-class exclusions.

pub mod classify;
pub mod cyclo;
pub mod field;
pub mod kloosterman;
pub mod matgroup;

pub(crate) mod polyarith;

pub use field::{FieldCtx, FieldError, FqElem};
