//! Command-line front end.
//!
//! Exit codes: 0 on success or a passing check, 1 on a failing check, 2 on
//! usage errors (including violated preconditions, which are reported with
//! the precondition named).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use kloost::classify::{candidate_survey, geometric_exclusions, group_order, ClassicalFamily};
use kloost::cyclo::{chi2_minus_one, gauss_sum, make_reduction_seeded, CycloRing};
use kloost::field::{FieldCtx, FqElem};
use kloost::kloosterman::{
    galois_twist_check, kl_all_float, kl_raw_all, kl_reduce_all, sato_tate_stats, trace_field,
    weil_bound_check, SqrtSign,
};
use kloost::matgroup::{
    elem_m, elem_u, enumerate_inertia_group, group_closure, inertia_compose,
    inertia_matrix_exact, inertia_matrix_reduced, invariant_bilinear, normalizer_power_check,
    wild_part, CheckMode, ClosureOutcome, GroupFamily, InertiaElement,
};

use kloost_cli::cache::{self, CacheStatus};
use kloost_cli::output;
use kloost_cli::verify;

#[derive(Parser)]
#[command(
    name = "kloost",
    version,
    about = "Hyper-Kloosterman sums over finite fields: exact cyclotomic tables, reductions \
             modulo prime ideals, square-root-bound and twist checks, matrix-group \
             verification, classification data, and Sato-Tate statistics"
)]
struct Cli {
    /// Seed for every randomized check (sampled normalizer mode, spot checks)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all logical CPUs)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for the persisted dlog cache (falls back to
    /// KLOOST_CACHE_DIR; no caching when both are unset)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Verbosity (repeat for more)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArgs {
    /// Odd prime characteristic
    #[arg(long)]
    p: u64,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Sl,
    Sp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the full table of sums for all a ∈ F_q^× (exact or floating)
    Compute {
        #[command(flatten)]
        field: FieldArgs,
        /// Rank n ≥ 2
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Embedding ζ_p ↦ e(u/p) for the floating mode
        #[arg(long, default_value_t = 1)]
        u: u64,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a table modulo the canonical prime ideal above ℓ and normalize
    Reduce {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        /// Force the conductor 4p (default: p, or 4p when the rank is even
        /// and q ≡ 3 mod 4)
        #[arg(long)]
        quarter_conductor: bool,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sqrt_sign: SignArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify ζ_p ↦ ζ_p^u maps S_n(a) to S_n(a·u^n), for one u or all
    TwistCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        /// Specific unit u mod p (default: sweep all of F_p^×)
        #[arg(long)]
        u: Option<u64>,
    },
    /// Verify |Kl_{n,q}(a)| ≤ n under every complex embedding
    WeilCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
    },
    /// Degree over F_ℓ of the subfield generated by the reduced values
    TraceField {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sqrt_sign: SignArg,
    },
    /// Vertical Sato-Tate statistics for rank 2 across a list of primes
    SatoTate {
        /// Comma-separated primes, each ≤ 10^6
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Report moments m_1 … m_{2K}
        #[arg(long, default_value_t = 3)]
        moments: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadratic Gauss sum of F_q as an exact cyclotomic integer
    Gauss {
        #[command(flatten)]
        field: FieldArgs,
        /// Compute inside `Z[ζ_{4p}]` instead of `Z[ζ_p]`
        #[arg(long)]
        quarter_conductor: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Breadth-first order of ⟨u, m⟩ against |SL_n(F_ℓ)|
    GenCheck {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        /// Element cap for the closure
        #[arg(long, default_value_t = kloost::matgroup::DEFAULT_CLOSURE_CAP)]
        cap: u64,
    },
    /// Explicit inertia matrices: print one, sweep the homomorphism, and
    /// report the wild-part pairing dichotomy
    Inertia {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        /// a₀ as an integer encoding of an element of F_q
        #[arg(long, default_value_t = 0)]
        a0: u64,
        /// i₀ mod 2n
        #[arg(long, default_value_t = 1)]
        i0: u64,
        /// Reduce modulo the canonical prime above ℓ and run the pairing
        /// dichotomy there
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that n-th powers of normalizing elements land in the subfield group
    NormalizerCheck {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: u32,
        /// Size of the subfield k (a prime power)
        #[arg(long)]
        sub_size: u64,
        /// Size of the big field L (a power of the same prime)
        #[arg(long)]
        field_size: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Candidate survey and geometric-class exclusions for (n, ℓ, f)
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        /// Residue degree `[F_λ : F_ℓ]`
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full acceptance suite (one pass/fail line per criterion)
    VerifyAll {
        /// Run only these criterion numbers
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("KLOOST_CACHE_DIR").map(PathBuf::from))
}

fn build_ctx(cli: &Cli, p: u64, k: u32) -> Result<FieldCtx> {
    let dir = cache_dir(cli);
    let (ctx, status) = cache::load_or_build(p, k, None, dir.as_deref())
        .with_context(|| format!("building F_{{{p}^{k}}}"))?;
    if cli.verbose > 0 && status != CacheStatus::Disabled {
        eprintln!(
            "dlog table for q = {}: {}",
            ctx.q(),
            match status {
                CacheStatus::Hit => "cache hit",
                CacheStatus::Rebuilt => "rebuilt and cached",
                CacheStatus::Disabled => unreachable!(),
            }
        );
    }
    Ok(ctx)
}

fn require(cond: bool, precondition: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(anyhow!("violated precondition: {precondition}"))
    }
}

fn write_out(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json_string<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Compute {
            field,
            n,
            mode,
            u,
            out,
        } => {
            require(*n >= 2, "rank n must be ≥ 2")?;
            require(field.p % 2 == 1, "p must be an odd prime")?;
            let ctx = build_ctx(cli, field.p, field.k)?;
            match mode {
                Mode::Exact => {
                    let table = kl_raw_all(&ctx, *n)?;
                    write_out(out.as_deref(), &json_string(&output::exact_table_file(&table))?)?;
                }
                Mode::Float => {
                    require(u % field.p != 0, "embedding u must be coprime to p")?;
                    let values = kl_all_float(&ctx, *n, *u)?;
                    write_out(out.as_deref(), &output::float_table_csv(&values))?;
                }
            }
            Ok(0)
        }
        Cmd::Reduce {
            field,
            n,
            ell,
            quarter_conductor,
            sqrt_sign,
            out,
        } => {
            require(*n >= 2, "rank n must be ≥ 2")?;
            let ctx = build_ctx(cli, field.p, field.k)?;
            let need_quarter = *quarter_conductor
                || (*n % 2 == 0 && chi2_minus_one(ctx.q()) == -1);
            let m = if need_quarter { 4 * field.p } else { field.p };
            let ring = CycloRing::new(m)?;
            let rc = make_reduction_seeded(&ring, *ell, cli.seed)?;
            let table = kl_raw_all(&ctx, *n)?;
            let sign = match sqrt_sign {
                SignArg::Plus => SqrtSign::Plus,
                SignArg::Minus => SqrtSign::Minus,
            };
            let values = kl_reduce_all(&ctx, &table, &rc, sign)?;
            let sign_name = match sqrt_sign {
                SignArg::Plus => "plus",
                SignArg::Minus => "minus",
            };
            write_out(
                out.as_deref(),
                &json_string(&output::reduced_table_file(&table, &rc, sign_name, &values))?,
            )?;
            Ok(0)
        }
        Cmd::TwistCheck { field, n, u } => {
            require(*n >= 2, "rank n must be ≥ 2")?;
            let ctx = build_ctx(cli, field.p, field.k)?;
            let table = kl_raw_all(&ctx, *n)?;
            let us: Vec<u64> = match u {
                Some(u) => {
                    require(u % field.p != 0, "u must be a unit mod p")?;
                    vec![*u]
                }
                None => (1..field.p).collect(),
            };
            let mut all_ok = true;
            for u in us {
                let ok = galois_twist_check(&ctx, &table, u)?;
                println!(
                    "u = {u}: {}",
                    if ok { "twist identity holds" } else { "FAILED" }
                );
                all_ok &= ok;
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Cmd::WeilCheck { field, n } => {
            require(*n >= 2, "rank n must be ≥ 2")?;
            let ctx = build_ctx(cli, field.p, field.k)?;
            let (pass, ratio) = weil_bound_check(&ctx, *n)?;
            println!(
                "max |Kl_{{{n},{q}}}(a)|/{n} over all embeddings = {ratio:.9} → {}",
                if pass { "bound holds" } else { "BOUND VIOLATED" },
                q = ctx.q()
            );
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::TraceField {
            field,
            n,
            ell,
            sqrt_sign,
        } => {
            require(*n >= 2, "rank n must be ≥ 2")?;
            let ctx = build_ctx(cli, field.p, field.k)?;
            let need_quarter = *n % 2 == 0 && chi2_minus_one(ctx.q()) == -1;
            let m = if need_quarter { 4 * field.p } else { field.p };
            let ring = CycloRing::new(m)?;
            let rc = make_reduction_seeded(&ring, *ell, cli.seed)?;
            let table = kl_raw_all(&ctx, *n)?;
            let sign = match sqrt_sign {
                SignArg::Plus => SqrtSign::Plus,
                SignArg::Minus => SqrtSign::Minus,
            };
            let values = kl_reduce_all(&ctx, &table, &rc, sign)?;
            let d = trace_field(&values, &rc);
            let f = rc.residue_degree();
            let g = {
                let (mut a, mut b) = (f, *n);
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a
            };
            println!(
                "F_λ = F_{{{ell}^{f}}}; values generate the subfield of degree {d} \
                 (f/(f,n) = {})",
                f / g
            );
            Ok(0)
        }
        Cmd::SatoTate {
            primes,
            moments,
            out,
        } => {
            require(!primes.is_empty(), "at least one prime is required")?;
            require(*moments >= 1, "moment count must be ≥ 1")?;
            let reports = sato_tate_stats(primes, *moments)?;
            write_out(out.as_deref(), &output::sato_tate_csv(&reports))?;
            Ok(0)
        }
        Cmd::Gauss {
            field,
            quarter_conductor,
            out,
        } => {
            let ctx = build_ctx(cli, field.p, field.k)?;
            let m = if *quarter_conductor {
                4 * field.p
            } else {
                field.p
            };
            let ring = CycloRing::new(m)?;
            let g = gauss_sum(&ring, &ctx)?;
            let gsq = ring.mul(&g, &g)?;
            let expect = ring.from_i64(chi2_minus_one(ctx.q()) * ctx.q() as i64);
            #[derive(serde::Serialize)]
            struct GaussFile {
                p: u64,
                k: u32,
                q: u64,
                conductor: u64,
                coeffs: Vec<String>,
                square: String,
                square_is_chi2_times_q: bool,
            }
            let file = GaussFile {
                p: field.p,
                k: field.k,
                q: ctx.q(),
                conductor: m,
                coeffs: output::cyclo_coeff_strings(&g),
                square: gsq
                    .as_integer()
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "non-rational".into()),
                square_is_chi2_times_q: gsq == expect,
            };
            write_out(out.as_deref(), &json_string(&file)?)?;
            Ok(if file.square_is_chi2_times_q { 0 } else { 1 })
        }
        Cmd::GenCheck { n, ell, cap } => {
            require(*n >= 2, "dimension n must be ≥ 2")?;
            let ctx = if *ell == 2 {
                FieldCtx::new_char2(1, None)?
            } else {
                FieldCtx::new(*ell, 1, None)?
            };
            let gens = [elem_u(*n as usize)?, elem_m(&ctx, *n as usize)?];
            let result = group_closure(&ctx, &gens, *cap)?;
            let expect = group_order(ClassicalFamily::Sl, *n, *ell)?;
            match result.outcome {
                ClosureOutcome::Order(o) => {
                    let matches = expect == o.into();
                    println!(
                        "|⟨u,m⟩| = {o}; |SL_{n}(F_{ell})| = {expect} → {}",
                        if matches { "equal" } else { "NOT EQUAL" }
                    );
                    Ok(if matches { 0 } else { 1 })
                }
                ClosureOutcome::CapExceeded { cap } => {
                    println!(
                        "closure exceeded the {cap}-element cap \
                         (consistent with |SL_{n}(F_{ell})| = {expect}); ~{} MB used",
                        result.approx_bytes / (1 << 20)
                    );
                    Ok(0)
                }
            }
        }
        Cmd::Inertia {
            field,
            n,
            a0,
            i0,
            ell,
            out,
        } => {
            require(*n >= 2, "rank n must be ≥ 2")?;
            let ctx = build_ctx(cli, field.p, field.k)?;
            require(
                (ctx.q() - 1) % (2 * *n as u64) == 0,
                "F_q must contain a primitive 2n-th root of unity (2n | q−1)",
            )?;
            require(*a0 < ctx.q(), "a0 must encode an element of F_q")?;
            let nn = *n as usize;
            let ring = CycloRing::new(field.p)?;
            let sigma = InertiaElement {
                a0: FqElem(*a0),
                i0: *i0,
            };
            let mat = inertia_matrix_exact(&ctx, &ring, nn, sigma)?;

            // exhaustive homomorphism sweep over the q·2n-element group
            let els = enumerate_inertia_group(&ctx, nn)?;
            let mut hom_ok = true;
            if els.len() <= 4096 {
                let mats: Vec<_> = els
                    .iter()
                    .map(|&s| inertia_matrix_exact(&ctx, &ring, nn, s).unwrap())
                    .collect();
                'sweep: for (i, &s) in els.iter().enumerate() {
                    for (j, &t) in els.iter().enumerate() {
                        let st = inertia_compose(&ctx, nn, s, t)?;
                        let mst = inertia_matrix_exact(&ctx, &ring, nn, st)?;
                        if mats[i].mul(&ring, &mats[j])? != mst {
                            hom_ok = false;
                            break 'sweep;
                        }
                    }
                }
                println!(
                    "homomorphism sweep over {}² products: {}",
                    els.len(),
                    if hom_ok { "exact" } else { "FAILED" }
                );
            } else {
                println!("group of order {} too large for the full sweep", els.len());
            }

            let mut dichotomy_ok = true;
            let mut reduced_file = None;
            if let Some(ell) = ell {
                let rc = make_reduction_seeded(&ring, *ell, cli.seed)?;
                let reduced = inertia_matrix_reduced(&ctx, &rc, nn, sigma)?;
                reduced_file = Some(output::matrix_file(rc.field(), &reduced));
                let gens: Vec<_> = wild_part(&ctx, nn)?
                    .into_iter()
                    .map(|s| inertia_matrix_reduced(&ctx, &rc, nn, s).unwrap())
                    .collect();
                let rep = invariant_bilinear(rc.field(), &gens)?;
                let expect_zero = *n % 2 == 1;
                dichotomy_ok = if expect_zero {
                    rep.dim_total == 0
                } else {
                    rep.nondegenerate_alternating.is_some()
                };
                println!(
                    "wild-part invariant forms mod ℓ={ell}: dim {} (sym {}, alt {}) → {}",
                    rep.dim_total,
                    rep.dim_sym,
                    rep.dim_alt,
                    if dichotomy_ok {
                        "matches the rank parity dichotomy"
                    } else {
                        "DICHOTOMY FAILED"
                    }
                );
            }

            #[derive(serde::Serialize)]
            struct InertiaFile {
                n: u32,
                a0: u64,
                i0: u64,
                exact: kloost_cli::output::CycloMatrixFile,
                reduced: Option<kloost_cli::output::MatrixFile>,
            }
            let file = InertiaFile {
                n: *n,
                a0: *a0,
                i0: *i0,
                exact: output::cyclo_matrix_file(field.p, &mat),
                reduced: reduced_file,
            };
            write_out(out.as_deref(), &json_string(&file)?)?;
            Ok(if hom_ok && dichotomy_ok { 0 } else { 1 })
        }
        Cmd::NormalizerCheck {
            family,
            n,
            sub_size,
            field_size,
            mode,
            samples,
            cap,
        } => {
            require(*n >= 2, "dimension n must be ≥ 2")?;
            let (p1, d1) = prime_power(*sub_size)
                .ok_or_else(|| anyhow!("violated precondition: sub-size must be a prime power"))?;
            let (p2, d2) = prime_power(*field_size).ok_or_else(|| {
                anyhow!("violated precondition: field-size must be a prime power")
            })?;
            require(p1 == p2, "k and L must share their characteristic")?;
            require(d2 % d1 == 0, "k must be a subfield of L (degree divides)")?;
            let ctx = if p1 == 2 {
                FieldCtx::new_char2(d2, None)?
            } else {
                FieldCtx::new(p1, d2, None)?
            };
            let fam = match family {
                FamilyArg::Sl => GroupFamily::Sl,
                FamilyArg::Sp => GroupFamily::Sp,
            };
            let check_mode = match mode {
                ModeArg::Exhaustive => CheckMode::Exhaustive,
                ModeArg::Sampled => CheckMode::Sampled {
                    samples: *samples,
                    seed: cli.seed,
                },
            };
            let rep = normalizer_power_check(fam, *n as usize, &ctx, d1, check_mode, *cap)?;
            println!(
                "examined {} elements, {} normalize the subfield group{} → {}",
                rep.examined,
                rep.normalizing,
                if rep.vacuous {
                    " (vacuously true: no normalizing sample found)"
                } else {
                    ""
                },
                if rep.pass { "power condition holds" } else { "FAILED" }
            );
            Ok(if rep.pass { 0 } else { 1 })
        }
        Cmd::Classify { n, ell, f, out } => {
            require(*n >= 2, "n must be ≥ 2")?;
            require(*f >= 1, "residue degree f must be ≥ 1")?;
            let survey = candidate_survey(*n, *ell, *f);
            let exclusions = geometric_exclusions(*n, *ell);
            #[derive(serde::Serialize)]
            struct ClassifyFile {
                n: u32,
                ell: u64,
                f: u32,
                a_cutoff: u32,
                candidates: Vec<output::CandidateRecord>,
                exclusions: Vec<output::ExclusionRecord>,
            }
            let log2n = 31 - n.leading_zeros();
            let file = ClassifyFile {
                n: *n,
                ell: *ell,
                f: *f,
                a_cutoff: (log2n * f).max(1),
                candidates: survey.iter().map(output::candidate_record).collect(),
                exclusions: exclusions.iter().map(output::exclusion_record).collect(),
            };
            write_out(out.as_deref(), &json_string(&file)?)?;
            Ok(0)
        }
        Cmd::VerifyAll { only } => {
            let outcomes = if only.is_empty() {
                verify::run_all()
            } else {
                only.iter()
                    .map(|&id| {
                        require(
                            (1..=verify::CRITERIA.len()).contains(&id),
                            "criterion ids run from 1 to 13",
                        )
                        .map(|_| verify::run(id))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let mut all = true;
            for o in &outcomes {
                println!("{}", o.line());
                all &= o.pass;
            }
            println!(
                "{}: {} of {} criteria passed",
                if all { "OK" } else { "FAILING" },
                outcomes.iter().filter(|o| o.pass).count(),
                outcomes.len()
            );
            Ok(if all { 0 } else { 1 })
        }
    }
}

fn prime_power(x: u64) -> Option<(u64, u32)> {
    if x < 2 {
        return None;
    }
    let mut p = 0u64;
    let mut rem = x;
    for d in 2.. {
        if d * d > x {
            break;
        }
        if rem.is_multiple_of(d) {
            p = d;
            break;
        }
    }
    if p == 0 {
        return Some((x, 1)); // x itself prime
    }
    let mut e = 0u32;
    while rem.is_multiple_of(p) {
        rem /= p;
        e += 1;
    }
    if rem == 1 {
        Some((p, e))
    } else {
        None
    }
}
