//! Persistent discrete-log cache.
//!
//! One file per field context, keyed by (p, k, modulus, g). The payload is
//! the exp table (g^j encodings); the dlog table is rebuilt by inversion
//! on load. Files carry an FNV-1a checksum and are replaced atomically, so
//! a torn or corrupted file is detected and silently rebuilt.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use kloost::field::FieldCtx;

const MAGIC: &[u8; 8] = b"KLDLOG1\n";

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

pub fn cache_file(dir: &Path, p: u64, k: u32) -> PathBuf {
    dir.join(format!("dlog_p{p}_k{k}.bin"))
}

fn encode(p: u64, k: u32, modulus: &[u64], g: u64, exp: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(exp.len() * 4 + 64);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&p.to_le_bytes());
    out.extend_from_slice(&k.to_le_bytes());
    out.extend_from_slice(&(modulus.len() as u32).to_le_bytes());
    for &c in modulus {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out.extend_from_slice(&g.to_le_bytes());
    out.extend_from_slice(&(exp.len() as u64).to_le_bytes());
    for &e in exp {
        out.extend_from_slice(&e.to_le_bytes());
    }
    let checksum = fnv1a(&out);
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

struct CachePayload {
    p: u64,
    k: u32,
    modulus: Vec<u64>,
    g: u64,
    exp: Vec<u32>,
}

fn decode(bytes: &[u8]) -> Option<CachePayload> {
    if bytes.len() < MAGIC.len() + 8 || &bytes[..MAGIC.len()] != MAGIC {
        return None;
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().ok()?);
    if fnv1a(body) != stored {
        return None;
    }
    let mut pos = MAGIC.len();
    let mut take = |n: usize| -> Option<&[u8]> {
        let s = body.get(pos..pos + n)?;
        pos += n;
        Some(s)
    };
    let p = u64::from_le_bytes(take(8)?.try_into().ok()?);
    let k = u32::from_le_bytes(take(4)?.try_into().ok()?);
    let mlen = u32::from_le_bytes(take(4)?.try_into().ok()?) as usize;
    let mut modulus = Vec::with_capacity(mlen);
    for _ in 0..mlen {
        modulus.push(u64::from_le_bytes(take(8)?.try_into().ok()?));
    }
    let g = u64::from_le_bytes(take(8)?.try_into().ok()?);
    let elen = u64::from_le_bytes(take(8)?.try_into().ok()?) as usize;
    let mut exp = Vec::with_capacity(elen);
    for _ in 0..elen {
        exp.push(u32::from_le_bytes(take(4)?.try_into().ok()?));
    }
    if pos != body.len() {
        return None;
    }
    Some(CachePayload {
        p,
        k,
        modulus,
        g,
        exp,
    })
}

/// Outcome marker so callers can report hits.
#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum CacheStatus {
    Hit,
    Rebuilt,
    Disabled,
}

/// Build a field context, consulting and maintaining the cache directory.
pub fn load_or_build(
    p: u64,
    k: u32,
    modulus: Option<&[u64]>,
    dir: Option<&Path>,
) -> Result<(FieldCtx, CacheStatus)> {
    let Some(dir) = dir else {
        return Ok((FieldCtx::new(p, k, modulus)?, CacheStatus::Disabled));
    };
    let (want_modulus, want_g) = FieldCtx::canonical_parts(p, k, modulus)?;
    let path = cache_file(dir, p, k);
    if let Ok(bytes) = fs::read(&path) {
        if let Some(c) = decode(&bytes) {
            if c.p == p && c.k == k && c.modulus == want_modulus && c.g == want_g {
                if let Ok(ctx) = FieldCtx::from_parts(p, k, &c.modulus, c.g, c.exp) {
                    return Ok((ctx, CacheStatus::Hit));
                }
            }
        }
        // wrong key or corrupted: fall through and rebuild
    }
    let ctx = FieldCtx::new(p, k, modulus)?;
    write_atomic(&path, &encode(p, k, ctx.modulus(), ctx.generator().0, ctx.exp_table()))
        .with_context(|| format!("writing dlog cache {}", path.display()))?;
    Ok((ctx, CacheStatus::Rebuilt))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let Some(parent) = path.parent() else {
        bail!("cache path has no parent directory");
    };
    fs::create_dir_all(parent)?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
