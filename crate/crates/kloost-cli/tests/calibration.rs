//! One-time calibration for the frozen Sato-Tate golden values, kept as an
//! ignored test so the numbers can be reproduced on demand:
//!
//! ```text
//! cargo test -p kloost-cli --test calibration -- --ignored --nocapture
//! ```
//!
//! Prints the KS distances and moments from the fast transform path, and
//! cross-checks the second moment at the largest prime against a direct
//! O(p²) summation oracle that never touches the FFT code path.

use kloost::kloosterman::sato_tate_stats;

#[test]
#[ignore]
fn calibrate_sato_tate_golden() {
    let primes = [101u64, 1009, 10007];
    let reports = sato_tate_stats(&primes, 3).unwrap();
    for r in &reports {
        println!(
            "p = {:6}: ks = {:.12}, m1 = {:.12}, m2 = {:.12}, m4 = {:.12}",
            r.p, r.ks, r.moments[0], r.moments[1], r.moments[3]
        );
    }

    // direct-summation oracle for m2 at the largest prime:
    // Kl_2(a) = −(1/√p)·Σ_x e((x + a/x)/p), m2 = mean of Kl²
    let p = *primes.last().unwrap();
    let tau = std::f64::consts::TAU;
    let cos_table: Vec<f64> = (0..p).map(|c| (tau * c as f64 / p as f64).cos()).collect();
    let sin_table: Vec<f64> = (0..p).map(|c| (tau * c as f64 / p as f64).sin()).collect();
    let inv: Vec<u64> = std::iter::once(0)
        .chain((1..p).map(|x| {
            let mut r = 1u64;
            let mut b = x;
            let mut e = p - 2;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            r
        }))
        .collect();
    let mut m2 = 0.0f64;
    for a in 1..p {
        let mut re = 0.0;
        let mut im = 0.0;
        for x in 1..p {
            let e = (x + a * inv[x as usize]) % p;
            re += cos_table[e as usize];
            im += sin_table[e as usize];
        }
        debug_assert!(im.abs() < 1e-6);
        let kl = -re / (p as f64).sqrt();
        m2 += kl * kl;
        let _ = im;
    }
    m2 /= (p - 1) as f64;
    let fast = reports.last().unwrap().moments[1];
    println!("direct-summation oracle m2 at p = {p}: {m2:.12}");
    println!("fast transform path    m2 at p = {p}: {fast:.12}");
    assert!(
        (m2 - fast).abs() < 1e-6,
        "fast path drifted from the direct oracle"
    );
}
