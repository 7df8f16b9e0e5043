//! Seeded support generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vdm_core::exponents::{affine_dimension, d_gamma, normalize};
use vdm_core::Support;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn support(rows: &[&[u64]]) -> Support {
    Support::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// `size` distinct vectors in {0..=max_exp}^n, in draw order.
pub fn random_support(rng: &mut ChaCha8Rng, n: usize, size: usize, max_exp: u64) -> Support {
    assert!(
        (max_exp + 1).pow(n as u32) >= size as u64,
        "not enough lattice points"
    );
    let mut seen = BTreeSet::new();
    let mut rows = Vec::with_capacity(size);
    while rows.len() < size {
        let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
        if seen.insert(v.clone()) {
            rows.push(v);
        }
    }
    Support::from_rows(&rows).unwrap()
}

/// Random n = 1 supports with N in 2..=max_size.
pub fn univariate_corpus(seed: u64, count: usize, max_size: usize, max_exp: u64) -> Vec<Support> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let size = r.gen_range(2..=max_size);
            random_support(&mut r, 1, size, max_exp)
        })
        .collect()
}

/// Random supports with n in 1..=max_n and N in 1..=max_size, capped by
/// the number of available lattice points.
pub fn mixed_corpus(
    seed: u64,
    count: usize,
    max_size: usize,
    max_n: usize,
    max_exp: u64,
) -> Vec<Support> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(1..=max_n);
            let room = (max_exp + 1).pow(n as u32) as usize;
            let size = r.gen_range(1..=max_size.min(room));
            random_support(&mut r, n, size, max_exp)
        })
        .collect()
}

/// Normalized supports (γ̄ = 0) of affine dimension at least 2. About a
/// third are scaled by 2 or 3 so that d_Γ > 1 is well represented.
pub fn geometric_corpus(seed: u64, count: usize) -> Vec<Support> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.gen_range(2..=3);
        let size = r.gen_range(3..=7);
        let (s, _) = normalize(&random_support(&mut r, n, size, 4));
        if affine_dimension(&s) < 2 {
            continue;
        }
        let s = match r.gen_range(0..6) {
            0 | 1 => s.scaled(r.gen_range(2..=3)),
            _ => s,
        };
        out.push(s);
    }
    out
}

/// Supports p·Γ₀ with Γ₀ normalized, of affine dimension ≥ 2 and d = 1.
pub fn power_corpus(seed: u64, count: usize) -> Vec<(u64, Support)> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = r.gen_range(3..=5);
        let (base, _) = normalize(&random_support(&mut r, 2, size, 3));
        if affine_dimension(&base) < 2 || d_gamma(&base).unwrap() != 1 {
            continue;
        }
        let p = [2, 3][out.len() % 2];
        out.push((p, base.scaled(p)));
    }
    out
}
