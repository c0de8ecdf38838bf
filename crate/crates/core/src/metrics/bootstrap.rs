//! Paired bootstrap resampling for comparing two systems on one test set.
//!
//! Each resample draws sentence indices with replacement and rescores both
//! systems on the drawn set. The p-value for "A is better than B" is
//! `(#{resamples with BLEU(B) >= BLEU(A)} + 1) / (samples + 1)`; ties count
//! against A. Resample `i` uses its own ChaCha stream derived from
//! `(seed, i)`, so results do not depend on how resamples are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::bleu::{check_len, BleuStats};

/// Resample count used for the significance tests in the experiments.
pub const DEFAULT_SAMPLES: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignificanceResult {
    pub p_value: f64,
    pub samples: usize,
    /// Full-set corpus BLEU of A minus that of B.
    pub delta: f64,
    pub bleu_a: f64,
    pub bleu_b: f64,
    /// Resamples where B scored at least as well as A.
    pub b_at_least_a: usize,
    pub seed: u64,
}

pub fn paired_bootstrap<S, T, U>(
    hyp_a: &[S],
    hyp_b: &[T],
    references: &[U],
    samples: usize,
    seed: u64,
) -> Result<SignificanceResult>
where
    S: AsRef<str> + Sync,
    T: AsRef<str> + Sync,
    U: AsRef<str> + Sync,
{
    check_len("system A vs references", hyp_a.len(), references.len())?;
    check_len("system B vs references", hyp_b.len(), references.len())?;
    let a: Vec<BleuStats> = hyp_a
        .par_iter()
        .zip(references)
        .map(|(h, r)| BleuStats::of(h.as_ref(), r.as_ref()))
        .collect();
    let b: Vec<BleuStats> = hyp_b
        .par_iter()
        .zip(references)
        .map(|(h, r)| BleuStats::of(h.as_ref(), r.as_ref()))
        .collect();
    bootstrap_from_stats(&a, &b, samples, seed)
}

/// Same as [`paired_bootstrap`] on precomputed per-sentence statistics.
pub fn bootstrap_from_stats(
    a: &[BleuStats],
    b: &[BleuStats],
    samples: usize,
    seed: u64,
) -> Result<SignificanceResult> {
    check_len("system A vs system B", a.len(), b.len())?;
    if a.is_empty() {
        return Err(Error::EmptyInput("bootstrap test set"));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let n = a.len();
    let bleu_a = a.iter().copied().sum::<BleuStats>().score();
    let bleu_b = b.iter().copied().sum::<BleuStats>().score();

    let b_at_least_a = (0..samples)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = resample_rng(seed, i);
            let mut sa = BleuStats::default();
            let mut sb = BleuStats::default();
            for _ in 0..n {
                let j = rng.gen_range(0..n);
                sa += a[j];
                sb += b[j];
            }
            sb.score() >= sa.score()
        })
        .count();

    Ok(SignificanceResult {
        p_value: (b_at_least_a + 1) as f64 / (samples + 1) as f64,
        samples,
        delta: bleu_a - bleu_b,
        bleu_a,
        bleu_b,
        b_at_least_a,
        seed,
    })
}

fn resample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}
