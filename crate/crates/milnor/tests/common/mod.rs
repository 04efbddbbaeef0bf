//! Shared helpers for the integration suites: reproducible random
//! arrangements from a seeded generator.

use milnor::arrangement::CentralArrangement;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random essential arrangement: ambient dimension in `2..=max_dim`, degree
/// in `dim..=max_degree`, integer normals with entries in -3..=3. Resamples
/// until the rows are valid (nonzero, pairwise non-proportional) and span.
pub fn random_essential(
    rng: &mut ChaCha8Rng,
    max_dim: usize,
    max_degree: usize,
) -> CentralArrangement {
    loop {
        let dim = rng.gen_range(2..=max_dim);
        let degree = rng.gen_range(dim..=max_degree);
        let rows: Vec<Vec<i64>> = (0..degree)
            .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        if let Ok(a) = CentralArrangement::from_integer_rows(&rows) {
            if a.is_essential() {
                return a;
            }
        }
    }
}

/// Random essential plane arrangement (ambient dimension 3) with degree in
/// `3..=max_degree`. Small entries so concurrent and parallel incidences
/// (the interesting lattices) appear often.
pub fn random_lines(rng: &mut ChaCha8Rng, max_degree: usize) -> CentralArrangement {
    loop {
        let degree = rng.gen_range(3..=max_degree);
        let rows: Vec<Vec<i64>> = (0..degree)
            .map(|_| (0..3).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        if let Ok(a) = CentralArrangement::from_integer_rows(&rows) {
            if a.is_essential() {
                return a;
            }
        }
    }
}

/// Random *reducible* essential plane arrangement: lines through the z-axis
/// plus the plane z = 0, so the split {z-free rows} + {z row} is a genuine
/// direct sum.
pub fn random_reducible_lines(rng: &mut ChaCha8Rng, max_degree: usize) -> CentralArrangement {
    loop {
        let degree = rng.gen_range(2..max_degree);
        let mut rows: Vec<Vec<i64>> = (0..degree)
            .map(|_| {
                let mut r: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
                r.push(0);
                r
            })
            .collect();
        rows.push(vec![0, 0, 1]);
        if let Ok(a) = CentralArrangement::from_integer_rows(&rows) {
            if a.is_essential() {
                return a;
            }
        }
    }
}

/// The primes available to the small-prime counting comparisons.
pub const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
