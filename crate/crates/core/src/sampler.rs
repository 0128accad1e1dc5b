//! Standard-bit-mutation sampling.
//!
//! The number of flipped bits is drawn as Binomial(n, chi/n) by inversion on
//! a precomputed cumulative table, then flip positions are drawn without
//! replacement. This is distributionally identical to flipping each bit
//! independently but costs O(flips) per mutation instead of O(n).

use rand::Rng;

use crate::bitstring::BitString;

/// Cached Binomial(n, chi/n) flip-count sampler for one run.
#[derive(Debug, Clone)]
pub struct FlipSampler {
    n: usize,
    /// Cumulative probabilities P(K <= k); truncated where the tail mass
    /// drops below 1e-18.
    cumulative: Vec<f64>,
}

impl FlipSampler {
    /// Requires `0 < chi <= n`.
    pub fn new(n: usize, chi: f64) -> Self {
        assert!(chi > 0.0 && chi <= n as f64, "need 0 < chi <= n");
        let p = chi / n as f64;
        if p >= 1.0 {
            // every bit flips: P(K <= k) = 0 for k < n, 1 at k = n
            let mut cumulative = vec![0.0; n];
            cumulative.push(1.0);
            return Self { n, cumulative };
        }
        let mut cumulative = Vec::with_capacity(16);
        let mut pmf = (1.0 - p).powi(n as i32);
        let mut cum = pmf;
        cumulative.push(cum);
        let odds = p / (1.0 - p);
        for k in 0..n {
            if 1.0 - cum < 1e-18 {
                break;
            }
            pmf *= (n - k) as f64 / (k + 1) as f64 * odds;
            cum += pmf;
            cumulative.push(cum);
        }
        Self { n, cumulative }
    }

    /// Draws the number of bits to flip.
    #[inline]
    pub fn sample_flip_count<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        // expected position is near the mean, so a linear scan is cheap
        for (k, &c) in self.cumulative.iter().enumerate() {
            if u < c {
                return k;
            }
        }
        self.cumulative.len() - 1
    }

    /// Draws `k` distinct positions in `0..n`, sorted ascending.
    pub fn sample_positions<R: Rng>(&self, k: usize, rng: &mut R, out: &mut Vec<usize>) {
        out.clear();
        debug_assert!(k <= self.n);
        if k == self.n {
            out.extend(0..self.n);
            return;
        }
        // Floyd's algorithm: k steps, no retries.
        for j in (self.n - k)..self.n {
            let t = rng.gen_range(0..=j);
            if out.contains(&t) {
                out.push(j);
            } else {
                out.push(t);
            }
        }
        out.sort_unstable();
    }
}

/// Standard bit mutation: returns a copy of `x` with each bit independently
/// flipped with probability `chi/n`. The parent is unmodified.
pub fn sbm_mutate<R: Rng>(x: &BitString, chi: f64, rng: &mut R) -> BitString {
    let sampler = FlipSampler::new(x.len(), chi);
    let k = sampler.sample_flip_count(rng);
    let mut positions = Vec::with_capacity(k);
    sampler.sample_positions(k, rng, &mut positions);
    let mut child = x.clone();
    for &pos in &positions {
        child.flip(pos);
    }
    child
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;

    #[test]
    fn probability_one_flips_everything() {
        let mut rng = rng_from_seed(1);
        let x = BitString::parse("0101").unwrap();
        let y = sbm_mutate(&x, 4.0, &mut rng);
        assert_eq!(format!("{y:?}"), "1010");
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let x = BitString::zeros(64);
        let a = sbm_mutate(&x, 1.3, &mut rng_from_seed(99));
        let b = sbm_mutate(&x, 1.3, &mut rng_from_seed(99));
        assert_eq!(a, b);
    }

    #[test]
    fn flip_count_mean_matches_binomial() {
        // mean over 1e5 draws within 3 sigma of chi
        let n = 100;
        let chi = 1.6;
        let draws = 100_000u64;
        let sampler = FlipSampler::new(n, chi);
        let mut rng = rng_from_seed(4242);
        let total: u64 = (0..draws)
            .map(|_| sampler.sample_flip_count(&mut rng) as u64)
            .sum();
        let mean = total as f64 / draws as f64;
        let sigma = (chi * (1.0 - chi / n as f64) / draws as f64).sqrt();
        assert!(
            (mean - chi).abs() <= 3.0 * sigma,
            "mean {mean} outside {chi} +- {}",
            3.0 * sigma
        );
    }

    #[test]
    fn positions_are_distinct_and_sorted() {
        let sampler = FlipSampler::new(20, 2.0);
        let mut rng = rng_from_seed(7);
        let mut buf = Vec::new();
        for _ in 0..500 {
            let k = sampler.sample_flip_count(&mut rng);
            sampler.sample_positions(k, &mut rng, &mut buf);
            assert_eq!(buf.len(), k);
            assert!(buf.windows(2).all(|w| w[0] < w[1]));
            assert!(buf.iter().all(|&p| p < 20));
        }
    }
}
