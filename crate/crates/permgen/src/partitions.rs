//! Integer partitions: exact counting via the pentagonal-number recurrence,
//! the Hardy–Ramanujan asymptotic, exact-uniform random partition sampling
//! by tilted-geometric rejection, and the tail-probability limit used by the
//! random-conjugacy-class application.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;

use crate::asymptotics::{hardy_ramanujan_a, hardy_ramanujan_b};
use crate::perm::CycleType;

/// Memoized table of partition numbers `p(0), p(1), ..`.
pub struct PartitionTable {
    values: Vec<BigInt>,
}

impl Default for PartitionTable {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionTable {
    pub fn new() -> Self {
        PartitionTable {
            values: vec![BigInt::one()],
        }
    }

    /// `p(n)` via Euler's pentagonal recurrence
    /// `p(n) = Σ_j (-1)^{j+1} [p(n - j(3j-1)/2) + p(n - j(3j+1)/2)]`.
    pub fn count(&mut self, n: usize) -> BigUint {
        while self.values.len() <= n {
            let m = self.values.len();
            let mut acc = BigInt::zero();
            let mut j = 1usize;
            loop {
                let g1 = j * (3 * j - 1) / 2;
                if g1 > m {
                    break;
                }
                let positive = j % 2 == 1;
                let g2 = j * (3 * j + 1) / 2;
                if positive {
                    acc += &self.values[m - g1];
                    if g2 <= m {
                        acc += &self.values[m - g2];
                    }
                } else {
                    acc -= &self.values[m - g1];
                    if g2 <= m {
                        acc -= &self.values[m - g2];
                    }
                }
                j += 1;
            }
            self.values.push(acc);
        }
        self.values[n]
            .to_biguint()
            .expect("partition numbers are nonnegative")
    }
}

/// One-shot `p(n)`.
pub fn partition_count(n: usize) -> BigUint {
    PartitionTable::new().count(n)
}

/// Leading-order Hardy–Ramanujan approximation `(a/n) exp(2b√n)`.
pub fn hardy_ramanujan(n: usize) -> f64 {
    assert!(n >= 1);
    let a = hardy_ramanujan_a();
    let b = hardy_ramanujan_b();
    (a / n as f64) * (2.0 * b * (n as f64).sqrt()).exp()
}

/// Exact-uniform sampler for partitions of `n`.
///
/// Proposes independent geometric multiplicities `Z_i` with parameter
/// `q^i`, `q = exp(-b/√n)`, and accepts when `Σ i·Z_i = n`; conditioned on
/// acceptance every partition has probability proportional to `q^n`, hence
/// uniform. The tilt makes the expected proposal total `≈ n`, so the
/// acceptance rate is `Θ(n^{-3/4})`.
///
/// Part sizes whose success probability rounds to zero at `u64` resolution
/// are skipped, and the indices with `Z_i > 0` are located by inverting the
/// precomputed log-survival prefix, so a proposal costs roughly one RNG
/// draw per distinct part rather than one per candidate size.
pub struct PartitionSampler {
    n: usize,
    /// `t[i-1] = q^i` scaled to u64, for the geometric multiplicity at part
    /// size `i`
    thresholds: Vec<u64>,
    /// `log_survival[i] = Σ_{j<=i} ln(1 - q^j)`, `log_survival[0] = 0`
    log_survival: Vec<f64>,
}

impl PartitionSampler {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let q_log = -hardy_ramanujan_b() / (n as f64).sqrt();
        let scale = 2.0f64.powi(64);
        let mut thresholds = Vec::new();
        let mut log_survival = vec![0.0f64];
        for i in 1..=n {
            let p = (q_log * i as f64).exp();
            let t = (p * scale) as u64; // saturating cast
            if t == 0 {
                break;
            }
            thresholds.push(t);
            log_survival.push(log_survival[i - 1] + (1.0 - p).ln());
        }
        PartitionSampler {
            n,
            thresholds,
            log_survival,
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Draws one uniformly random partition of `n`, encoded as a cycle type.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CycleType {
        let mut parts: Vec<(usize, usize)> = Vec::new();
        loop {
            parts.clear();
            if self.propose(rng, &mut parts) {
                return CycleType::from_pairs(&parts).expect("proposal sums to n");
            }
        }
    }

    /// One proposal round; fills `parts` and reports whether the total hit
    /// exactly `n`.
    fn propose<R: Rng + ?Sized>(&self, rng: &mut R, parts: &mut Vec<(usize, usize)>) -> bool {
        let imax = self.thresholds.len();
        let mut sum = 0usize;
        let mut pos = 0usize; // last handled part size
        while pos < imax {
            // next part size with Z_i > 0: invert the survival prefix
            let u: f64 = rng.random();
            if u <= 0.0 {
                continue;
            }
            let target = self.log_survival[pos] + u.ln();
            if self.log_survival[imax] > target {
                break; // all remaining multiplicities are zero
            }
            let mut lo = pos + 1;
            let mut hi = imax;
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.log_survival[mid] <= target {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let i = lo;
            let mut count = 1usize;
            let t = self.thresholds[i - 1];
            while rng.next_u64() < t {
                count += 1;
            }
            sum += i * count;
            if sum > self.n {
                return false;
            }
            parts.push((i, count));
            pos = i;
        }
        sum == self.n
    }
}

/// One-shot uniform partition draw.
pub fn sample_uniform_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CycleType {
    PartitionSampler::new(n).sample(rng)
}

/// Scales for the joint tail `P(c_1 >= x√n, c_2 >= y√n)`; note both counts
/// scale by `√n` here.
#[derive(Debug, Clone, Copy)]
pub struct PartitionTail {
    pub x: f64,
    pub y: f64,
}

/// Limit of `P(c_1 >= x√n, c_2 >= y√n)` for a uniformly random partition:
/// `exp(-b(x + 2y))`.
pub fn tail_probability_limit(tail: PartitionTail) -> f64 {
    assert!(tail.x >= 0.0 && tail.y >= 0.0);
    (-hardy_ramanujan_b() * (tail.x + 2.0 * tail.y)).exp()
}

/// Empirical fraction of uniformly random conjugacy classes of `S_n` that
/// consist of even permutations.
pub fn class_parity_probability<R: Rng + ?Sized>(n: usize, samples: usize, rng: &mut R) -> f64 {
    assert!(n >= 2);
    let sampler = PartitionSampler::new(n);
    let mut even = 0usize;
    for _ in 0..samples {
        if sampler.sample(rng).parity().is_even() {
            even += 1;
        }
    }
    even as f64 / samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn small_partition_counts() {
        let mut table = PartitionTable::new();
        assert_eq!(table.count(0), BigUint::from(1u32));
        assert_eq!(table.count(1), BigUint::from(1u32));
        assert_eq!(table.count(10), BigUint::from(42u32));
        assert_eq!(table.count(100), BigUint::from(190_569_292u64));
    }

    /// Direct dynamic-programming count: parts `1..=n` added one at a time.
    fn dp_partition_counts(n: usize) -> Vec<BigUint> {
        let mut ways = vec![BigUint::zero(); n + 1];
        ways[0] = BigUint::one();
        for part in 1..=n {
            for s in part..=n {
                let add = ways[s - part].clone();
                ways[s] += add;
            }
        }
        ways
    }

    #[test]
    fn recurrence_matches_dp_up_to_200() {
        let dp = dp_partition_counts(200);
        let mut table = PartitionTable::new();
        for n in 0..=200 {
            assert_eq!(table.count(n), dp[n], "p({n})");
        }
    }

    #[test]
    fn enumeration_gives_p10() {
        let mut count = 0u32;
        enumerate_partitions(10, 10, &mut Vec::new(), &mut |_| count += 1);
        assert_eq!(count, 42);
    }

    fn enumerate_partitions(
        remaining: usize,
        max_part: usize,
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if remaining == 0 {
            visit(current);
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            current.push(part);
            enumerate_partitions(remaining - part, part, current, visit);
            current.pop();
        }
    }

    #[test]
    fn hardy_ramanujan_ratio_bounds() {
        let exact = partition_count(100).to_f64().unwrap();
        let ratio = hardy_ramanujan(100) / exact;
        assert!((1.0..=1.1).contains(&ratio), "ratio {ratio}");
        assert!((hardy_ramanujan_a() - 0.144_337_567_297_406_44).abs() < 1e-12);
    }

    #[test]
    fn hardy_ramanujan_ratio_tightens_at_n10000() {
        let exact = PartitionTable::new().count(10_000).to_f64().unwrap();
        let ratio = hardy_ramanujan(10_000) / exact;
        assert!((1.0..=1.01).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn sampler_degenerate_and_postcondition() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_uniform_partition(1, &mut rng), CycleType::identity(1));
        let sampler = PartitionSampler::new(1000);
        for _ in 0..20 {
            assert_eq!(sampler.sample(&mut rng).degree(), 1000);
        }
    }

    #[test]
    fn sampler_uniform_chi_square() {
        // critical values at p = 0.001: df 4 -> 18.467, df 10 -> 29.588,
        // df 21 -> 46.797
        let cases = [(4usize, 5usize, 18.467), (6, 11, 29.588), (8, 22, 46.797)];
        for (n, classes, critical) in cases {
            let sampler = PartitionSampler::new(n);
            let mut rng = ChaCha8Rng::seed_from_u64(1234 + n as u64);
            let draws = 100_000usize;
            let mut freq: BTreeMap<CycleType, usize> = BTreeMap::new();
            for _ in 0..draws {
                *freq.entry(sampler.sample(&mut rng)).or_insert(0) += 1;
            }
            assert_eq!(freq.len(), classes, "p({n})");
            let expected = draws as f64 / classes as f64;
            let chi2: f64 = freq
                .values()
                .map(|&o| {
                    let d = o as f64 - expected;
                    d * d / expected
                })
                .sum();
            assert!(chi2 < critical, "chi2 = {chi2} at n = {n}");
        }
    }

    #[test]
    fn tail_limit_examples() {
        assert_eq!(tail_probability_limit(PartitionTail { x: 0.0, y: 0.0 }), 1.0);
        let b = hardy_ramanujan_b();
        let one_x = tail_probability_limit(PartitionTail { x: 1.0, y: 0.0 });
        assert!((one_x - (-b).exp()).abs() < 1e-15);
        assert!((one_x - 0.277_329_26).abs() < 5e-7);
        let one_y = tail_probability_limit(PartitionTail { x: 0.0, y: 1.0 });
        assert!((one_y - 0.076_911_52).abs() < 5e-7);
    }

    #[test]
    fn parity_fractions_small_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        // n = 2: classes {1^2} (even) and {2} (odd), true fraction 1/2
        let f2 = class_parity_probability(2, 20_000, &mut rng);
        assert!((f2 - 0.5).abs() < 0.02, "f2 = {f2}");
        // n = 3: types 1^3 and 3 are even, 1·2 odd, true fraction 2/3
        let f3 = class_parity_probability(3, 20_000, &mut rng);
        assert!((f3 - 2.0 / 3.0).abs() < 0.02, "f3 = {f3}");
    }

    #[test]
    fn parity_fraction_tends_to_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let f = class_parity_probability(1000, 100_000, &mut rng);
        assert!((f - 0.5).abs() < 0.01, "f = {f}");
    }
}
