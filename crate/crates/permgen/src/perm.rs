//! Permutations, cycle types, and orbit partitions.
//!
//! Points are 0-based indices `0..n`. A [`Permutation`] stores its image
//! table; a [`CycleType`] records how many cycles of each length a class
//! representative has and knows how to sample uniformly from its conjugacy
//! class; [`orbits`] computes the orbit partition of the group generated by
//! a list of permutations via union-find.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Parity of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

/// A permutation of `{0, .., n-1}` stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from an image table, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let i = img as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidCycleType(format!(
                    "image table of length {n} is not a bijection"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (idx, &p) in cycle.iter().enumerate() {
                let q = cycle[(idx + 1) % cycle.len()];
                if p >= n || q >= n || touched[p] {
                    return Err(Error::InvalidCycleType(format!(
                        "cycles are not disjoint on 0..{n}"
                    )));
                }
                touched[p] = true;
                images[p] = q as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self ∘ other`: the result maps `i` to `self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let images = other
            .images
            .iter()
            .map(|&i| self.images[i as usize])
            .collect();
        Ok(Permutation { images })
    }

    /// In-place `self <- self ∘ other`, using `scratch` as a buffer.
    pub(crate) fn compose_into(&mut self, other: &Permutation, scratch: &mut Vec<u32>) {
        scratch.clear();
        scratch.extend(other.images.iter().map(|&i| self.images[i as usize]));
        std::mem::swap(&mut self.images, scratch);
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Cycle decomposition, including fixed points as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut counts = BTreeMap::new();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                len += 1;
                p = self.apply(p);
            }
            *counts.entry(len).or_insert(0) += 1;
        }
        CycleType { n, counts }
    }

    /// Even iff `n` minus the number of cycles is even.
    pub fn parity(&self) -> Parity {
        let n = self.degree();
        let mut num_cycles = 0usize;
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            num_cycles += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.apply(p);
            }
        }
        if (n - num_cycles) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Conjugacy class descriptor: counts `c_i` of `i`-cycles with `Σ i·c_i = n`.
///
/// Only nonzero counts are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_counts(counts: BTreeMap<usize, usize>) -> Result<Self> {
        let mut n = 0usize;
        for (&len, &c) in &counts {
            if len == 0 {
                return Err(Error::InvalidCycleType("cycle length 0".into()));
            }
            n += len * c;
        }
        let counts = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        Ok(CycleType { n, counts })
    }

    /// Convenience constructor from `(length, count)` pairs.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &(len, c) in pairs {
            if counts.insert(len, c).is_some() {
                return Err(Error::InvalidCycleType(format!("duplicate cycle length {len}")));
            }
        }
        Self::from_counts(counts)
    }

    pub fn identity(n: usize) -> Self {
        let mut counts = BTreeMap::new();
        if n > 0 {
            counts.insert(1, n);
        }
        CycleType { n, counts }
    }

    /// Single `n`-cycle.
    pub fn single_cycle(n: usize) -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(n, 1);
        CycleType { n, counts }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn count(&self, length: usize) -> usize {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    /// Parity shared by every element of the class.
    pub fn parity(&self) -> Parity {
        if (self.n - self.num_cycles()) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Size of the conjugacy class: `n! / Π_i (i^{c_i} · c_i!)`.
    pub fn class_size(&self) -> BigUint {
        let mut numerator = factorial(self.n);
        for (&len, &c) in &self.counts {
            let mut denom = BigUint::from(len).pow(c as u32);
            denom *= factorial(c);
            numerator /= denom;
        }
        numerator
    }

    /// Uniform sample from the conjugacy class.
    ///
    /// Shuffles `0..n` once and writes the points into a canonical cycle
    /// skeleton ordered by increasing cycle length; every class element
    /// arises from the same number of arrangements, so the draw is exactly
    /// uniform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let n = self.n;
        let mut points: Vec<u32> = (0..n as u32).collect();
        points.shuffle(rng);
        let mut images = vec![0u32; n];
        let mut pos = 0usize;
        for (&len, &c) in &self.counts {
            for _ in 0..c {
                let slot = &points[pos..pos + len];
                for i in 0..len {
                    images[slot[i] as usize] = slot[(i + 1) % len];
                }
                pos += len;
            }
        }
        Permutation { images }
    }

    /// Canonical class representative on the skeleton `0..n` itself.
    pub fn representative(&self) -> Permutation {
        let n = self.n;
        let mut images = vec![0u32; n];
        let mut pos = 0usize;
        for (&len, &c) in &self.counts {
            for _ in 0..c {
                for i in 0..len {
                    images[pos + i] = (pos + (i + 1) % len) as u32;
                }
                pos += len;
            }
        }
        Permutation { images }
    }

    /// Parses the `i^c` factor format, checking the degree against `n`.
    pub fn parse_with_degree(text: &str, n: usize) -> Result<Self> {
        let ct: CycleType = text.parse()?;
        if ct.n != n {
            return Err(Error::Parse(format!(
                "cycle type '{text}' has degree {} but n = {n} was given",
                ct.n
            )));
        }
        Ok(ct)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Whitespace-separated `i^c` factors, e.g. `1^2 2^3 5^1`.
    fn from_str(text: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for token in text.split_whitespace() {
            let (base, count) = token
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected i^c factor, got '{token}'")))?;
            let base: usize = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad cycle length '{base}'")))?;
            let count: usize = count
                .parse()
                .map_err(|_| Error::Parse(format!("bad count '{count}'")))?;
            if base == 0 {
                return Err(Error::Parse("cycle length 0".into()));
            }
            if counts.insert(base, count).is_some() {
                return Err(Error::Parse(format!("duplicate base {base}")));
            }
        }
        CycleType::from_counts(counts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "(empty)");
        }
        let mut first = true;
        for (&len, &c) in &self.counts {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{len}^{c}")?;
            first = false;
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Union-find with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            self.parent[i as usize] = self.parent[self.parent[i as usize] as usize];
            i = self.parent[i as usize];
        }
        i
    }

    pub fn union(&mut self, i: u32, j: u32) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri == rj {
            return;
        }
        let (a, b) = if self.size[ri as usize] >= self.size[rj as usize] {
            (ri, rj)
        } else {
            (rj, ri)
        };
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        self.components -= 1;
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Orbit partition of the group generated by a list of permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    blocks: Vec<Vec<usize>>,
    size_histogram: BTreeMap<usize, usize>,
}

impl OrbitPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Map `k -> N_k`, the number of orbits of size `k`.
    pub fn size_histogram(&self) -> &BTreeMap<usize, usize> {
        &self.size_histogram
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `N = Σ_{k <= n/2} N_k`; zero exactly when the group is transitive
    /// (on a nonempty domain).
    pub fn small_orbit_count(&self, n: usize) -> usize {
        self.size_histogram
            .iter()
            .filter(|&(&k, _)| 2 * k <= n)
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn is_transitive(&self) -> bool {
        self.blocks.len() <= 1
    }
}

/// Orbit partition of `⟨gens⟩` acting on `0..n`.
///
/// The orbits of the generated group are the connected components of the
/// union of the generator graphs, so a single union-find pass suffices.
/// An empty generator list yields the trivial group (all singletons).
pub fn orbits(n: usize, gens: &[Permutation]) -> Result<OrbitPartition> {
    let mut uf = transitive_union_find(n, gens)?;
    let mut roots: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..n as u32 {
        let r = uf.find(i);
        roots.entry(r).or_default().push(i as usize);
    }
    let mut blocks: Vec<Vec<usize>> = roots.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    let mut size_histogram = BTreeMap::new();
    for b in &blocks {
        *size_histogram.entry(b.len()).or_insert(0) += 1;
    }
    Ok(OrbitPartition {
        blocks,
        size_histogram,
    })
}

/// True iff `⟨gens⟩` has a single orbit on `0..n` (without building blocks).
pub fn is_transitive(n: usize, gens: &[Permutation]) -> Result<bool> {
    Ok(transitive_union_find(n, gens)?.components() <= 1)
}

fn transitive_union_find(n: usize, gens: &[Permutation]) -> Result<UnionFind> {
    for g in gens {
        if g.degree() != n {
            return Err(Error::DegreeMismatch {
                left: n,
                right: g.degree(),
            });
        }
    }
    let mut uf = UnionFind::new(n);
    for g in gens {
        for i in 0..n as u32 {
            uf.union(i, g.images()[i as usize]);
        }
    }
    Ok(uf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    #[test]
    fn compose_identity() {
        let id = Permutation::identity(4);
        let t = perm(4, &[&[0, 1]]);
        assert_eq!(id.compose(&t).unwrap(), t);
        assert_eq!(t.compose(&id).unwrap(), t);
    }

    #[test]
    fn compose_involution_squared() {
        let t = perm(4, &[&[0, 1]]);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn compose_three_cycle() {
        let c = perm(3, &[&[0, 1, 2]]);
        let expected = perm(3, &[&[0, 2, 1]]);
        assert_eq!(c.compose(&c).unwrap(), expected);
    }

    #[test]
    fn compose_degree_mismatch() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(
            Permutation::identity(5).cycle_type(),
            CycleType::identity(5)
        );
        assert_eq!(
            perm(4, &[&[0, 1], &[2, 3]]).cycle_type(),
            CycleType::from_pairs(&[(2, 2)]).unwrap()
        );
        assert_eq!(
            perm(6, &[&[0, 1, 2], &[3, 4]]).cycle_type(),
            CycleType::from_pairs(&[(1, 1), (2, 1), (3, 1)]).unwrap()
        );
    }

    #[test]
    fn parity_examples() {
        assert_eq!(Permutation::identity(4).parity(), Parity::Even);
        assert_eq!(perm(4, &[&[0, 1]]).parity(), Parity::Odd);
        assert_eq!(perm(4, &[&[0, 1], &[2, 3]]).parity(), Parity::Even);
    }

    #[test]
    fn parity_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_perm(9, &mut rng);
            let q = random_perm(9, &mut rng);
            assert_eq!(
                p.compose(&q).unwrap().parity(),
                p.parity().xor(q.parity())
            );
        }
    }

    fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Permutation {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.shuffle(rng);
        Permutation::from_images(images).unwrap()
    }

    #[test]
    fn class_size_examples() {
        assert_eq!(CycleType::identity(7).class_size(), BigUint::from(1u32));
        assert_eq!(
            CycleType::from_pairs(&[(2, 2)]).unwrap().class_size(),
            BigUint::from(3u32)
        );
        assert_eq!(
            CycleType::from_pairs(&[(1, 1), (2, 1)]).unwrap().class_size(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn class_size_matches_enumeration_small_n() {
        // Count permutations per cycle type by brute force for n <= 7.
        for n in 1..=7usize {
            let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
            let mut images: Vec<u32> = (0..n as u32).collect();
            permute_all(&mut images, 0, &mut |imgs| {
                let p = Permutation::from_images(imgs.to_vec()).unwrap();
                *counts.entry(p.cycle_type()).or_insert(0) += 1;
            });
            for (ct, count) in counts {
                assert_eq!(ct.class_size(), BigUint::from(count), "type {ct} in S_{n}");
            }
        }
    }

    fn permute_all(items: &mut Vec<u32>, start: usize, visit: &mut impl FnMut(&[u32])) {
        if start == items.len() {
            visit(items);
            return;
        }
        for i in start..items.len() {
            items.swap(start, i);
            permute_all(items, start + 1, visit);
            items.swap(start, i);
        }
    }

    #[test]
    fn sample_identity_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ct = CycleType::identity(6);
        assert!(ct.sample(&mut rng).is_identity());
    }

    #[test]
    fn sample_has_requested_type() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ct = CycleType::from_pairs(&[(1, 2), (3, 1)]).unwrap();
        for _ in 0..500 {
            assert_eq!(ct.sample(&mut rng).cycle_type(), ct);
        }
    }

    #[test]
    fn sample_uniform_over_small_classes() {
        // chi-square over the full class at 1e5 draws; critical value for
        // df = 2 at p = 0.001 is 13.816.
        let cases = [
            CycleType::from_pairs(&[(2, 2)]).unwrap(),
            CycleType::from_pairs(&[(1, 1), (2, 1)]).unwrap(),
        ];
        for ct in cases {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let draws = 100_000usize;
            let mut freq: BTreeMap<Permutation, usize> = BTreeMap::new();
            for _ in 0..draws {
                *freq.entry(ct.sample(&mut rng)).or_insert(0) += 1;
            }
            let classes: usize = ct.class_size().try_into().unwrap();
            assert_eq!(freq.len(), classes);
            let expected = draws as f64 / classes as f64;
            let chi2: f64 = freq
                .values()
                .map(|&o| {
                    let d = o as f64 - expected;
                    d * d / expected
                })
                .sum();
            assert!(chi2 < 13.816, "chi2 = {chi2} for type {ct}");
        }
    }

    impl PartialOrd for Permutation {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    impl Ord for Permutation {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.images.cmp(&other.images)
        }
    }

    #[test]
    fn orbits_examples() {
        let empty = orbits(4, &[]).unwrap();
        assert_eq!(empty.num_blocks(), 4);
        assert_eq!(empty.small_orbit_count(4), 4);

        let one = orbits(4, &[perm(4, &[&[0, 1], &[2, 3]])]).unwrap();
        assert_eq!(one.blocks(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(one.size_histogram().get(&2), Some(&2));

        let klein = orbits(
            4,
            &[perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])],
        )
        .unwrap();
        assert!(klein.is_transitive());
        assert_eq!(klein.small_orbit_count(4), 0);
    }

    #[test]
    fn orbits_partition_the_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = 12;
            let gens = vec![random_perm(n, &mut rng), random_perm(n, &mut rng)];
            let part = orbits(n, &gens).unwrap();
            let total: usize = part.blocks().iter().map(|b| b.len()).sum();
            assert_eq!(total, n);
            let hist_total: usize = part
                .size_histogram()
                .iter()
                .map(|(&k, &c)| k * c)
                .sum();
            assert_eq!(hist_total, n);
        }
    }

    #[test]
    fn parse_cycle_type() {
        let ct: CycleType = "1^2 2^3 5^1".parse().unwrap();
        assert_eq!(ct.degree(), 13);
        assert_eq!(ct.count(2), 3);
        assert_eq!(ct.to_string(), "1^2 2^3 5^1");

        assert!("1^1 1^2".parse::<CycleType>().is_err());
        assert!("2".parse::<CycleType>().is_err());
        assert!(CycleType::parse_with_degree("1^2 2^3 5^1", 12).is_err());
        assert!(CycleType::parse_with_degree("1^2 2^3 5^1", 13).is_ok());
    }
}
