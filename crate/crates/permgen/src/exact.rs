//! Exact rational computation of the expected orbit counts `E N_k` at
//! finite `n`, built on a brute-forced table of transitive-pair
//! probabilities `p(d; d')` for small degrees.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm::{factorial, CycleType, UnionFind};

pub type Rational = Ratio<BigInt>;

/// Sparse multiplicity map `part length -> count`, the `d_i` of one side of
/// a solution.
pub type Counts = BTreeMap<usize, usize>;

/// One solution of the double restricted-partition system for target `k`:
/// `Σ i·d_i = Σ i·d'_i = k` with `d_i <= c_i`, `d'_i <= c'_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionPair {
    pub d: Counts,
    pub d_prime: Counts,
    pub k: usize,
}

impl SolutionPair {
    /// True when every part of length `>= 3` is absent on both sides.
    pub fn supported_on_short_cycles(&self) -> bool {
        self.d.keys().all(|&i| i <= 2) && self.d_prime.keys().all(|&i| i <= 2)
    }
}

fn counts_degree(counts: &Counts) -> usize {
    counts.iter().map(|(&i, &c)| i * c).sum()
}

fn counts_to_string(counts: &Counts) -> String {
    if counts.is_empty() {
        return "-".into();
    }
    let mut s = String::new();
    for (idx, (&i, &c)) in counts.iter().enumerate() {
        if idx > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{i}^{c}");
    }
    s
}

fn counts_from_string(text: &str) -> Result<Counts> {
    if text.trim() == "-" {
        return Ok(Counts::new());
    }
    let ct: CycleType = text.parse()?;
    Ok(ct.counts().clone())
}

/// Restricted partitions of `k` with part multiplicities bounded by `bound`,
/// in lexicographic order of the dense vector `(d_1, .., d_k)`.
fn restricted_partitions(k: usize, bound: &dyn Fn(usize) -> usize) -> Vec<Counts> {
    let mut out = Vec::new();
    let mut current = Counts::new();
    fn recurse(
        part: usize,
        remaining: usize,
        k: usize,
        bound: &dyn Fn(usize) -> usize,
        current: &mut Counts,
        out: &mut Vec<Counts>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        if part > k || part > remaining {
            return;
        }
        let max_count = bound(part).min(remaining / part);
        for count in 0..=max_count {
            if count > 0 {
                current.insert(part, count);
            }
            recurse(part + 1, remaining - part * count, k, bound, current, out);
            current.remove(&part);
        }
    }
    recurse(1, k, k, bound, &mut current, &mut out);
    out
}

/// All solution pairs for orbit size `k` against the two class types.
pub fn enumerate_solutions(k: usize, c: &CycleType, c_prime: &CycleType) -> Vec<SolutionPair> {
    let left = restricted_partitions(k, &|i| c.count(i));
    let right = restricted_partitions(k, &|i| c_prime.count(i));
    let mut out = Vec::with_capacity(left.len() * right.len());
    for d in &left {
        for d_prime in &right {
            out.push(SolutionPair {
                d: d.clone(),
                d_prime: d_prime.clone(),
                k,
            });
        }
    }
    out
}

/// Default brute-force cap on the orbit size `k` for `p(d; d')`.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 9;

const TABLE_HEADER: &str = "permgen-ptable v1";

/// Memoized table of transitive-pair probabilities `p(d; d')`.
///
/// Entries are computed by brute force over the full conjugacy class of the
/// second type against a fixed representative of the first, and published
/// atomically under a read-write lock. The table round-trips through a
/// versioned text file (`k; d; d'; num/den` lines).
pub struct ProbabilityTable {
    cap: usize,
    entries: RwLock<HashMap<(String, String), Rational>>,
}

impl Default for ProbabilityTable {
    fn default() -> Self {
        Self::new(DEFAULT_BRUTE_FORCE_CAP)
    }
}

impl ProbabilityTable {
    pub fn new(cap: usize) -> Self {
        ProbabilityTable {
            cap,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `p(d; d')`: probability that uniform permutations of cycle types `d`
    /// and `d'` in `S_k` generate a transitive subgroup.
    pub fn probability(&self, d: &Counts, d_prime: &Counts) -> Result<Rational> {
        let k = counts_degree(d);
        let k_prime = counts_degree(d_prime);
        assert_eq!(k, k_prime, "both sides must partition the same k");
        if k == 0 {
            return Ok(Rational::one());
        }
        if k > self.cap {
            return Err(Error::Capacity { k, cap: self.cap });
        }
        // the event is symmetric in (d, d'); normalize the key
        let (a, b) = {
            let sa = counts_to_string(d);
            let sb = counts_to_string(d_prime);
            if sa <= sb {
                (sa, sb)
            } else {
                (sb, sa)
            }
        };
        if let Some(p) = self.entries.read().unwrap().get(&(a.clone(), b.clone())) {
            return Ok(p.clone());
        }
        let p = brute_force_probability(k, d, d_prime);
        self.entries
            .write()
            .unwrap()
            .insert((a, b), p.clone());
        Ok(p)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let entries = self.entries.read().unwrap();
        let mut keys: Vec<_> = entries.keys().cloned().collect();
        keys.sort();
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::TableIo(format!("create {}: {e}", path.display())))?;
        writeln!(file, "{TABLE_HEADER}").map_err(|e| Error::TableIo(e.to_string()))?;
        for key in keys {
            let p = &entries[&key];
            let k = counts_degree(&counts_from_string(&key.0)?);
            writeln!(file, "{k}; {}; {}; {}/{}", key.0, key.1, p.numer(), p.denom())
                .map_err(|e| Error::TableIo(e.to_string()))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ProbabilityTable> {
        Self::load_with_cap(path, DEFAULT_BRUTE_FORCE_CAP)
    }

    pub fn load_with_cap(path: &Path, cap: usize) -> Result<ProbabilityTable> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::TableIo(format!("open {}: {e}", path.display())))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .transpose()
            .map_err(|e| Error::TableIo(e.to_string()))?
            .unwrap_or_default();
        if header.trim() != TABLE_HEADER {
            return Err(Error::TableIo(format!(
                "unsupported table header '{}'",
                header.trim()
            )));
        }
        let table = ProbabilityTable::new(cap);
        {
            let mut entries = table.entries.write().unwrap();
            for line in lines {
                let line = line.map_err(|e| Error::TableIo(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split(';').map(str::trim).collect();
                if fields.len() != 4 {
                    return Err(Error::TableIo(format!("malformed line '{line}'")));
                }
                let (num, den) = fields[3]
                    .split_once('/')
                    .ok_or_else(|| Error::TableIo(format!("malformed rational '{}'", fields[3])))?;
                let num: BigInt = num
                    .parse()
                    .map_err(|_| Error::TableIo(format!("bad numerator '{num}'")))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|_| Error::TableIo(format!("bad denominator '{den}'")))?;
                entries.insert(
                    (fields[1].to_string(), fields[2].to_string()),
                    Rational::new(num, den),
                );
            }
        }
        Ok(table)
    }
}

/// Counts transitive pairs by fixing one canonical representative of the
/// first class (the event only depends on the pair up to simultaneous
/// conjugation) and enumerating the entire second class.
fn brute_force_probability(k: usize, d: &Counts, d_prime: &Counts) -> Rational {
    let tau = CycleType::from_counts(pad_to_degree(d, k))
        .expect("valid counts")
        .representative();
    let target: Counts = pad_to_degree(d_prime, k);
    let mut transitive = 0u64;
    let mut total = 0u64;
    let mut images: Vec<u32> = (0..k as u32).collect();
    heap_permutations(&mut images, k, &mut |imgs| {
        if cycle_counts_of(imgs) != target {
            return;
        }
        total += 1;
        let mut uf = UnionFind::new(k);
        for i in 0..k as u32 {
            uf.union(i, tau.images()[i as usize]);
            uf.union(i, imgs[i as usize]);
        }
        if uf.components() == 1 {
            transitive += 1;
        }
    });
    debug_assert_eq!(
        BigUint::from(total),
        CycleType::from_counts(target).unwrap().class_size()
    );
    Rational::new(BigInt::from(transitive), BigInt::from(total))
}

fn pad_to_degree(counts: &Counts, k: usize) -> Counts {
    // counts already sum to k; just clone (helper kept for clarity of intent)
    debug_assert_eq!(counts_degree(counts), k);
    counts.clone()
}

fn cycle_counts_of(images: &[u32]) -> Counts {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut counts = Counts::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            len += 1;
            p = images[p] as usize;
        }
        *counts.entry(len).or_insert(0) += 1;
    }
    counts
}

fn heap_permutations(items: &mut Vec<u32>, n: usize, visit: &mut impl FnMut(&[u32])) {
    if n <= 1 {
        visit(items);
        return;
    }
    for i in 0..n - 1 {
        heap_permutations(items, n - 1, visit);
        if n % 2 == 0 {
            items.swap(i, n - 1);
        } else {
            items.swap(0, n - 1);
        }
    }
    heap_permutations(items, n - 1, visit);
}

/// The three closed-form families of `p(d; d')` for types supported on
/// fixed points and 2-cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormVariant {
    /// `p(1, m; 1, m)` at odd `k = 2m + 1`.
    Odd,
    /// `p(2, m-1; 0, m)` at even `k = 2m`.
    EvenFixedPoints,
    /// `p(0, m; 0, m)` at even `k = 2m`.
    EvenPlain,
}

/// Closed-form `p` values for the three displayed families.
pub fn closed_form_p(variant: ClosedFormVariant, m: usize) -> Result<Rational> {
    let fac = |x: usize| BigInt::from(factorial(x));
    let pow2 = |e: usize| BigInt::from(2u32).pow(e as u32);
    match variant {
        ClosedFormVariant::Odd => {
            // (2m+1)! / ((2m+1)!/2^m m!)^2
            let class = fac(2 * m + 1) / (pow2(m) * fac(m));
            Ok(Rational::new(fac(2 * m + 1), class.clone() * class))
        }
        ClosedFormVariant::EvenFixedPoints => {
            if m == 0 {
                return Err(Error::InvalidCycleType(
                    "even variants need m >= 1".into(),
                ));
            }
            // ((2m)!/2) / ( (2m)!/(2^{m-1} 2! (m-1)!) * (2m)!/(2^m m!) )
            let class_a = fac(2 * m) / (pow2(m - 1) * BigInt::from(2u32) * fac(m - 1));
            let class_b = fac(2 * m) / (pow2(m) * fac(m));
            Ok(Rational::new(
                fac(2 * m) / BigInt::from(2u32),
                class_a * class_b,
            ))
        }
        ClosedFormVariant::EvenPlain => {
            if m == 0 {
                return Err(Error::InvalidCycleType(
                    "even variants need m >= 1".into(),
                ));
            }
            // (2m-1)! / ((2m)!/2^m m!)^2
            let class = fac(2 * m) / (pow2(m) * fac(m));
            Ok(Rational::new(fac(2 * m - 1), class.clone() * class))
        }
    }
}

/// Cycle-type counts of the two sides of a closed-form family, as
/// `(d, d')`, for cross-checking against the brute-force table.
pub fn closed_form_types(variant: ClosedFormVariant, m: usize) -> (Counts, Counts) {
    let mk = |ones: usize, twos: usize| {
        let mut c = Counts::new();
        if ones > 0 {
            c.insert(1, ones);
        }
        if twos > 0 {
            c.insert(2, twos);
        }
        c
    };
    match variant {
        ClosedFormVariant::Odd => (mk(1, m), mk(1, m)),
        ClosedFormVariant::EvenFixedPoints => (mk(2, m - 1), mk(0, m)),
        ClosedFormVariant::EvenPlain => (mk(0, m), mk(0, m)),
    }
}

fn binom_big(c: usize, d: usize) -> BigInt {
    if d > c {
        BigInt::zero()
    } else {
        binomial(BigInt::from(c), BigInt::from(d))
    }
}

/// `Σ1/Σ2` decomposition of `E N_k`: Σ1 collects the terms supported on
/// fixed points and 2-cycles only, Σ2 the rest.
#[derive(Debug, Clone)]
pub struct ExpectationSplit {
    pub sigma1: Rational,
    pub sigma2: Rational,
}

impl ExpectationSplit {
    pub fn total(&self) -> Rational {
        self.sigma1.clone() + self.sigma2.clone()
    }
}

/// Exact `E N_k` for independent uniform elements of the two classes,
/// split into the short-cycle part Σ1 and the remainder Σ2.
pub fn expected_orbit_count_split(
    n: usize,
    c: &CycleType,
    c_prime: &CycleType,
    k: usize,
    table: &ProbabilityTable,
) -> Result<ExpectationSplit> {
    if k < 1 || 2 * k > n {
        return Err(Error::OrbitSizeRange { k, n });
    }
    if c.degree() != n || c_prime.degree() != n {
        return Err(Error::DegreeMismatch {
            left: c.degree().max(c_prime.degree()),
            right: n,
        });
    }
    let choose_nk = binom_big(n, k);
    let mut sigma1 = Rational::zero();
    let mut sigma2 = Rational::zero();
    for sol in enumerate_solutions(k, c, c_prime) {
        let p = table.probability(&sol.d, &sol.d_prime)?;
        if p.is_zero() {
            continue;
        }
        let mut weight = BigInt::one();
        for (&i, &d_i) in &sol.d {
            weight *= binom_big(c.count(i), d_i);
        }
        for (&i, &d_i) in &sol.d_prime {
            weight *= binom_big(c_prime.count(i), d_i);
        }
        let term = Rational::new(weight, choose_nk.clone()) * p;
        if sol.supported_on_short_cycles() {
            sigma1 += term;
        } else {
            sigma2 += term;
        }
    }
    Ok(ExpectationSplit { sigma1, sigma2 })
}

/// Exact `E N_k` via the solution-pair sum.
pub fn expected_orbit_count(
    n: usize,
    c: &CycleType,
    c_prime: &CycleType,
    k: usize,
    table: &ProbabilityTable,
) -> Result<Rational> {
    Ok(expected_orbit_count_split(n, c, c_prime, k, table)?.total())
}

/// Truncated `E N = Σ_{k=1}^{kmax} E N_k`; the full sum needs
/// `kmax = floor(n/2)`.
pub fn expected_orbit_total(
    n: usize,
    c: &CycleType,
    c_prime: &CycleType,
    kmax: usize,
    table: &ProbabilityTable,
) -> Result<Rational> {
    if 2 * kmax > n {
        return Err(Error::OrbitSizeRange { k: kmax, n });
    }
    let mut acc = Rational::zero();
    for k in 1..=kmax {
        acc += expected_orbit_count(n, c, c_prime, k, table)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{orbits, Permutation};
    use num_traits::ToPrimitive;

    fn ct(pairs: &[(usize, usize)]) -> CycleType {
        CycleType::from_pairs(pairs).unwrap()
    }

    fn counts(pairs: &[(usize, usize)]) -> Counts {
        pairs.iter().copied().collect()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn enumerate_solutions_examples() {
        let one = enumerate_solutions(1, &ct(&[(1, 1)]), &ct(&[(1, 1)]));
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].d, counts(&[(1, 1)]));

        let two = enumerate_solutions(2, &ct(&[(1, 2), (2, 1)]), &ct(&[(2, 1), (1, 2)]));
        // left side: d = 1^2 or 2^1
        let lefts: Vec<_> = two.iter().map(|s| s.d.clone()).collect();
        assert!(lefts.contains(&counts(&[(1, 2)])));
        assert!(lefts.contains(&counts(&[(2, 1)])));

        let two_narrow = enumerate_solutions(2, &ct(&[(1, 2), (2, 1)]), &ct(&[(2, 2)]));
        assert_eq!(two_narrow.len(), 2);
        assert!(two_narrow.iter().all(|s| s.d_prime == counts(&[(2, 1)])));

        let parity_blocked = enumerate_solutions(3, &ct(&[(2, 5)]), &ct(&[(1, 4), (3, 2)]));
        assert!(parity_blocked.is_empty());
    }

    #[test]
    fn transitive_pair_probability_examples() {
        let table = ProbabilityTable::default();
        // two transpositions in S_3
        let p = table
            .probability(&counts(&[(1, 1), (2, 1)]), &counts(&[(1, 1), (2, 1)]))
            .unwrap();
        assert_eq!(p, rat(2, 3));
        // two double transpositions in S_4
        let p = table
            .probability(&counts(&[(2, 2)]), &counts(&[(2, 2)]))
            .unwrap();
        assert_eq!(p, rat(2, 3));
        // double transposition against a transposition with two fixed points
        let p = table
            .probability(&counts(&[(1, 2), (2, 1)]), &counts(&[(2, 2)]))
            .unwrap();
        assert_eq!(p, rat(2, 3));
    }

    #[test]
    fn transitive_pair_probability_above_cap() {
        let table = ProbabilityTable::new(5);
        let err = table
            .probability(&counts(&[(6, 1)]), &counts(&[(6, 1)]))
            .unwrap_err();
        assert!(matches!(err, Error::Capacity { k: 6, cap: 5 }));
    }

    #[test]
    fn probability_symmetric_in_the_two_types() {
        let table = ProbabilityTable::default();
        let pairs = [
            (counts(&[(1, 2), (2, 1)]), counts(&[(2, 2)])),
            (counts(&[(1, 1), (2, 2)]), counts(&[(1, 1), (2, 2)])),
            (counts(&[(1, 1), (3, 1), (2, 1)]), counts(&[(3, 2)])),
        ];
        for (d, dp) in pairs {
            assert_eq!(
                table.probability(&d, &dp).unwrap(),
                table.probability(&dp, &d).unwrap()
            );
        }
    }

    #[test]
    fn short_cycle_types_need_few_fixed_points() {
        // p(d1, d2; d1', d2') = 0 unless d1 + d1' <= 2, over all types
        // supported on {1, 2} with k <= 8
        let table = ProbabilityTable::default();
        for k in 1..=8usize {
            let all = restricted_partitions(k, &|i| if i <= 2 { k } else { 0 });
            for d in &all {
                for dp in &all {
                    let d1 = d.get(&1).copied().unwrap_or(0);
                    let d1p = dp.get(&1).copied().unwrap_or(0);
                    if d1 + d1p > 2 {
                        assert!(
                            table.probability(d, dp).unwrap().is_zero(),
                            "expected 0 for d={d:?} d'={dp:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_p(ClosedFormVariant::Odd, 1).unwrap(), rat(2, 3));
        assert_eq!(
            closed_form_p(ClosedFormVariant::EvenPlain, 2).unwrap(),
            rat(2, 3)
        );
        assert_eq!(closed_form_p(ClosedFormVariant::Odd, 2).unwrap(), rat(8, 15));
        assert!(closed_form_p(ClosedFormVariant::EvenPlain, 0).is_err());
    }

    #[test]
    fn closed_forms_match_brute_force() {
        let table = ProbabilityTable::default();
        for m in 0..=2usize {
            let (d, dp) = closed_form_types(ClosedFormVariant::Odd, m);
            assert_eq!(
                closed_form_p(ClosedFormVariant::Odd, m).unwrap(),
                table.probability(&d, &dp).unwrap(),
                "odd m={m}"
            );
        }
        for m in 1..=4usize {
            for variant in [ClosedFormVariant::EvenFixedPoints, ClosedFormVariant::EvenPlain] {
                let (d, dp) = closed_form_types(variant, m);
                assert_eq!(
                    closed_form_p(variant, m).unwrap(),
                    table.probability(&d, &dp).unwrap(),
                    "{variant:?} m={m}"
                );
            }
        }
    }

    #[test]
    fn expected_orbit_count_examples() {
        let table = ProbabilityTable::default();
        assert_eq!(
            expected_orbit_count(4, &ct(&[(2, 2)]), &ct(&[(2, 2)]), 2, &table).unwrap(),
            rat(2, 3)
        );
        assert_eq!(
            expected_orbit_count(4, &ct(&[(1, 2), (2, 1)]), &ct(&[(1, 2), (2, 1)]), 1, &table)
                .unwrap(),
            rat(1, 1)
        );
        let ncycle = ct(&[(12, 1)]);
        for k in 1..=6 {
            assert!(
                expected_orbit_count(12, &ncycle, &ncycle, k, &table)
                    .unwrap()
                    .is_zero()
            );
        }
        assert!(expected_orbit_count(4, &ct(&[(2, 2)]), &ct(&[(2, 2)]), 3, &table).is_err());
    }

    #[test]
    fn expected_orbit_total_examples() {
        let table = ProbabilityTable::default();
        assert_eq!(
            expected_orbit_total(4, &ct(&[(2, 2)]), &ct(&[(2, 2)]), 2, &table).unwrap(),
            rat(2, 3)
        );
        assert!(
            expected_orbit_total(5, &ct(&[(5, 1)]), &ct(&[(5, 1)]), 2, &table)
                .unwrap()
                .is_zero()
        );
    }

    /// Exhaustive average of `N_k` over all pairs drawn from two classes.
    fn exhaustive_expected_nk(n: usize, c: &CycleType, c_prime: &CycleType, k: usize) -> Rational {
        let class_a = enumerate_class(n, c);
        let class_b = enumerate_class(n, c_prime);
        let mut total = BigInt::zero();
        for a in &class_a {
            for b in &class_b {
                let part = orbits(n, &[a.clone(), b.clone()]).unwrap();
                let nk = part.size_histogram().get(&k).copied().unwrap_or(0);
                total += BigInt::from(nk);
            }
        }
        Rational::new(total, BigInt::from(class_a.len() * class_b.len()))
    }

    fn enumerate_class(n: usize, c: &CycleType) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images: Vec<u32> = (0..n as u32).collect();
        heap_permutations(&mut images, n, &mut |imgs| {
            let p = Permutation::from_images(imgs.to_vec()).unwrap();
            if &p.cycle_type() == c {
                out.push(p);
            }
        });
        out
    }

    #[test]
    fn expected_orbit_count_matches_exhaustive_n6_sample() {
        let table = ProbabilityTable::default();
        let c = ct(&[(1, 2), (2, 2)]);
        for k in 1..=3 {
            assert_eq!(
                expected_orbit_count(6, &c, &c, k, &table).unwrap(),
                exhaustive_expected_nk(6, &c, &c, k),
                "k = {k}"
            );
        }
    }

    #[test]
    fn expected_orbit_count_within_monte_carlo_error_n20() {
        use rand::SeedableRng;
        let table = ProbabilityTable::default();
        let c = ct(&[(1, 3), (2, 2), (3, 1), (5, 2)]);
        let cp = ct(&[(1, 2), (2, 3), (4, 3)]);
        let k = 2usize;
        let exact = expected_orbit_count(20, &c, &cp, k, &table)
            .unwrap()
            .to_f64()
            .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let samples = 100_000usize;
        let mut sum = 0f64;
        let mut sumsq = 0f64;
        for _ in 0..samples {
            let pair = [c.sample(&mut rng), cp.sample(&mut rng)];
            let part = orbits(20, &pair).unwrap();
            let nk = part.size_histogram().get(&k).copied().unwrap_or(0) as f64;
            sum += nk;
            sumsq += nk * nk;
        }
        let mean = sum / samples as f64;
        let var = (sumsq / samples as f64 - mean * mean).max(0.0);
        let se = (var / samples as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 4.0 * se.max(1e-9),
            "mean {mean} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn table_round_trips_through_file() {
        let table = ProbabilityTable::default();
        table
            .probability(&counts(&[(1, 1), (2, 1)]), &counts(&[(1, 1), (2, 1)]))
            .unwrap();
        table
            .probability(&counts(&[(2, 2)]), &counts(&[(2, 2)]))
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ptable.txt");
        table.save(&path).unwrap();
        let loaded = ProbabilityTable::load(&path).unwrap();
        assert_eq!(
            loaded
                .probability(&counts(&[(2, 2)]), &counts(&[(2, 2)]))
                .unwrap(),
            rat(2, 3)
        );
        assert!(ProbabilityTable::load(&dir.path().join("missing.txt")).is_err());
    }
}
