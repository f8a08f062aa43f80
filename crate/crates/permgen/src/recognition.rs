//! Recognition of the group generated by a set of permutations: exact order
//! via a deterministic Schreier–Sims stabilizer chain, transitivity, and the
//! "contains the alternating group" test with a Jordan-type fast path.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::{factorial, is_transitive as orbit_transitive, Permutation};

/// Classification of `⟨gens⟩ ≤ S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupClass {
    Intransitive,
    TransitiveProper,
    Alternating,
    Symmetric,
}

impl GroupClass {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupClass::Intransitive => "intransitive",
            GroupClass::TransitiveProper => "transitive_proper",
            GroupClass::Alternating => "alternating",
            GroupClass::Symmetric => "symmetric",
        }
    }
}

struct StrongGen {
    perm: Permutation,
    inv: Permutation,
    /// Usable at levels `lo..=hi`: fixes the first `hi` base points, and is
    /// only offered to levels at or below `lo` (Holt-style insertion).
    lo: usize,
    hi: usize,
}

struct Level {
    base_point: u32,
    /// Schreier vector: `svec[p] = gen index` whose application last reached
    /// `p` in the orbit BFS; `-1` outside the orbit, `-2` at the base point.
    svec: Vec<i32>,
    orbit: Vec<u32>,
}

/// Base-and-strong-generators structure for `⟨gens⟩`.
///
/// Base points are chosen greedily as the smallest point moved at each
/// level, so the chain is deterministic for a given generator list.
pub struct StabilizerChain {
    n: usize,
    gens: Vec<StrongGen>,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn build(n: usize, input_gens: &[Permutation]) -> Result<StabilizerChain> {
        for g in input_gens {
            if g.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: g.degree(),
                });
            }
        }
        let mut chain = StabilizerChain {
            n,
            gens: Vec::new(),
            levels: Vec::new(),
        };
        for g in input_gens {
            if !g.is_identity() {
                chain.insert(g.clone(), 0);
            }
        }
        chain.verify();
        Ok(chain)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point as usize).collect()
    }

    pub fn fundamental_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for l in &self.levels {
            acc *= BigUint::from(l.orbit.len());
        }
        acc
    }

    /// Coset representative `u` with `u(base_point) = point` at the given
    /// level, or `None` if the point is outside the fundamental orbit.
    pub fn representative(&self, level: usize, point: usize) -> Option<Permutation> {
        let lvl = self.levels.get(level)?;
        if point >= self.n || lvl.svec[point] == -1 {
            return None;
        }
        let mut rep = Permutation::identity(self.n);
        let mut scratch = Vec::with_capacity(self.n);
        let mut p = point as u32;
        // Walking back from `point` meets the BFS edge labels outside-in, so
        // right-multiplying accumulates rep = g_km ∘ ... ∘ g_k1.
        while lvl.svec[p as usize] != -2 {
            let k = lvl.svec[p as usize] as usize;
            rep.compose_into(&self.gens[k].perm, &mut scratch);
            p = self.gens[k].inv.images()[p as usize];
        }
        Some(rep)
    }

    /// Sifts `p` through levels `from..`, reducing by transversal elements.
    /// Returns the residue and the first level where reduction failed
    /// (equal to `levels.len()` when all base points were handled).
    fn sift_from(&self, mut p: Permutation, from: usize, scratch: &mut Vec<u32>) -> (Permutation, usize) {
        for (idx, lvl) in self.levels.iter().enumerate().skip(from) {
            let target = lvl.base_point as usize;
            if lvl.svec[p.apply(target)] == -1 {
                return (p, idx);
            }
            while p.apply(target) != target {
                let k = lvl.svec[p.apply(target)] as usize;
                let mut reduced = self.gens[k].inv.clone();
                reduced.compose_into(&p, scratch);
                p = reduced;
            }
            if p.is_identity() {
                return (p, self.levels.len());
            }
        }
        (p, self.levels.len())
    }

    /// Adds a nontrivial element known to fix the first `lo` base points.
    /// Returns the deepest level whose generator set changed, or `None` if
    /// the element sifted to the identity.
    fn insert(&mut self, g: Permutation, lo: usize) -> Option<usize> {
        let mut scratch = Vec::with_capacity(self.n);
        let (res, hi) = self.sift_from(g, lo, &mut scratch);
        if res.is_identity() {
            return None;
        }
        if hi == self.levels.len() {
            // residue fixes every existing base point; open a new level at
            // the smallest point it moves
            let point = (0..self.n)
                .find(|&i| res.apply(i) != i)
                .expect("non-identity residue moves a point") as u32;
            self.levels.push(Level {
                base_point: point,
                svec: vec![-1; self.n],
                orbit: Vec::new(),
            });
        }
        let hi = hi.min(self.levels.len() - 1);
        let inv = res.inverse();
        self.gens.push(StrongGen {
            perm: res,
            inv,
            lo,
            hi,
        });
        for level in lo..=hi {
            self.rebuild_orbit(level);
        }
        Some(hi)
    }

    fn rebuild_orbit(&mut self, level: usize) {
        let base = self.levels[level].base_point;
        let n = self.n;
        let mut svec = vec![-1i32; n];
        let mut orbit = Vec::new();
        svec[base as usize] = -2;
        orbit.push(base);
        let mut head = 0usize;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for (k, sg) in self.gens.iter().enumerate() {
                if sg.lo > level || sg.hi < level {
                    continue;
                }
                let q = sg.perm.images()[p as usize];
                if svec[q as usize] == -1 {
                    svec[q as usize] = k as i32;
                    orbit.push(q);
                }
            }
        }
        self.levels[level].svec = svec;
        self.levels[level].orbit = orbit;
    }

    /// Processes Schreier generators bottom-up until every level passes,
    /// establishing `Stab_{⟨S_i⟩}(b_i) = ⟨S_{i+1}⟩` throughout.
    fn verify(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut level = self.levels.len() - 1;
        loop {
            match self.check_level(level) {
                Some(deeper) => level = deeper,
                None => {
                    if level == 0 {
                        break;
                    }
                    level -= 1;
                }
            }
        }
    }

    /// Sifts every Schreier generator of the given level. On the first
    /// nontrivial residue, installs it and reports the deepest changed
    /// level; `None` means the level is complete.
    fn check_level(&mut self, level: usize) -> Option<usize> {
        let mut scratch = Vec::with_capacity(self.n);
        let mut pt_idx = 0usize;
        while pt_idx < self.levels[level].orbit.len() {
            let pt = self.levels[level].orbit[pt_idx];
            pt_idx += 1;
            let rep_pt = self
                .representative(level, pt as usize)
                .expect("orbit point has a representative");
            let mut gen_idx = 0usize;
            while gen_idx < self.gens.len() {
                let k = gen_idx;
                gen_idx += 1;
                if self.gens[k].lo > level || self.gens[k].hi < level {
                    continue;
                }
                let image = self.gens[k].perm.images()[pt as usize] as usize;
                let rep_img_inv = self
                    .representative(level, image)
                    .expect("image stays in the orbit")
                    .inverse();
                // Schreier generator: rep(g(pt))^{-1} ∘ g ∘ rep(pt)
                let mut h = rep_img_inv;
                h.compose_into(&self.gens[k].perm, &mut scratch);
                h.compose_into(&rep_pt, &mut scratch);
                if h.is_identity() {
                    continue;
                }
                if let Some(changed) = self.insert(h, level + 1) {
                    return Some(changed);
                }
            }
        }
        None
    }
}

/// Exact order of `⟨gens⟩` acting on `0..n`.
pub fn group_order(n: usize, gens: &[Permutation]) -> Result<BigUint> {
    Ok(StabilizerChain::build(n, gens)?.order())
}

/// Whether `⟨gens⟩` acts transitively on `0..n`.
pub fn is_transitive(n: usize, gens: &[Permutation]) -> Result<bool> {
    orbit_transitive(n, gens)
}

/// Outcome of the witness search for a cycle of prime length `p` with
/// `n/2 < p <= n-3` in a random word over the generators.
///
/// A transitive group containing such a cycle is primitive (the cycle is too
/// long to respect any block system) and therefore contains `A_n` by
/// Jordan's theorem, so a hit is a certificate; a miss proves nothing.
fn find_prime_cycle_witness<R: Rng + ?Sized>(
    n: usize,
    gens: &[Permutation],
    rng: &mut R,
    tries: usize,
) -> bool {
    if n < 8 || gens.is_empty() {
        return false;
    }
    let is_prime = sieve(n);
    let mut word = gens[rng.random_range(0..gens.len())].clone();
    let mut scratch = Vec::with_capacity(n);
    for step in 0..tries {
        word.compose_into(&gens[rng.random_range(0..gens.len())], &mut scratch);
        if step < 8 {
            continue; // let the walk mix before inspecting
        }
        for cycle in word.cycles() {
            let len = cycle.len();
            if 2 * len > n && len + 3 <= n && is_prime[len] {
                return true;
            }
        }
    }
    false
}

fn sieve(n: usize) -> Vec<bool> {
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            let mut j = i * i;
            while j <= n {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_prime
}

fn order_at_least_half_factorial(chain: &StabilizerChain, n: usize) -> bool {
    2u32 * chain.order() >= factorial(n)
}

/// Default number of random words inspected by the fast path. A uniform
/// element of `A_n` or `S_n` carries a usable prime cycle with probability
/// roughly `ln 2 / ln n`, so a miss across this many words is astronomically
/// unlikely for groups that actually contain `A_n`.
pub const DEFAULT_WITNESS_TRIES: usize = 400;

/// Default degree bound for falling back to the exact stabilizer chain.
pub const DEFAULT_EXACT_BUDGET: usize = 512;

/// `true` iff `⟨gens⟩ >= A_n`, i.e. the group order is at least `n!/2`.
///
/// Tries the prime-cycle fast path first (which can only certify a positive
/// answer); on a miss the exact stabilizer-chain order decides.
pub fn contains_alternating(n: usize, gens: &[Permutation]) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    match contains_alternating_bounded(n, gens, &mut rng, DEFAULT_WITNESS_TRIES, None)? {
        Some(answer) => Ok(answer),
        None => unreachable!("no budget was set"),
    }
}

/// Budget-aware variant: `budget = Some(b)` restricts the exact fallback to
/// `n <= b`; beyond that an inconclusive fast path yields `Ok(None)`.
pub fn contains_alternating_bounded<R: Rng + ?Sized>(
    n: usize,
    gens: &[Permutation],
    rng: &mut R,
    witness_tries: usize,
    budget: Option<usize>,
) -> Result<Option<bool>> {
    if n <= 2 {
        // n!/2 <= 1, any subgroup qualifies
        return Ok(Some(true));
    }
    if !orbit_transitive(n, gens)? {
        return Ok(Some(false));
    }
    if find_prime_cycle_witness(n, gens, rng, witness_tries) {
        return Ok(Some(true));
    }
    if let Some(b) = budget {
        if n > b {
            return Ok(None);
        }
    }
    let chain = StabilizerChain::build(n, gens)?;
    Ok(Some(order_at_least_half_factorial(&chain, n)))
}

/// Classifies `⟨gens⟩` as intransitive, proper transitive, `A_n`, or `S_n`.
pub fn classify(n: usize, gens: &[Permutation]) -> Result<GroupClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    match classify_bounded(n, gens, &mut rng, DEFAULT_WITNESS_TRIES, None)? {
        Some(class) => Ok(class),
        None => unreachable!("no budget was set"),
    }
}

/// Budget-aware classification; `Ok(None)` means "transitive but the
/// alternating test was inconclusive within the budget".
pub fn classify_bounded<R: Rng + ?Sized>(
    n: usize,
    gens: &[Permutation],
    rng: &mut R,
    witness_tries: usize,
    budget: Option<usize>,
) -> Result<Option<GroupClass>> {
    if n < 3 {
        return Err(Error::DegenerateDegree(n));
    }
    if !orbit_transitive(n, gens)? {
        return Ok(Some(GroupClass::Intransitive));
    }
    match contains_alternating_bounded(n, gens, rng, witness_tries, budget)? {
        None => Ok(None),
        Some(false) => Ok(Some(GroupClass::TransitiveProper)),
        Some(true) => {
            let any_odd = gens.iter().any(|g| !g.parity().is_even());
            Ok(Some(if any_odd {
                GroupClass::Symmetric
            } else {
                GroupClass::Alternating
            }))
        }
    }
}
