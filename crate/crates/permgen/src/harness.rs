//! Experiment orchestration: constrained cycle-type construction, seeded
//! Monte Carlo estimation of the transitivity / `>= A_n` events, the
//! random-conjugacy-class experiment, and exact finite-`n` reports.
//!
//! Reproducibility contract: every sample derives its own RNG from
//! `(seed, sample index)` via a splitmix construction, and results are
//! aggregated by integer sums, so reports are identical for any thread
//! count.

use std::time::Instant;

use num_traits::ToPrimitive;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{application_constants, generation_probability_limit, LimitParams};
use crate::error::{Error, Result};
use crate::exact::{expected_orbit_count_split, ProbabilityTable, Rational};
use crate::partitions::PartitionSampler;
use crate::perm::{is_transitive, CycleType};
use crate::recognition::{
    classify_bounded, contains_alternating_bounded, GroupClass, DEFAULT_EXACT_BUDGET,
    DEFAULT_WITNESS_TRIES,
};

/// How to complete a cycle type whose `c_1`, `c_2` are pinned by the scaled
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillerPolicy {
    /// One cycle covering all remaining points (default; adds no short
    /// cycles).
    LongCycle,
    /// Mostly 3-cycles, with one adjusting 4- or 5-cycle when the remainder
    /// is not divisible by 3.
    ThreeCycles,
}

/// Scaled-type construction result; `c1_reduced`/`c2_reduced` record how
/// far the requested counts were trimmed to absorb a leftover of 1 or 2
/// points.
#[derive(Debug, Clone)]
pub struct BuiltCycleType {
    pub cycle_type: CycleType,
    pub c1_reduced: usize,
    pub c2_reduced: usize,
}

/// Realizes the limit hypothesis at finite `n`: `c_1 = ⌊x√n⌋`,
/// `c_2 = ⌊yn/2⌋`, remaining points filled per policy.
pub fn build_cycle_type(
    n: usize,
    x: f64,
    y: f64,
    filler: FillerPolicy,
) -> Result<BuiltCycleType> {
    if n == 0 || x < 0.0 || !(0.0..=1.0).contains(&y) {
        return Err(Error::Infeasible(format!(
            "need n >= 1, x >= 0, y in [0, 1]; got n = {n}, x = {x}, y = {y}"
        )));
    }
    let mut c1 = (x * (n as f64).sqrt()).floor() as usize;
    let mut c2 = ((y * n as f64) / 2.0).floor() as usize;
    if c1 + 2 * c2 > n {
        return Err(Error::Infeasible(format!(
            "c1 + 2 c2 = {} exceeds n = {n} for x = {x}, y = {y}",
            c1 + 2 * c2
        )));
    }
    let (c1_req, c2_req) = (c1, c2);
    let mut r = n - c1 - 2 * c2;
    // a leftover of 1 or 2 points cannot form a filler cycle of length >= 3;
    // shrink the requested counts minimally until it can (or everything is
    // absorbed)
    while (1..=2).contains(&r) && c1 + c2 > 0 {
        if r == 1 {
            if c2 > 0 {
                c2 -= 1;
            } else {
                c1 -= 1;
            }
        } else if c1 > 0 {
            c1 -= 1;
        } else {
            c2 -= 1;
        }
        r = n - c1 - 2 * c2;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if c1 > 0 {
        pairs.push((1, c1));
    }
    if c2 > 0 {
        pairs.push((2, c2));
    }
    match r {
        0 => {}
        1 | 2 => {
            // degenerate tiny degree with no counts left to trim
            pairs.push((r, 1));
        }
        _ => match filler {
            FillerPolicy::LongCycle => pairs.push((r, 1)),
            FillerPolicy::ThreeCycles => {
                let (threes, adjust) = match r % 3 {
                    0 => (r / 3, None),
                    1 => (r / 3 - 1, Some(4)),
                    _ => (r / 3 - 1, Some(5)),
                };
                if threes > 0 {
                    pairs.push((3, threes));
                }
                if let Some(len) = adjust {
                    pairs.push((len, 1));
                }
            }
        },
    }
    let cycle_type = CycleType::from_pairs(&pairs)?;
    debug_assert_eq!(cycle_type.degree(), n);
    Ok(BuiltCycleType {
        cycle_type,
        c1_reduced: c1_req - c1,
        c2_reduced: c2_req - c2,
    })
}

/// Where one of the two sampled permutations comes from.
#[derive(Debug, Clone)]
pub enum ClassSpec {
    Explicit(CycleType),
    Scaled {
        x: f64,
        y: f64,
        filler: FillerPolicy,
    },
    UniformRandomClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Transitive,
    Alternating,
    Classify,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Transitive => "transitive",
            EventKind::Alternating => "alternating",
            EventKind::Classify => "classify",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub spec: ClassSpec,
    pub spec_prime: ClassSpec,
    pub event: EventKind,
    pub samples: usize,
    pub seed: u64,
    pub threads: usize,
    /// Random words inspected by the prime-cycle fast path.
    pub witness_tries: usize,
    /// Largest degree at which the exact stabilizer-chain fallback runs;
    /// beyond it, inconclusive samples are counted as `unknown`.
    pub exact_budget: usize,
}

impl ExperimentConfig {
    pub fn new(
        n: usize,
        spec: ClassSpec,
        spec_prime: ClassSpec,
        event: EventKind,
        samples: usize,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            n,
            spec,
            spec_prime,
            event,
            samples,
            seed,
            threads: 1,
            witness_tries: DEFAULT_WITNESS_TRIES,
            exact_budget: DEFAULT_EXACT_BUDGET,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

/// Wilson 95% score interval (z = 1.96); well-formed for every success
/// count including 0 and `samples`.
pub fn wilson_interval(successes: u64, samples: u64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054f64;
    let n = samples as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the endpoints equal p exactly at p = 0 and p = 1; keep the interval
    // containing p despite rounding
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Monte Carlo point estimate with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    pub event: String,
    pub n: usize,
    pub samples: usize,
    pub successes: u64,
    /// Samples where the event could not be decided within the recognition
    /// budget (never counted as successes).
    pub unknown: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Limiting value from the scaled parameters, when both specs are
    /// scaled.
    pub limit: Option<f64>,
    pub seed: u64,
    pub threads: usize,
    pub wall_time_secs: f64,
}

impl EstimateResult {
    pub fn csv_header() -> &'static str {
        "event,n,samples,estimate,ci_low,ci_high,limit,seed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.event,
            self.n,
            self.samples,
            self.estimate,
            self.ci_low,
            self.ci_high,
            self.limit.map_or(String::new(), |v| v.to_string()),
            self.seed
        )
    }
}

/// Derives the per-sample RNG from `(seed, index)`; splittable, so the
/// stream is independent of how samples are distributed over threads.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    let mut state = seed;
    let seed_mix = splitmix(&mut state);
    let mut state = seed_mix ^ index.wrapping_mul(0xA24B_AED4_963E_E407);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

enum ResolvedSpec {
    Fixed(CycleType),
    Uniform(PartitionSampler),
}

impl ResolvedSpec {
    fn draw(&self, rng: &mut ChaCha8Rng) -> CycleType {
        match self {
            ResolvedSpec::Fixed(ct) => ct.clone(),
            ResolvedSpec::Uniform(sampler) => sampler.sample(rng),
        }
    }
}

fn resolve_spec(n: usize, spec: &ClassSpec) -> Result<ResolvedSpec> {
    match spec {
        ClassSpec::Explicit(ct) => {
            if ct.degree() != n {
                return Err(Error::Infeasible(format!(
                    "explicit type has degree {} but n = {n}",
                    ct.degree()
                )));
            }
            Ok(ResolvedSpec::Fixed(ct.clone()))
        }
        ClassSpec::Scaled { x, y, filler } => Ok(ResolvedSpec::Fixed(
            build_cycle_type(n, *x, *y, *filler)?.cycle_type,
        )),
        ClassSpec::UniformRandomClass => Ok(ResolvedSpec::Uniform(PartitionSampler::new(n))),
    }
}

fn scaled_limit(cfg: &ExperimentConfig) -> Option<f64> {
    match (&cfg.spec, &cfg.spec_prime) {
        (ClassSpec::Scaled { x, y, .. }, ClassSpec::Scaled { x: xp, y: yp, .. }) => {
            let params = LimitParams::finite(*x, *y, *xp, *yp).ok()?;
            generation_probability_limit(&params).ok()
        }
        _ => None,
    }
}

fn run_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Infeasible(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

/// Monte Carlo frequency of the transitive or `>= A_n` event.
pub fn estimate_event(cfg: &ExperimentConfig) -> Result<EstimateResult> {
    if cfg.samples == 0 {
        return Err(Error::Infeasible("samples must be positive".into()));
    }
    let event = cfg.event;
    if event == EventKind::Classify {
        return Err(Error::Infeasible(
            "use classify_experiment for the classify event".into(),
        ));
    }
    let start = Instant::now();
    let spec_a = resolve_spec(cfg.n, &cfg.spec)?;
    let spec_b = resolve_spec(cfg.n, &cfg.spec_prime)?;
    let (n, seed) = (cfg.n, cfg.seed);
    let (tries, budget) = (cfg.witness_tries, cfg.exact_budget);

    let (successes, unknown) = run_pool(cfg.threads, || {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                let gens = [
                    spec_a.draw(&mut rng).sample(&mut rng),
                    spec_b.draw(&mut rng).sample(&mut rng),
                ];
                match event {
                    EventKind::Transitive => {
                        let hit = is_transitive(n, &gens).expect("equal degrees");
                        (hit as u64, 0u64)
                    }
                    EventKind::Alternating => {
                        match contains_alternating_bounded(
                            n,
                            &gens,
                            &mut rng,
                            tries,
                            Some(budget),
                        )
                        .expect("equal degrees")
                        {
                            Some(true) => (1, 0),
                            Some(false) => (0, 0),
                            None => (0, 1),
                        }
                    }
                    EventKind::Classify => unreachable!(),
                }
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    })?;

    let (ci_low, ci_high) = wilson_interval(successes, cfg.samples as u64);
    Ok(EstimateResult {
        event: event.as_str().into(),
        n: cfg.n,
        samples: cfg.samples,
        successes,
        unknown,
        estimate: successes as f64 / cfg.samples as f64,
        ci_low,
        ci_high,
        limit: scaled_limit(cfg),
        seed: cfg.seed,
        threads: cfg.threads,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Frequencies of the four classification outcomes over one sample stream.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub n: usize,
    pub samples: usize,
    pub intransitive: u64,
    pub transitive_proper: u64,
    pub alternating: u64,
    pub symmetric: u64,
    /// Transitive samples whose `>= A_n` status exceeded the budget.
    pub unknown: u64,
    pub alternating_freq: f64,
    pub alternating_ci: (f64, f64),
    pub symmetric_freq: f64,
    pub symmetric_ci: (f64, f64),
    pub transitive_freq: f64,
    pub transitive_ci: (f64, f64),
    pub seed: u64,
    pub wall_time_secs: f64,
}

/// Classifies `⟨π, π'⟩` for every sample.
pub fn classify_experiment(cfg: &ExperimentConfig) -> Result<ClassifyReport> {
    if cfg.n < 3 {
        return Err(Error::DegenerateDegree(cfg.n));
    }
    if cfg.samples == 0 {
        return Err(Error::Infeasible("samples must be positive".into()));
    }
    let start = Instant::now();
    let spec_a = resolve_spec(cfg.n, &cfg.spec)?;
    let spec_b = resolve_spec(cfg.n, &cfg.spec_prime)?;
    let (n, seed) = (cfg.n, cfg.seed);
    let (tries, budget) = (cfg.witness_tries, cfg.exact_budget);

    // counts: [intransitive, proper, alternating, symmetric, unknown]
    let counts = run_pool(cfg.threads, || {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                let gens = [
                    spec_a.draw(&mut rng).sample(&mut rng),
                    spec_b.draw(&mut rng).sample(&mut rng),
                ];
                let mut c = [0u64; 5];
                match classify_bounded(n, &gens, &mut rng, tries, Some(budget))
                    .expect("degree checked")
                {
                    Some(GroupClass::Intransitive) => c[0] = 1,
                    Some(GroupClass::TransitiveProper) => c[1] = 1,
                    Some(GroupClass::Alternating) => c[2] = 1,
                    Some(GroupClass::Symmetric) => c[3] = 1,
                    None => c[4] = 1,
                }
                c
            })
            .reduce(
                || [0u64; 5],
                |a, b| {
                    let mut out = [0u64; 5];
                    for i in 0..5 {
                        out[i] = a[i] + b[i];
                    }
                    out
                },
            )
    })?;

    let total = cfg.samples as u64;
    let transitive = total - counts[0];
    Ok(ClassifyReport {
        n: cfg.n,
        samples: cfg.samples,
        intransitive: counts[0],
        transitive_proper: counts[1],
        alternating: counts[2],
        symmetric: counts[3],
        unknown: counts[4],
        alternating_freq: counts[2] as f64 / total as f64,
        alternating_ci: wilson_interval(counts[2], total),
        symmetric_freq: counts[3] as f64 / total as f64,
        symmetric_ci: wilson_interval(counts[3], total),
        transitive_freq: transitive as f64 / total as f64,
        transitive_ci: wilson_interval(transitive, total),
        seed: cfg.seed,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Both events measured on the same sample stream, with their difference.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub samples: usize,
    pub transitive: u64,
    pub ge_alternating: u64,
    /// Transitive samples with inconclusive `>= A_n` status; the true gap
    /// lies in `[difference, difference + unknown/samples]`.
    pub unknown: u64,
    pub transitive_freq: f64,
    pub ge_alternating_freq: f64,
    pub difference: f64,
    pub seed: u64,
    pub wall_time_secs: f64,
}

/// Measures `P(transitive) - P(G >= A_n)` on one stream; the paper's
/// `e^{-Ω(n)}` gap is observed, not asserted against a constant.
pub fn compare_transitive_vs_alternating(cfg: &ExperimentConfig) -> Result<GapReport> {
    if cfg.samples == 0 {
        return Err(Error::Infeasible("samples must be positive".into()));
    }
    let start = Instant::now();
    let spec_a = resolve_spec(cfg.n, &cfg.spec)?;
    let spec_b = resolve_spec(cfg.n, &cfg.spec_prime)?;
    let (n, seed) = (cfg.n, cfg.seed);
    let (tries, budget) = (cfg.witness_tries, cfg.exact_budget);

    let (trans, alt, unknown) = run_pool(cfg.threads, || {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                let gens = [
                    spec_a.draw(&mut rng).sample(&mut rng),
                    spec_b.draw(&mut rng).sample(&mut rng),
                ];
                if !is_transitive(n, &gens).expect("equal degrees") {
                    return (0u64, 0u64, 0u64);
                }
                match contains_alternating_bounded(n, &gens, &mut rng, tries, Some(budget))
                    .expect("equal degrees")
                {
                    Some(true) => (1, 1, 0),
                    Some(false) => (1, 0, 0),
                    None => (1, 0, 1),
                }
            })
            .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
    })?;

    let total = cfg.samples as f64;
    Ok(GapReport {
        n: cfg.n,
        samples: cfg.samples,
        transitive: trans,
        ge_alternating: alt,
        unknown,
        transitive_freq: trans as f64 / total,
        ge_alternating_freq: alt as f64 / total,
        difference: (trans - alt) as f64 / total,
        seed: cfg.seed,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Random-conjugacy-class experiment report: measured frequencies plus the
/// limiting comparators.
#[derive(Debug, Clone, Serialize)]
pub struct RandomClassReport {
    #[serde(flatten)]
    pub classify: ClassifyReport,
    pub limit_transitive: f64,
    pub limit_alternating: f64,
    pub limit_symmetric: f64,
}

/// Draws two uniformly random conjugacy classes per sample, one permutation
/// from each, and classifies the generated group.
pub fn random_class_experiment(
    n: usize,
    samples: usize,
    seed: u64,
    threads: usize,
) -> Result<RandomClassReport> {
    let cfg = ExperimentConfig::new(
        n,
        ClassSpec::UniformRandomClass,
        ClassSpec::UniformRandomClass,
        EventKind::Classify,
        samples,
        seed,
    )
    .with_threads(threads);
    let classify = classify_experiment(&cfg)?;
    let constants = application_constants()?;
    Ok(RandomClassReport {
        classify,
        limit_transitive: constants.transitive,
        limit_alternating: constants.alternating,
        limit_symmetric: constants.symmetric,
    })
}

/// One row of the exact finite-`n` table.
#[derive(Debug, Clone, Serialize)]
pub struct ExactRow {
    pub k: usize,
    /// `E N_k` as an exact rational, `num/den`.
    pub expectation: String,
    pub decimal: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub n: usize,
    pub cycle_type: String,
    pub cycle_type_prime: String,
    pub kmax: usize,
    pub rows: Vec<ExactRow>,
    /// Truncated `E N = Σ_{k<=kmax} E N_k`, exact.
    pub partial_expected_n: String,
    pub partial_expected_n_decimal: f64,
    /// `exp(-partial E N)`, the heuristic transitive-probability
    /// prediction.
    pub heuristic_probability: f64,
}

fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact `E N_k` table for `k <= kmax` with the Σ1/Σ2 diagnostic split.
pub fn exact_report(
    n: usize,
    cycle_type: &CycleType,
    cycle_type_prime: &CycleType,
    kmax: usize,
    table: &ProbabilityTable,
) -> Result<ExactReport> {
    if 2 * kmax > n {
        return Err(Error::OrbitSizeRange { k: kmax, n });
    }
    let mut rows = Vec::with_capacity(kmax);
    let mut partial = Rational::from_integer(0.into());
    for k in 1..=kmax {
        let split = expected_orbit_count_split(n, cycle_type, cycle_type_prime, k, table)?;
        let total = split.total();
        rows.push(ExactRow {
            k,
            expectation: rational_to_string(&total),
            decimal: total.to_f64().unwrap_or(f64::NAN),
            sigma1: split.sigma1.to_f64().unwrap_or(f64::NAN),
            sigma2: split.sigma2.to_f64().unwrap_or(f64::NAN),
        });
        partial += total;
    }
    let partial_decimal = partial.to_f64().unwrap_or(f64::NAN);
    Ok(ExactReport {
        n,
        cycle_type: cycle_type.to_string(),
        cycle_type_prime: cycle_type_prime.to_string(),
        kmax,
        rows,
        partial_expected_n: rational_to_string(&partial),
        partial_expected_n_decimal: partial_decimal,
        heuristic_probability: (-partial_decimal).exp(),
    })
}
