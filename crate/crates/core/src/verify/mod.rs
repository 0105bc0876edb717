//! Seeded generators and proposition-keyed property suites.

pub mod gen;
mod suites;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::Ring;
pub use gen::{GenConfig, GenStats, Mix};

pub const PROP_IDS: [&str; 17] = [
    "P3.2", "P3.3", "P3.4", "C3.5", "P3.6", "P3.7", "P4.1", "P4.3", "L4.4", "P4.5", "P5.1", "T5.2", "C5.3", "P6.1",
    "P6.2", "P6.3", "P6.4",
];

const FOUR_RINGS: [&str; 4] = ["Z/4", "Z/8", "F2[x]/(x^2)", "F3[x]/(x^3)"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub gen: GenConfig,
    pub trials: usize,
}

/// The configuration a suite runs with when no flags override it.
pub fn default_config(prop_id: &str) -> Result<SuiteConfig> {
    check_prop(prop_id)?;
    let rings = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let (trials, rs, max_dim) = match prop_id {
        "P3.2" | "P4.1" => (100, rings(&["Z/4"]), 4),
        "P3.3" => (500, rings(&FOUR_RINGS), 6),
        "P3.4" => (200, rings(&FOUR_RINGS), 4),
        "P5.1" => (200, rings(&["Z/4", "Z/8", "F3[x]/(x^3)"]), 4),
        "C5.3" => (25, rings(&["Z/4", "Z/8", "F2[x]/(x^2)", "F3[x]/(x^3)", "Q[x]/(x^2)"]), 4),
        "L4.4" | "P4.3" => (100, rings(&["Z/4", "F2[x]/(x^2)"]), 3),
        _ => (100, rings(&FOUR_RINGS), 4),
    };
    Ok(SuiteConfig { gen: GenConfig { rings: rs, max_dim, ..GenConfig::default() }, trials })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    /// Seed of the trial's own generator; replay with [`run_trial`].
    pub seed: u64,
    pub ring: String,
    pub reason: String,
    pub counterexample: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub prop_id: String,
    pub config: SuiteConfig,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    /// Instances abandoned at the rejection cap and replaced.
    pub skipped: u64,
    pub counters: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Per-trial bookkeeping: failed checks, predicate counters and the
/// instance to serialize should the trial fail.
#[derive(Default)]
pub struct TrialCtx {
    pub stats: GenStats,
    failed: Vec<String>,
    counters: BTreeMap<String, u64>,
    instance: serde_json::Map<String, Value>,
}

impl TrialCtx {
    pub fn check(&mut self, cond: bool, what: &str) {
        if !cond {
            self.failed.push(what.to_string());
        }
    }

    pub fn count(&mut self, name: &str, cond: bool) {
        *self.counters.entry(name.to_string()).or_default() += cond as u64;
    }

    pub fn record<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.instance.insert(key.to_string(), v);
    }
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub passed: bool,
    pub reason: String,
    pub counters: BTreeMap<String, u64>,
    pub skipped: u64,
    pub instance: Value,
}

fn check_prop(prop_id: &str) -> Result<()> {
    if PROP_IDS.contains(&prop_id) {
        Ok(())
    } else {
        Err(Error::UnknownProp(prop_id.to_string()))
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    splitmix(master ^ splitmix(index as u64))
}

/// Runs one trial of `prop_id` from its own seed.
pub fn run_trial(prop_id: &str, gen: &GenConfig, ring: &Ring, seed: u64) -> Result<TrialOutcome> {
    check_prop(prop_id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ctx = TrialCtx::default();
    let res = catch_unwind(AssertUnwindSafe(|| suites::dispatch(prop_id, gen, ring, &mut rng, &mut ctx)));
    let mut reasons = std::mem::take(&mut ctx.failed);
    match res {
        Ok(Ok(())) => {}
        Ok(Err(e)) => reasons.push(format!("error: {e}")),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            reasons.push(format!("panic: {msg}"));
        }
    }
    Ok(TrialOutcome {
        passed: reasons.is_empty(),
        reason: reasons.join("; "),
        counters: ctx.counters,
        skipped: ctx.stats.rejection_skips,
        instance: Value::Object(ctx.instance),
    })
}

/// Runs `cfg.trials` independent trials in parallel; trial `i` uses ring
/// `i mod |rings|` and seed [`trial_seed`]`(seed, i)`.
pub fn run_suite(prop_id: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_suite_timed(prop_id, cfg, false)
}

pub fn run_suite_timed(prop_id: &str, cfg: &SuiteConfig, timing: bool) -> Result<SuiteReport> {
    check_prop(prop_id)?;
    if cfg.gen.rings.is_empty() {
        return Err(Error::Precondition("no rings configured".into()));
    }
    let rings: Vec<Ring> = cfg.gen.rings.iter().map(|s| Ring::parse(s)).collect::<Result<_>>()?;
    let start = Instant::now();
    let outcomes: Vec<(usize, u64, TrialOutcome)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.gen.seed, i);
            let ring = &rings[i % rings.len()];
            (i, seed, run_trial(prop_id, &cfg.gen, ring, seed).expect("prop id checked"))
        })
        .collect();
    let mut report = SuiteReport {
        prop_id: prop_id.to_string(),
        config: cfg.clone(),
        trials: cfg.trials,
        passes: 0,
        failures: Vec::new(),
        skipped: 0,
        counters: BTreeMap::new(),
        wall_time_ms: None,
    };
    for (i, seed, out) in outcomes {
        report.skipped += out.skipped;
        for (k, v) in out.counters {
            *report.counters.entry(k).or_default() += v;
        }
        if out.passed {
            report.passes += 1;
        } else {
            report.failures.push(Failure {
                trial: i,
                seed,
                ring: cfg.gen.rings[i % rings.len()].clone(),
                reason: out.reason,
                counterexample: out.instance,
            });
        }
    }
    if timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Every suite under its default configuration, with the master seed,
/// trial count, ring list and dimension bound overridden when given.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub rings: Option<Vec<String>>,
    pub max_dim: Option<usize>,
}

pub fn resolve_config(prop_id: &str, o: &Overrides) -> Result<SuiteConfig> {
    let mut cfg = default_config(prop_id)?;
    if let Some(s) = o.seed {
        cfg.gen.seed = s;
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(r) = &o.rings {
        for s in r {
            Ring::parse(s)?;
        }
        cfg.gen.rings = r.clone();
    }
    if let Some(d) = o.max_dim {
        cfg.gen.max_dim = d;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::Module;

    #[test]
    fn unknown_prop_is_rejected() {
        assert!(matches!(default_config("P9.9"), Err(Error::UnknownProp(_))));
        assert!(run_suite("nope", &default_config("P3.3").unwrap()).is_err());
    }

    #[test]
    fn seeds_differ_per_trial() {
        let s: std::collections::HashSet<_> = (0..1000).map(|i| trial_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut cfg = default_config("P3.3").unwrap();
        cfg.trials = 40;
        cfg.gen.seed = 11;
        let a = serde_json::to_string(&run_suite("P3.3", &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite("P3.3", &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generated_differentials_square_to_zero() {
        let ring = Ring::parse("Z/4").unwrap();
        let cfg = GenConfig { max_dim: 3, seed: 1, ..GenConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut stats = GenStats::default();
        for _ in 0..50 {
            let dm = gen::random_diffmod(&cfg, &ring, &mut rng, &mut stats);
            assert!(dm.d().compose(dm.d()).unwrap().is_zero());
            assert!(dm.module().num_gens() <= 3);
        }
    }

    #[test]
    fn rejection_stream_reaches_multiplication_by_x() {
        let ring = Ring::parse("F2[x]/(x^2)").unwrap();
        let mix = Mix { comp: 0, rejection: 1, pair_padding: 0, conjugation: 0 };
        let cfg = GenConfig { rings: vec!["F2[x]/(x^2)".into()], max_dim: 1, mix, ..GenConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut stats = GenStats::default();
        let target = crate::fpmod::ModMap::scalar(&Module::free(&ring, 1), &ring.parse_elem("x").unwrap());
        let found = (0..200).any(|_| {
            let dm = gen::random_diffmod(&cfg, &ring, &mut rng, &mut stats);
            dm.d() == &target
        });
        assert!(found);
    }

    #[test]
    fn ses_lengths_add_up() {
        let ring = Ring::parse("Z/8").unwrap();
        let cfg = GenConfig { max_dim: 4, ..GenConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut stats = GenStats::default();
        for _ in 0..30 {
            let s = gen::random_dm_ses(&cfg, &ring, &mut rng, &mut stats);
            assert_eq!(s.b.module().length(), s.a.module().length() + s.c.module().length());
            let t = gen::random_cx_ses(&cfg, &ring, &mut rng);
            for i in t.b.degrees() {
                assert_eq!(t.b.term(i).length(), t.a.term(i).length() + t.c.term(i).length());
            }
        }
    }

    #[test]
    fn residue_field_of_z4_has_growing_proxies() {
        let ring = Ring::parse("Z/4").unwrap();
        let res = crate::cplx::min_inj_resolution(&Module::residue_field(&ring), 10);
        assert_eq!(res.verdict(), crate::cplx::Verdict::Infinite);
        let mus: Vec<usize> =
            (0..=10).map(|l| crate::functors::cocomp_truncated_mu(&res, l).unwrap().total).collect();
        assert_eq!(mus, (1..=11).collect::<Vec<_>>());
    }

    #[test]
    fn failures_carry_replayable_seeds() {
        let cfg = default_config("P3.3").unwrap();
        let ring = Ring::parse(&cfg.gen.rings[0]).unwrap();
        let a = run_trial("P3.3", &cfg.gen, &ring, trial_seed(0, 0)).unwrap();
        let b = run_trial("P3.3", &cfg.gen, &ring, trial_seed(0, 0)).unwrap();
        assert_eq!(a.instance, b.instance);
        assert!(a.passed);
    }
}
