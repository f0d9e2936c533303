//! Monte-Carlo cross-checks: walk the absorbing automaton or a concrete
//! state space with seeded generators and compare empirical frequencies
//! against the exact pipeline. Every sampler is deterministic in its seed.

use crate::automaton::{SemaphoreAutomaton, Step};
use crate::error::{Error, Result};
use crate::ratio::{q_to_f64, Q};
use crate::transform::Transformation;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Empirical first-passage summary over independent letter streams.
#[derive(Clone, Debug)]
pub struct PassageSample {
    pub trials: u64,
    /// Fraction of trajectories still transient after t letters, t = 0..=t_max.
    pub survival: Vec<f64>,
    /// Binomial standard error of each survival entry.
    pub std_error: Vec<f64>,
    /// Absorptions per target slot within the horizon.
    pub hits: Vec<u64>,
    /// Trajectories still transient at the horizon; when nonzero,
    /// `mean_tau` is conditional on finishing in time.
    pub censored: u64,
    /// Mean absorption time of the completed trajectories.
    pub mean_tau: f64,
}

/// One 64-bit mixing round (splitmix64). Conditioning the run seed first
/// keeps nearby seeds from sharing trajectory streams; the raw xor rule
/// alone would give any two run seeds below the trial count the same
/// stream multiset.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream seed of trial `k`: the mixed run seed xor the trajectory index.
fn trajectory_seed(seed: u64, k: u64) -> u64 {
    splitmix64(seed) ^ k
}

fn letter_sampler(auto: &SemaphoreAutomaton) -> Result<WeightedIndex<f64>> {
    let weights: Vec<f64> = auto.alphabet().probs_required()?.iter().map(q_to_f64).collect();
    WeightedIndex::new(weights).map_err(|e| Error::Invalid(format!("letter weights: {e}")))
}

/// Runs `trials` independent trajectories of at most `t_max` letters each,
/// one generator stream per trajectory so a single trial is reproducible
/// from `seed` and its index alone.
pub fn sample_first_passage(
    auto: &SemaphoreAutomaton,
    trials: u64,
    t_max: usize,
    seed: u64,
) -> Result<PassageSample> {
    if trials == 0 {
        return Err(Error::Invalid("need at least one trajectory".into()));
    }
    let dist = letter_sampler(auto)?;
    let mut absorbed_at = vec![0u64; t_max + 1];
    let mut hits = vec![0u64; auto.num_targets()];
    let mut censored = 0u64;
    let mut tau_sum = 0u64;
    for k in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trajectory_seed(seed, k));
        let mut slot = 0usize;
        let mut done = false;
        for t in 1..=t_max {
            match auto.step(slot, dist.sample(&mut rng)) {
                Step::Continue(next) => slot = next,
                Step::Absorb(target) => {
                    absorbed_at[t] += 1;
                    hits[target] += 1;
                    tau_sum += t as u64;
                    done = true;
                    break;
                }
            }
        }
        if !done {
            censored += 1;
        }
    }
    let completed = trials - censored;
    let mut survival = Vec::with_capacity(t_max + 1);
    let mut std_error = Vec::with_capacity(t_max + 1);
    let mut alive = trials;
    for t in 0..=t_max {
        alive -= absorbed_at[t];
        let p = alive as f64 / trials as f64;
        survival.push(p);
        std_error.push((p * (1.0 - p) / trials as f64).sqrt());
    }
    Ok(PassageSample {
        trials,
        survival,
        std_error,
        hits,
        censored,
        mean_tau: if completed > 0 {
            tau_sum as f64 / completed as f64
        } else {
            f64::NAN
        },
    })
}

/// Occupation frequencies of one long walk on the state space the tables
/// act on: steps are counted after `burn_in` of the `steps` total, and the
/// returned vector sums to one.
pub fn sample_occupation(
    tables: &[Transformation],
    probs: &[Q],
    steps: u64,
    burn_in: u64,
    seed: u64,
    start: usize,
) -> Result<Vec<f64>> {
    let degree = tables
        .first()
        .map(Transformation::degree)
        .ok_or_else(|| Error::Invalid("no letter tables".into()))?;
    if probs.len() != tables.len() {
        return Err(Error::Invalid(format!(
            "{} probabilities for {} tables",
            probs.len(),
            tables.len()
        )));
    }
    if start >= degree {
        return Err(Error::Invalid(format!(
            "start state {start} out of range for degree {degree}"
        )));
    }
    if burn_in >= steps {
        return Err(Error::Invalid("burn-in swallows every step".into()));
    }
    let weights: Vec<f64> = probs.iter().map(q_to_f64).collect();
    let dist = WeightedIndex::new(weights)
        .map_err(|e| Error::Invalid(format!("letter weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = start;
    let mut counts = vec![0u64; degree];
    for t in 1..=steps {
        state = tables[dist.sample(&mut rng)].apply(state);
        if t > burn_in {
            counts[state] += 1;
        }
    }
    let kept = (steps - burn_in) as f64;
    Ok(counts.into_iter().map(|c| c as f64 / kept).collect())
}

/// Total variation distance between an empirical vector and an exact one.
pub fn tv_to_exact(empirical: &[f64], exact: &[Q]) -> f64 {
    empirical
        .iter()
        .zip(exact)
        .map(|(e, x)| (e - q_to_f64(x)).abs())
        .sum::<f64>()
        / 2.0
}
