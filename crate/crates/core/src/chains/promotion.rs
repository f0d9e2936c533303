//! Promotion walk on the linear extensions of a poset. Letter a (a vertex
//! value) applies the promotion operator at the position of a: the value is
//! bubbled toward the front through consecutive incomparable entries. The
//! letters synchronize in n-1 steps, so the kernel is all constant maps and
//! the stationary distribution has a product form.

use super::{assemble_map_model, ChainBuilder, ChainModel, ChainParams};
use crate::error::{Error, Result};
use crate::poset::{example_poset, permutation_label, Poset};
use crate::ratio::{qint, Q};
use crate::transform::{Alphabet, Transformation};
use num::traits::Zero;
use std::collections::HashMap;

pub struct Promotion;

impl ChainBuilder for Promotion {
    fn name(&self) -> &'static str {
        "promotion"
    }

    fn describe(&self) -> &'static str {
        "promotion walk on linear extensions (--poset file, or --n for an antichain; default is the four-vertex example)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        let poset = resolve_poset(params)?;
        build_promotion(&poset, params)
    }
}

/// Poset selection shared by the linear-extension chains: an explicit poset
/// wins, a bare size builds the antichain, the default is the running
/// example.
pub(crate) fn resolve_poset(params: &ChainParams) -> Result<Poset> {
    match (&params.poset, params.n) {
        (Some(p), Some(n)) if p.n() != n => Err(Error::Invalid(format!(
            "poset has {} vertices but n = {n} was given",
            p.n()
        ))),
        (Some(p), _) => Ok(p.clone()),
        (None, Some(n)) => Poset::antichain(n),
        (None, None) => Ok(example_poset()),
    }
}

fn build_promotion(poset: &Poset, params: &ChainParams) -> Result<ChainModel> {
    let n = poset.n();
    let probs = params.resolve_probs(n, "promotion")?;
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let alphabet = Alphabet::new(labels, Some(probs.clone()))?;

    let extensions = poset.linear_extensions();
    let rank: HashMap<Vec<u8>, usize> = extensions
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let state_names: Vec<String> = extensions.iter().map(|e| permutation_label(e)).collect();
    let generators = (1..=n as u8)
        .map(|value| {
            Transformation::new(
                extensions
                    .iter()
                    .map(|pi| rank[&promote_value(poset, pi, value)])
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut model = assemble_map_model("promotion", alphabet, generators, state_names)?;
    let weights: Vec<Q> = model
        .states
        .as_ref()
        .expect("map model has states")
        .kernel_values
        .iter()
        .map(|&v| stationary_weight(&probs, &extensions[v]))
        .collect();
    let total: Q = weights.iter().cloned().sum();
    model.closed_form = Some(weights.into_iter().map(|w| w / &total).collect());
    model.statistic = None;
    Ok(model)
}

/// Swap positions i and i+1 (1-indexed) when the two values are
/// incomparable; otherwise leave the extension alone.
pub fn tau(poset: &Poset, pi: &[u8], i: usize) -> Vec<u8> {
    let mut out = pi.to_vec();
    if poset.incomparable(pi[i - 1], pi[i]) {
        out.swap(i - 1, i);
    }
    out
}

/// The promotion operator at position j: tau_{j-1} down to tau_1, so the
/// entry at position j is bubbled leftward through incomparable neighbors.
pub fn promote_at(poset: &Poset, pi: &[u8], j: usize) -> Vec<u8> {
    let mut out = pi.to_vec();
    for i in (1..j).rev() {
        out = tau(poset, &out, i);
    }
    out
}

/// The letter action: value a promotes at its own position.
pub fn promote_value(poset: &Poset, pi: &[u8], a: u8) -> Vec<u8> {
    let j = pi
        .iter()
        .position(|&v| v == a)
        .expect("value occurs in the extension")
        + 1;
    promote_at(poset, pi, j)
}

/// Unnormalized stationary weight of one extension:
/// `prod_{i=1}^{n} 1 / (1 - x_{pi_1} - ... - x_{pi_{i-1}})`.
pub fn stationary_weight(x: &[Q], pi: &[u8]) -> Q {
    let mut result = qint(1);
    let mut seen = Q::zero();
    for &v in &pi[..pi.len() - 1] {
        seen += &x[v as usize - 1];
        result /= qint(1) - &seen;
    }
    result
}

/// A word of n-1 letters whose promotion maps compose to the constant map
/// onto `pi` (the first letter applied last). Peels one letter per round:
/// follow the longest increasing chain in the poset order starting at the
/// front, emit its top, then contract the chain and drop the front entry.
pub fn reduced_word_to_ideal(poset: &Poset, pi: &[u8]) -> Vec<u8> {
    let n = pi.len();
    let mut current = pi.to_vec();
    let mut word = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let mut chain = vec![0usize];
        loop {
            let last = *chain.last().expect("chain starts nonempty");
            let next = (last + 1..current.len())
                .find(|&p| poset.precedes(current[last], current[p]));
            match next {
                Some(p) => chain.push(p),
                None => break,
            }
        }
        word.push(current[*chain.last().expect("chain nonempty")]);
        for pair in chain.windows(2).rev() {
            current[pair[1]] = current[pair[0]];
        }
        current.remove(0);
    }
    word
}
