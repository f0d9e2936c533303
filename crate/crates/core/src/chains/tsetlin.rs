//! Move-to-front library: requesting book i moves it to the front of the
//! shelf. Semigroup elements are sequences of distinct requests, with the
//! product keeping the first occurrence of each letter, so an element
//! records which books have been requested and in which order they first
//! appeared. The kernel is the full sequences; a full sequence read as a
//! shelf order, earliest request in front, is the shelf the time-reversed
//! request stream pins, so the absorption distribution over the kernel is
//! the stationary law of the shelf.

use super::{
    min_positive_prob, ChainBuilder, ChainModel, ChainParams, SemigroupHandle, StateSpace,
};
use crate::automaton::SemaphoreAutomaton;
use crate::bounds::StatisticParams;
use crate::error::{Error, Result};
use crate::loopgraph::{AttachedLoop, LoopGraph};
use crate::poset::permutation_label;
use crate::ratio::{qint, Q};
use crate::semigroup::{generate, DEFAULT_ELEMENT_CAP};
use crate::transform::{Alphabet, Transformation};
use num::traits::Zero;
use std::collections::HashMap;

pub const MAX_BOOKS: usize = 7;

pub struct Tsetlin;

impl ChainBuilder for Tsetlin {
    fn name(&self) -> &'static str {
        "tsetlin"
    }

    fn describe(&self) -> &'static str {
        "move-to-front self-organizing list on n books (letters 1..n, --probs per book)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        if params.poset.is_some() {
            return Err(Error::Invalid("tsetlin does not take a poset".into()));
        }
        let n = params.n.unwrap_or(3);
        build_tsetlin(n, params)
    }
}

/// Product on request sequences: append the letters of `v` that `u` has
/// not seen yet.
pub fn keep_first(u: &[u8], v: &[u8]) -> Vec<u8> {
    let mut out = u.to_vec();
    for &c in v {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn build_tsetlin(n: usize, params: &ChainParams) -> Result<ChainModel> {
    if n == 0 {
        return Err(Error::Invalid("need at least one book".into()));
    }
    if n > MAX_BOOKS {
        return Err(Error::SizeCap { cap: MAX_BOOKS });
    }
    let probs = params.resolve_probs(n, "tsetlin")?;
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let alphabet = Alphabet::new(labels.clone(), Some(probs.clone()))?;

    let generators: Vec<Vec<u8>> = (1..=n as u8).map(|b| vec![b]).collect();
    let sg = generate(
        labels,
        generators,
        |u, v| keep_first(u, v),
        true,
        DEFAULT_ELEMENT_CAP,
    )?;
    let ideal = sg.minimal_ideal();
    let automaton = SemaphoreAutomaton::from_semigroup(&sg, &ideal, alphabet.clone())?;

    let kernel_words: Vec<Vec<u8>> = ideal
        .kernel
        .iter()
        .map(|&node| {
            sg.element(node)
                .expect("kernel nodes name elements")
                .clone()
        })
        .collect();
    let kernel_labels: Vec<String> = kernel_words.iter().map(|w| permutation_label(w)).collect();

    let orderings = permutations(n);
    let rank: HashMap<Vec<u8>, usize> = orderings
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let state_names: Vec<String> = orderings.iter().map(|p| permutation_label(p)).collect();
    let shelf_action = (1..=n as u8)
        .map(|book| {
            Transformation::new(
                orderings
                    .iter()
                    .map(|p| rank[&move_to_front(p, book)])
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel_values = kernel_words.iter().map(|w| rank[w]).collect();

    let closed = kernel_words.iter().map(|w| hendricks(&probs, w)).collect();

    Ok(ChainModel {
        name: "tsetlin".to_string(),
        alphabet,
        semigroup: SemigroupHandle::Words(sg),
        ideal,
        automaton,
        kernel_labels,
        states: Some(StateSpace {
            names: state_names,
            generators: shelf_action,
            kernel_values,
        }),
        closed_form: Some(closed),
        statistic: Some(StatisticParams {
            success: min_positive_prob(&probs)?,
            level: n,
        }),
    })
}

/// All permutations of 1..=n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, used: &mut [bool], current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v as u8 + 1);
                rec(n, used, current, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut used, &mut current, &mut out);
    out
}

fn move_to_front(ordering: &[u8], book: u8) -> Vec<u8> {
    let mut next = Vec::with_capacity(ordering.len());
    next.push(book);
    next.extend(ordering.iter().copied().filter(|&b| b != book));
    next
}

/// Stationary weight of one ordering (front first):
/// `prod_i x_{pi_i} / (1 - x_{pi_1} - ... - x_{pi_{i-1}})`.
pub fn hendricks(x: &[Q], ordering: &[u8]) -> Q {
    let mut result = Q::from_integer(1.into());
    let mut seen = Q::zero();
    for &book in ordering {
        let xb = &x[book as usize - 1];
        result *= xb / (qint(1) - &seen);
        seen += xb;
    }
    result
}

/// First-passage language of one target ordering: the books must first
/// appear in exactly the target's order, with already-seen books free to
/// repeat in between. Spine vertex i carries one single-letter loop per book
/// already placed.
pub fn target_loop_graph(target: &[u8]) -> LoopGraph {
    let spine: Vec<String> = target.iter().map(u8::to_string).collect();
    let mut loops = Vec::new();
    for i in 1..target.len() {
        for &seen in &target[..i] {
            loops.push(AttachedLoop {
                at: i,
                body: LoopGraph {
                    spine: vec![seen.to_string()],
                    loops: vec![],
                },
            });
        }
    }
    LoopGraph { spine, loops }
}

/// Exact expected absorption time at uniform probabilities: `n * H_n`.
pub fn uniform_expected_tau(n: usize) -> Q {
    (1..=n).map(|k| Q::new(n.into(), k.into())).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::passage::{analyze, expected_tau_by_target};
    use crate::ratio::qr;

    fn params(probs: Option<Vec<Q>>, n: usize) -> ChainParams {
        ChainParams {
            n: Some(n),
            poset: None,
            probs,
        }
    }

    #[test]
    fn three_books_generate_fifteen_elements() {
        let model = Tsetlin.build(&params(None, 3)).unwrap();
        assert_eq!(model.semigroup.num_elements(), 15);
        assert_eq!(model.ideal.kernel.len(), 6);
        assert!(model.ideal.is_left_zero);
        assert!(model.semigroup.is_r_trivial());
    }

    #[test]
    fn composed_shelf_maps_pin_the_request_order() {
        let model = Tsetlin.build(&params(None, 3)).unwrap();
        let states = model.states.as_ref().unwrap();
        let rank: HashMap<Vec<u8>, usize> = permutations(3)
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        for sigma in permutations(3) {
            let mut map = states.generators[sigma[0] as usize - 1].clone();
            for &c in &sigma[1..] {
                map = map.compose(&states.generators[c as usize - 1]);
            }
            assert_eq!(map.constant_value(), Some(rank[&sigma]));
        }
    }

    #[test]
    fn stationary_matches_the_product_formula() {
        let probs = vec![qr(1, 2), qr(1, 3), qr(1, 6)];
        let model = Tsetlin.build(&params(Some(probs), 3)).unwrap();
        let exact = model.stationary_exact().unwrap();
        assert_eq!(exact, model.stationary_eigen().unwrap());
        assert_eq!(Some(exact.clone()), model.closed_form);

        let slot = model
            .kernel_labels
            .iter()
            .position(|l| l == "123")
            .unwrap();
        assert_eq!(exact[slot], qr(1, 3));
    }

    #[test]
    fn uniform_expected_absorption_is_n_harmonic_n() {
        for n in 2..=4 {
            let model = Tsetlin.build(&params(None, n)).unwrap();
            let fp = analyze(&model.automaton).unwrap();
            assert_eq!(fp.expected_tau, uniform_expected_tau(n));
        }
        assert_eq!(uniform_expected_tau(3), qr(11, 2));
    }

    #[test]
    fn loop_graph_mass_is_the_stationary_weight() {
        let probs = vec![qr(1, 2), qr(1, 3), qr(1, 6)];
        let alphabet = Alphabet::new(
            vec!["1".into(), "2".into(), "3".into()],
            Some(probs.clone()),
        )
        .unwrap();
        let model = Tsetlin.build(&params(Some(probs.clone()), 3)).unwrap();
        let conditional = expected_tau_by_target(&model.automaton).unwrap();
        for perm in permutations(3) {
            let g = target_loop_graph(&perm);
            let m = g.moments(&alphabet).unwrap();
            assert_eq!(m.mass, hendricks(&probs, &perm));
            let label: String = perm.iter().map(u8::to_string).collect();
            let slot = model
                .kernel_labels
                .iter()
                .position(|l| *l == label)
                .unwrap();
            let via_automaton = conditional[slot].clone().unwrap();
            assert_eq!(&m.weighted_length / &m.mass, via_automaton);
        }
    }

    #[test]
    fn too_many_books_is_a_size_error() {
        assert!(Tsetlin.build(&params(None, 8)).is_err());
    }
}
