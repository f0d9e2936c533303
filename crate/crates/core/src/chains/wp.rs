//! Straightening walk on the subwords of linear extensions of a poset.
//! A letter already present in the word is absorbed; a new letter is
//! appended and then bubbled left past every entry it precedes in the
//! poset. The kernel is the set of full words, which are exactly the
//! linear extensions, and the semigroup is R-trivial because a product
//! never shortens a word.

use super::promotion::resolve_poset;
use super::tsetlin::{hendricks, permutations, uniform_expected_tau};
use super::{min_positive_prob, ChainBuilder, ChainModel, ChainParams, SemigroupHandle};
use crate::automaton::SemaphoreAutomaton;
use crate::bounds::StatisticParams;
use crate::error::Result;
use crate::poset::{permutation_label, Poset};
use crate::ratio::Q;
use crate::semigroup::{generate, DEFAULT_ELEMENT_CAP};
use crate::transform::Alphabet;
use num::traits::Zero;
use std::collections::HashMap;

pub struct PosetWords;

impl ChainBuilder for PosetWords {
    fn name(&self) -> &'static str {
        "wp"
    }

    fn describe(&self) -> &'static str {
        "straightening walk on subwords of linear extensions (--poset file, or --n for an antichain; default is the four-vertex example)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        let poset = resolve_poset(params)?;
        build_words(&poset, params)
    }
}

/// Whether `w` is a subword of some linear extension: distinct letters,
/// and no later letter precedes an earlier one.
pub fn is_word(poset: &Poset, w: &[u8]) -> bool {
    for (i, &wi) in w.iter().enumerate() {
        for &wj in &w[i + 1..] {
            if wj == wi || poset.precedes(wj, wi) {
                return false;
            }
        }
    }
    true
}

/// Append `a` and bubble it left past every larger entry: repeatedly find
/// the rightmost entry left of `a` that `a` precedes and swap. When no
/// entry blocks, the append stands as is.
pub fn straighten(poset: &Poset, w: &[u8], a: u8) -> Vec<u8> {
    let mut out = w.to_vec();
    out.push(a);
    let mut pos = out.len() - 1;
    while let Some(j) = (0..pos).rfind(|&j| poset.precedes(a, out[j])) {
        out[pos] = out[j];
        out[j] = a;
        pos = j;
    }
    out
}

/// One product step `w * a`: absorb a repeated letter, straighten a new one.
pub fn step(poset: &Poset, w: &[u8], a: u8) -> Vec<u8> {
    if w.contains(&a) {
        w.to_vec()
    } else {
        straighten(poset, w, a)
    }
}

/// Product of two words, folding the right factor letter by letter.
pub fn mul_words(poset: &Poset, u: &[u8], v: &[u8]) -> Vec<u8> {
    v.iter().fold(u.to_vec(), |acc, &c| step(poset, &acc, c))
}

/// The word a letter sequence multiplies out to.
pub fn fold_word(poset: &Poset, letters: &[u8]) -> Vec<u8> {
    let (first, rest) = letters.split_first().expect("nonempty letter sequence");
    mul_words(poset, &[*first], rest)
}

fn build_words(poset: &Poset, params: &ChainParams) -> Result<ChainModel> {
    let n = poset.n();
    let probs = params.resolve_probs(n, "wp")?;
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let alphabet = Alphabet::new(labels.clone(), Some(probs.clone()))?;

    let generators: Vec<Vec<u8>> = (1..=n as u8).map(|a| vec![a]).collect();
    let for_mul = poset.clone();
    let sg = generate(
        labels,
        generators,
        move |u, v| mul_words(&for_mul, u, v),
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

    let mut mass: HashMap<Vec<u8>, Q> = HashMap::new();
    for sigma in permutations(n) {
        let weight = hendricks(&probs, &sigma);
        *mass.entry(fold_word(poset, &sigma)).or_insert_with(Q::zero) += weight;
    }
    let closed = kernel_words
        .iter()
        .map(|w| mass.get(w).cloned().unwrap_or_else(Q::zero))
        .collect();

    let statistic = StatisticParams {
        success: min_positive_prob(&probs)?,
        level: n,
    };
    Ok(ChainModel {
        name: "wp".to_string(),
        alphabet,
        semigroup: SemigroupHandle::Words(sg),
        ideal,
        automaton,
        kernel_labels,
        states: None,
        closed_form: Some(closed),
        statistic: Some(statistic),
    })
}

/// Exact expected absorption time at uniform probabilities together with
/// the `n ln n + n gamma` comparison value it is bounded by.
pub fn wp_expected_bound(n: usize) -> (Q, f64) {
    let nf = n as f64;
    (uniform_expected_tau(n), nf * nf.ln() + nf * EULER_GAMMA)
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{example_poset, poset_corpus};
    use crate::ratio::qr;
    use num::traits::One;

    #[test]
    fn straighten_bubbles_past_larger_entries() {
        let p = example_poset();
        assert_eq!(step(&p, &[2, 3, 4], 1), vec![2, 3, 1, 4]);
        assert_eq!(step(&p, &[2], 4), vec![2, 4]);
        assert_eq!(step(&p, &[4], 1), vec![1, 4]);
        assert_eq!(step(&p, &[1, 4], 1), vec![1, 4]);
    }

    #[test]
    fn letter_action_matches_the_transition_diagram() {
        let p = example_poset();
        let states = [
            [1, 2, 3, 4],
            [1, 2, 4, 3],
            [2, 1, 3, 4],
            [2, 1, 4, 3],
            [2, 3, 1, 4],
        ];
        let expected: [[[u8; 4]; 5]; 4] = [
            [
                [1, 2, 3, 4],
                [1, 2, 4, 3],
                [1, 2, 3, 4],
                [1, 2, 4, 3],
                [1, 2, 3, 4],
            ],
            [
                [2, 1, 3, 4],
                [2, 1, 4, 3],
                [2, 1, 3, 4],
                [2, 1, 4, 3],
                [2, 3, 1, 4],
            ],
            [
                [2, 1, 3, 4],
                [2, 1, 3, 4],
                [2, 3, 1, 4],
                [2, 3, 1, 4],
                [2, 3, 1, 4],
            ],
            [
                [1, 2, 4, 3],
                [1, 2, 4, 3],
                [2, 1, 4, 3],
                [2, 1, 4, 3],
                [2, 1, 3, 4],
            ],
        ];
        for (a, row) in expected.iter().enumerate() {
            for (s, want) in row.iter().enumerate() {
                assert_eq!(
                    mul_words(&p, &[(a + 1) as u8], &states[s]),
                    want.to_vec(),
                    "letter {} on {:?}",
                    a + 1,
                    states[s]
                );
            }
        }
    }

    #[test]
    fn semigroup_is_all_valid_words_with_extension_kernel() {
        let p = example_poset();
        let model = PosetWords.build(&ChainParams::default()).unwrap();

        let mut valid = Vec::new();
        let mut stack: Vec<Vec<u8>> = (1..=4).map(|a| vec![a]).collect();
        while let Some(w) = stack.pop() {
            if !is_word(&p, &w) {
                continue;
            }
            valid.push(w.clone());
            for a in 1..=4u8 {
                if !w.contains(&a) {
                    let mut next = w.clone();
                    next.push(a);
                    stack.push(next);
                }
            }
        }
        assert_eq!(model.semigroup.num_elements(), valid.len());
        assert!(model.semigroup.is_r_trivial());

        let mut kernel = model.kernel_labels.clone();
        kernel.sort();
        let mut extensions: Vec<String> =
            p.linear_extensions().iter().map(|e| permutation_label(e)).collect();
        extensions.sort();
        assert_eq!(kernel, extensions);

        for pi in p.linear_extensions() {
            for rho in p.linear_extensions() {
                assert_eq!(mul_words(&p, &pi, &rho), pi);
            }
        }
    }

    #[test]
    fn products_stay_valid_and_generator_pairs_associate() {
        for p in poset_corpus(4) {
            let n = p.n() as u8;
            let mut elements = Vec::new();
            let mut stack: Vec<Vec<u8>> = (1..=n).map(|a| vec![a]).collect();
            while let Some(w) = stack.pop() {
                let folded = fold_word(&p, &w);
                assert!(is_word(&p, &folded), "fold of {:?} gave {:?}", w, folded);
                assert_eq!(folded.len(), w.len());
                elements.push(folded);
                for a in 1..=n {
                    if !w.contains(&a) {
                        let mut grown = w.clone();
                        grown.push(a);
                        stack.push(grown);
                    }
                }
            }
            elements.sort();
            elements.dedup();
            for u in &elements {
                for v in &elements {
                    assert!(
                        is_word(&p, &mul_words(&p, u, v)),
                        "product of {:?} and {:?}",
                        u,
                        v
                    );
                }
                for a in 1..=n {
                    let ua = step(&p, u, a);
                    for b in 1..=n {
                        assert_eq!(
                            step(&p, &ua, b),
                            mul_words(&p, u, &step(&p, &[a], b)),
                            "pair associativity for {:?} * {} * {}",
                            u,
                            a,
                            b
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn straightening_is_not_associative_beyond_generator_pairs() {
        let p = example_poset();
        let u = mul_words(&p, &mul_words(&p, &[1], &[4]), &[3, 1]);
        let v = mul_words(&p, &[1], &mul_words(&p, &[4], &[3, 1]));
        assert_eq!(u, vec![1, 4, 3]);
        assert_eq!(v, vec![1, 3, 4]);
        assert_ne!(u, v);
    }

    #[test]
    fn absorption_and_kernel_walk_distributions_are_both_pinned() {
        // Straightening is not associative (see the witness test), so the
        // letter-order sum that the absorption route computes is not the
        // stationary vector of the kernel walk. Both distributions are
        // frozen here.
        let params = ChainParams {
            probs: Some(vec![qr(1, 2), qr(1, 4), qr(1, 8), qr(1, 8)]),
            ..ChainParams::default()
        };
        let model = PosetWords.build(&params).unwrap();
        let exact = model.stationary_exact().unwrap();
        assert_eq!(&exact, model.closed_form.as_ref().unwrap());
        let total: Q = exact.iter().cloned().sum();
        assert_eq!(total, Q::one());

        let by_label = |values: &[Q]| -> HashMap<&str, Q> {
            model
                .kernel_labels
                .iter()
                .map(String::as_str)
                .zip(values.iter().cloned())
                .collect()
        };
        let absorption = by_label(&exact);
        for (label, want) in [
            ("1234", qr(11, 42)),
            ("1243", qr(9, 28)),
            ("2134", qr(79, 420)),
            ("2143", qr(61, 420)),
            ("2314", qr(1, 12)),
        ] {
            assert_eq!(absorption[label], want, "absorption at {label}");
        }
        let eigen = by_label(&model.stationary_eigen().unwrap());
        for (label, want) in [
            ("1234", qr(15, 56)),
            ("1243", qr(17, 56)),
            ("2134", qr(11, 56)),
            ("2143", qr(9, 56)),
            ("2314", qr(1, 14)),
        ] {
            assert_eq!(eigen[label], want, "kernel walk at {label}");
        }
    }

    #[test]
    fn expected_tau_is_the_coupon_collector_value_at_uniform() {
        let model = PosetWords.build(&ChainParams::default()).unwrap();
        assert_eq!(
            model.first_passage().unwrap().expected_tau,
            uniform_expected_tau(4)
        );
        for p in poset_corpus(3) {
            let n = p.n();
            let params = ChainParams {
                poset: Some(p),
                ..ChainParams::default()
            };
            let model = PosetWords.build(&params).unwrap();
            assert_eq!(
                model.first_passage().unwrap().expected_tau,
                uniform_expected_tau(n)
            );
        }
    }

    #[test]
    fn antichain_matches_the_library_chain() {
        let probs = vec![qr(1, 2), qr(1, 3), qr(1, 6)];
        let wp = PosetWords
            .build(&ChainParams {
                n: Some(3),
                probs: Some(probs.clone()),
                ..ChainParams::default()
            })
            .unwrap();
        let tsetlin = super::super::tsetlin::Tsetlin
            .build(&ChainParams {
                n: Some(3),
                probs: Some(probs),
                ..ChainParams::default()
            })
            .unwrap();
        let collect = |model: &ChainModel| -> HashMap<String, Q> {
            model
                .kernel_labels
                .iter()
                .cloned()
                .zip(model.stationary_exact().unwrap())
                .collect()
        };
        assert_eq!(collect(&wp), collect(&tsetlin));
        assert_eq!(
            wp.first_passage().unwrap().expected_tau,
            tsetlin.first_passage().unwrap().expected_tau
        );
    }
}
