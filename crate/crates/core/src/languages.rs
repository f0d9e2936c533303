//! Pattern-occurrence machinery: substring automata for a target word, the
//! exit-word decomposition of the scan, closed forms for the waiting-time
//! distribution, and a survival comparator for unions of pattern ideals.
//!
//! Two automata are provided for a pattern `t`:
//!
//! * [`build_test_automaton`] is the minimal substring matcher. Its states
//!   track the longest suffix of the input that is a prefix of `t`, so its
//!   absorption time is the honest first occurrence of `t` as a factor.
//! * [`restart_matcher`] forgets all progress on a mismatch and returns to
//!   the empty state. Its absorption time dominates the substring time, and
//!   its first-passage language factors exactly as `(union of exit words)* t`,
//!   which is what the closed forms [`psi_test`] and [`expected_tau_test`]
//!   evaluate. The two machines coincide when no mismatch can re-enter a
//!   nonempty prefix (for example `t = a^l`).

use std::collections::HashMap;

use crate::automaton::{SemaphoreAutomaton, Step};
use crate::error::{Error, Result};
use crate::loopgraph::{AttachedLoop, LoopGraph};
use crate::ratio::{fmt_q, qint, Q};
use crate::transform::Alphabet;

/// Deterministic matcher for a single pattern. State `q` means the longest
/// suffix of the input read so far that is a prefix of the pattern has length
/// `q`; state `len(pattern)` is the absorbing sink.
#[derive(Debug, Clone)]
pub struct TestAutomaton {
    alphabet: Alphabet,
    pattern: Vec<usize>,
    step: Vec<Vec<usize>>,
}

fn check_pattern(alphabet: &Alphabet, pattern: &[usize]) -> Result<()> {
    if pattern.is_empty() {
        return Err(Error::Invalid("empty pattern".into()));
    }
    if let Some(&bad) = pattern.iter().find(|&&a| a >= alphabet.len()) {
        return Err(Error::Invalid(format!(
            "pattern letter {} outside alphabet of size {}",
            bad,
            alphabet.len()
        )));
    }
    Ok(())
}

/// Build the minimal substring matcher for `pattern` (letter indices into
/// `alphabet`). Mismatches fall back to the longest proper border, so the
/// automaton accepts exactly the words containing the pattern as a factor.
pub fn build_test_automaton(alphabet: &Alphabet, pattern: &[usize]) -> Result<TestAutomaton> {
    check_pattern(alphabet, pattern)?;
    let l = pattern.len();
    let k = alphabet.len();

    // border[q] = length of the longest proper border of pattern[..q].
    let mut border = vec![0usize; l + 1];
    for q in 2..=l {
        let mut b = border[q - 1];
        loop {
            if pattern[b] == pattern[q - 1] {
                border[q] = b + 1;
                break;
            }
            if b == 0 {
                border[q] = 0;
                break;
            }
            b = border[b];
        }
    }

    let mut step = vec![vec![0usize; k]; l + 1];
    for c in 0..k {
        step[0][c] = if pattern[0] == c { 1 } else { 0 };
    }
    for q in 1..l {
        for c in 0..k {
            step[q][c] = if pattern[q] == c {
                q + 1
            } else {
                step[border[q]][c]
            };
        }
    }
    for c in 0..k {
        step[l][c] = l;
    }

    Ok(TestAutomaton {
        alphabet: alphabet.clone(),
        pattern: pattern.to_vec(),
        step,
    })
}

impl TestAutomaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn pattern(&self) -> &[usize] {
        &self.pattern
    }

    pub fn num_states(&self) -> usize {
        self.step.len()
    }

    pub fn step(&self, state: usize, letter: usize) -> usize {
        self.step[state][letter]
    }

    fn sink(&self) -> usize {
        self.pattern.len()
    }

    /// Run the automaton on a word from the empty state.
    pub fn run(&self, word: &[usize]) -> usize {
        let mut q = 0;
        for &a in word {
            q = self.step[q][a];
        }
        q
    }

    /// True when the pattern occurs in `word` as a factor.
    pub fn accepts(&self, word: &[usize]) -> bool {
        self.run(word) == self.sink()
    }

    /// Readable name for a state: the matched prefix, or "1" for the empty
    /// state and the full pattern for the sink.
    fn state_name(&self, q: usize) -> String {
        if q == 0 {
            "1".to_string()
        } else {
            self.pattern[..q]
                .iter()
                .map(|&a| self.alphabet.label(a))
                .collect()
        }
    }

    /// The absorbing first-passage view: transient states are the proper
    /// prefixes, the single target is the completed pattern.
    pub fn to_semaphore(&self) -> Result<SemaphoreAutomaton> {
        let l = self.pattern.len();
        let transitions = (0..l)
            .map(|q| {
                (0..self.alphabet.len())
                    .map(|c| {
                        let next = self.step[q][c];
                        if next == l {
                            Step::Absorb(0)
                        } else {
                            Step::Continue(next)
                        }
                    })
                    .collect()
            })
            .collect();
        let transient_names = (0..l).map(|q| self.state_name(q)).collect();
        let target_names = vec![self.state_name(l)];
        SemaphoreAutomaton::from_parts(
            self.alphabet.clone(),
            transitions,
            transient_names,
            target_names,
        )
    }
}

/// The restart matcher for `pattern`: on any mismatch the scan returns to the
/// empty state, discarding partial progress. Absorption happens on the first
/// uninterrupted left-to-right copy of the pattern, so the first-passage
/// words are exactly `(exit words)* pattern` and the closed forms below apply.
pub fn restart_matcher(alphabet: &Alphabet, pattern: &[usize]) -> Result<SemaphoreAutomaton> {
    check_pattern(alphabet, pattern)?;
    let l = pattern.len();
    let reference = build_test_automaton(alphabet, pattern)?;
    let transitions = (0..l)
        .map(|q| {
            (0..alphabet.len())
                .map(|c| {
                    if pattern[q] == c {
                        if q + 1 == l {
                            Step::Absorb(0)
                        } else {
                            Step::Continue(q + 1)
                        }
                    } else {
                        Step::Continue(0)
                    }
                })
                .collect()
        })
        .collect();
    let transient_names = (0..l).map(|q| reference.state_name(q)).collect();
    let target_names = vec![reference.state_name(l)];
    SemaphoreAutomaton::from_parts(
        alphabet.clone(),
        transitions,
        transient_names,
        target_names,
    )
}

/// The exit words of a pattern: every word `p c` where `p` is a proper prefix
/// of the pattern (the empty prefix included) and the letter `c` deviates
/// from the pattern's next letter. These are the ways a left-to-right scan
/// can fail once, and together with the pattern itself they partition the
/// first step of any infinite word.
pub fn loop_words(alphabet: &Alphabet, pattern: &[usize]) -> Result<Vec<Vec<usize>>> {
    check_pattern(alphabet, pattern)?;
    let mut words = Vec::new();
    for q in 0..pattern.len() {
        for c in 0..alphabet.len() {
            if c != pattern[q] {
                let mut w = pattern[..q].to_vec();
                w.push(c);
                words.push(w);
            }
        }
    }
    Ok(words)
}

/// The loop graph whose spine is the pattern and whose loops are the exit
/// words, all attached at the root. Its path language is the first-passage
/// language of the restart matcher.
pub fn pattern_loop_graph(alphabet: &Alphabet, pattern: &[usize]) -> Result<LoopGraph> {
    let spine = pattern
        .iter()
        .map(|&a| alphabet.label(a).to_string())
        .collect();
    let loops = loop_words(alphabet, pattern)?
        .into_iter()
        .map(|w| AttachedLoop {
            at: 0,
            body: LoopGraph {
                spine: w
                    .into_iter()
                    .map(|a| alphabet.label(a).to_string())
                    .collect(),
                loops: Vec::new(),
            },
        })
        .collect();
    Ok(LoopGraph { spine, loops })
}

fn word_mass(alphabet: &Alphabet, word: &[usize]) -> Result<Q> {
    let probs = alphabet.probs_required()?;
    let mut m = qint(1);
    for &a in word {
        m *= &probs[a];
    }
    Ok(m)
}

fn exit_denominator(alphabet: &Alphabet, pattern: &[usize]) -> Result<Q> {
    let mut s = qint(0);
    for w in loop_words(alphabet, pattern)? {
        s += word_mass(alphabet, &w)?;
    }
    let den = qint(1) - &s;
    if den <= qint(0) {
        return Err(Error::DivergentLoop {
            vertex: 0,
            mass: fmt_q(&s),
        });
    }
    Ok(den)
}

/// Probability that the restart matcher ever completes the pattern:
/// `mass(pattern) / (1 - sum of exit-word masses)`. Equals 1 whenever the
/// letter probabilities are stochastic, because the exit words and the
/// pattern tile the prefix tree.
pub fn psi_test(alphabet: &Alphabet, pattern: &[usize]) -> Result<Q> {
    let den = exit_denominator(alphabet, pattern)?;
    Ok(word_mass(alphabet, pattern)? / den)
}

/// Expected absorption time of the restart matcher:
/// `len(pattern) + sum |w| mass(w) / (1 - sum mass(w))` over exit words `w`.
/// This dominates the substring first-occurrence expectation, with equality
/// when the two matchers coincide.
pub fn expected_tau_test(alphabet: &Alphabet, pattern: &[usize]) -> Result<Q> {
    let den = exit_denominator(alphabet, pattern)?;
    let mut weighted = qint(0);
    for w in loop_words(alphabet, pattern)? {
        weighted += word_mass(alphabet, &w)? * qint(w.len() as i64);
    }
    Ok(qint(pattern.len() as i64) + weighted / den)
}

/// Product matcher for a finite union of pattern ideals: the walk absorbs as
/// soon as any one of the patterns occurs as a factor.
pub fn union_pattern_automaton(
    alphabet: &Alphabet,
    patterns: &[Vec<usize>],
) -> Result<SemaphoreAutomaton> {
    if patterns.is_empty() {
        return Err(Error::Invalid("no patterns".into()));
    }
    let matchers: Vec<TestAutomaton> = patterns
        .iter()
        .map(|p| build_test_automaton(alphabet, p))
        .collect::<Result<_>>()?;

    let start = vec![0usize; matchers.len()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states: Vec<Vec<usize>> = vec![start.clone()];
    index.insert(start, 0);
    let mut transitions: Vec<Vec<Step>> = Vec::new();
    let mut at = 0;
    while at < states.len() {
        let current = states[at].clone();
        let mut row = Vec::with_capacity(alphabet.len());
        for c in 0..alphabet.len() {
            let next: Vec<usize> = current
                .iter()
                .zip(&matchers)
                .map(|(&q, m)| m.step(q, c))
                .collect();
            let done = next
                .iter()
                .zip(&matchers)
                .any(|(&q, m)| q == m.pattern.len());
            if done {
                row.push(Step::Absorb(0));
            } else {
                let slot = *index.entry(next.clone()).or_insert_with(|| {
                    states.push(next.clone());
                    states.len() - 1
                });
                row.push(Step::Continue(slot));
            }
        }
        transitions.push(row);
        at += 1;
    }

    let transient_names = states
        .iter()
        .map(|tuple| {
            let parts: Vec<String> = tuple
                .iter()
                .zip(&matchers)
                .map(|(&q, m)| m.state_name(q))
                .collect();
            parts.join("|")
        })
        .collect();
    SemaphoreAutomaton::from_parts(
        alphabet.clone(),
        transitions,
        transient_names,
        vec!["0".to_string()],
    )
}

/// Survival comparison between two pattern-union ideals.
#[derive(Debug, Clone)]
pub struct IdealComparison {
    /// For each pattern of the smaller ideal, the index of a pattern of the
    /// larger ideal occurring in it as a factor.
    pub witnesses: Vec<usize>,
    /// Pr(tau > t) for the smaller ideal (slower absorption).
    pub survival_small: Vec<Q>,
    /// Pr(tau > t) for the larger ideal (faster absorption).
    pub survival_large: Vec<Q>,
    /// True when survival_large[t] <= survival_small[t] for every t.
    pub ordering_holds: bool,
}

fn is_factor(needle: &[usize], hay: &[usize]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

/// Compare the absorption of two ideals, each given as a union of pattern
/// ideals. Containment of the smaller ideal `small` in `large` is certified
/// first: every pattern of `small` must contain some pattern of `large` as a
/// factor. Without that certificate the comparison refuses to claim an
/// ordering. With it, the two survival curves are computed exactly and the
/// pointwise ordering is verified.
pub fn ideal_principle_compare(
    alphabet: &Alphabet,
    small: &[Vec<usize>],
    large: &[Vec<usize>],
    t_max: usize,
) -> Result<IdealComparison> {
    if small.is_empty() || large.is_empty() {
        return Err(Error::Invalid("empty ideal spec".into()));
    }
    let mut witnesses = Vec::with_capacity(small.len());
    for t in small {
        match large.iter().position(|u| is_factor(u, t)) {
            Some(j) => witnesses.push(j),
            None => {
                return Err(Error::Invalid(format!(
                    "containment not certified: no pattern of the larger ideal \
                     is a factor of [{}]",
                    t.iter()
                        .map(|&a| alphabet.label(a))
                        .collect::<Vec<_>>()
                        .join("")
                )))
            }
        }
    }
    let aut_small = union_pattern_automaton(alphabet, small)?;
    let aut_large = union_pattern_automaton(alphabet, large)?;
    let survival_small = crate::passage::survival_curve(&aut_small, t_max)?;
    let survival_large = crate::passage::survival_curve(&aut_large, t_max)?;
    let ordering_holds = survival_large
        .iter()
        .zip(&survival_small)
        .all(|(lg, sm)| lg <= sm);
    Ok(IdealComparison {
        witnesses,
        survival_small,
        survival_large,
        ordering_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::passage::{analyze, survival_curve, target_series};
    use crate::ratio::qr;
    use crate::series::DEFAULT_SERIES_DEGREE;

    fn binary() -> Alphabet {
        Alphabet::uniform(vec!["a".into(), "b".into()]).unwrap()
    }

    fn binary_with(xa: Q, xb: Q) -> Alphabet {
        Alphabet::new(vec!["a".into(), "b".into()], Some(vec![xa, xb])).unwrap()
    }

    fn all_words(k: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..k).map(move |c| {
                        let mut v = w.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn contains_factor(word: &[usize], pattern: &[usize]) -> bool {
        word.len() >= pattern.len() && word.windows(pattern.len()).any(|w| w == pattern)
    }

    #[test]
    fn matcher_agrees_with_substring_oracle_on_short_words() {
        let alphabet = binary();
        for pattern in [vec![0, 1, 0], vec![0, 0], vec![0]] {
            let aut = build_test_automaton(&alphabet, &pattern).unwrap();
            assert_eq!(aut.num_states(), pattern.len() + 1);
            for len in 0..=pattern.len() + 4 {
                for word in all_words(2, len) {
                    assert_eq!(
                        aut.accepts(&word),
                        contains_factor(&word, &pattern),
                        "pattern {:?} word {:?}",
                        pattern,
                        word
                    );
                }
            }
        }
    }

    #[test]
    fn matcher_agrees_with_substring_oracle_on_length_ten_sweep() {
        let alphabet = binary();
        let pattern = vec![0, 1, 1, 0, 1];
        let aut = build_test_automaton(&alphabet, &pattern).unwrap();
        let words = all_words(2, 10);
        assert_eq!(words.len(), 1 << 10);
        for word in words {
            assert_eq!(aut.accepts(&word), contains_factor(&word, &pattern));
        }
    }

    #[test]
    fn loop_words_match_frozen_sets() {
        let alphabet = binary();
        let aba = loop_words(&alphabet, &[0, 1, 0]).unwrap();
        assert_eq!(aba, vec![vec![1], vec![0, 0], vec![0, 1, 1]]);

        let a4 = loop_words(&alphabet, &[0, 0, 0, 0]).unwrap();
        assert_eq!(
            a4,
            vec![vec![1], vec![0, 1], vec![0, 0, 1], vec![0, 0, 0, 1]]
        );

        let ternary = Alphabet::uniform(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let single = loop_words(&ternary, &[0]).unwrap();
        assert_eq!(single, vec![vec![1], vec![2]]);
        let aut = build_test_automaton(&ternary, &[0]).unwrap();
        assert_eq!(aut.num_states(), 2);
    }

    #[test]
    fn closed_forms_match_frozen_values() {
        let uniform = binary();
        assert_eq!(psi_test(&uniform, &[0, 1, 0]).unwrap(), qint(1));
        assert_eq!(expected_tau_test(&uniform, &[0, 1, 0]).unwrap(), qint(14));
        assert_eq!(expected_tau_test(&uniform, &[0, 0]).unwrap(), qint(6));

        // The displayed denominator 1 - x_b - x_a^2 - x_a x_b^2 at three
        // probability points.
        for (xa, xb) in [(qr(1, 2), qr(1, 2)), (qr(1, 3), qr(2, 3)), (qr(2, 3), qr(1, 3))] {
            let alphabet = binary_with(xa.clone(), xb.clone());
            let den = qint(1) - &xb - &xa * &xa - &xa * &xb * &xb;
            let psi = psi_test(&alphabet, &[0, 1, 0]).unwrap();
            assert_eq!(psi, &xa * &xa * &xb / &den);
            let e = expected_tau_test(&alphabet, &[0, 1, 0]).unwrap();
            let num = &xb + qint(2) * &xa * &xa + qint(3) * &xa * &xb * &xb;
            assert_eq!(e, qint(3) + num / &den);
        }

        // Single letter: geometric waiting time.
        let skew = binary_with(qr(1, 4), qr(3, 4));
        assert_eq!(expected_tau_test(&skew, &[0]).unwrap(), qint(4));
    }

    #[test]
    fn psi_is_one_at_stochastic_probabilities() {
        let binary = binary_with(qr(1, 3), qr(2, 3));
        for len in 1..=6 {
            for pattern in all_words(2, len) {
                assert_eq!(psi_test(&binary, &pattern).unwrap(), qint(1));
            }
        }
        let ternary = Alphabet::new(
            vec!["a".into(), "b".into(), "c".into()],
            Some(vec![qr(1, 2), qr(1, 3), qr(1, 6)]),
        )
        .unwrap();
        for len in 1..=4 {
            for pattern in all_words(3, len) {
                assert_eq!(psi_test(&ternary, &pattern).unwrap(), qint(1));
            }
        }
    }

    #[test]
    fn restart_matcher_reproduces_closed_forms_exactly() {
        let alphabet = binary_with(qr(1, 3), qr(2, 3));
        for pattern in [
            vec![0, 1, 0],
            vec![0, 1, 1, 0, 1],
            vec![0, 0, 1],
            vec![0],
            vec![1, 0, 0],
        ] {
            let aut = restart_matcher(&alphabet, &pattern).unwrap();
            let fp = analyze(&aut).unwrap();
            assert_eq!(fp.expected_tau, expected_tau_test(&alphabet, &pattern).unwrap());

            // Survival route: the loop graph over exit words.
            let graph = pattern_loop_graph(&alphabet, &pattern).unwrap();
            let from_graph = graph.survival(&alphabet, 12).unwrap();
            let from_automaton = survival_curve(&aut, 12).unwrap();
            assert_eq!(from_graph, from_automaton);

            // Series route, graded by word length.
            let series = graph.series(&alphabet, 12).unwrap();
            let per_target = target_series(&aut, 12).unwrap();
            assert_eq!(series, per_target[0]);
        }
    }

    #[test]
    fn substring_matcher_is_no_slower_than_restart_matcher() {
        let alphabet = binary();
        let kmp = analyze(&build_test_automaton(&alphabet, &[0, 1, 0]).unwrap().to_semaphore().unwrap())
            .unwrap();
        assert_eq!(kmp.expected_tau, qint(10));
        assert_eq!(expected_tau_test(&alphabet, &[0, 1, 0]).unwrap(), qint(14));

        for pattern in [vec![0], vec![0, 0], vec![0, 0, 0], vec![0, 0, 0, 0]] {
            let sub = analyze(
                &build_test_automaton(&alphabet, &pattern)
                    .unwrap()
                    .to_semaphore()
                    .unwrap(),
            )
            .unwrap();
            assert_eq!(sub.expected_tau, expected_tau_test(&alphabet, &pattern).unwrap());
        }

        for len in 1..=5 {
            for pattern in all_words(2, len) {
                let sub = analyze(
                    &build_test_automaton(&alphabet, &pattern)
                        .unwrap()
                        .to_semaphore()
                        .unwrap(),
                )
                .unwrap();
                let restart = expected_tau_test(&alphabet, &pattern).unwrap();
                assert!(sub.expected_tau <= restart, "pattern {:?}", pattern);
            }
        }
    }

    #[test]
    fn ideal_comparison_certifies_and_orders() {
        let alphabet = binary();
        let aa = vec![vec![0, 0]];
        let aa_or_aba = vec![vec![0, 0], vec![0, 1, 0]];
        let report = ideal_principle_compare(&alphabet, &aa, &aa_or_aba, 30).unwrap();
        assert!(report.ordering_holds);
        assert_eq!(report.witnesses, vec![0]);
        assert!(report.survival_large[10] < report.survival_small[10]);

        let same = ideal_principle_compare(&alphabet, &aa, &aa, 15).unwrap();
        assert_eq!(same.survival_small, same.survival_large);
        assert!(same.ordering_holds);

        let aaa = vec![vec![0, 0, 0]];
        let factor = ideal_principle_compare(&alphabet, &aaa, &aa, 20).unwrap();
        assert!(factor.ordering_holds);

        let aba_only = vec![vec![0, 1, 0]];
        let err = ideal_principle_compare(&alphabet, &aba_only, &aa, 10);
        assert!(err.is_err());
    }

    #[test]
    fn union_automaton_checks_against_single_pattern_route() {
        let alphabet = binary_with(qr(1, 3), qr(2, 3));
        let single = union_pattern_automaton(&alphabet, &[vec![0, 1, 0]]).unwrap();
        let direct = build_test_automaton(&alphabet, &[0, 1, 0])
            .unwrap()
            .to_semaphore()
            .unwrap();
        assert_eq!(
            survival_curve(&single, 20).unwrap(),
            survival_curve(&direct, 20).unwrap()
        );

        // Degree guard: series truncation default is generous enough for the
        // tests above.
        assert!(DEFAULT_SERIES_DEGREE >= 20);
    }
}
