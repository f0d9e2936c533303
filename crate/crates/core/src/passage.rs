//! First-passage analysis of a semaphore automaton: where the walk lands in
//! the ideal, how long it takes, and how both split by absorbing edge and by
//! time. All of it is exact; the only approximations in this module are the
//! truncation caps the caller chooses for curves and series.

use crate::automaton::{SemaphoreAutomaton, Step};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::ratio::Q;
use crate::series::TruncatedSeries;
use crate::transform::Transformation;
use num::traits::{One, Zero};

/// Exact absorption profile from the start state.
#[derive(Clone, Debug)]
pub struct FirstPassage {
    /// Expected number of visits to each transient state before absorption.
    pub visits: Vec<Q>,
    /// Probability of landing on each target.
    pub hit: Vec<Q>,
    /// Expected absorption time; equals the sum of the visit counts.
    pub expected_tau: Q,
}

/// One absorbing edge with its share of the landing mass.
#[derive(Clone, Debug)]
pub struct AbsorptionEvent {
    pub state: usize,
    pub letter: usize,
    pub target: usize,
    pub mass: Q,
}

/// Visits, landing probabilities, and the absorption-time expectation, all
/// from one linear solve against the transposed transient step matrix.
pub fn analyze(auto: &SemaphoreAutomaton) -> Result<FirstPassage> {
    let q = auto.q_matrix()?;
    let r = auto.r_matrix()?;
    let n = auto.num_transient();
    let qt = linalg::transpose(&q);
    let mut e0 = vec![Q::zero(); n];
    e0[0] = Q::one();
    let visits = linalg::solve_i_minus_q(&qt, &[e0])?.pop().expect("one rhs");
    let hit = (0..auto.num_targets())
        .map(|w| (0..n).map(|s| &visits[s] * &r[s][w]).sum())
        .collect();
    let expected_tau = visits.iter().cloned().sum();
    Ok(FirstPassage {
        visits,
        hit,
        expected_tau,
    })
}

/// Visits and landing probabilities by one topological sweep, for automata
/// whose transient step graph has no cycles beyond self-loops. Aperiodic
/// walks on R-trivial semigroups have this shape, and the sweep handles
/// state counts where the dense solve in [`analyze`] becomes slow.
pub fn first_passage_acyclic(auto: &SemaphoreAutomaton) -> Result<FirstPassage> {
    let x = auto.alphabet().probs_required()?;
    let n = auto.num_transient();

    let mut stay = vec![Q::zero(); n];
    let mut moves: Vec<Vec<(usize, Q)>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for s in 0..n {
        for (letter, xa) in x.iter().enumerate() {
            if let Step::Continue(t) = auto.step(s, letter) {
                if t == s {
                    stay[s] = &stay[s] + xa;
                } else {
                    moves[s].push((t, xa.clone()));
                    indegree[t] += 1;
                }
            }
        }
    }

    let mut ready: Vec<usize> = (0..n).filter(|&s| indegree[s] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(s) = ready.pop() {
        order.push(s);
        for &(t, _) in &moves[s] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Invalid(
            "transient step graph has a cycle beyond self-loops".into(),
        ));
    }

    let mut inflow = vec![Q::zero(); n];
    inflow[0] = Q::one();
    let mut visits = vec![Q::zero(); n];
    for &s in &order {
        let escape = Q::one() - stay[s].clone();
        if escape.is_zero() {
            if !inflow[s].is_zero() {
                return Err(Error::Invalid(format!(
                    "transient slot {s} carries mass but never escapes"
                )));
            }
            continue;
        }
        visits[s] = &inflow[s] / &escape;
        for (t, p) in &moves[s] {
            inflow[*t] = &inflow[*t] + &(&visits[s] * p);
        }
    }

    let r = auto.r_matrix()?;
    let hit = (0..auto.num_targets())
        .map(|w| (0..n).map(|s| &visits[s] * &r[s][w]).sum())
        .collect();
    let expected_tau = visits.iter().cloned().sum();
    Ok(FirstPassage {
        visits,
        hit,
        expected_tau,
    })
}

/// The landing mass split over individual absorbing edges: the walk crosses
/// edge `(state, letter)` with probability `visits[state] * x[letter]`.
/// Masses over all events sum to one.
pub fn per_event_stationary(
    auto: &SemaphoreAutomaton,
    passage: &FirstPassage,
) -> Result<Vec<AbsorptionEvent>> {
    let x = auto.alphabet().probs_required()?;
    let mut events = Vec::new();
    for state in 0..auto.num_transient() {
        for (letter, xa) in x.iter().enumerate() {
            if let Step::Absorb(target) = auto.step(state, letter) {
                events.push(AbsorptionEvent {
                    state,
                    letter,
                    target,
                    mass: &passage.visits[state] * xa,
                });
            }
        }
    }
    Ok(events)
}

/// Expected absorption time conditioned on each target; `None` for targets
/// the walk never reaches.
pub fn expected_tau_by_target(auto: &SemaphoreAutomaton) -> Result<Vec<Option<Q>>> {
    let q = auto.q_matrix()?;
    let r = auto.r_matrix()?;
    let k = auto.num_targets();
    let r_cols: Vec<Vec<Q>> = (0..k)
        .map(|w| (0..auto.num_transient()).map(|s| r[s][w].clone()).collect())
        .collect();
    // h[w][s] = Pr_s(land on w)
    let h = linalg::solve_i_minus_q(&q, &r_cols)?;
    // g[w][s] = E_s[tau; land on w] solves (I-Q) g = R e_w + Q h_w.
    let rhs: Vec<Vec<Q>> = (0..k)
        .map(|w| {
            (0..auto.num_transient())
                .map(|s| {
                    let qh: Q = (0..auto.num_transient())
                        .map(|t| &q[s][t] * &h[w][t])
                        .sum();
                    &r_cols[w][s] + qh
                })
                .collect()
        })
        .collect();
    let g = linalg::solve_i_minus_q(&q, &rhs)?;
    Ok((0..k)
        .map(|w| {
            if h[w][0].is_zero() {
                None
            } else {
                Some(&g[w][0] / &h[w][0])
            }
        })
        .collect())
}

/// `Pr(tau > t)` for `t = 0..=t_max`, by pushing the transient mass vector
/// one step at a time.
pub fn survival_curve(auto: &SemaphoreAutomaton, t_max: usize) -> Result<Vec<Q>> {
    let q = auto.q_matrix()?;
    let mut mass = vec![Q::zero(); auto.num_transient()];
    mass[0] = Q::one();
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(mass.iter().cloned().sum());
    for _ in 1..=t_max {
        mass = linalg::vec_mat(&mass, &q);
        out.push(mass.iter().cloned().sum());
    }
    Ok(out)
}

/// `Pr(tau = t, target = w)` for `t = 0..=t_max`, per target.
pub fn target_mass_curves(auto: &SemaphoreAutomaton, t_max: usize) -> Result<Vec<Vec<Q>>> {
    let q = auto.q_matrix()?;
    let r = auto.r_matrix()?;
    let k = auto.num_targets();
    let mut mass = vec![Q::zero(); auto.num_transient()];
    mass[0] = Q::one();
    let mut out = vec![vec![Q::zero(); t_max + 1]; k];
    for t in 1..=t_max {
        for w in 0..k {
            out[w][t] = (0..auto.num_transient())
                .map(|s| &mass[s] * &r[s][w])
                .sum();
        }
        mass = linalg::vec_mat(&mass, &q);
    }
    Ok(out)
}

/// Formal series of each target's code-word language, graded by word length,
/// truncated at total degree `cap`.
pub fn target_series(
    auto: &SemaphoreAutomaton,
    cap: usize,
) -> Result<Vec<TruncatedSeries>> {
    let nv = auto.alphabet().len();
    let n = auto.num_transient();
    let mut state: Vec<TruncatedSeries> = (0..n)
        .map(|_| TruncatedSeries::zero(nv, cap))
        .collect();
    state[0] = TruncatedSeries::one(nv, cap);
    let mut targets: Vec<TruncatedSeries> = (0..auto.num_targets())
        .map(|_| TruncatedSeries::zero(nv, cap))
        .collect();
    let vars: Vec<TruncatedSeries> = (0..nv)
        .map(|a| TruncatedSeries::variable(nv, cap, a))
        .collect();
    for _ in 1..=cap {
        let mut next: Vec<TruncatedSeries> = (0..n)
            .map(|_| TruncatedSeries::zero(nv, cap))
            .collect();
        for s in 0..n {
            if state[s].is_zero() {
                continue;
            }
            for a in 0..nv {
                let moved = state[s].mul(&vars[a])?;
                match auto.step(s, a) {
                    Step::Continue(t) => next[t] = next[t].add(&moved)?,
                    Step::Absorb(w) => targets[w] = targets[w].add(&moved)?,
                }
            }
        }
        state = next;
    }
    Ok(targets)
}

/// Column-stochastic one-step matrix of the state chain: entry `(y, x)` is
/// the probability that the next state is `y` given the current one is `x`.
pub fn transition_matrix(tables: &[Transformation], probs: &[Q]) -> Result<Matrix> {
    let degree = tables
        .first()
        .map(Transformation::degree)
        .ok_or_else(|| Error::Invalid("no generators".into()))?;
    if tables.len() != probs.len() {
        return Err(Error::Invalid(format!(
            "{} tables for {} probabilities",
            tables.len(),
            probs.len()
        )));
    }
    let mut t = linalg::zeros(degree, degree);
    for (g, xa) in tables.iter().zip(probs) {
        for x in 0..degree {
            t[g.apply(x)][x] += xa;
        }
    }
    Ok(t)
}

/// Stationary distribution as the one-dimensional fixed space of the
/// transition matrix, normalized to unit mass.
pub fn stationary_eigen(tables: &[Transformation], probs: &[Q]) -> Result<Vec<Q>> {
    let t = transition_matrix(tables, probs)?;
    let mut a = t;
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= Q::one();
    }
    let basis = linalg::nullspace(&a);
    if basis.len() != 1 {
        return Err(Error::NotErgodic { dim: basis.len() });
    }
    let v = &basis[0];
    let total: Q = v.iter().cloned().sum();
    if total.is_zero() {
        return Err(Error::NotErgodic { dim: 1 });
    }
    let psi: Vec<Q> = v.iter().map(|c| c / &total).collect();
    if psi.iter().any(|p| p < &Q::zero()) {
        return Err(Error::NotErgodic { dim: 1 });
    }
    Ok(psi)
}

/// Pushes target landing probabilities to a distribution on chain states,
/// for kernels whose elements all act as constant maps; `constant_values`
/// lists each target's image point.
pub fn stationary_on_states(hit: &[Q], constant_values: &[usize], num_states: usize) -> Vec<Q> {
    let mut psi = vec![Q::zero(); num_states];
    for (h, &v) in hit.iter().zip(constant_values) {
        psi[v] += h;
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::SemaphoreAutomaton;
    use crate::ratio::{qint, qr};
    use crate::semigroup::{generate_semigroup, DEFAULT_ELEMENT_CAP};
    use crate::transform::Alphabet;

    /// Two constant maps on two points, letter masses 1/3 and 2/3: the walk
    /// absorbs on the first step.
    fn two_constants() -> SemaphoreAutomaton {
        let gens = vec![
            Transformation::constant(2, 0),
            Transformation::constant(2, 1),
        ];
        let sg = generate_semigroup(
            vec!["a".into(), "b".into()],
            gens,
            true,
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap();
        let ideal = sg.minimal_ideal();
        let alphabet = Alphabet::new(
            vec!["a".into(), "b".into()],
            Some(vec![qr(1, 3), qr(2, 3)]),
        )
        .unwrap();
        SemaphoreAutomaton::from_semigroup(&sg, &ideal, alphabet).unwrap()
    }

    /// min(k, .) on {0..n} at uniform letters.
    fn min_chain(n: usize) -> SemaphoreAutomaton {
        let gens: Vec<Transformation> = (0..=n)
            .map(|k| Transformation::new((0..=n).map(|x| k.min(x)).collect()).unwrap())
            .collect();
        let labels: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
        let sg = generate_semigroup(labels.clone(), gens, true, DEFAULT_ELEMENT_CAP).unwrap();
        let ideal = sg.minimal_ideal();
        SemaphoreAutomaton::from_semigroup(&sg, &ideal, Alphabet::uniform(labels).unwrap())
            .unwrap()
    }

    #[test]
    fn immediate_absorption_lands_with_letter_masses() {
        let auto = two_constants();
        let fp = analyze(&auto).unwrap();
        assert_eq!(fp.expected_tau, qint(1));
        assert_eq!(fp.visits, vec![qint(1)]);
        assert_eq!(fp.hit, vec![qr(1, 3), qr(2, 3)]);
        let events = per_event_stationary(&auto, &fp).unwrap();
        assert_eq!(events.len(), 2);
        let total: Q = events.iter().map(|e| e.mass.clone()).sum();
        assert_eq!(total, qint(1));
        let by_target = expected_tau_by_target(&auto).unwrap();
        assert_eq!(by_target, vec![Some(qint(1)), Some(qint(1))]);
    }

    #[test]
    fn geometric_absorption_time() {
        // min chain: absorption is the first occurrence of letter 0, a
        // geometric time with success 1/(n+1).
        let auto = min_chain(3);
        let fp = analyze(&auto).unwrap();
        assert_eq!(fp.expected_tau, qint(4));
        assert_eq!(fp.hit, vec![qint(1)]);
        let surv = survival_curve(&auto, 5).unwrap();
        for (t, s) in surv.iter().enumerate() {
            let mut expect = qint(1);
            for _ in 0..t {
                expect *= qr(3, 4);
            }
            assert_eq!(*s, expect, "t = {t}");
        }
        let masses = target_mass_curves(&auto, 5).unwrap();
        assert_eq!(masses[0][0], qint(0));
        assert_eq!(masses[0][1], qr(1, 4));
        assert_eq!(masses[0][2], qr(3, 16));
    }

    #[test]
    fn survival_total_matches_target_split() {
        let auto = min_chain(2);
        let surv = survival_curve(&auto, 12).unwrap();
        let masses = target_mass_curves(&auto, 12).unwrap();
        for t in 1..=12 {
            let absorbed_now: Q = masses.iter().map(|m| m[t].clone()).sum();
            let drop = &surv[t - 1] - &surv[t];
            assert_eq!(absorbed_now, drop, "t = {t}");
        }
    }

    #[test]
    fn target_series_grades_the_code_by_length() {
        let auto = min_chain(2);
        let series = target_series(&auto, 6).unwrap();
        assert_eq!(series.len(), 1);
        let x = auto.alphabet().probs_required().unwrap();
        let by_deg = series[0].evaluate_by_degree(x);
        let masses = target_mass_curves(&auto, 6).unwrap();
        assert_eq!(by_deg, masses[0]);
    }

    #[test]
    fn eigen_stationary_matches_kernel_landing() {
        // Constant-map kernel: the stationary distribution on states equals
        // the landing distribution pushed through the constants.
        let auto = two_constants();
        let fp = analyze(&auto).unwrap();
        let gens = vec![
            Transformation::constant(2, 0),
            Transformation::constant(2, 1),
        ];
        let probs = vec![qr(1, 3), qr(2, 3)];
        let psi = stationary_eigen(&gens, &probs).unwrap();
        assert_eq!(psi, vec![qr(1, 3), qr(2, 3)]);
        let pushed = stationary_on_states(&fp.hit, &[0, 1], 2);
        assert_eq!(psi, pushed);
    }

    #[test]
    fn eigen_rejects_disconnected_chains() {
        let gens = vec![Transformation::identity(2)];
        let probs = vec![qint(1)];
        let err = stationary_eigen(&gens, &probs).unwrap_err();
        assert!(matches!(err, Error::NotErgodic { dim: 2 }));
    }

    #[test]
    fn acyclic_sweep_matches_the_dense_solve() {
        use crate::chains::{build_chain, ChainParams};

        let mut autos = vec![two_constants(), min_chain(4)];
        let wp_default = build_chain("wp", &ChainParams::default()).unwrap();
        autos.push(wp_default.automaton);
        let wp_antichain = build_chain(
            "wp",
            &ChainParams {
                n: Some(3),
                ..ChainParams::default()
            },
        )
        .unwrap();
        autos.push(wp_antichain.automaton);
        for auto in &autos {
            let dense = analyze(auto).unwrap();
            let swept = first_passage_acyclic(auto).unwrap();
            assert_eq!(dense.visits, swept.visits);
            assert_eq!(dense.hit, swept.hit);
            assert_eq!(dense.expected_tau, swept.expected_tau);
        }
    }

    #[test]
    fn acyclic_sweep_rejects_shortening_walks() {
        use crate::chains::{build_chain, ChainParams};

        let model = build_chain("b2", &ChainParams::default()).unwrap();
        let err = first_passage_acyclic(&model.automaton).unwrap_err();
        assert!(err.to_string().contains("cycle"));
    }
}
