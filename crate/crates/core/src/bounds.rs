//! Upper bounds on the absorption-time tail, and the small information
//! toolkit used around them. The exact survival curve is always available,
//! so these bounds exist to be compared against it: a first-moment bound, an
//! exponential-moment bound optimized over a grid, and a family of bounds
//! driven by a counting statistic of the walk.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratio::{binomial, q_to_f64, Q};
use num::traits::{One, Zero};

/// `Pr(tau > t) <= E[tau] / (t + 1)`, clipped at one.
pub fn markov_bound(expected_tau: &Q, t: usize) -> Q {
    let bound = expected_tau / Q::from_integer((t as u64 + 1).into());
    bound.min(Q::one())
}

/// Exponential-moment tail bounds for `t = 0..=t_max`.
#[derive(Clone, Debug)]
pub struct ChernoffBounds {
    /// Bound per `t`; all ones when no grid point was admissible.
    pub per_t: Vec<f64>,
    /// Whether any exponential moment on the grid was certified finite.
    pub admissible: bool,
}

/// Optimizes `exp(-s t) E[exp(s tau)]` over `s` in `{0.01, ..., 5.00}`.
/// A grid point is used only when `exp(s) * max_row_sum(Q) < 1`, which
/// certifies the moment system `(I - exp(s) Q) v = exp(s) R 1` is solvable
/// with a convergent Neumann series. Chains that can stall forever keep
/// their full row sums at one and get the trivial bound.
pub fn chernoff_bounds(q: &Matrix, t_max: usize) -> ChernoffBounds {
    let n = q.len();
    let qf: Vec<Vec<f64>> = q
        .iter()
        .map(|row| row.iter().map(q_to_f64).collect())
        .collect();
    let max_row_sum = qf
        .iter()
        .map(|row| row.iter().sum::<f64>())
        .fold(0.0f64, f64::max);
    let mut per_t = vec![1.0f64; t_max + 1];
    let mut admissible = false;
    for k in 1..=500 {
        let s = 0.01 * k as f64;
        let es = s.exp();
        if es * max_row_sum >= 1.0 {
            break;
        }
        // (I - es Q) v = es R 1, with (R 1)_i the absorption mass 1 - row sum.
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (if i == j { 1.0 } else { 0.0 }) - es * qf[i][j])
                    .collect()
            })
            .collect();
        let b: Vec<f64> = (0..n)
            .map(|i| es * (1.0 - qf[i].iter().sum::<f64>()))
            .collect();
        let Some(v) = solve_f64(a, b) else {
            continue;
        };
        admissible = true;
        let moment = v[0];
        for (t, slot) in per_t.iter_mut().enumerate() {
            let bound = (-s * t as f64).exp() * moment;
            if bound < *slot {
                *slot = bound;
            }
        }
    }
    ChernoffBounds { per_t, admissible }
}

fn solve_f64(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// A counting statistic certifying progress: each step independently scores
/// a success with probability at least `success`, and absorption needs
/// `level` successes. Then `Pr(tau > t) <= Pr(Binomial(t, success) < level)`.
#[derive(Clone, Debug)]
pub struct StatisticParams {
    pub success: Q,
    pub level: usize,
}

/// Exact binomial tail: `Pr(Binomial(t, p) <= level - 1)`.
pub fn statistic_binomial(params: &StatisticParams, t: usize) -> Q {
    let p = &params.success;
    let one_minus = Q::one() - p;
    let mut acc = Q::zero();
    for i in 0..params.level.min(t + 1) {
        let mut term = Q::from_integer(binomial(t as u64, i as u64));
        for _ in 0..i {
            term *= p;
        }
        for _ in 0..(t - i) {
            term *= &one_minus;
        }
        acc += term;
    }
    acc.min(Q::one())
}

/// Sub-Gaussian form `exp(-(t p - (level - 1))^2 / (2 t p))`, valid once
/// `t >= (level - 1) / p`; trivial before that.
pub fn statistic_gaussian(params: &StatisticParams, t: usize) -> f64 {
    let p = q_to_f64(&params.success);
    let l = (params.level - 1) as f64;
    let tp = t as f64 * p;
    if t == 0 || tp < l {
        return 1.0;
    }
    (-(tp - l) * (tp - l) / (2.0 * tp)).exp().min(1.0)
}

/// Relative-entropy form `exp(-t KL(a || p))` at `a = (level - 1) / t`,
/// applied when `0 < a < p`; trivial otherwise.
pub fn statistic_kl(params: &StatisticParams, t: usize) -> f64 {
    let p = q_to_f64(&params.success);
    if t == 0 {
        return 1.0;
    }
    let a = (params.level - 1) as f64 / t as f64;
    if a <= 0.0 || a >= p {
        return 1.0;
    }
    let ta = t as f64 * a;
    ((p / a).powf(ta) * ((1.0 - p) / (1.0 - a)).powf(t as f64 - ta)).min(1.0)
}

/// Shannon entropy in nats; zero-mass letters contribute nothing.
pub fn entropy(x: &[Q]) -> f64 {
    x.iter()
        .map(q_to_f64)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Entropy rate of the state chain at stationarity: the mean over `psi` of
/// the entropy of each state's outgoing distribution, with `columns` the
/// column-stochastic transition matrix.
pub fn entropy_rate(columns: &Matrix, psi: &[Q]) -> Result<f64> {
    let n = columns.len();
    if psi.len() != n {
        return Err(Error::Invalid(format!(
            "{} stationary entries for a {n}-state matrix",
            psi.len()
        )));
    }
    let mut rate = 0.0;
    for (j, pj) in psi.iter().enumerate() {
        let col: Vec<Q> = (0..n).map(|i| columns[i][j].clone()).collect();
        rate += q_to_f64(pj) * entropy(&col);
    }
    Ok(rate)
}

/// Total-variation distance, exact.
pub fn tv_distance(a: &[Q], b: &[Q]) -> Q {
    let diff: Q = a
        .iter()
        .zip(b)
        .map(|(x, y)| if x >= y { x - y } else { y - x })
        .sum();
    diff / Q::from_integer(2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{qint, qr};

    #[test]
    fn markov_bound_clips_and_decays() {
        let e = qint(4);
        assert_eq!(markov_bound(&e, 0), qint(1));
        assert_eq!(markov_bound(&e, 3), qint(1));
        assert_eq!(markov_bound(&e, 7), qr(1, 2));
    }

    #[test]
    fn chernoff_beats_markov_for_geometric_tails() {
        // Pure geometric: single transient state, stay probability 3/4.
        let q = vec![vec![qr(3, 4)]];
        let bounds = chernoff_bounds(&q, 40);
        assert!(bounds.admissible);
        assert!(bounds.per_t[0] >= 0.999);
        // True tail (3/4)^t; the bound must hold and eventually beat Markov.
        for t in 0..=40 {
            let truth = 0.75f64.powi(t as i32);
            assert!(bounds.per_t[t] >= truth * 0.999999, "t = {t}");
        }
        let markov_40 = q_to_f64(&markov_bound(&qint(4), 40));
        assert!(bounds.per_t[40] < markov_40 / 100.0);
    }

    #[test]
    fn chernoff_degrades_to_one_when_rows_are_full() {
        // A state that can stall forever: row sum one.
        let q = vec![vec![qint(1)]];
        let bounds = chernoff_bounds(&q, 10);
        assert!(!bounds.admissible);
        assert!(bounds.per_t.iter().all(|&b| b == 1.0));
    }

    #[test]
    fn binomial_tail_matches_direct_enumeration() {
        let params = StatisticParams {
            success: qr(1, 4),
            level: 3,
        };
        // Pr(Bin(5, 1/4) < 3) = sum_{i<3} C(5,i) (1/4)^i (3/4)^(5-i)
        //                     = (243 + 405 + 270) / 1024
        assert_eq!(statistic_binomial(&params, 5), qr(918, 1024));
        assert_eq!(statistic_binomial(&params, 0), qint(1));
        // With level 1 the binomial tail is the pure failure run.
        let geo = StatisticParams {
            success: qr(1, 4),
            level: 1,
        };
        assert_eq!(statistic_binomial(&geo, 3), qr(27, 64));
    }

    #[test]
    fn analytic_statistic_forms_dominate_the_exact_tail() {
        let params = StatisticParams {
            success: qr(1, 3),
            level: 4,
        };
        for t in 0..60 {
            let exact = q_to_f64(&statistic_binomial(&params, t));
            assert!(statistic_gaussian(&params, t) + 1e-12 >= exact, "gauss t={t}");
            assert!(statistic_kl(&params, t) + 1e-12 >= exact, "kl t={t}");
        }
    }

    #[test]
    fn entropy_and_tv() {
        let u = vec![qr(1, 2), qr(1, 2)];
        assert!((entropy(&u) - std::f64::consts::LN_2).abs() < 1e-12);
        let v = vec![qr(1, 4), qr(3, 4)];
        assert_eq!(tv_distance(&u, &v), qr(1, 4));
        assert_eq!(tv_distance(&u, &u), qint(0));
    }

    #[test]
    fn entropy_rate_weights_states() {
        // Column 0 deterministic, column 1 uniform; weight 1/2 each.
        let t = vec![
            vec![qint(1), qr(1, 2)],
            vec![qint(0), qr(1, 2)],
        ];
        let psi = vec![qr(1, 2), qr(1, 2)];
        let rate = entropy_rate(&t, &psi).unwrap();
        assert!((rate - 0.5 * std::f64::consts::LN_2).abs() < 1e-12);
    }
}
