//! The JSON surface: user-supplied models, the analysis report, and the
//! CSV bound table. Rationals cross this boundary as `"p/q"` strings so
//! emitted artifacts re-parse to the exact values they came from.

use crate::automaton::{SemaphoreAutomaton, Step};
use crate::bounds::{
    chernoff_bounds, markov_bound, statistic_binomial, statistic_gaussian, statistic_kl,
};
use crate::chains::{ChainModel, SemigroupHandle, StateSpace};
use crate::error::{Error, Result};
use crate::passage::{expected_tau_by_target, survival_curve};
use crate::ratio::{fmt_q, parse_q, q_to_f64, Q};
use crate::semigroup::{generate_semigroup, DEFAULT_ELEMENT_CAP};
use crate::transform::{Alphabet, Transformation};
use serde::{Deserialize, Serialize};

/// One letter of a user model: a transformation table over `0..omega` and
/// an exact probability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    pub table: Vec<usize>,
    pub prob: String,
}

/// A user model: probability-weighted transformations of a finite state
/// space `0..omega`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub omega: usize,
    pub generators: Vec<GeneratorSpec>,
    pub adjoin_identity: bool,
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("model JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model spec serializes")
    }
}

/// Builds the full analysis pipeline for a user model.
pub fn build_model(spec: &ModelSpec) -> Result<ChainModel> {
    if spec.omega == 0 {
        return Err(Error::Invalid("omega must be positive".into()));
    }
    let mut labels = Vec::with_capacity(spec.generators.len());
    let mut probs = Vec::with_capacity(spec.generators.len());
    let mut generators = Vec::with_capacity(spec.generators.len());
    for g in &spec.generators {
        if g.table.len() != spec.omega {
            return Err(Error::Invalid(format!(
                "generator {} has {} entries for omega = {}",
                g.label,
                g.table.len(),
                spec.omega
            )));
        }
        labels.push(g.label.clone());
        probs.push(parse_q(&g.prob)?);
        generators.push(Transformation::new(g.table.clone())?);
    }
    let alphabet = Alphabet::new(labels.clone(), Some(probs))?;
    let sg = generate_semigroup(
        labels,
        generators.clone(),
        spec.adjoin_identity,
        DEFAULT_ELEMENT_CAP,
    )?;
    let ideal = sg.minimal_ideal();
    let automaton = SemaphoreAutomaton::from_semigroup(&sg, &ideal, alphabet.clone())?;
    let kernel_labels = ideal.kernel.iter().map(|&k| sg.format_node(k)).collect();
    // The state-level view exists when every kernel element pins a state.
    let kernel_values: Option<Vec<usize>> = ideal
        .kernel
        .iter()
        .map(|&k| sg.element(k).and_then(Transformation::constant_value))
        .collect();
    let states = kernel_values.map(|kernel_values| StateSpace {
        names: (0..spec.omega).map(|s| s.to_string()).collect(),
        generators,
        kernel_values,
    });
    Ok(ChainModel {
        name: "model".to_string(),
        alphabet,
        semigroup: SemigroupHandle::Maps(sg),
        ideal,
        automaton,
        kernel_labels,
        states,
        closed_form: None,
        statistic: None,
    })
}

/// Renders a map-realized chain back to the JSON schema. Chains whose
/// semigroup is abstract and carry no state tables have no table form.
pub fn spec_of_model(model: &ChainModel) -> Option<ModelSpec> {
    let states = model.states.as_ref()?;
    let probs = model.alphabet.probs()?;
    let omega = states.generators.first().map(Transformation::degree)?;
    let generators = model
        .alphabet
        .labels()
        .iter()
        .zip(&states.generators)
        .zip(probs)
        .map(|((label, g), p)| GeneratorSpec {
            label: label.clone(),
            table: g.table().to_vec(),
            prob: fmt_q(p),
        })
        .collect();
    let adjoin_identity = match &model.semigroup {
        SemigroupHandle::Maps(sg) => sg.identity_adjoined(),
        SemigroupHandle::Words(_) => true,
    };
    Some(ModelSpec {
        omega,
        generators,
        adjoin_identity,
    })
}

/// Analysis summary; every rational renders through one `float` switch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstPassageReport {
    pub targets: Vec<String>,
    pub psi: Vec<String>,
    pub expected_tau: String,
    pub expected_tau_per_target: Vec<Option<String>>,
    pub survival: Vec<String>,
}

impl FirstPassageReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exact ratio, or a 15 significant digit decimal when floats were asked for.
pub fn render(x: &Q, float: bool) -> String {
    if float {
        format_sig15(q_to_f64(x))
    } else {
        fmt_q(x)
    }
}

/// 15-significant-digit decimal for quantities that are floats by nature
/// or were requested as floats.
pub fn format_sig15(v: f64) -> String {
    format!("{v:.14e}")
}

pub fn first_passage_report(
    model: &ChainModel,
    t_max: usize,
    float: bool,
) -> Result<FirstPassageReport> {
    let fp = model.first_passage()?;
    let per_target = expected_tau_by_target(&model.automaton)?;
    let survival = survival_curve(&model.automaton, t_max)?;
    Ok(FirstPassageReport {
        targets: model.kernel_labels.clone(),
        psi: fp.hit.iter().map(|q| render(q, float)).collect(),
        expected_tau: render(&fp.expected_tau, float),
        expected_tau_per_target: per_target
            .iter()
            .map(|o| o.as_ref().map(|q| render(q, float)))
            .collect(),
        survival: survival.iter().map(|q| render(q, float)).collect(),
    })
}

pub const BOUNDS_CSV_HEADER: &str =
    "t, survival, markov_bound, chernoff_bound, statistic_binomial, statistic_gaussian, statistic_kl";

/// One row per `t = 0..=t_max` under the pinned header. The statistic
/// columns stay empty for chains without a decreasing statistic; the
/// Chernoff, gaussian, and KL columns are floats by nature.
pub fn bounds_csv(model: &ChainModel, t_max: usize, float: bool) -> Result<String> {
    let fp = model.first_passage()?;
    let survival = survival_curve(&model.automaton, t_max)?;
    let chernoff = chernoff_bounds(&model.automaton.q_matrix()?, t_max);
    let mut out = String::from(BOUNDS_CSV_HEADER);
    out.push('\n');
    for t in 0..=t_max {
        let markov = markov_bound(&fp.expected_tau, t);
        let (binom, gauss, kl) = match &model.statistic {
            Some(p) => (
                render(&statistic_binomial(p, t), float),
                format_sig15(statistic_gaussian(p, t)),
                format_sig15(statistic_kl(p, t)),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        out.push_str(&format!(
            "{}, {}, {}, {}, {}, {}, {}\n",
            t,
            render(&survival[t], float),
            render(&markov, float),
            format_sig15(chernoff.per_t[t]),
            binom,
            gauss,
            kl
        ));
    }
    Ok(out)
}

/// DOT rendering of the semaphore automaton: transient states as ellipses,
/// targets as boxes, one edge per letter.
pub fn automaton_dot(auto: &SemaphoreAutomaton) -> String {
    let mut out = String::from("digraph semaphore {\n");
    for slot in 0..auto.num_transient() {
        out.push_str(&format!(
            "  t{} [label=\"{}\"];\n",
            slot,
            auto.transient_name(slot)
        ));
    }
    for slot in 0..auto.num_targets() {
        out.push_str(&format!(
            "  k{} [shape=box, label=\"{}\"];\n",
            slot,
            auto.target_name(slot)
        ));
    }
    for slot in 0..auto.num_transient() {
        for a in 0..auto.alphabet().len() {
            let (head, target) = match auto.step(slot, a) {
                Step::Continue(next) => ("t", next),
                Step::Absorb(k) => ("k", k),
            };
            out.push_str(&format!(
                "  t{} -> {}{} [label=\"{}\"];\n",
                slot,
                head,
                target,
                auto.alphabet().label(a)
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{build_chain, ChainParams};
    use crate::ratio::qr;

    fn two_state_spec() -> ModelSpec {
        ModelSpec {
            omega: 2,
            generators: vec![
                GeneratorSpec {
                    label: "1".into(),
                    table: vec![0, 0],
                    prob: "1/3".into(),
                },
                GeneratorSpec {
                    label: "2".into(),
                    table: vec![1, 1],
                    prob: "1/3".into(),
                },
                GeneratorSpec {
                    label: "s".into(),
                    table: vec![1, 0],
                    prob: "1/3".into(),
                },
            ],
            adjoin_identity: true,
        }
    }

    #[test]
    fn model_json_round_trips() {
        let spec = two_state_spec();
        let text = spec.to_json();
        assert_eq!(ModelSpec::from_json(&text).unwrap(), spec);
        let rebuilt = spec_of_model(&build_model(&spec).unwrap()).unwrap();
        assert_eq!(rebuilt, spec);
    }

    #[test]
    fn user_model_analysis_matches_the_builtin_twin() {
        let model = build_model(&two_state_spec()).unwrap();
        let twin = build_chain("linear2", &ChainParams::default()).unwrap();
        assert_eq!(
            model.stationary_exact().unwrap(),
            twin.stationary_exact().unwrap()
        );
        assert_eq!(
            model.first_passage().unwrap().expected_tau,
            twin.first_passage().unwrap().expected_tau
        );
    }

    #[test]
    fn bad_model_inputs_are_rejected() {
        let mut spec = two_state_spec();
        spec.generators[0].table = vec![0];
        assert!(build_model(&spec).is_err());
        let mut spec = two_state_spec();
        spec.generators[0].table = vec![0, 7];
        assert!(build_model(&spec).is_err());
        let mut spec = two_state_spec();
        spec.generators[0].prob = "2/3".into();
        assert!(build_model(&spec).is_err());
        let mut spec = two_state_spec();
        spec.generators[0].prob = "nope".into();
        assert!(build_model(&spec).is_err());
    }

    #[test]
    fn report_satisfies_its_own_invariants() {
        let model = build_chain("tsetlin", &ChainParams::default()).unwrap();
        let report = first_passage_report(&model, 12, false).unwrap();
        let psi_sum: Q = report.psi.iter().map(|s| parse_q(s).unwrap()).sum();
        assert_eq!(psi_sum, qr(1, 1));
        assert_eq!(report.survival[0], "1");
        let survival: Vec<Q> = report
            .survival
            .iter()
            .map(|s| parse_q(s).unwrap())
            .collect();
        assert!(survival.windows(2).all(|w| w[0] >= w[1]));
        // Mixture identity: the per-target expectations average back to
        // the overall expectation under the landing distribution.
        let mix: Q = report
            .psi
            .iter()
            .zip(&report.expected_tau_per_target)
            .map(|(p, e)| {
                parse_q(p).unwrap() * parse_q(e.as_ref().expect("reachable")).unwrap()
            })
            .sum();
        assert_eq!(mix, parse_q(&report.expected_tau).unwrap());
    }

    #[test]
    fn csv_rows_carry_the_pinned_header_and_exact_survival() {
        let model = build_chain("min", &ChainParams::default()).unwrap();
        let csv = bounds_csv(&model, 5, false).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(BOUNDS_CSV_HEADER));
        let row0 = lines.next().unwrap();
        assert!(row0.starts_with("0, 1, "), "row 0 was {row0}");
        assert_eq!(csv.lines().count(), 7);
        // Five letters, so survival is (4/5)^t.
        let row2: Vec<&str> = csv.lines().nth(3).unwrap().split(", ").collect();
        assert_eq!(row2[1], "16/25");
    }

    #[test]
    fn float_mode_renders_fifteen_significant_digits() {
        let model = build_chain("min", &ChainParams::default()).unwrap();
        let csv = bounds_csv(&model, 2, true).unwrap();
        let row: Vec<&str> = csv.lines().nth(2).unwrap().split(", ").collect();
        assert_eq!(row[1], "8.00000000000000e-1");
    }

    #[test]
    fn automaton_dot_names_every_state() {
        let model = build_chain("min", &ChainParams::default()).unwrap();
        let dot = automaton_dot(&model.automaton);
        assert!(dot.starts_with("digraph"));
        for slot in 0..model.automaton.num_transient() {
            assert!(dot.contains(&format!("t{slot} ")));
        }
        assert!(dot.contains("shape=box"));
    }
}
