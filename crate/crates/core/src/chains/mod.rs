//! Built-in chain families behind one trait. Each builder assembles the
//! letters, the generated semigroup, the first-passage automaton, and the
//! family's closed forms; the registry picks a family by name so callers
//! select chains with a string and a small parameter bag.

pub mod edgeflip;
pub mod fixtures;
pub mod promotion;
pub mod tsetlin;
pub mod wp;

use crate::automaton::SemaphoreAutomaton;
use crate::bounds::StatisticParams;
use crate::error::{Error, Result};
use crate::passage::{self, FirstPassage};
use crate::poset::Poset;
use crate::ratio::{check_stochastic, Q};
use crate::semigroup::{
    generate_semigroup, FiniteSemigroup, IdealInfo, DEFAULT_ELEMENT_CAP,
};
use crate::transform::{Alphabet, Transformation};

/// Parameter bag for the builders. Each family reads what it understands
/// and rejects combinations that contradict each other.
#[derive(Debug, Clone, Default)]
pub struct ChainParams {
    /// Size parameter: books for the library chain, edges for edge flipping,
    /// vertex count for poset chains built on the full antichain, the letter
    /// collapse exponent for the power-collapse fixture.
    pub n: Option<usize>,
    /// Poset for the linear-extension chains.
    pub poset: Option<Poset>,
    /// Letter probabilities in the family's own parametrization; uniform
    /// when omitted.
    pub probs: Option<Vec<Q>>,
}

impl ChainParams {
    /// Resolve the probability vector for `len` slots, defaulting to
    /// uniform, and require it to be stochastic.
    pub fn resolve_probs(&self, len: usize, what: &str) -> Result<Vec<Q>> {
        let probs = match &self.probs {
            Some(p) => {
                if p.len() != len {
                    return Err(Error::Invalid(format!(
                        "{what} needs {len} probabilities, got {}",
                        p.len()
                    )));
                }
                p.clone()
            }
            None => {
                let each = Q::new(1.into(), (len as i64).into());
                vec![each; len]
            }
        };
        check_stochastic(&probs)?;
        Ok(probs)
    }
}

/// The generated semigroup: transformation tables for families acting on a
/// concrete state space, plain words for the abstract ones.
pub enum SemigroupHandle {
    Maps(FiniteSemigroup<Transformation>),
    Words(FiniteSemigroup<Vec<u8>>),
}

impl SemigroupHandle {
    pub fn num_elements(&self) -> usize {
        match self {
            SemigroupHandle::Maps(s) => s.num_elements(),
            SemigroupHandle::Words(s) => s.num_elements(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        match self {
            SemigroupHandle::Maps(s) => s.num_nodes(),
            SemigroupHandle::Words(s) => s.num_nodes(),
        }
    }

    pub fn left_step(&self, node: usize, letter: usize) -> usize {
        match self {
            SemigroupHandle::Maps(s) => s.left_step(node, letter),
            SemigroupHandle::Words(s) => s.left_step(node, letter),
        }
    }

    pub fn right_step(&self, node: usize, letter: usize) -> usize {
        match self {
            SemigroupHandle::Maps(s) => s.right_step(node, letter),
            SemigroupHandle::Words(s) => s.right_step(node, letter),
        }
    }

    pub fn format_node(&self, node: usize) -> String {
        match self {
            SemigroupHandle::Maps(s) => s.format_node(node),
            SemigroupHandle::Words(s) => s.format_node(node),
        }
    }

    pub fn is_r_trivial(&self) -> bool {
        match self {
            SemigroupHandle::Maps(s) => s.is_r_trivial(),
            SemigroupHandle::Words(s) => s.is_r_trivial(),
        }
    }

    pub fn to_dot(&self) -> String {
        match self {
            SemigroupHandle::Maps(s) => s.to_dot(),
            SemigroupHandle::Words(s) => s.to_dot(),
        }
    }

    pub fn as_maps(&self) -> Option<&FiniteSemigroup<Transformation>> {
        match self {
            SemigroupHandle::Maps(s) => Some(s),
            SemigroupHandle::Words(_) => None,
        }
    }
}

/// Concrete state space the letters act on, for families that have one.
pub struct StateSpace {
    pub names: Vec<String>,
    /// One table per letter, aligned with the alphabet.
    pub generators: Vec<Transformation>,
    /// For each kernel element (aligned with the automaton's target slots),
    /// the state it maps everything to; kernels here are left zero and
    /// consist of constant maps.
    pub kernel_values: Vec<usize>,
}

/// Everything the analysis pipeline needs about one built chain.
pub struct ChainModel {
    pub name: String,
    pub alphabet: Alphabet,
    pub semigroup: SemigroupHandle,
    pub ideal: IdealInfo,
    pub automaton: SemaphoreAutomaton,
    /// Family display name per kernel element, aligned with target slots.
    pub kernel_labels: Vec<String>,
    /// State-level view, when the family acts on concrete states.
    pub states: Option<StateSpace>,
    /// Family closed form for the kernel distribution, aligned with target
    /// slots.
    pub closed_form: Option<Vec<Q>>,
    /// Parameters of a step-decreasing statistic, when the family has one.
    pub statistic: Option<StatisticParams>,
}

impl ChainModel {
    pub fn first_passage(&self) -> Result<FirstPassage> {
        passage::analyze(&self.automaton)
    }

    /// Kernel distribution from the absorption route.
    pub fn stationary_exact(&self) -> Result<Vec<Q>> {
        Ok(self.first_passage()?.hit)
    }

    /// One table per letter for the walk restricted to the kernel, over
    /// kernel slots.
    pub fn kernel_walk_tables(&self) -> Vec<Transformation> {
        let slot_of = |node: usize| {
            self.ideal
                .kernel
                .binary_search(&node)
                .expect("kernel is closed under letter action")
        };
        (0..self.alphabet.len())
            .map(|a| {
                Transformation::new(
                    self.ideal
                        .kernel
                        .iter()
                        .map(|&k| slot_of(self.semigroup.left_step(k, a)))
                        .collect(),
                )
                .expect("kernel table is well formed")
            })
            .collect()
    }

    /// Kernel distribution from the eigenvector route: the unique stationary
    /// vector of the kernel-restricted walk.
    pub fn stationary_eigen(&self) -> Result<Vec<Q>> {
        passage::stationary_eigen(&self.kernel_walk_tables(), self.alphabet.probs_required()?)
    }

    /// Kernel distribution pushed onto concrete states.
    pub fn stationary_on_states(&self) -> Result<Option<Vec<Q>>> {
        let Some(states) = &self.states else {
            return Ok(None);
        };
        let hit = self.stationary_exact()?;
        Ok(Some(passage::stationary_on_states(
            &hit,
            &states.kernel_values,
            states.names.len(),
        )))
    }
}

/// A named chain family.
pub trait ChainBuilder {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn build(&self, params: &ChainParams) -> Result<ChainModel>;
}

/// All built-in families, in menu order.
pub fn registry() -> Vec<Box<dyn ChainBuilder>> {
    vec![
        Box::new(tsetlin::Tsetlin),
        Box::new(edgeflip::EdgeFlip),
        Box::new(promotion::Promotion),
        Box::new(wp::PosetWords),
        Box::new(fixtures::MinChain),
        Box::new(fixtures::SquareFree),
        Box::new(fixtures::ReesAa),
        Box::new(fixtures::PowerCollapse),
        Box::new(fixtures::FlipConst),
    ]
}

/// Build a registered chain by name.
pub fn build_chain(name: &str, params: &ChainParams) -> Result<ChainModel> {
    for builder in registry() {
        if builder.name() == name {
            return builder.build(params);
        }
    }
    let known: Vec<&str> = registry().iter().map(|b| b.name()).collect();
    Err(Error::Invalid(format!(
        "unknown chain '{name}'; known chains: {}",
        known.join(", ")
    )))
}

/// Shared assembly for families whose letters are transformations of a
/// concrete state space and whose kernel consists of constant maps: generate
/// the semigroup, locate the minimal ideal, build the absorbing automaton,
/// and read each kernel element's constant value.
pub(crate) fn assemble_map_model(
    name: &str,
    alphabet: Alphabet,
    generators: Vec<Transformation>,
    state_names: Vec<String>,
) -> Result<ChainModel> {
    let sg = generate_semigroup(
        alphabet.labels().to_vec(),
        generators.clone(),
        true,
        DEFAULT_ELEMENT_CAP,
    )?;
    let ideal = sg.minimal_ideal();
    let automaton = SemaphoreAutomaton::from_semigroup(&sg, &ideal, alphabet.clone())?;
    let mut kernel_values = Vec::with_capacity(ideal.kernel.len());
    for &node in &ideal.kernel {
        let value = sg
            .element(node)
            .and_then(Transformation::constant_value)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "kernel element {} is not a constant map",
                    sg.format_node(node)
                ))
            })?;
        kernel_values.push(value);
    }
    let kernel_labels = kernel_values
        .iter()
        .map(|&v| state_names[v].clone())
        .collect();
    Ok(ChainModel {
        name: name.to_string(),
        alphabet,
        semigroup: SemigroupHandle::Maps(sg),
        ideal,
        automaton,
        kernel_labels,
        states: Some(StateSpace {
            names: state_names,
            generators,
            kernel_values,
        }),
        closed_form: None,
        statistic: None,
    })
}

/// Smallest positive letter probability: the per-step success rate in the
/// decreasing-statistic bounds.
pub(crate) fn min_positive_prob(probs: &[Q]) -> Result<Q> {
    probs
        .iter()
        .filter(|p| !num::traits::Zero::is_zero(*p))
        .min()
        .cloned()
        .ok_or_else(|| Error::Invalid("all letter probabilities are zero".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_buildable_with_defaults() {
        let names: Vec<&str> = registry().iter().map(|b| b.name()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        for builder in registry() {
            let model = builder.build(&ChainParams::default()).unwrap();
            assert_eq!(model.name, builder.name());
            assert!(model.automaton.num_targets() >= 1);
        }
    }

    #[test]
    fn unknown_chain_reports_the_menu() {
        let err = build_chain("nope", &ChainParams::default())
            .err()
            .expect("unknown chain must be rejected");
        assert!(err.to_string().contains("tsetlin"));
    }

    #[test]
    fn stationary_routes_agree_on_every_default_model() {
        // The absorption route always reproduces the family closed form.
        // The kernel-walk eigenvector agrees whenever the product is
        // associative; the straightening walk is the one family where it
        // is not, and its two distributions are pinned in its own tests.
        for builder in registry() {
            let model = builder.build(&ChainParams::default()).unwrap();
            let exact = model.stationary_exact().unwrap();
            if let Some(closed) = &model.closed_form {
                assert_eq!(&exact, closed, "closed form of {}", model.name);
            }
            if model.name != "wp" {
                let eigen = model.stationary_eigen().unwrap();
                assert_eq!(exact, eigen, "family {}", model.name);
            }
        }
    }
}
