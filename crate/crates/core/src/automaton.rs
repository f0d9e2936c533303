//! The absorbing chain a left-zero minimal ideal induces on the right Cayley
//! graph: walk nodes by right multiplication, stop on first entry into the
//! ideal. The stopping words form a prefix code, one class per absorbing
//! edge, and everything downstream (stationary distribution, absorption
//! time, tail bounds) is read off this automaton.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ratio::Q;
use crate::semigroup::{FiniteSemigroup, IdealInfo};
use crate::transform::Alphabet;
use num::traits::Zero;
use std::hash::Hash;

/// One letter's effect at a transient state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// Stays transient; payload is a transient slot.
    Continue(usize),
    /// Enters the ideal; payload is a target slot.
    Absorb(usize),
}

#[derive(Clone, Debug)]
pub struct SemaphoreAutomaton {
    alphabet: Alphabet,
    /// `transitions[slot][letter]`; slot 0 is the start.
    transitions: Vec<Vec<Step>>,
    transient_names: Vec<String>,
    target_names: Vec<String>,
    /// Original semigroup node per transient slot (identity when the
    /// automaton was assembled directly from parts).
    transient_nodes: Vec<usize>,
    /// Original semigroup node per target slot.
    target_nodes: Vec<usize>,
}

impl SemaphoreAutomaton {
    /// Absorbing chain of a semigroup whose minimal ideal is left-zero;
    /// the start is the adjoined identity.
    pub fn from_semigroup<E: Clone + Eq + Hash>(
        sg: &FiniteSemigroup<E>,
        ideal: &IdealInfo,
        alphabet: Alphabet,
    ) -> Result<Self> {
        if !ideal.is_left_zero {
            return Err(Error::NotLeftZero);
        }
        if alphabet.len() != sg.num_letters() {
            return Err(Error::Invalid(format!(
                "alphabet has {} letters, semigroup has {}",
                alphabet.len(),
                sg.num_letters()
            )));
        }
        let n = sg.num_nodes();
        let mut t_slot = vec![usize::MAX; n];
        let mut k_slot = vec![usize::MAX; n];
        let mut transient_nodes = Vec::new();
        let mut target_nodes = Vec::new();
        for node in 0..n {
            if ideal.kernel_mask[node] {
                k_slot[node] = target_nodes.len();
                target_nodes.push(node);
            } else {
                t_slot[node] = transient_nodes.len();
                transient_nodes.push(node);
            }
        }
        let transitions = transient_nodes
            .iter()
            .map(|&node| {
                (0..alphabet.len())
                    .map(|a| {
                        let next = sg.right_step(node, a);
                        if ideal.kernel_mask[next] {
                            Step::Absorb(k_slot[next])
                        } else {
                            Step::Continue(t_slot[next])
                        }
                    })
                    .collect()
            })
            .collect();
        let transient_names = transient_nodes
            .iter()
            .map(|&u| sg.format_node(u))
            .collect();
        let target_names = target_nodes.iter().map(|&u| sg.format_node(u)).collect();
        Ok(SemaphoreAutomaton {
            alphabet,
            transitions,
            transient_names,
            target_names,
            transient_nodes,
            target_nodes,
        })
    }

    /// Direct assembly, for hand-built chains whose Cayley graph is already
    /// known. Slot 0 of `transitions` is the start state.
    pub fn from_parts(
        alphabet: Alphabet,
        transitions: Vec<Vec<Step>>,
        transient_names: Vec<String>,
        target_names: Vec<String>,
    ) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::Invalid("no transient states".into()));
        }
        if transitions.len() != transient_names.len() {
            return Err(Error::Invalid(format!(
                "{} transition rows for {} transient names",
                transitions.len(),
                transient_names.len()
            )));
        }
        for (slot, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::Invalid(format!(
                    "state {slot} has {} steps for {} letters",
                    row.len(),
                    alphabet.len()
                )));
            }
            for step in row {
                let ok = match *step {
                    Step::Continue(t) => t < transitions.len(),
                    Step::Absorb(k) => k < target_names.len(),
                };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "state {slot} steps out of range"
                    )));
                }
            }
        }
        let nt = transitions.len();
        let nk = target_names.len();
        Ok(SemaphoreAutomaton {
            alphabet,
            transitions,
            transient_names,
            target_names,
            transient_nodes: (0..nt).collect(),
            target_nodes: (0..nk).collect(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_transient(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_targets(&self) -> usize {
        self.target_names.len()
    }

    pub fn step(&self, slot: usize, letter: usize) -> Step {
        self.transitions[slot][letter]
    }

    pub fn transient_name(&self, slot: usize) -> &str {
        &self.transient_names[slot]
    }

    pub fn target_name(&self, slot: usize) -> &str {
        &self.target_names[slot]
    }

    pub fn transient_names(&self) -> &[String] {
        &self.transient_names
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn transient_node(&self, slot: usize) -> usize {
        self.transient_nodes[slot]
    }

    pub fn target_node(&self, slot: usize) -> usize {
        self.target_nodes[slot]
    }

    /// Transient-to-transient step matrix, row per source state.
    pub fn q_matrix(&self) -> Result<Matrix> {
        let x = self.alphabet.probs_required()?;
        let n = self.num_transient();
        let mut q = vec![vec![Q::zero(); n]; n];
        for (slot, row) in self.transitions.iter().enumerate() {
            for (a, step) in row.iter().enumerate() {
                if let Step::Continue(t) = *step {
                    q[slot][t] += &x[a];
                }
            }
        }
        Ok(q)
    }

    /// Transient-to-target absorption matrix, row per source state.
    pub fn r_matrix(&self) -> Result<Matrix> {
        let x = self.alphabet.probs_required()?;
        let n = self.num_transient();
        let mut r = vec![vec![Q::zero(); self.num_targets()]; n];
        for (slot, row) in self.transitions.iter().enumerate() {
            for (a, step) in row.iter().enumerate() {
                if let Step::Absorb(k) = *step {
                    r[slot][k] += &x[a];
                }
            }
        }
        Ok(r)
    }

    /// All code words up to a length bound, with their target slots, in
    /// length-then-lexicographic order of letter indices. The code is
    /// prefix-free by construction.
    pub fn code_words(&self, max_len: usize) -> Vec<(Vec<usize>, usize)> {
        let mut out = Vec::new();
        // Frontier of (state, word) pairs grown one letter at a time.
        let mut frontier: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (slot, word) in frontier {
                for a in 0..self.alphabet.len() {
                    let mut w = word.clone();
                    w.push(a);
                    match self.transitions[slot][a] {
                        Step::Continue(t) => next.push((t, w)),
                        Step::Absorb(k) => out.push((w, k)),
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Renders a letter-index word with the alphabet's labels.
    pub fn word_label(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&a| self.alphabet.label(a))
            .collect::<Vec<_>>()
            .join("")
    }
}
