//! Path languages of the form: walk a spine of letters, with starred loop
//! languages attached at spine vertices; loops are themselves loop graphs.
//! Every unambiguous first-passage decomposition in this crate takes this
//! shape. The generating series, the exact length expectation, and the
//! length distribution all come from the structure directly.

use crate::error::{Error, Result};
use crate::ratio::{fmt_q, Q};
use crate::series::TruncatedSeries;
use crate::transform::Alphabet;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// A loop graph: `spine` is the letter sequence of the direct path, and each
/// attached loop is a loop graph whose language may be repeated any number
/// of times at its vertex. Vertex `i` is the state after the first `i` spine
/// letters, so attachment points run from `0` (before anything is read) to
/// `spine.len()`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LoopGraph {
    pub spine: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<AttachedLoop>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AttachedLoop {
    pub at: usize,
    pub body: LoopGraph,
}

/// Mass and degree-weighted mass of a language at a probability point; the
/// ratio is the mean word length conditioned on the language.
#[derive(Clone, Debug)]
pub struct LanguageMoments {
    pub mass: Q,
    pub weighted_length: Q,
}

impl LoopGraph {
    pub fn path(letters: &[&str]) -> Self {
        LoopGraph {
            spine: letters.iter().map(|s| s.to_string()).collect(),
            loops: Vec::new(),
        }
    }

    pub fn with_loop(mut self, at: usize, body: LoopGraph) -> Self {
        self.loops.push(AttachedLoop { at, body });
        self
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        for l in &self.spine {
            alphabet.require_index(l)?;
        }
        for al in &self.loops {
            if al.at > self.spine.len() {
                return Err(Error::Invalid(format!(
                    "loop attached at vertex {} of a spine of length {}",
                    al.at,
                    self.spine.len()
                )));
            }
            al.body.validate(alphabet)?;
        }
        Ok(())
    }

    /// Generating series: product over vertices of `1/(1 - sum of loop
    /// series)` times the spine monomial.
    pub fn series(&self, alphabet: &Alphabet, cap: usize) -> Result<TruncatedSeries> {
        self.validate(alphabet)?;
        self.series_inner(alphabet, cap)
    }

    fn series_inner(&self, alphabet: &Alphabet, cap: usize) -> Result<TruncatedSeries> {
        let n = alphabet.len();
        let mut acc = TruncatedSeries::one(n, cap);
        for l in &self.spine {
            let v = TruncatedSeries::variable(n, cap, alphabet.require_index(l)?);
            acc = acc.mul(&v)?;
        }
        for vertex in 0..=self.spine.len() {
            let mut u = TruncatedSeries::zero(n, cap);
            let mut any = false;
            for al in self.loops.iter().filter(|al| al.at == vertex) {
                u = u.add(&al.body.series_inner(alphabet, cap)?)?;
                any = true;
            }
            if !any {
                continue;
            }
            let star = u.geometric().map_err(|_| Error::DivergentLoop {
                vertex,
                mass: "series with unit constant term".into(),
            })?;
            acc = acc.mul(&star)?;
        }
        Ok(acc)
    }

    /// Exact mass and degree-weighted mass at the alphabet's probabilities.
    /// The weighted mass obeys the product rule for the degree-weighting
    /// operator, so every starred factor contributes
    /// `(weighted loop mass) / (1 - loop mass)` on top of the spine length.
    pub fn moments(&self, alphabet: &Alphabet) -> Result<LanguageMoments> {
        self.validate(alphabet)?;
        let x = alphabet.probs_required()?;
        self.moments_inner(alphabet, x)
    }

    fn moments_inner(&self, alphabet: &Alphabet, x: &[Q]) -> Result<LanguageMoments> {
        let mut mass = Q::one();
        for l in &self.spine {
            mass *= &x[alphabet.require_index(l)?];
        }
        let mut log_derivative = Q::from_integer(self.spine.len().into());
        for vertex in 0..=self.spine.len() {
            let mut u = Q::zero();
            let mut u_weighted = Q::zero();
            let mut any = false;
            for al in self.loops.iter().filter(|al| al.at == vertex) {
                let m = al.body.moments_inner(alphabet, x)?;
                u += m.mass;
                u_weighted += m.weighted_length;
                any = true;
            }
            if !any {
                continue;
            }
            if u >= Q::one() {
                return Err(Error::DivergentLoop {
                    vertex,
                    mass: fmt_q(&u),
                });
            }
            let rest = Q::one() - u;
            mass /= &rest;
            log_derivative += u_weighted / rest;
        }
        Ok(LanguageMoments {
            weighted_length: &mass * &log_derivative,
            mass,
        })
    }

    /// Word-length distribution at the alphabet's probabilities: entry `t`
    /// is the mass of length-`t` words, for `t <= cap`.
    pub fn length_masses(&self, alphabet: &Alphabet, cap: usize) -> Result<Vec<Q>> {
        let series = self.series(alphabet, cap)?;
        Ok(series.evaluate_by_degree(alphabet.probs_required()?))
    }

    /// `1 - cumulative mass` per length. When the language is the complete
    /// first-passage decomposition of a chain, entry `t` is `Pr(tau > t)`.
    pub fn survival(&self, alphabet: &Alphabet, cap: usize) -> Result<Vec<Q>> {
        let masses = self.length_masses(alphabet, cap)?;
        let mut acc = Q::one();
        Ok(masses
            .into_iter()
            .map(|m| {
                acc -= m;
                acc.clone()
            })
            .collect())
    }

    /// Survival of the length of a word drawn from the language itself:
    /// entry `t` is `Pr(len > t | the language is ever completed)`. Divides
    /// the raw tail by the total mass, so it stays meaningful when the
    /// language covers only part of the probability (a single absorption
    /// route out of several, or defective letter weights).
    pub fn conditional_survival(&self, alphabet: &Alphabet, cap: usize) -> Result<Vec<Q>> {
        let total = self.moments(alphabet)?.mass;
        if total.is_zero() {
            return Err(Error::Invalid("language has zero mass".into()));
        }
        let masses = self.length_masses(alphabet, cap)?;
        let mut acc = total.clone();
        Ok(masses
            .into_iter()
            .map(|m| {
                acc -= m;
                &acc / &total
            })
            .collect())
    }

    /// DOT of the structure: spine vertices in a row, loop bodies as their
    /// own rows joined to the attachment vertex by dashed edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph loopgraph {\n  rankdir=LR;\n  node [shape=circle];\n");
        let mut next = 0usize;
        self.dot_block(&mut out, &mut next);
        out.push_str("}\n");
        out
    }

    fn dot_block(&self, out: &mut String, next: &mut usize) -> usize {
        let base = *next;
        *next += self.spine.len() + 1;
        for i in 0..=self.spine.len() {
            out.push_str(&format!("  v{} [label=\"{i}\"];\n", base + i));
        }
        for (i, letter) in self.spine.iter().enumerate() {
            out.push_str(&format!(
                "  v{} -> v{} [label=\"{letter}\"];\n",
                base + i,
                base + i + 1
            ));
        }
        for al in &self.loops {
            let body_base = al.body.dot_block(out, next);
            let body_end = body_base + al.body.spine.len();
            out.push_str(&format!(
                "  v{} -> v{body_base} [style=dashed];\n  v{body_end} -> v{} [style=dashed];\n",
                base + al.at,
                base + al.at
            ));
        }
        base
    }
}
