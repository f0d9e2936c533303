//! Exact analysis of random-letter Markov chains through their
//! transformation semigroup.
//!
//! A model is a finite alphabet of transformations of a state space, each
//! letter drawn i.i.d. with a fixed probability. The library builds the
//! semigroup the letters generate, locates its minimal ideal, and turns the
//! transient part of the right Cayley graph into an absorbing chain whose
//! absorption time dominates the distance to stationarity. Everything
//! measurable is kept as exact rationals; floats appear only in logarithms,
//! exponential-moment bounds, and optional display.

pub mod automaton;
pub mod bounds;
pub mod chains;
pub mod error;
pub mod languages;
pub mod linalg;
pub mod loopgraph;
pub mod model;
pub mod passage;
pub mod poset;
pub mod ratio;
pub mod semigroup;
pub mod series;
pub mod sim;
pub mod syntactic;
pub mod transform;

pub use automaton::{SemaphoreAutomaton, Step};
pub use error::{Error, Result};
pub use loopgraph::{AttachedLoop, LanguageMoments, LoopGraph};
pub use passage::{analyze, FirstPassage};
pub use ratio::Q;
pub use semigroup::{generate, generate_semigroup, FiniteSemigroup, IdealInfo};
pub use series::{TruncatedSeries, DEFAULT_SERIES_DEGREE};
pub use syntactic::{
    push_probabilities, rees_quotient, syntactic_quotient, ReesQuotient, SyntacticQuotient,
};
pub use transform::{Alphabet, Transformation};
