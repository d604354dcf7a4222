//! Densities of rational languages.
//!
//! The crate computes the density of a rational language with respect to a
//! single probability measure (Bernoulli or Markov), with respect to a
//! sequence of measures (sequential density), and with respect to word
//! counts in a shift space (combinatorial density).
//!
//! The pipeline is: a regular expression is compiled to a minimal complete
//! [`Dfa`]; the automaton is lifted together with a [`Measure`] to a finite
//! Markov [`Chain`]; the density is the Cesàro limit of the chain's slice
//! masses, computed from the recurrent-class structure of the chain.
//!
//! ```
//! use ratdense::{Dfa, Measure, density};
//!
//! let dfa = Dfa::parse_regex("(a|b)*a(a|b)*", &['a', 'b']).unwrap();
//! let mu = Measure::bernoulli(&[('a', 0.5), ('b', 0.5)]).unwrap();
//! let result = density::density(&dfa, &mu).unwrap();
//! assert_eq!(result.value, 1.0);
//! ```

pub mod automata;
pub mod combinatorial;
pub mod density;
mod error;
pub(crate) mod linalg;
pub mod measures;
pub mod monoid;
pub mod sequential;
pub mod sft;

pub use automata::Dfa;
pub use combinatorial::{CombinatorialResult, IdealDensityTable};
pub use density::{Chain, CorollaryReport, DensityMode, DensityResult};
pub use error::{Error, Result};
pub use measures::{Bernoulli, MaxEntropy, Markov, Measure};
pub use monoid::{IdealInfo, Monoid};
pub use sequential::{CesaroSummary, Family, MeasureSequence, SequentialResult, Verdict};
pub use sft::Sft;
