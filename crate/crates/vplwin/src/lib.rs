//! Sliding-window membership for regular and visibly pushdown languages.
//!
//! The crate is organised bottom-up: finite automata and right congruences
//! ([`regular`]), visibly pushdown machines ([`vpa`]), real-time transducers
//! ([`transducer`]), grammars and growth analysis ([`cfg`], [`growth`]),
//! flattenings of windows ([`flattening`]), the witness machinery that
//! separates logarithmic from linear space ([`dichotomy`]), streaming
//! algorithms ([`window`]) and the classifier that glues them together
//! ([`classify`]).

pub mod bits;
pub mod cfg;
pub mod classify;
pub mod dichotomy;
pub mod error;
pub mod flattening;
pub mod growth;
pub mod nfa;
pub mod par;
pub mod regular;
pub mod semilinear;
pub mod text;
pub mod transducer;
pub mod vpa;
pub mod window;
pub mod words;

pub use error::{Error, Result};
pub use words::{Alphabet, Sym, Word};
