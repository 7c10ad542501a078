//! Infimal prefix-closed, controllable and observable superlanguages of
//! regular languages.
//!
//! A specification language K over an alphabet with an observation mask is
//! generally not observable: two words that look alike through the mask may
//! demand different control decisions. The least prefix-closed superlanguage
//! of K that is observable always exists, and this crate computes it with a
//! one-pass automaton pipeline:
//!
//! 1. close K under prefixes,
//! 2. attach one fresh sink reached by primed copies of each event, so the
//!    sink accepts exactly the union of right quotients with the quotient
//!    event recorded as its primed twin,
//! 3. saturate with mask-equivalent words while keeping the primed tail
//!    letter fixed, then strip the primes,
//! 4. determinize, adjoin the empty word, take the supremal prefix-closed
//!    sublanguage, and minimize.
//!
//! The same crate derives the infimal prefix-closed controllable
//! superlanguage (append uncontrollable continuations) and the combination
//! of both relative to a plant. Witness families with known minimal sizes,
//! an independent word-set fixpoint, a per-event reference construction, and
//! seeded random cross-validation keep every stage honest; the `bench`
//! module measures the state-complexity envelope on the worst-case family.
//!
//! Automata are partial: a missing transition means the word is outside the
//! language, and the empty language is the automaton with no states.

pub mod alphabet;
pub mod bench;
pub mod cli;
pub mod closure;
pub mod dfa;
pub mod error;
pub mod inf;
pub mod io;
pub mod mask;
pub mod nfa;
pub mod random;
pub mod verify;
pub mod witness;

pub use alphabet::{Alphabet, EventId, Word, EPS_TOKEN};
pub use dfa::{Dfa, DfaBuilder};
pub use error::{Error, Result};
pub use inf::{inf_c, inf_co, inf_o, InfOResult, InfOStats, UncontrollableSet};
pub use mask::{Mask, PrimedAlphabet, PRIME_MARKER};
pub use nfa::{Nfa, NfaBuilder, StateId};
