//! Event alphabets and words.
//!
//! An [`Alphabet`] is an ordered set of distinct event tokens. Tokens are
//! nonempty strings of printable non-whitespace characters; the token `eps`
//! is reserved to denote the empty word in text formats and can never be an
//! event. Iteration order is lexicographic, so two alphabets with the same
//! tokens are identical values and event ids are stable across runs.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Reserved token denoting the empty word in text formats.
pub const EPS_TOKEN: &str = "eps";

/// Index of an event within its [`Alphabet`].
pub type EventId = usize;

/// An ordered set of distinct event tokens.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    events: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from tokens. Tokens are sorted; duplicates, empty
    /// strings, whitespace or control characters, and the reserved token
    /// `eps` are input errors. An empty alphabet is permitted.
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut events: Vec<String> = Vec::new();
        for tok in tokens {
            let tok = tok.into();
            validate_token(&tok)?;
            events.push(tok);
        }
        events.sort();
        if let Some(w) = events.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate event token '{}'", w[0])));
        }
        Ok(Alphabet { events })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index_of(token).is_some()
    }

    pub fn index_of(&self, token: &str) -> Option<EventId> {
        self.events.binary_search_by(|e| e.as_str().cmp(token)).ok()
    }

    /// Resolves a token, failing with an input error when it is foreign.
    pub fn require(&self, token: &str) -> Result<EventId> {
        self.index_of(token)
            .ok_or_else(|| Error::input(format!("event '{token}' is not in the alphabet")))
    }

    pub fn event(&self, id: EventId) -> &str {
        &self.events[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.events.iter().map(|s| s.as_str())
    }

    pub fn ids(&self) -> std::ops::Range<EventId> {
        0..self.events.len()
    }

    /// Union of two alphabets as a new alphabet.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let set: BTreeSet<&str> = self.iter().chain(other.iter()).collect();
        Alphabet::new(set.into_iter()).expect("union of valid alphabets is valid")
    }

    /// True when every event of `self` is an event of `other`.
    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.iter().all(|e| other.contains(e))
    }
}

fn validate_token(tok: &str) -> Result<()> {
    if tok.is_empty() {
        return Err(Error::input("event tokens must be nonempty"));
    }
    if tok == EPS_TOKEN {
        return Err(Error::input(format!(
            "'{EPS_TOKEN}' is reserved for the empty word and cannot be an event"
        )));
    }
    if tok.chars().any(|c| c.is_whitespace() || c.is_control()) {
        return Err(Error::input(format!(
            "event token '{}' contains whitespace or control characters",
            tok.escape_default()
        )));
    }
    Ok(())
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.events.join(", "))
    }
}

/// A finite sequence of event tokens.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn of(tokens: &[&str]) -> Self {
        Word(tokens.iter().map(|t| t.to_string()).collect())
    }

    /// Word consisting of `count` repetitions of `token`.
    pub fn repeat(token: &str, count: usize) -> Self {
        Word(std::iter::repeat(token.to_string()).take(count).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, token: impl Into<String>) {
        self.0.push(token.into());
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.0.extend(other.0.iter().cloned());
        out
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_str())
    }

    /// Event ids of the tokens relative to `alphabet`; input error on a
    /// foreign token.
    pub fn ids(&self, alphabet: &Alphabet) -> Result<Vec<EventId>> {
        self.tokens().map(|t| alphabet.require(t)).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "{EPS_TOKEN}")
        } else {
            write!(f, "{}", self.0.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_sorts_and_indexes() {
        let a = Alphabet::new(["b", "a", "c"]).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec!["a", "b", "c"]);
        assert_eq!(a.index_of("b"), Some(1));
        assert_eq!(a.index_of("d"), None);
        assert_eq!(a.event(2), "c");
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::new(["a", "a"]).is_err());
    }

    #[test]
    fn alphabet_rejects_eps() {
        assert!(Alphabet::new(["a", "eps"]).is_err());
    }

    #[test]
    fn alphabet_rejects_whitespace() {
        assert!(Alphabet::new(["a b"]).is_err());
        assert!(Alphabet::new([""]).is_err());
    }

    #[test]
    fn empty_alphabet_is_allowed() {
        let a = Alphabet::new(Vec::<String>::new()).unwrap();
        assert!(a.is_empty());
    }

    #[test]
    fn word_display_uses_eps_for_empty() {
        assert_eq!(Word::empty().to_string(), "eps");
        assert_eq!(Word::of(&["a", "b"]).to_string(), "a b");
    }

    #[test]
    fn word_ids_rejects_foreign_token() {
        let a = Alphabet::new(["a"]).unwrap();
        assert!(Word::of(&["a", "z"]).ids(&a).is_err());
    }
}
