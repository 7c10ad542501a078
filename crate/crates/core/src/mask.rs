//! Observation masks and primed alphabet copies.
//!
//! A mask sends every event of its domain to an event of its codomain or to
//! the empty word; natural projections are the masks that keep a subset of
//! the domain fixed and erase the rest. Masks act on words letterwise and on
//! automata by relabeling, which realizes the image and inverse image of a
//! marked language without touching its state set.

use crate::alphabet::{Alphabet, EventId, Word};
use crate::error::{Error, Result};
use crate::nfa::{Nfa, StateId};

/// Marker appended to a base token to form its primed copy. User-facing
/// alphabets may not contain it, keeping primed copies collision-free.
pub const PRIME_MARKER: char = '\'';

/// A total map from a domain alphabet to a codomain alphabet extended with
/// the empty word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mask {
    domain: Alphabet,
    codomain: Alphabet,
    /// map[domain event id] = codomain event id, or None for the empty word.
    map: Vec<Option<EventId>>,
}

impl Mask {
    /// Builds a mask from (domain token, image) pairs; the image `None` is
    /// the empty word. Every domain event needs exactly one pair and every
    /// non-empty image must be a codomain event.
    pub fn new(
        domain: Alphabet,
        codomain: Alphabet,
        pairs: &[(&str, Option<&str>)],
    ) -> Result<Mask> {
        let mut map: Vec<Option<Option<EventId>>> = vec![None; domain.len()];
        for &(from, to) in pairs {
            let f = domain.require(from)?;
            let image = match to {
                Some(tok) => Some(codomain.require(tok).map_err(|_| {
                    Error::input(format!("mask image '{tok}' is not in the codomain"))
                })?),
                None => None,
            };
            if let Some(prev) = map[f].replace(image) {
                if prev != image {
                    return Err(Error::input(format!(
                        "conflicting mask images for event '{from}'"
                    )));
                }
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(id, entry)| {
                entry.ok_or_else(|| {
                    Error::input(format!(
                        "mask is not total: event '{}' has no image",
                        domain.event(id)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Mask {
            domain,
            codomain,
            map,
        })
    }

    /// Natural projection keeping `observable` events and erasing the rest.
    pub fn projection(domain: &Alphabet, observable: &[&str]) -> Result<Mask> {
        for tok in observable {
            domain.require(tok)?;
        }
        let codomain = Alphabet::new(observable.iter().copied())?;
        let map = domain
            .ids()
            .map(|id| codomain.index_of(domain.event(id)))
            .collect();
        Ok(Mask {
            domain: domain.clone(),
            codomain,
            map,
        })
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    /// Image of a domain event, `None` meaning the empty word.
    pub fn image_of(&self, event: EventId) -> Option<EventId> {
        self.map[event]
    }

    /// True when the mask keeps every event of its domain fixed.
    pub fn is_identity(&self) -> bool {
        self.codomain == self.domain && self.domain.ids().all(|e| self.map[e] == Some(e))
    }

    /// Letterwise image of a word; erased letters disappear.
    pub fn mask_word(&self, word: &Word) -> Result<Word> {
        let ids = word.ids(&self.domain)?;
        let mut out = Word::empty();
        for e in ids {
            if let Some(img) = self.map[e] {
                out.push(self.codomain.event(img));
            }
        }
        Ok(out)
    }

    /// Automaton over the codomain marking the image of the marked language:
    /// each transition is relabeled by the image of its event, erased events
    /// becoming epsilon transitions. States are untouched.
    pub fn image(&self, a: &Nfa) -> Result<Nfa> {
        if a.alphabet() != &self.domain {
            return Err(Error::input(
                "mask image requires the automaton alphabet to equal the mask domain",
            ));
        }
        let n = a.num_states();
        let mut delta: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); self.codomain.len()]; n];
        let mut eps: Vec<Vec<StateId>> = (0..n)
            .map(|s| a.eps_successors(s).to_vec())
            .collect();
        for (src, event, dst) in a.transitions() {
            match event {
                None => {}
                Some(e) => match self.map[e] {
                    Some(img) => delta[src][img].push(dst),
                    None => eps[src].push(dst),
                },
            }
        }
        for row in &mut delta {
            for targets in row.iter_mut() {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        for targets in &mut eps {
            targets.sort_unstable();
            targets.dedup();
        }
        Ok(Nfa::from_parts(
            self.codomain.clone(),
            a.names().to_vec(),
            delta,
            eps,
            a.initial().to_vec(),
            a.marked().to_vec(),
        ))
    }

    /// Automaton over the domain marking the inverse image of the marked
    /// language: each codomain transition becomes one transition per
    /// preimage event, and every state outside `skip_self_loops_on` gets a
    /// self-loop for each erased domain event. Epsilon transitions of the
    /// input are kept.
    pub fn inverse(&self, a: &Nfa, skip_self_loops_on: &[StateId]) -> Result<Nfa> {
        if a.alphabet() != &self.codomain {
            return Err(Error::input(
                "mask inverse requires the automaton alphabet to equal the mask codomain",
            ));
        }
        for &s in skip_self_loops_on {
            if s >= a.num_states() {
                return Err(Error::input(format!("state id {s} out of range")));
            }
        }
        let n = a.num_states();
        let mut delta: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); self.domain.len()]; n];
        let eps: Vec<Vec<StateId>> = (0..n).map(|s| a.eps_successors(s).to_vec()).collect();
        for (src, event, dst) in a.transitions() {
            let Some(img) = event else { continue };
            for x in self.domain.ids() {
                if self.map[x] == Some(img) {
                    delta[src][x].push(dst);
                }
            }
        }
        let erased: Vec<EventId> = self.domain.ids().filter(|&x| self.map[x].is_none()).collect();
        for s in 0..n {
            if skip_self_loops_on.contains(&s) {
                continue;
            }
            for &x in &erased {
                delta[s][x].push(s);
            }
        }
        for row in &mut delta {
            for targets in row.iter_mut() {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Ok(Nfa::from_parts(
            self.domain.clone(),
            a.names().to_vec(),
            delta,
            eps,
            a.initial().to_vec(),
            a.marked().to_vec(),
        ))
    }
}

/// A base alphabet together with its primed copy and their union. The primed
/// copy of token `t` is `t'`; priming preserves lexicographic order because
/// the marker sorts below every printable token character that may follow a
/// common prefix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimedAlphabet {
    base: Alphabet,
    primed: Alphabet,
    combined: Alphabet,
}

impl PrimedAlphabet {
    /// Builds the primed copy of `base`; base tokens containing the prime
    /// marker are an input error since their primed copies could collide.
    pub fn new(base: &Alphabet) -> Result<PrimedAlphabet> {
        for tok in base.iter() {
            if tok.contains(PRIME_MARKER) {
                return Err(Error::input(format!(
                    "event '{tok}' contains the reserved prime marker '{PRIME_MARKER}'"
                )));
            }
        }
        let primed = Alphabet::new(base.iter().map(|t| format!("{t}{PRIME_MARKER}")))?;
        let combined = base.union(&primed);
        Ok(PrimedAlphabet {
            base: base.clone(),
            primed,
            combined,
        })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn primed(&self) -> &Alphabet {
        &self.primed
    }

    /// The union alphabet of base and primed tokens.
    pub fn combined(&self) -> &Alphabet {
        &self.combined
    }

    pub fn primed_token(&self, base_token: &str) -> String {
        format!("{base_token}{PRIME_MARKER}")
    }

    /// Base partner of a combined-alphabet event id: primed events map to
    /// their base event, base events to themselves.
    pub fn base_of_combined(&self, event: EventId) -> EventId {
        let tok = self.combined.event(event);
        let base_tok = tok.strip_suffix(PRIME_MARKER).unwrap_or(tok);
        self.base
            .index_of(base_tok)
            .expect("combined events have base partners")
    }

    /// True when the combined-alphabet event is a primed token.
    pub fn is_primed(&self, event: EventId) -> bool {
        self.combined.event(event).ends_with(PRIME_MARKER)
    }

    /// Replaces every primed label by its base partner, leaving base labels
    /// unchanged; the result is an automaton over the base alphabet. The
    /// input must be over the combined alphabet.
    pub fn rename_primed(&self, a: &Nfa) -> Result<Nfa> {
        if a.alphabet() != &self.combined {
            return Err(Error::input(
                "primed renaming requires the combined base-and-primed alphabet",
            ));
        }
        let n = a.num_states();
        let mut delta: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); self.base.len()]; n];
        let eps: Vec<Vec<StateId>> = (0..n).map(|s| a.eps_successors(s).to_vec()).collect();
        for (src, event, dst) in a.transitions() {
            let Some(e) = event else { continue };
            delta[src][self.base_of_combined(e)].push(dst);
        }
        for row in &mut delta {
            for targets in row.iter_mut() {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Ok(Nfa::from_parts(
            self.base.clone(),
            a.names().to_vec(),
            delta,
            eps,
            a.initial().to_vec(),
            a.marked().to_vec(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Word;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn projection_maps_observable_identically() {
        let p = Mask::projection(&abc(), &["a", "b"]).unwrap();
        let w = Word::of(&["a", "c", "b", "c", "c"]);
        assert_eq!(p.mask_word(&w).unwrap(), Word::of(&["a", "b"]));
        assert!(!p.is_identity());
    }

    #[test]
    fn projection_with_nothing_observable_erases_everything() {
        let p = Mask::projection(&abc(), &[]).unwrap();
        assert!(p.codomain().is_empty());
        assert_eq!(
            p.mask_word(&Word::of(&["a", "b", "c"])).unwrap(),
            Word::empty()
        );
    }

    #[test]
    fn identity_projection_detected() {
        let p = Mask::projection(&abc(), &["a", "b", "c"]).unwrap();
        assert!(p.is_identity());
    }

    #[test]
    fn general_mask_merges_and_erases() {
        let codomain = Alphabet::new(["x"]).unwrap();
        let m = Mask::new(
            abc(),
            codomain,
            &[("a", Some("x")), ("b", Some("x")), ("c", None)],
        )
        .unwrap();
        assert_eq!(
            m.mask_word(&Word::of(&["a", "c", "b"])).unwrap(),
            Word::of(&["x", "x"])
        );
    }

    #[test]
    fn mask_requires_totality() {
        let codomain = Alphabet::new(["x"]).unwrap();
        let err = Mask::new(abc(), codomain, &[("a", Some("x")), ("b", Some("x"))]).unwrap_err();
        assert!(err.to_string().contains("not total"));
    }

    #[test]
    fn mask_rejects_foreign_image() {
        let codomain = Alphabet::new(["x"]).unwrap();
        assert!(Mask::new(
            abc(),
            codomain,
            &[("a", Some("y")), ("b", Some("x")), ("c", None)]
        )
        .is_err());
    }

    /// One path marking {ac}; the projection erases c.
    fn ac_path() -> Nfa {
        let mut b = Nfa::builder(abc());
        let s0 = b.add_state("0").unwrap();
        let s1 = b.add_state("1").unwrap();
        let s2 = b.add_state("2").unwrap();
        b.add_transition(s0, Some("a"), s1).unwrap();
        b.add_transition(s1, Some("c"), s2).unwrap();
        b.set_initial(s0).unwrap();
        b.set_marked(s2).unwrap();
        b.build()
    }

    #[test]
    fn image_relabels_and_introduces_epsilon() {
        let p = Mask::projection(&abc(), &["a", "b"]).unwrap();
        let img = p.image(&ac_path()).unwrap();
        assert_eq!(img.alphabet(), p.codomain());
        assert_eq!(img.num_states(), 3);
        assert!(img.accepts(&Word::of(&["a"])).unwrap());
        assert!(!img.accepts(&Word::empty()).unwrap());
    }

    #[test]
    fn inverse_adds_self_loops_everywhere_by_default() {
        let p = Mask::projection(&abc(), &["a", "b"]).unwrap();
        let img = p.image(&ac_path()).unwrap();
        let inv = p.inverse(&img, &[]).unwrap();
        // P^{-1}(P({ac})) = c* a c*.
        assert!(inv.accepts(&Word::of(&["a"])).unwrap());
        assert!(inv.accepts(&Word::of(&["c", "a", "c", "c"])).unwrap());
        assert!(!inv.accepts(&Word::of(&["a", "a"])).unwrap());
        assert!(!inv.accepts(&Word::of(&["b"])).unwrap());
    }

    #[test]
    fn inverse_skips_self_loops_on_listed_states() {
        // Direct codomain automaton marking {a}, no epsilon shadows.
        let p = Mask::projection(&abc(), &["a", "b"]).unwrap();
        let mut b = Nfa::builder(p.codomain().clone());
        let s0 = b.add_state("0").unwrap();
        let s1 = b.add_state("1").unwrap();
        b.add_transition(s0, Some("a"), s1).unwrap();
        b.set_initial(s0).unwrap();
        b.set_marked(s1).unwrap();
        let img = b.build();

        let inv_skip = p.inverse(&img, &[s1]).unwrap();
        // The erased event loops on 0 but not on the marked state 1.
        assert!(inv_skip.accepts(&Word::of(&["c", "a"])).unwrap());
        assert!(!inv_skip.accepts(&Word::of(&["a", "c"])).unwrap());
        assert!(p.inverse(&img, &[9]).is_err());
    }

    #[test]
    fn image_then_inverse_respects_mask_word_membership() {
        let p = Mask::projection(&abc(), &["a", "b"]).unwrap();
        let a = ac_path();
        let img = p.image(&a).unwrap();
        let inv = p.inverse(&img, &[]).unwrap();
        // w is in the inverse image iff P(w) is in the image.
        for w in [
            Word::empty(),
            Word::of(&["a"]),
            Word::of(&["c", "c", "a"]),
            Word::of(&["a", "b"]),
            Word::of(&["b", "a"]),
        ] {
            let masked = p.mask_word(&w).unwrap();
            assert_eq!(
                inv.accepts(&w).unwrap(),
                img.accepts(&masked).unwrap(),
                "word {w}"
            );
        }
    }

    #[test]
    fn primed_alphabet_orders_and_renames() {
        let base = Alphabet::new(["a", "b"]).unwrap();
        let p = PrimedAlphabet::new(&base).unwrap();
        assert_eq!(
            p.combined().iter().collect::<Vec<_>>(),
            vec!["a", "a'", "b", "b'"]
        );
        assert!(p.is_primed(p.combined().index_of("a'").unwrap()));
        assert!(!p.is_primed(p.combined().index_of("a").unwrap()));

        let mut b = Nfa::builder(p.combined().clone());
        let s0 = b.add_state("0").unwrap();
        let s1 = b.add_state("1").unwrap();
        b.add_transition(s0, Some("a'"), s1).unwrap();
        b.add_transition(s0, Some("b"), s0).unwrap();
        b.set_initial(s0).unwrap();
        b.set_marked(s1).unwrap();
        let renamed = p.rename_primed(&b.build()).unwrap();
        assert_eq!(renamed.alphabet(), &base);
        assert!(renamed.accepts(&Word::of(&["a"])).unwrap());
        assert!(renamed.accepts(&Word::of(&["b", "a"])).unwrap());
    }

    #[test]
    fn primed_alphabet_rejects_marker_in_base() {
        let base = Alphabet::new(["a", "x'"]).unwrap();
        assert!(PrimedAlphabet::new(&base).is_err());
    }
}
