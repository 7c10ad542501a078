//! Infimal prefix-closed superlanguage constructions.
//!
//! The observable case follows an eight-step pipeline: close the input under
//! prefixes, pack all right quotients into the primed quotient-union
//! automaton, apply the combined mask h (the observation mask on base
//! events, the identity on primed events) forwards and backwards with
//! self-loops suppressed on the sink, rename primed labels back, determinize,
//! adjoin the empty word through a fresh initial state, and keep the supremal
//! prefix-closed part. A literal per-event reference evaluation and a bounded
//! word-set fixpoint act as independent cross-checks; the controllable case
//! appends arbitrary uncontrollable suffixes.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, EventId, Word};
use crate::closure::{
    is_prefix_closed_dfa, prefix_closure, quotient_union_primed, supremal_prefix_closed,
    QuotientUnionDfa,
};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::mask::{Mask, PrimedAlphabet, PRIME_MARKER};
use crate::nfa::{Nfa, StateId};

/// Events treated as uncontrollable, validated against an alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UncontrollableSet {
    alphabet: Alphabet,
    events: Vec<EventId>,
}

impl UncontrollableSet {
    pub fn new<'a>(alphabet: &Alphabet, tokens: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut events: Vec<EventId> = tokens
            .into_iter()
            .map(|t| alphabet.require(t))
            .collect::<Result<_>>()?;
        events.sort_unstable();
        events.dedup();
        Ok(UncontrollableSet {
            alphabet: alphabet.clone(),
            events,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains(&self, e: EventId) -> bool {
        self.events.binary_search(&e).is_ok()
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }
}

/// State counts observed along the observable-case pipeline.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InfOStats {
    /// States of the input automaton as given.
    pub input_states: usize,
    /// States of the relabeled quotient-union NFA fed to determinization.
    pub gh_nfa_states: usize,
    /// Reachable subset-automaton states before the empty-word union.
    pub subset_states: usize,
    /// Marked subset-automaton states before the empty-word union.
    pub marked_subsets: usize,
    /// States of the final minimal automaton.
    pub final_states: usize,
}

/// Result of the observable-case construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InfOResult {
    pub dfa: Dfa,
    pub stats: InfOStats,
}

/// Relabels the quotient-union automaton with the combined mask h that acts
/// as `m` on base events and identically on primed events, takes the inverse
/// image with erased-event self-loops everywhere except the sink, and
/// renames primed labels to their base partners. The result is an NFA over
/// the base alphabet with the same states as the input.
pub fn build_gh_nfa(
    q: &QuotientUnionDfa,
    m: &Mask,
    primed: &PrimedAlphabet,
) -> Result<Nfa> {
    if q.dfa.alphabet() != primed.combined() {
        return Err(Error::input(
            "quotient-union automaton must be over the combined base-and-primed alphabet",
        ));
    }
    if m.domain() != primed.base() {
        return Err(Error::input(
            "mask domain must equal the base alphabet",
        ));
    }
    for tok in m.codomain().iter() {
        if tok.contains(PRIME_MARKER) {
            return Err(Error::input(format!(
                "mask codomain event '{tok}' contains the reserved prime marker"
            )));
        }
    }

    let h_codomain = m.codomain().union(primed.primed());
    let mut pairs: Vec<(String, Option<String>)> = Vec::new();
    for tok in primed.combined().iter() {
        if tok.ends_with(PRIME_MARKER) {
            pairs.push((tok.to_string(), Some(tok.to_string())));
        } else {
            let base_id = primed.base().require(tok)?;
            let image = m.image_of(base_id).map(|c| m.codomain().event(c).to_string());
            pairs.push((tok.to_string(), image));
        }
    }
    let pair_refs: Vec<(&str, Option<&str>)> = pairs
        .iter()
        .map(|(f, t)| (f.as_str(), t.as_deref()))
        .collect();
    let h = Mask::new(primed.combined().clone(), h_codomain, &pair_refs)?;

    let image = h.image(&q.dfa.to_nfa())?;
    let inverse = h.inverse(&image, &[q.sink])?;
    primed.rename_primed(&inverse)
}

/// Adjoins the empty word: a fresh marked initial state receives copies of
/// the old initial state's outgoing transitions. Adds exactly one state.
pub fn add_epsilon_union(d: &Dfa) -> Dfa {
    let n = d.num_states();
    let mut names = d.names().to_vec();
    let mut candidate = String::from("I");
    let mut suffix = 1usize;
    while names.iter().any(|x| x == &candidate) {
        candidate = format!("I{suffix}");
        suffix += 1;
    }
    names.push(candidate);

    let mut delta: Vec<Vec<Option<StateId>>> = (0..n)
        .map(|s| d.alphabet().ids().map(|e| d.successor(s, e)).collect())
        .collect();
    let fresh_row = match d.initial() {
        Some(i) => d.alphabet().ids().map(|e| d.successor(i, e)).collect(),
        None => vec![None; d.alphabet().len()],
    };
    delta.push(fresh_row);

    let mut marked = d.marked().to_vec();
    marked.push(n);
    Dfa::from_parts(d.alphabet().clone(), names, delta, Some(n), marked)
}

/// Infimal prefix-closed language over the base alphabet that contains the
/// marked language of `k` and is observable under `m` with respect to all
/// words. The result automaton is minimal; the stats record the pipeline's
/// intermediate state counts.
pub fn inf_o(k: &Dfa, m: &Mask) -> Result<InfOResult> {
    if m.domain() != k.alphabet() {
        return Err(Error::input(
            "mask domain must equal the input alphabet",
        ));
    }
    let kbar = prefix_closure(k);
    if kbar.num_states() == 0 {
        return Ok(InfOResult {
            dfa: Dfa::empty(k.alphabet().clone()),
            stats: InfOStats {
                input_states: k.num_states(),
                gh_nfa_states: 0,
                subset_states: 0,
                marked_subsets: 0,
                final_states: 0,
            },
        });
    }
    let primed = PrimedAlphabet::new(k.alphabet())?;
    let qu = quotient_union_primed(&kbar, &primed)?;
    let gh = build_gh_nfa(&qu, m, &primed)?;
    let gh_nfa_states = gh.num_states();
    let det = gh.determinize();
    let subset_states = det.num_states();
    let marked_subsets = det.marked().len();
    let with_eps = add_epsilon_union(&det);
    let sup = supremal_prefix_closed(&with_eps);
    let min = sup.minimize();
    let final_states = min.num_states();
    Ok(InfOResult {
        dfa: min,
        stats: InfOStats {
            input_states: k.num_states(),
            gh_nfa_states,
            subset_states,
            marked_subsets,
            final_states,
        },
    })
}

/// Two-state automaton marking all words that end with `event`.
pub fn all_words_ending_with(alphabet: &Alphabet, event: &str) -> Result<Dfa> {
    let e = alphabet.require(event)?;
    let mut delta = vec![vec![Some(0); alphabet.len()]; 2];
    delta[0][e] = Some(1);
    delta[1][e] = Some(1);
    Ok(Dfa::from_parts(
        alphabet.clone(),
        vec!["0".to_string(), "1".to_string()],
        delta,
        Some(0),
        vec![1],
    ))
}

/// Reference evaluation of the observable case, one event at a time with
/// generic operations only: for every event e it builds the inverse image of
/// the image of closure(K)·e intersected with closure(K), restricts to words
/// ending in e, unions the results with the empty word, and keeps the
/// supremal prefix-closed part. Shares no construction with [`inf_o`] beyond
/// the primitive automata operations.
pub fn inf_o_reference(k: &Dfa, m: &Mask) -> Result<Dfa> {
    if m.domain() != k.alphabet() {
        return Err(Error::input(
            "mask domain must equal the input alphabet",
        ));
    }
    let kbar = prefix_closure(k);
    if kbar.num_states() == 0 {
        return Ok(Dfa::empty(k.alphabet().clone()));
    }
    let alphabet = k.alphabet().clone();
    let mut parts: Vec<Nfa> = Vec::new();
    for e in alphabet.ids() {
        let tok = alphabet.event(e);
        let ke = kbar.append_event(tok)?.determinize();
        let inter = ke.product_intersection(&kbar)?;
        let image = m.image(&inter.to_nfa())?.determinize();
        let inverse = m.inverse(&image.to_nfa(), &[])?.determinize();
        let ending = inverse.product_intersection(&all_words_ending_with(&alphabet, tok)?)?;
        parts.push(ending.to_nfa());
    }
    let unioned = if parts.is_empty() {
        Dfa::empty(alphabet.clone())
    } else {
        Nfa::union_all(&parts)?.determinize()
    };
    let with_eps = add_epsilon_union(&unioned);
    Ok(supremal_prefix_closed(&with_eps).minimize())
}

/// Infimal prefix-closed controllable superlanguage closure(K)·Σu*: the
/// prefix-closure automaton plus one fresh marked tail state receiving every
/// missing uncontrollable transition and looping on uncontrollable events.
/// The result is minimal.
pub fn inf_c(k: &Dfa, u: &UncontrollableSet) -> Result<Dfa> {
    if u.alphabet() != k.alphabet() {
        return Err(Error::input(
            "uncontrollable set must be over the input alphabet",
        ));
    }
    let kbar = prefix_closure(k);
    let n = kbar.num_states();
    if n == 0 {
        return Ok(Dfa::empty(k.alphabet().clone()));
    }
    let tail = n;
    let mut names = kbar.names().to_vec();
    names.push(crate::dfa::fresh_name(&names, n));
    let mut delta: Vec<Vec<Option<StateId>>> = (0..n)
        .map(|s| k.alphabet().ids().map(|e| kbar.successor(s, e)).collect())
        .collect();
    delta.push(vec![None; k.alphabet().len()]);
    for &e in u.events() {
        for row in delta.iter_mut().take(n) {
            if row[e].is_none() {
                row[e] = Some(tail);
            }
        }
        delta[tail][e] = Some(tail);
    }
    let marked: Vec<StateId> = (0..=n).collect();
    let dfa = Dfa::from_parts(k.alphabet().clone(), names, delta, kbar.initial(), marked);
    Ok(dfa.minimize())
}

/// Prefix-closed automaton for the generated language of `g`: all reachable
/// states marked, unreachable states dropped.
pub fn generated_language_dfa(g: &Dfa) -> Dfa {
    let reach = g.reachable();
    let restricted = g.restrict(&reach);
    let all: Vec<StateId> = (0..restricted.num_states()).collect();
    let delta = (0..restricted.num_states())
        .map(|s| {
            g.alphabet()
                .ids()
                .map(|e| restricted.successor(s, e))
                .collect()
        })
        .collect();
    Dfa::from_parts(
        g.alphabet().clone(),
        restricted.names().to_vec(),
        delta,
        restricted.initial(),
        all,
    )
}

/// Infimal prefix-closed, controllable and observable superlanguage of K
/// within the generated language of `g`: the observable case applied to the
/// controllable case, intersected with L(g), minimized.
pub fn inf_co(k: &Dfa, g: &Dfa, u: &UncontrollableSet, m: &Mask) -> Result<Dfa> {
    if g.alphabet() != k.alphabet() {
        return Err(Error::input(
            "plant and specification must share one alphabet",
        ));
    }
    let controllable = inf_c(k, u)?;
    let observable = inf_o(&controllable, m)?.dfa;
    let plant = generated_language_dfa(g);
    Ok(observable.product_intersection(&plant)?.minimize())
}

/// Upper limit on the fixpoint oracle's word length imposed by its packed
/// word representation.
pub const FIXPOINT_MAX_WORK_LEN: usize = 16;
/// Upper limit on alphabet sizes in the fixpoint oracle.
pub const FIXPOINT_MAX_EVENTS: usize = 15;

/// Bounded word-set fixpoint for the observable case, independent of every
/// automaton construction: starting from the words of closure(K) up to
/// `work_len`, it repeatedly adds s'e whenever s and s' are in the set with
/// equal mask images, se is in the set, and |s'e| <= work_len, closing under
/// prefixes, and finally returns the words of length at most `check_len`.
///
/// `work_len` defaults to `check_len` plus the state count of `k`. The
/// returned set is always a subset of the true infimal language restricted
/// to `check_len`; too small a `work_len` can lose words, never add them.
/// Supports at most [`FIXPOINT_MAX_EVENTS`] events in the mask domain and
/// codomain and a `work_len` of at most [`FIXPOINT_MAX_WORK_LEN`].
pub fn inf_o_fixpoint_bounded(
    k: &Dfa,
    m: &Mask,
    check_len: usize,
    work_len: Option<usize>,
) -> Result<BTreeSet<Word>> {
    if m.domain() != k.alphabet() {
        return Err(Error::input(
            "mask domain must equal the input alphabet",
        ));
    }
    let work = work_len.unwrap_or(check_len + k.num_states());
    if work < check_len {
        return Err(Error::input(format!(
            "work length {work} is below check length {check_len}"
        )));
    }
    if work > FIXPOINT_MAX_WORK_LEN {
        return Err(Error::input(format!(
            "work length {work} exceeds the supported maximum {FIXPOINT_MAX_WORK_LEN}"
        )));
    }
    let alphabet = k.alphabet();
    if alphabet.len() > FIXPOINT_MAX_EVENTS || m.codomain().len() > FIXPOINT_MAX_EVENTS {
        return Err(Error::input(format!(
            "fixpoint oracle supports at most {FIXPOINT_MAX_EVENTS} events"
        )));
    }

    let kbar = prefix_closure(k);
    let mut set: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let mut queue: VecDeque<u64> = VecDeque::new();
    if let Some(start) = kbar.initial() {
        collect_packed(&kbar, start, 0, 0, work, &mut set, &mut queue);
    }

    // image map: event nibble -> codomain event id, or erased.
    let image: Vec<Option<usize>> = alphabet.ids().map(|e| m.image_of(e)).collect();

    struct Group {
        members: Vec<u64>,
        enabled: u16,
    }
    let mut group_index: HashMap<u64, usize> = HashMap::new();
    let mut groups: Vec<Group> = Vec::new();

    while let Some(word) = queue.pop_front() {
        let len = packed_len(word);
        let mut additions: Vec<u64> = Vec::new();

        // The word joins its observation group and inherits its extensions.
        let key = packed_image(word, &image);
        let gid = *group_index.entry(key).or_insert_with(|| {
            groups.push(Group {
                members: Vec::new(),
                enabled: 0,
            });
            groups.len() - 1
        });
        if len < work {
            let enabled = groups[gid].enabled;
            for e in alphabet.ids() {
                if enabled & (1 << e) != 0 {
                    additions.push(packed_push(word, e, len));
                }
            }
        }
        groups[gid].members.push(word);

        // The word witnesses an extension of its parent's group.
        if len > 0 {
            let (parent, e) = packed_split_last(word);
            let pkey = packed_image(parent, &image);
            let pgid = group_index[&pkey];
            let bit = 1u16 << e;
            if groups[pgid].enabled & bit == 0 {
                groups[pgid].enabled |= bit;
                for &member in &groups[pgid].members {
                    if packed_len(member) < work {
                        additions.push(packed_push(member, e, packed_len(member)));
                    }
                }
            }
        }

        for w in additions {
            if set.insert(w) {
                queue.push_back(w);
            }
        }
    }

    let mut out = BTreeSet::new();
    for &w in &set {
        if packed_len(w) <= check_len {
            out.insert(unpack_word(w, alphabet));
        }
    }
    Ok(out)
}

fn collect_packed(
    kbar: &Dfa,
    state: StateId,
    word: u64,
    len: usize,
    work: usize,
    set: &mut std::collections::HashSet<u64>,
    queue: &mut VecDeque<u64>,
) {
    if set.insert(word) {
        queue.push_back(word);
    }
    if len == work {
        return;
    }
    for e in kbar.alphabet().ids() {
        if let Some(next) = kbar.successor(state, e) {
            collect_packed(
                kbar,
                next,
                packed_push(word, e, len),
                len + 1,
                work,
                set,
                queue,
            );
        }
    }
}

fn packed_len(word: u64) -> usize {
    ((64 - word.leading_zeros() as usize) + 3) / 4
}

fn packed_push(word: u64, event: usize, len: usize) -> u64 {
    word | ((event as u64 + 1) << (4 * len))
}

fn packed_split_last(word: u64) -> (u64, usize) {
    let len = packed_len(word);
    let shift = 4 * (len - 1);
    let nibble = (word >> shift) & 0xF;
    (word & !(0xF << shift), nibble as usize - 1)
}

fn packed_image(word: u64, image: &[Option<usize>]) -> u64 {
    let len = packed_len(word);
    let mut out = 0u64;
    let mut out_len = 0usize;
    for i in 0..len {
        let event = ((word >> (4 * i)) & 0xF) as usize - 1;
        if let Some(img) = image[event] {
            out = packed_push(out, img, out_len);
            out_len += 1;
        }
    }
    out
}

fn unpack_word(word: u64, alphabet: &Alphabet) -> Word {
    let len = packed_len(word);
    let mut out = Word::empty();
    for i in 0..len {
        let event = ((word >> (4 * i)) & 0xF) as usize - 1;
        out.push(alphabet.event(event));
    }
    out
}

/// Bounded observability check of a prefix-closed marked language: searches
/// for events e and words s, s' of the language with equal mask images where
/// se stays in the language but s'e does not, with |s'e| <= len. Witnesses s
/// are drawn from the language up to `len`. A non-prefix-closed input is an
/// input error; the check is one-sided, longer witnesses stay unexamined.
pub fn is_observable_bounded(l: &Dfa, m: &Mask, len: usize) -> Result<bool> {
    if m.domain() != l.alphabet() {
        return Err(Error::input(
            "mask domain must equal the language alphabet",
        ));
    }
    if !is_prefix_closed_dfa(l) {
        return Err(Error::input(
            "observability is checked on prefix-closed languages",
        ));
    }
    let words = l.enumerate(len);
    let mut groups: HashMap<Word, Vec<&Word>> = HashMap::new();
    for w in &words {
        groups.entry(m.mask_word(w)?).or_default().push(w);
    }
    for members in groups.values() {
        for e in l.alphabet().ids() {
            let tok = l.alphabet().event(e);
            let mut extension_exists = false;
            let mut blocked_short_exists = false;
            for &s in members {
                let mut se = s.clone();
                se.push(tok);
                if l.accepts(&se)? {
                    extension_exists = true;
                } else if s.len() < len {
                    blocked_short_exists = true;
                }
                if extension_exists && blocked_short_exists {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
