//! Deterministic finite automata with partial transition functions.
//!
//! A missing transition means the word leaves the language domain; there is
//! no dead sink unless a construction puts one there. State counts therefore
//! refer to partial automata throughout. The empty language is the automaton
//! with zero states and no initial state, and every operation accepts it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{Alphabet, EventId, Word};
use crate::error::{Error, Result};
use crate::nfa::{Nfa, StateId};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dfa {
    alphabet: Alphabet,
    names: Vec<String>,
    /// delta[state][event] = target, when defined.
    delta: Vec<Vec<Option<StateId>>>,
    initial: Option<StateId>,
    marked: Vec<StateId>,
}

/// Incremental constructor for [`Dfa`]. Re-adding an identical transition is
/// fine; two different targets for one (state, event) pair are rejected.
pub struct DfaBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    name_index: HashMap<String, StateId>,
    delta: Vec<Vec<Option<StateId>>>,
    initial: Option<StateId>,
    marked: BTreeSet<StateId>,
}

impl DfaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        DfaBuilder {
            alphabet,
            names: Vec::new(),
            name_index: HashMap::new(),
            delta: Vec::new(),
            initial: None,
            marked: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.name_index.contains_key(&name) {
            return Err(Error::input(format!("duplicate state name '{name}'")));
        }
        let id = self.names.len();
        self.name_index.insert(name.clone(), id);
        self.names.push(name);
        self.delta.push(vec![None; self.alphabet.len()]);
        Ok(id)
    }

    pub fn state(&mut self, name: &str) -> StateId {
        match self.name_index.get(name) {
            Some(&id) => id,
            None => self.add_state(name).expect("name checked absent"),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.name_index.get(name).copied()
    }

    pub fn add_transition(&mut self, src: StateId, label: &str, dst: StateId) -> Result<()> {
        let event = self.alphabet.require(label)?;
        self.add_transition_id(src, event, dst)
    }

    pub fn add_transition_id(&mut self, src: StateId, event: EventId, dst: StateId) -> Result<()> {
        self.check_state(src)?;
        self.check_state(dst)?;
        if event >= self.alphabet.len() {
            return Err(Error::input(format!("event id {event} out of range")));
        }
        match self.delta[src][event] {
            None => {
                self.delta[src][event] = Some(dst);
                Ok(())
            }
            Some(existing) if existing == dst => Ok(()),
            Some(existing) => Err(Error::input(format!(
                "conflicting transitions from state '{}' under '{}': to '{}' and '{}'",
                self.names[src],
                self.alphabet.event(event),
                self.names[existing],
                self.names[dst],
            ))),
        }
    }

    /// Sets the initial state; a second different initial state is an error.
    pub fn set_initial(&mut self, s: StateId) -> Result<()> {
        self.check_state(s)?;
        match self.initial {
            None => {
                self.initial = Some(s);
                Ok(())
            }
            Some(existing) if existing == s => Ok(()),
            Some(_) => Err(Error::input("a DFA has at most one initial state")),
        }
    }

    pub fn set_marked(&mut self, s: StateId) -> Result<()> {
        self.check_state(s)?;
        self.marked.insert(s);
        Ok(())
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s >= self.names.len() {
            return Err(Error::input(format!("state id {s} out of range")));
        }
        Ok(())
    }

    pub fn build(self) -> Dfa {
        Dfa {
            alphabet: self.alphabet,
            names: self.names,
            delta: self.delta,
            initial: self.initial,
            marked: self.marked.into_iter().collect(),
        }
    }
}

impl Dfa {
    pub fn builder(alphabet: Alphabet) -> DfaBuilder {
        DfaBuilder::new(alphabet)
    }

    /// The canonical empty-language automaton over `alphabet`.
    pub fn empty(alphabet: Alphabet) -> Dfa {
        Dfa {
            alphabet,
            names: Vec::new(),
            delta: Vec::new(),
            initial: None,
            marked: Vec::new(),
        }
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        delta: Vec<Vec<Option<StateId>>>,
        initial: Option<StateId>,
        marked: Vec<StateId>,
    ) -> Dfa {
        debug_assert_eq!(names.len(), delta.len());
        debug_assert!(delta.iter().all(|row| row.len() == alphabet.len()));
        debug_assert!(initial.map_or(true, |s| s < names.len()));
        Dfa {
            alphabet,
            names,
            delta,
            initial,
            marked,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn marked(&self) -> &[StateId] {
        &self.marked
    }

    pub fn is_marked(&self, s: StateId) -> bool {
        self.marked.binary_search(&s).is_ok()
    }

    pub fn successor(&self, s: StateId, event: EventId) -> Option<StateId> {
        self.delta[s][event]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        (0..self.num_states()).flat_map(move |s| {
            self.alphabet
                .ids()
                .filter_map(move |e| self.delta[s][e].map(|d| (s, e, d)))
        })
    }

    /// View of the same automaton as an NFA without epsilon transitions.
    pub fn to_nfa(&self) -> Nfa {
        let delta = self
            .delta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t.map_or(Vec::new(), |d| vec![d]))
                    .collect()
            })
            .collect();
        Nfa::from_parts(
            self.alphabet.clone(),
            self.names.clone(),
            delta,
            vec![Vec::new(); self.num_states()],
            self.initial.into_iter().collect(),
            self.marked.clone(),
        )
    }

    pub fn accepts(&self, word: &Word) -> Result<bool> {
        let ids = word.ids(&self.alphabet)?;
        let Some(mut state) = self.initial else {
            return Ok(false);
        };
        for e in ids {
            match self.delta[state][e] {
                Some(next) => state = next,
                None => return Ok(false),
            }
        }
        Ok(self.is_marked(state))
    }

    /// All marked words of length at most `maxlen`.
    pub fn enumerate(&self, maxlen: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let Some(start) = self.initial else {
            return out;
        };
        let mut prefix: Vec<&str> = Vec::new();
        self.enumerate_from(start, maxlen, &mut prefix, &mut out);
        out
    }

    fn enumerate_from<'a>(
        &'a self,
        state: StateId,
        remaining: usize,
        prefix: &mut Vec<&'a str>,
        out: &mut BTreeSet<Word>,
    ) {
        if self.is_marked(state) {
            out.insert(Word(prefix.iter().map(|t| t.to_string()).collect()));
        }
        if remaining == 0 {
            return;
        }
        for e in self.alphabet.ids() {
            if let Some(next) = self.delta[state][e] {
                prefix.push(self.alphabet.event(e));
                self.enumerate_from(next, remaining - 1, prefix, out);
                prefix.pop();
            }
        }
    }

    /// States reachable from the initial state.
    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let Some(start) = self.initial else {
            return seen;
        };
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(s) = queue.pop_front() {
            for e in self.alphabet.ids() {
                if let Some(d) = self.delta[s][e] {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        seen
    }

    /// States from which some marked state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.num_states()];
        for (s, _, d) in self.transitions() {
            rev[d].push(s);
        }
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &m in &self.marked {
            if !seen[m] {
                seen[m] = true;
                queue.push_back(m);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// Restriction to the states where `keep` is true; the initial state is
    /// dropped when not kept. Names are preserved.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Dfa {
        let mut remap: Vec<Option<StateId>> = vec![None; self.num_states()];
        let mut names = Vec::new();
        for s in 0..self.num_states() {
            if keep[s] {
                remap[s] = Some(names.len());
                names.push(self.names[s].clone());
            }
        }
        let mut delta = vec![vec![None; self.alphabet.len()]; names.len()];
        for s in 0..self.num_states() {
            let Some(ns) = remap[s] else { continue };
            for e in self.alphabet.ids() {
                if let Some(d) = self.delta[s][e] {
                    delta[ns][e] = remap[d];
                }
            }
        }
        let initial = self.initial.and_then(|s| remap[s]);
        let marked = self
            .marked
            .iter()
            .filter_map(|&m| remap[m])
            .collect::<Vec<_>>();
        Dfa::from_parts(self.alphabet.clone(), names, delta, initial, marked)
    }

    /// Drops states that are unreachable or cannot reach a marked state.
    pub fn trim(&self) -> Dfa {
        let reach = self.reachable();
        let co = self.coreachable();
        let keep: Vec<bool> = (0..self.num_states()).map(|s| reach[s] && co[s]).collect();
        self.restrict(&keep)
    }

    /// Canonical minimal partial DFA for the marked language: trim, merge
    /// equivalent states, renumber breadth-first under the event order, and
    /// name states by their new numbers. Language-equivalent inputs over one
    /// alphabet produce structurally identical outputs.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim();
        let n = trimmed.num_states();
        if n == 0 {
            return Dfa::empty(self.alphabet.clone());
        }
        let k = self.alphabet.len();

        // Partition refinement over the trimmed automaton completed with an
        // implicit sink (class 0). No trimmed state is equivalent to the
        // sink: each one reaches a marked state while the sink reaches none.
        let sink = n;
        let mut class: Vec<usize> = (0..=n)
            .map(|s| {
                if s < n && trimmed.is_marked(s) {
                    1
                } else {
                    0
                }
            })
            .collect();
        // Marked states exist after trimming unless the language is empty.
        let mut num_classes = 2;
        loop {
            let mut signature_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class = vec![0usize; n + 1];
            for s in 0..=n {
                let row: Vec<usize> = (0..k)
                    .map(|e| {
                        if s == sink {
                            class[sink]
                        } else {
                            class[trimmed.delta[s][e].unwrap_or(sink)]
                        }
                    })
                    .collect();
                let len = signature_index.len();
                let id = *signature_index.entry((class[s], row)).or_insert(len);
                next_class[s] = id;
            }
            let new_count = signature_index.len();
            class = next_class;
            if new_count == num_classes {
                break;
            }
            num_classes = new_count;
        }

        let sink_class = class[sink];
        // Representative per class, skipping the sink class.
        let mut rep: HashMap<usize, StateId> = HashMap::new();
        for s in 0..n {
            rep.entry(class[s]).or_insert(s);
        }

        // Breadth-first renumbering from the initial class under event order.
        let init_class = class[trimmed.initial.expect("trimmed nonempty DFA has an initial state")];
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([init_class]);
        order.insert(init_class, 0);
        let mut bfs: Vec<usize> = vec![init_class];
        while let Some(c) = queue.pop_front() {
            let s = rep[&c];
            for e in 0..k {
                if let Some(d) = trimmed.delta[s][e] {
                    let dc = class[d];
                    if dc != sink_class && !order.contains_key(&dc) {
                        order.insert(dc, bfs.len());
                        bfs.push(dc);
                        queue.push_back(dc);
                    }
                }
            }
        }

        let m = bfs.len();
        let mut delta = vec![vec![None; k]; m];
        let mut marked = Vec::new();
        for (idx, &c) in bfs.iter().enumerate() {
            let s = rep[&c];
            for e in 0..k {
                if let Some(d) = trimmed.delta[s][e] {
                    // Every transition of a trimmed state leads to a trimmed
                    // state, whose class got a BFS number.
                    delta[idx][e] = Some(order[&class[d]]);
                }
            }
            if trimmed.is_marked(s) {
                marked.push(idx);
            }
        }
        marked.sort_unstable();
        let names = (0..m).map(|i| i.to_string()).collect();
        Dfa::from_parts(self.alphabet.clone(), names, delta, Some(0), marked)
    }

    /// Reachable product automaton marking the intersection of the two
    /// marked languages. Alphabets must be identical.
    pub fn product_intersection(&self, other: &Dfa) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::input(
                "product requires identical alphabets",
            ));
        }
        let (Some(i1), Some(i2)) = (self.initial, other.initial) else {
            return Ok(Dfa::empty(self.alphabet.clone()));
        };
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs: Vec<(StateId, StateId)> = vec![(i1, i2)];
        let mut names: Vec<String> = vec![format!("({},{})", self.names[i1], other.names[i2])];
        let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; self.alphabet.len()]];
        index.insert((i1, i2), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(id) = queue.pop_front() {
            let (p, q) = pairs[id];
            for e in self.alphabet.ids() {
                let (Some(dp), Some(dq)) = (self.delta[p][e], other.delta[q][e]) else {
                    continue;
                };
                let target = match index.get(&(dp, dq)) {
                    Some(&t) => t,
                    None => {
                        let t = pairs.len();
                        index.insert((dp, dq), t);
                        pairs.push((dp, dq));
                        names.push(format!("({},{})", self.names[dp], other.names[dq]));
                        delta.push(vec![None; self.alphabet.len()]);
                        queue.push_back(t);
                        t
                    }
                };
                delta[id][e] = Some(target);
            }
        }
        let marked: Vec<StateId> = (0..pairs.len())
            .filter(|&i| self.is_marked(pairs[i].0) && other.is_marked(pairs[i].1))
            .collect();
        Ok(Dfa::from_parts(
            self.alphabet.clone(),
            names,
            delta,
            Some(0),
            marked,
        ))
    }

    /// Automaton marking `L(self)·event`: a fresh state becomes the only
    /// marked one, entered from every previously marked state under `event`.
    /// The result is nondeterministic when a marked state already moves
    /// under `event`.
    pub fn append_event(&self, event: &str) -> Result<Nfa> {
        let e = self.alphabet.require(event)?;
        let mut delta: Vec<Vec<Vec<StateId>>> = self
            .delta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t.map_or(Vec::new(), |d| vec![d]))
                    .collect()
            })
            .collect();
        let fresh = self.num_states();
        delta.push(vec![Vec::new(); self.alphabet.len()]);
        for &m in &self.marked {
            let targets = &mut delta[m][e];
            targets.push(fresh);
            targets.sort_unstable();
        }
        let mut names = self.names.clone();
        names.push(fresh_name(&self.names, fresh));
        Ok(Nfa::from_parts(
            self.alphabet.clone(),
            names,
            delta,
            vec![Vec::new(); fresh + 1],
            self.initial.into_iter().collect(),
            vec![fresh],
        ))
    }

    /// Language equality via structural identity of the canonical minimal
    /// automata. Distinct alphabets are an input error, not inequality.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::input(
                "language comparison requires identical alphabets",
            ));
        }
        Ok(self.minimize() == other.minimize())
    }
}

/// First name from `start.to_string()`, `start+1`, ... not already used.
pub(crate) fn fresh_name(names: &[String], start: usize) -> String {
    let used: std::collections::HashSet<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut i = start;
    loop {
        let candidate = i.to_string();
        if !used.contains(candidate.as_str()) {
            return candidate;
        }
        i += 1;
    }
}
