//! Text formats for automata and masks, and DOT export.
//!
//! Automaton files are line-based. Full-line `#` comments and blank lines
//! are skipped. Directives:
//!
//! ```text
//! alphabet: a b c      # exactly once
//! states: 0 1 2        # optional; fixes state order for round-trips
//! initial: 0           # repeatable, tokens accumulate
//! marked: 0 2          # repeatable, tokens accumulate
//! trans: 0 a 1         # one transition; event `eps` only in nfa files
//! ```
//!
//! States not covered by a `states:` directive are created in order of first
//! appearance. Mask files have one `event -> image` line per domain event,
//! with `eps` as the erasing image; the map must be total on the domain.
//!
//! Serialization always writes the `states:` directive, so parse after
//! serialize reproduces the automaton exactly, and all output ordering is
//! deterministic.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, EventId, EPS_TOKEN};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::nfa::{Nfa, StateId};

struct RawAutomaton {
    alphabet: Alphabet,
    /// State names in declaration or first-appearance order.
    states: Vec<String>,
    initial: Vec<(usize, String)>,
    marked: Vec<(usize, String)>,
    /// (line, src, event token, dst)
    trans: Vec<(usize, String, String, String)>,
}

fn parse_raw(text: &str) -> Result<RawAutomaton> {
    let mut alphabet: Option<(usize, Alphabet)> = None;
    let mut declared: Option<Vec<String>> = None;
    let mut initial: Vec<(usize, String)> = Vec::new();
    let mut marked: Vec<(usize, String)> = Vec::new();
    let mut trans: Vec<(usize, String, String, String)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let head = parts.next().expect("nonempty line has a first token");
        let args: Vec<&str> = parts.collect();
        match head {
            "alphabet:" => {
                if alphabet.is_some() {
                    return Err(Error::format(line_no, "repeated alphabet directive"));
                }
                let a = Alphabet::new(args.iter().copied())
                    .map_err(|e| Error::format(line_no, e.to_string()))?;
                alphabet = Some((line_no, a));
            }
            "states:" => {
                if declared.is_some() {
                    return Err(Error::format(line_no, "repeated states directive"));
                }
                let mut names: Vec<String> = Vec::new();
                for tok in &args {
                    if names.iter().any(|n| n == tok) {
                        return Err(Error::format(
                            line_no,
                            format!("duplicate state '{tok}' in states directive"),
                        ));
                    }
                    names.push(tok.to_string());
                }
                declared = Some(names);
            }
            "initial:" => initial.extend(args.iter().map(|t| (line_no, t.to_string()))),
            "marked:" => marked.extend(args.iter().map(|t| (line_no, t.to_string()))),
            "trans:" => {
                if args.len() != 3 {
                    return Err(Error::format(
                        line_no,
                        format!(
                            "transition lines have the form 'trans: src event dst', got {} tokens",
                            args.len()
                        ),
                    ));
                }
                trans.push((
                    line_no,
                    args[0].to_string(),
                    args[1].to_string(),
                    args[2].to_string(),
                ));
            }
            other => {
                return Err(Error::format(
                    line_no,
                    format!("unknown directive '{other}'"),
                ));
            }
        }
    }

    let alphabet = match alphabet {
        Some((_, a)) => a,
        None => return Err(Error::format(1, "missing alphabet directive")),
    };

    // State order: the states directive when present, otherwise first
    // appearance across initial, marked, and transition lines.
    let states = match declared {
        Some(names) => {
            let check = |line: usize, tok: &str| -> Result<()> {
                if names.iter().any(|n| n == tok) {
                    Ok(())
                } else {
                    Err(Error::format(line, format!("unknown state '{tok}'")))
                }
            };
            for (line, tok) in initial.iter().chain(marked.iter()) {
                check(*line, tok)?;
            }
            for (line, src, _, dst) in &trans {
                check(*line, src)?;
                check(*line, dst)?;
            }
            names
        }
        None => {
            let mut names: Vec<String> = Vec::new();
            let push = |names: &mut Vec<String>, tok: &str| {
                if !names.iter().any(|n| n == tok) {
                    names.push(tok.to_string());
                }
            };
            for (_, tok) in initial.iter().chain(marked.iter()) {
                push(&mut names, tok);
            }
            for (_, src, _, dst) in &trans {
                push(&mut names, src);
                push(&mut names, dst);
            }
            names
        }
    };

    Ok(RawAutomaton {
        alphabet,
        states,
        initial,
        marked,
        trans,
    })
}

/// Parses an automaton file as an NFA; `eps` transitions are legal.
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    let raw = parse_raw(text)?;
    let mut b = Nfa::builder(raw.alphabet.clone());
    for name in &raw.states {
        b.add_state(name.clone())?;
    }
    for (line, tok) in &raw.initial {
        let s = b
            .lookup(tok)
            .ok_or_else(|| Error::format(*line, format!("unknown state '{tok}'")))?;
        b.set_initial(s).map_err(|e| Error::format(*line, e.to_string()))?;
    }
    for (line, tok) in &raw.marked {
        let s = b
            .lookup(tok)
            .ok_or_else(|| Error::format(*line, format!("unknown state '{tok}'")))?;
        b.set_marked(s).map_err(|e| Error::format(*line, e.to_string()))?;
    }
    for (line, src, event, dst) in &raw.trans {
        let s = b.lookup(src).expect("states gathered from transitions");
        let d = b.lookup(dst).expect("states gathered from transitions");
        let label = if event == EPS_TOKEN {
            None
        } else {
            if !raw.alphabet.contains(event) {
                return Err(Error::format(
                    *line,
                    format!("event '{event}' is not in the alphabet"),
                ));
            }
            Some(event.as_str())
        };
        b.add_transition(s, label, d)
            .map_err(|e| Error::format(*line, e.to_string()))?;
    }
    Ok(b.build())
}

/// Parses an automaton file as a DFA: at most one initial state, no `eps`
/// transitions, and no repeated (state, event) pair.
pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let raw = parse_raw(text)?;
    let mut b = Dfa::builder(raw.alphabet.clone());
    for name in &raw.states {
        b.add_state(name.clone())?;
    }
    for (line, tok) in &raw.initial {
        let s = b
            .lookup(tok)
            .ok_or_else(|| Error::format(*line, format!("unknown state '{tok}'")))?;
        b.set_initial(s).map_err(|e| Error::format(*line, e.to_string()))?;
    }
    for (line, tok) in &raw.marked {
        let s = b
            .lookup(tok)
            .ok_or_else(|| Error::format(*line, format!("unknown state '{tok}'")))?;
        b.set_marked(s).map_err(|e| Error::format(*line, e.to_string()))?;
    }
    let mut seen_pairs: HashMap<(StateId, EventId), usize> = HashMap::new();
    for (line, src, event, dst) in &raw.trans {
        if event == EPS_TOKEN {
            return Err(Error::format(
                *line,
                "epsilon transitions are only legal in nfa files",
            ));
        }
        if !raw.alphabet.contains(event) {
            return Err(Error::format(
                *line,
                format!("event '{event}' is not in the alphabet"),
            ));
        }
        let s = b.lookup(src).expect("states gathered from transitions");
        let d = b.lookup(dst).expect("states gathered from transitions");
        let e = raw.alphabet.require(event).expect("checked above");
        if let Some(first) = seen_pairs.insert((s, e), *line) {
            return Err(Error::format(
                *line,
                format!(
                    "duplicate transition from state '{src}' under '{event}' (first on line {first})"
                ),
            ));
        }
        b.add_transition(s, event, d)
            .map_err(|e| Error::format(*line, e.to_string()))?;
    }
    Ok(b.build())
}

/// Parses a mask file against a fixed domain alphabet. Each line maps one
/// domain event; images form the codomain, `eps` erases.
pub fn parse_mask(text: &str, domain: &Alphabet) -> Result<Mask> {
    let mut pairs: Vec<(String, Option<String>)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 || parts[1] != "->" {
            return Err(Error::format(
                line_no,
                "mask lines have the form 'event -> image'",
            ));
        }
        let from = parts[0];
        if !domain.contains(from) {
            return Err(Error::format(
                line_no,
                format!("event '{from}' is not in the domain alphabet"),
            ));
        }
        let image = if parts[2] == EPS_TOKEN {
            None
        } else {
            Some(parts[2].to_string())
        };
        if let Some((_, prev)) = pairs.iter().find(|(f, _)| f == from) {
            if prev.as_deref() != image.as_deref() {
                return Err(Error::format(
                    line_no,
                    format!("conflicting images for event '{from}'"),
                ));
            }
        }
        pairs.push((from.to_string(), image));
    }
    let codomain = Alphabet::new(
        pairs
            .iter()
            .filter_map(|(_, img)| img.clone())
            .collect::<std::collections::BTreeSet<String>>(),
    )?;
    let pair_refs: Vec<(&str, Option<&str>)> = pairs
        .iter()
        .map(|(f, t)| (f.as_str(), t.as_deref()))
        .collect();
    Mask::new(domain.clone(), codomain, &pair_refs)
}

fn serialize_common(
    alphabet: &Alphabet,
    names: &[String],
    initial: &[StateId],
    marked: &[StateId],
    trans_lines: &[String],
) -> String {
    let mut out = String::new();
    out.push_str("alphabet:");
    for tok in alphabet.iter() {
        out.push(' ');
        out.push_str(tok);
    }
    out.push('\n');
    out.push_str("states:");
    for name in names {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    out.push_str("initial:");
    for &s in initial {
        out.push(' ');
        out.push_str(&names[s]);
    }
    out.push('\n');
    out.push_str("marked:");
    for &s in marked {
        out.push(' ');
        out.push_str(&names[s]);
    }
    out.push('\n');
    for line in trans_lines {
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn serialize_nfa(a: &Nfa) -> String {
    let trans: Vec<String> = a
        .transitions()
        .map(|(s, e, d)| {
            let label = match e {
                Some(e) => a.alphabet().event(e),
                None => EPS_TOKEN,
            };
            format!("trans: {} {} {}", a.state_name(s), label, a.state_name(d))
        })
        .collect();
    serialize_common(a.alphabet(), a.names(), a.initial(), a.marked(), &trans)
}

pub fn serialize_dfa(a: &Dfa) -> String {
    let trans: Vec<String> = a
        .transitions()
        .map(|(s, e, d)| {
            format!(
                "trans: {} {} {}",
                a.state_name(s),
                a.alphabet().event(e),
                a.state_name(d)
            )
        })
        .collect();
    let initial: Vec<StateId> = a.initial().into_iter().collect();
    serialize_common(a.alphabet(), a.names(), &initial, a.marked(), &trans)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders an automaton in Graphviz DOT: marked states as double circles,
/// one entry arrow per initial state, parallel edges joined into one label.
/// Output is deterministic.
pub fn export_dot(a: &Nfa) -> String {
    let mut out = String::new();
    out.push_str("digraph automaton {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for (idx, &s) in a.initial().iter().enumerate() {
        out.push_str(&format!("  __start{idx} [shape=point, label=\"\"];\n"));
        out.push_str(&format!("  __start{idx} -> q{s};\n"));
    }
    for s in 0..a.num_states() {
        let shape = if a.is_marked(s) {
            ", shape=doublecircle"
        } else {
            ""
        };
        out.push_str(&format!(
            "  q{s} [label=\"{}\"{shape}];\n",
            dot_escape(a.state_name(s))
        ));
    }
    // Deterministic edge grouping: by (src, dst), labels in event order with
    // epsilon first.
    let mut grouped: Vec<((StateId, StateId), Vec<String>)> = Vec::new();
    for (s, e, d) in a.transitions() {
        let label = match e {
            Some(e) => a.alphabet().event(e).to_string(),
            None => "\u{03b5}".to_string(),
        };
        match grouped.iter_mut().find(|((gs, gd), _)| *gs == s && *gd == d) {
            Some((_, labels)) => labels.push(label),
            None => grouped.push(((s, d), vec![label])),
        }
    }
    grouped.sort_by_key(|((s, d), _)| (*s, *d));
    for ((s, d), labels) in grouped {
        out.push_str(&format!(
            "  q{s} -> q{d} [label=\"{}\"];\n",
            dot_escape(&labels.join(","))
        ));
    }
    out.push_str("}\n");
    out
}
