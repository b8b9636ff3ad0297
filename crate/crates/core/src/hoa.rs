//! HOA (Hanoi Omega-Automata) export and import for the chain's HD-NCWs.
//!
//! Acceptance is `Fin(0)` on transitions: rejecting transitions carry mark 0.
//! Two extra headers, `sltm-states` and `letters`, keep what the format has no
//! field for.

use std::fmt::Write as _;

use crate::alphabet::Letter;
use crate::cocoa::{HdNcw, Transition};
use crate::error::{Error, Result};

fn label(letter: Letter, aps: usize) -> String {
    (0..aps)
        .map(|i| if letter & (1 << i) != 0 { i.to_string() } else { format!("!{i}") })
        .collect::<Vec<_>>()
        .join("&")
}

pub fn to_hoa(c: &HdNcw, name: &str) -> String {
    let mut s = String::from("HOA: v1\n");
    let _ = writeln!(s, "name: \"{}\"", name.replace('"', "'"));
    let _ = writeln!(s, "States: {}", c.len());
    let _ = writeln!(s, "Start: {}", c.initial);
    let aps: Vec<String> = c.aps.iter().map(|a| format!("\"{a}\"")).collect();
    let _ = writeln!(s, "AP: {} {}", c.aps.len(), aps.join(" "));
    s.push_str("acc-name: co-Buchi\nAcceptance: 1 Fin(0)\n");
    s.push_str("properties: trans-labels explicit-labels trans-acc\n");
    let _ = writeln!(s, "sltm-states: {}", c.sltm_states);
    let letters: Vec<String> = c.letters.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(s, "letters: {}", letters.join(" "));
    s.push_str("--BODY--\n");
    for (q, row) in c.transitions.iter().enumerate() {
        let _ = writeln!(s, "State: {q}");
        for t in row {
            let mark = if t.accepting { "" } else { " {0}" };
            let _ = writeln!(s, "  [{}] {}{mark}", label(t.letter, c.aps.len()), t.to);
        }
    }
    s.push_str("--END--\n");
    s
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(format!("HOA: {}", msg.into()))
}

fn parse_num<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim().parse().map_err(|_| malformed(format!("bad {what} `{text}`")))
}

/// Letters satisfying a conjunction of literals such as `0&!1`, or `t`.
fn parse_label(text: &str, aps: usize, letters: &[Letter]) -> Result<Vec<Letter>> {
    let (mut pos, mut neg) = (0u32, 0u32);
    if text.trim() != "t" {
        for lit in text.split('&') {
            let lit = lit.trim();
            let (negated, idx) = match lit.strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, lit),
            };
            let i: usize = parse_num(idx, "label literal")?;
            if i >= aps {
                return Err(malformed(format!("AP {i} out of range")));
            }
            if negated {
                neg |= 1 << i;
            } else {
                pos |= 1 << i;
            }
        }
    }
    Ok(letters.iter().copied().filter(|&l| l & pos == pos && l & neg == 0).collect())
}

fn parse_aps(rest: &str) -> Result<Vec<String>> {
    let (count, names) = rest.trim().split_once(' ').unwrap_or((rest.trim(), ""));
    let count: usize = parse_num(count, "AP count")?;
    let aps: Vec<String> = names
        .split('"')
        .enumerate()
        .filter(|(i, _)| i % 2 == 1)
        .map(|(_, s)| s.to_string())
        .collect();
    if aps.len() != count {
        return Err(malformed("AP count does not match the names"));
    }
    Ok(aps)
}

/// Reads automata in the shape [`to_hoa`] writes: explicit transition labels
/// that are conjunctions of literals, and transition marks `{0}`.
pub fn parse_hoa(text: &str) -> Result<HdNcw> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next() != Some("HOA: v1") {
        return Err(malformed("missing `HOA: v1`"));
    }
    let (mut states, mut start, mut aps, mut sltm_states, mut letters) = (None, None, None, 0usize, None);
    let mut acceptance_ok = false;
    for line in lines.by_ref() {
        if line == "--BODY--" {
            break;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| malformed(format!("bad header `{line}`")))?;
        match key {
            "States" => states = Some(parse_num::<usize>(rest, "state count")?),
            "Start" => start = Some(parse_num::<u32>(rest, "start state")?),
            "AP" => aps = Some(parse_aps(rest)?),
            "Acceptance" => acceptance_ok = rest.split_whitespace().collect::<Vec<_>>() == ["1", "Fin(0)"],
            "sltm-states" => sltm_states = parse_num(rest, "sltm-states")?,
            "letters" => {
                letters = Some(
                    rest.split_whitespace()
                        .map(|l| parse_num::<Letter>(l, "letter"))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            _ => {}
        }
    }
    if !acceptance_ok {
        return Err(malformed("only `Acceptance: 1 Fin(0)` is supported"));
    }
    let states = states.ok_or_else(|| malformed("missing States"))?;
    let aps = aps.ok_or_else(|| malformed("missing AP"))?;
    if aps.len() > 16 {
        return Err(malformed("too many atomic propositions"));
    }
    let letters = letters.unwrap_or_else(|| (0..1u32 << aps.len()).collect());
    let mut transitions: Vec<Vec<Transition>> = vec![Vec::new(); states];
    let mut current: Option<usize> = None;
    let mut ended = false;
    for line in lines {
        if line == "--END--" {
            ended = true;
            break;
        }
        if let Some(rest) = line.strip_prefix("State:") {
            let q: usize = parse_num(rest.split_whitespace().next().unwrap_or(""), "state")?;
            if q >= states {
                return Err(malformed(format!("state {q} out of range")));
            }
            current = Some(q);
            continue;
        }
        let q = current.ok_or_else(|| malformed("edge before any State"))?;
        let body = line.strip_prefix('[').ok_or_else(|| malformed(format!("edge without label `{line}`")))?;
        let (lab, rest) = body.split_once(']').ok_or_else(|| malformed("unterminated label"))?;
        let (target, mark) = match rest.split_once('{') {
            Some((t, m)) => (t, Some(m.trim_end_matches('}').trim())),
            None => (rest, None),
        };
        let to: u32 = parse_num(target, "target")?;
        if to as usize >= states {
            return Err(malformed(format!("target {to} out of range")));
        }
        let accepting = match mark {
            None | Some("") => true,
            Some("0") => false,
            Some(m) => return Err(malformed(format!("unknown mark {{{m}}}"))),
        };
        for letter in parse_label(lab, aps.len(), &letters)? {
            transitions[q].push(Transition { letter, to, accepting });
        }
    }
    if !ended {
        return Err(malformed("missing --END--"));
    }
    let initial = start.ok_or_else(|| malformed("missing Start"))?;
    if initial as usize >= states {
        return Err(malformed("start state out of range"));
    }
    Ok(HdNcw {
        aps,
        letters,
        initial,
        sltm_states,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> HdNcw {
        HdNcw {
            aps: vec!["a".into(), "b".into()],
            letters: vec![0, 1, 2, 3],
            initial: 0,
            sltm_states: 1,
            transitions: vec![
                (0..4).map(|l| Transition { letter: l, to: 0, accepting: false }).collect(),
                vec![Transition { letter: 1, to: 1, accepting: true }],
            ],
        }
    }

    #[test]
    fn header_and_marks() {
        let text = to_hoa(&sample(), "x");
        assert!(text.contains("acc-name: co-Buchi\nAcceptance: 1 Fin(0)\n"));
        assert!(text.contains("[0&!1] 0 {0}"));
        assert!(text.contains("[0&!1] 1\n"));
    }

    #[test]
    fn roundtrip() {
        let c = sample();
        let text = to_hoa(&c, "x");
        let back = parse_hoa(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_hoa(&HdNcw::from_json(&back.to_json()).unwrap(), "x"), text);
    }

    #[test]
    fn partial_labels_expand() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 2 \"a\" \"b\"\nAcceptance: 1 Fin(0)\n--BODY--\nState: 0\n[!1] 0\n[t] 0 {0}\n--END--\n";
        let c = parse_hoa(text).unwrap();
        assert_eq!(c.transitions[0].iter().filter(|t| t.accepting).count(), 2);
        assert_eq!(c.transition_count(), 6);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_hoa("").is_err());
        assert!(parse_hoa("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\n--END--\n").is_err());
        assert!(parse_hoa("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Fin(0)\n--BODY--\nState: 0\n[0] 3\n--END--\n").is_err());
        assert!(parse_hoa("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Fin(0)\n--BODY--\nState: 0\n").is_err());
    }
}
