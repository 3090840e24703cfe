//! Line-oriented text format for nets.
//!
//! ```text
//! # comment
//! net A
//! states p q
//! actions a b
//! p a -1 q
//! q b +1 p
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::net::Ocn;

/// Parses a net, rejecting reserved identifiers.
pub fn parse_net(text: &str) -> Result<Ocn> {
    parse(text, false)
}

/// Parses a net that may contain generated identifiers, as written by
/// [`print_net`] for constructed nets.
pub fn parse_net_internal(text: &str) -> Result<Ocn> {
    parse(text, true)
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into tokens with their 1-based columns, dropping comments.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (body[..byte].chars().count() + 1, tok))
        .collect()
}

fn parse_delta(tok: &str) -> Option<i64> {
    match tok {
        "-1" => Some(-1),
        "0" | "+0" | "-0" => Some(0),
        "1" | "+1" => Some(1),
        _ => None,
    }
}

fn parse(text: &str, allow_reserved: bool) -> Result<Ocn> {
    let mut name: Option<String> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut actions: Option<(usize, Vec<String>)> = None;
    let mut transitions = Vec::new();
    let mut positions = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        let rest = || toks[1..].iter().map(|(_, t)| t.to_string()).collect::<Vec<_>>();
        match head {
            "net" => {
                if name.is_some() {
                    return Err(err(lineno, col, "duplicate `net` line"));
                }
                if toks.len() != 2 {
                    return Err(err(lineno, col, "expected `net <name>`"));
                }
                name = Some(toks[1].1.to_owned());
            }
            "states" | "actions" => {
                let slot = if head == "states" { &mut states } else { &mut actions };
                if slot.is_some() {
                    return Err(err(lineno, col, format!("duplicate `{head}` line")));
                }
                if toks.len() < 2 {
                    return Err(err(lineno, col, format!("`{head}` needs at least one identifier")));
                }
                *slot = Some((lineno, rest()));
            }
            _ => {
                if toks.len() != 4 {
                    return Err(err(
                        lineno,
                        col,
                        "expected a transition `<src> <action> <delta> <dst>`",
                    ));
                }
                let (dcol, dtok) = toks[2];
                let delta = parse_delta(dtok).ok_or_else(|| {
                    err(lineno, dcol, format!("invalid delta `{dtok}`, expected -1, 0 or +1"))
                })?;
                transitions.push((
                    toks[0].1.to_owned(),
                    toks[1].1.to_owned(),
                    delta,
                    toks[3].1.to_owned(),
                ));
                positions.push((lineno, toks[0].0, toks[1].0, toks[3].0));
            }
        }
    }

    let name = name.ok_or_else(|| err(1, 1, "missing `net <name>` line"))?;
    let (sline, states) = states.ok_or_else(|| err(1, 1, "missing `states` line"))?;
    let (aline, actions) = actions.ok_or_else(|| err(1, 1, "missing `actions` line"))?;

    let built = if allow_reserved {
        Ocn::new_internal(&name, &states, &actions, &transitions)
    } else {
        Ocn::new(&name, &states, &actions, &transitions)
    };
    built.map_err(|e| locate(e, sline, aline, &states, &transitions, &positions))
}

/// Attaches a source position to a semantic error.
fn locate(
    e: Error,
    sline: usize,
    aline: usize,
    states: &[String],
    transitions: &[(String, String, i64, String)],
    positions: &[(usize, usize, usize, usize)],
) -> Error {
    match &e {
        Error::UnknownState(s) => transitions
            .iter()
            .zip(positions)
            .find_map(|(t, p)| {
                if &t.0 == s {
                    Some((p.0, p.1))
                } else if &t.3 == s {
                    Some((p.0, p.3))
                } else {
                    None
                }
            })
            .map_or(e.clone(), |(l, c)| err(l, c, e.to_string())),
        Error::UnknownAction(a) => transitions
            .iter()
            .zip(positions)
            .find(|(t, _)| &t.1 == a)
            .map_or(e.clone(), |(_, p)| err(p.0, p.2, e.to_string())),
        Error::DuplicateIdentifier(id) | Error::ReservedIdentifier(id) => {
            let line = if states.contains(id) { sline } else { aline };
            err(line, 1, e.to_string())
        }
        _ => e,
    }
}

/// Writes a net in the text format; `parse_net_internal(&print_net(n)) == n`.
pub fn print_net(net: &Ocn) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "net {}", net.name());
    let _ = writeln!(out, "states {}", net.states().join(" "));
    let _ = writeln!(out, "actions {}", net.actions().join(" "));
    for t in net.transitions() {
        let delta = match t.delta {
            -1 => "-1",
            0 => "0",
            _ => "+1",
        };
        let _ = writeln!(
            out,
            "{} {} {} {}",
            net.state_name(t.src),
            net.action_name(t.action),
            delta,
            net.state_name(t.dst)
        );
    }
    out
}
