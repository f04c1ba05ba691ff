//! Circuit description format, one node or wire per line:
//!
//! ```text
//! node 1 source click
//! node 2 parallel
//! node 3 handler 10 5
//! node 4 switch open
//! node 5 ground
//! wire 1 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use super::{Circuit, NodeId, NodeKind, SwitchState};
use crate::chemical::ParseError;

pub(super) fn write(c: &Circuit) -> String {
    let mut out = String::new();
    for (id, kind) in &c.nodes {
        let desc = match kind {
            NodeKind::Source(e) => format!("source {e}"),
            NodeKind::Handler { id, resistance } => format!("handler {id} {resistance}"),
            NodeKind::Switch(SwitchState::Open) => "switch open".into(),
            NodeKind::Switch(SwitchState::Closed) => "switch closed".into(),
            NodeKind::Series => "series".into(),
            NodeKind::Parallel => "parallel".into(),
            NodeKind::Ground => "ground".into(),
        };
        out += &format!("node {id} {desc}\n");
    }
    for w in &c.wires {
        out += &format!("wire {} {}\n", w.from, w.to);
    }
    out
}

pub(super) fn parse(input: &str) -> Result<Circuit, ParseError> {
    let mut c = Circuit::new();
    for (i, line) in input.lines().enumerate() {
        let err = |message: String| ParseError { line: i + 1, message };
        let words: Vec<&str> = line.split_whitespace().collect();
        let num = |w: Option<&&str>, what: &str| -> Result<u64, ParseError> {
            let w = w.ok_or_else(|| err(format!("missing {what}")))?;
            w.parse().map_err(|_| err(format!("bad {what} {w:?}")))
        };
        let node = |w: Option<&&str>| -> Result<NodeId, ParseError> {
            let n = num(w, "node id")?;
            u32::try_from(n).map(NodeId).map_err(|_| err(format!("node id {n} out of range")))
        };
        match words.as_slice() {
            [] => {}
            [first, ..] if first.starts_with('#') => {}
            ["node", rest @ ..] => {
                let id = node(rest.first())?;
                let kind = match &rest[1..] {
                    ["source", event] => NodeKind::Source((*event).to_owned()),
                    ["handler", h, r] => {
                        let resistance = num(Some(r), "resistance")?;
                        NodeKind::Handler {
                            id: num(Some(h), "handler id")?,
                            resistance: u32::try_from(resistance).map_err(|_| err("resistance out of range".into()))?,
                        }
                    }
                    ["switch", "open"] => NodeKind::Switch(SwitchState::Open),
                    ["switch", "closed"] => NodeKind::Switch(SwitchState::Closed),
                    ["series"] => NodeKind::Series,
                    ["parallel"] => NodeKind::Parallel,
                    ["ground"] => NodeKind::Ground,
                    other => return Err(err(format!("bad node description {:?}", other.join(" ")))),
                };
                if c.nodes.insert(id, kind).is_some() {
                    return Err(err(format!("node {id} defined twice")));
                }
            }
            ["wire", a, b] => {
                let from = node(Some(a))?;
                let to = node(Some(b))?;
                c.connect(from, to);
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }
    Ok(c)
}
