//! Line-oriented protocol for sending messages to a bus from outside.
//!
//! A request is a header line followed by a length-prefixed payload in the
//! chemical text format:
//!
//! ```text
//! SEND <topic> <strength>
//! <byte-length>:<payload>
//! ```
//!
//! Each request gets exactly one reply, in request order:
//!
//! ```text
//! OK DELIVERED <recipients> <log-lines>
//! LOG <participant> <pass|modify|veto|attempted-veto>
//! <byte-length>:<payload>
//!
//! OK VETOED <participant> <step> <log-lines>
//! LOG ...
//!
//! ERR <reason>
//! ```
//!
//! A malformed request is answered with an `ERR` line and the session
//! carries on with the next line.

use std::io::{self, BufRead, Read, Write};
use std::net::TcpListener;

use thiserror::Error;

use super::{Bus, Message, Outcome, Ruling};
use crate::chemical::{ChemSystem, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub topic: String,
    pub strength: u8,
    pub payload: ChemSystem,
}

#[derive(Debug, Error, PartialEq)]
pub enum WireError {
    #[error("malformed request")]
    Parse,
    #[error("strength out of range")]
    Strength,
    #[error("bad payload: {0}")]
    Payload(ParseError),
}

impl WireError {
    /// The token sent after `ERR`.
    pub fn reason(&self) -> &'static str {
        match self {
            WireError::Parse => "parse",
            WireError::Strength => "strength",
            WireError::Payload(_) => "payload",
        }
    }
}

pub fn encode_request(topic: &str, strength: u8, payload: &ChemSystem) -> String {
    let body = payload.serialize();
    format!("SEND {topic} {strength}\n{}:{body}\n", body.len())
}

pub fn encode_ruling(ruling: &Ruling) -> String {
    let mut out = match &ruling.outcome {
        Outcome::Delivered { recipients, .. } => format!("OK DELIVERED {} {}\n", recipients.len(), ruling.log.len()),
        Outcome::Vetoed { by, step } => format!("OK VETOED {by} {step} {}\n", ruling.log.len()),
    };
    for (pid, action) in &ruling.log {
        out += &format!("LOG {pid} {}\n", action.as_str());
    }
    if let Outcome::Delivered { payload, .. } = &ruling.outcome {
        let body = payload.serialize();
        out += &format!("{}:{body}\n", body.len());
    }
    out
}

pub fn encode_error(err: &WireError) -> String {
    format!("ERR {}\n", err.reason())
}

fn read_line<R: BufRead>(r: &mut R) -> io::Result<Option<Vec<u8>>> {
    let mut buf = Vec::new();
    if r.read_until(b'\n', &mut buf)? == 0 {
        return Ok(None);
    }
    if buf.last() == Some(&b'\n') {
        buf.pop();
    }
    if buf.last() == Some(&b'\r') {
        buf.pop();
    }
    Ok(Some(buf))
}

fn next_byte<R: BufRead>(r: &mut R) -> io::Result<Option<u8>> {
    let b = r.fill_buf()?.first().copied();
    if b.is_some() {
        r.consume(1);
    }
    Ok(b)
}

/// Reads `<len>:<bytes>\n`. On a framing error the rest of the line is
/// discarded.
fn read_frame<R: BufRead>(r: &mut R) -> io::Result<Result<Vec<u8>, WireError>> {
    let mut len: usize = 0;
    let mut digits = 0;
    loop {
        match next_byte(r)? {
            Some(b @ b'0'..=b'9') if digits < 12 => {
                len = len * 10 + usize::from(b - b'0');
                digits += 1;
            }
            Some(b':') if digits > 0 => break,
            Some(b'\n') | None => return Ok(Err(WireError::Parse)),
            Some(_) => {
                read_line(r)?;
                return Ok(Err(WireError::Parse));
            }
        }
    }
    let mut body = Vec::new();
    let got = r.by_ref().take(len as u64).read_to_end(&mut body)?;
    if got < len {
        return Ok(Err(WireError::Parse));
    }
    match next_byte(r)? {
        Some(b'\n') | None => Ok(Ok(body)),
        Some(_) => {
            read_line(r)?;
            Ok(Err(WireError::Parse))
        }
    }
}

/// Reads the next request; `None` at end of stream.
pub fn read_request<R: BufRead>(r: &mut R) -> io::Result<Option<Result<Request, WireError>>> {
    let Some(line) = read_line(r)? else {
        return Ok(None);
    };
    let Ok(line) = String::from_utf8(line) else {
        return Ok(Some(Err(WireError::Parse)));
    };
    let words: Vec<&str> = line.split(' ').collect();
    let ["SEND", topic, strength] = words.as_slice() else {
        return Ok(Some(Err(WireError::Parse)));
    };
    if topic.is_empty() {
        return Ok(Some(Err(WireError::Parse)));
    }
    let body = match read_frame(r)? {
        Ok(b) => b,
        Err(e) => return Ok(Some(Err(e))),
    };
    let Ok(strength) = strength.parse::<u8>() else {
        return Ok(Some(Err(if strength.bytes().all(|b| b.is_ascii_digit()) && !strength.is_empty() {
            WireError::Strength
        } else {
            WireError::Parse
        })));
    };
    let Ok(body) = String::from_utf8(body) else {
        return Ok(Some(Err(WireError::Parse)));
    };
    Ok(Some(match ChemSystem::deserialize(&body) {
        Ok(payload) => Ok(Request {
            topic: (*topic).to_owned(),
            strength,
            payload,
        }),
        Err(e) => Err(WireError::Payload(e)),
    }))
}

/// Answers one request against `bus`, returning the reply text.
pub fn answer(bus: &mut Bus, request: Result<Request, WireError>) -> String {
    match request {
        Ok(req) => match bus.send(Message::new(req.topic, req.payload, req.strength)) {
            Ok(ruling) => encode_ruling(&ruling),
            Err(_) => encode_error(&WireError::Parse),
        },
        Err(e) => encode_error(&e),
    }
}

/// Serves requests from `reader` until it closes. Returns the number of
/// replies written.
pub fn serve_session<R: BufRead, W: Write>(bus: &mut Bus, mut reader: R, mut writer: W) -> io::Result<u64> {
    let mut n = 0;
    while let Some(req) = read_request(&mut reader)? {
        writer.write_all(answer(bus, req).as_bytes())?;
        writer.flush()?;
        n += 1;
    }
    Ok(n)
}

/// Accepts connections one after another, serving each session to
/// completion against the shared bus. Returns only on an accept error.
pub fn serve_tcp(bus: &mut Bus, listener: &TcpListener) -> io::Result<()> {
    loop {
        let (stream, _) = listener.accept()?;
        let reader = io::BufReader::new(stream.try_clone()?);
        // a client hanging up mid-session only ends that session
        let _ = serve_session(bus, reader, stream);
    }
}
