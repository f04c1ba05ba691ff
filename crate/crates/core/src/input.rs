//! Raw input events, key codes, and the text format for recorded input.
//!
//! A script holds one event per line, ticks non-decreasing:
//!
//! ```text
//! 0 MOUSEMOVE 10 20
//! 0 MOUSEDOWN left 10 20
//! 1 MOUSEUP left 10 20
//! 2 KEYDOWN Tab 0
//! 3 KEYDOWN Tab shift
//! 4 CHAR a
//! 5 CHAR U+0020
//! ```
//!
//! Key codes may be given by number or by the names in [`key`]; modifiers by
//! number or as `shift`, `ctrl`, `alt` joined with `+` (`0` or `none` for
//! none). Buttons are `left`, `right`, `middle` or `1`–`3`. Blank lines and
//! `#` comments are skipped.

use std::fmt;

use bitflags::bitflags;
use thiserror::Error;

/// Key codes. Printable characters use their code point; keys without a
/// character sit above the Unicode range.
pub mod key {
    pub const BACKSPACE: u32 = 8;
    pub const TAB: u32 = 9;
    pub const ENTER: u32 = 13;
    pub const ESCAPE: u32 = 27;
    pub const SPACE: u32 = 32;
    pub const DELETE: u32 = 127;
    pub const UP: u32 = 0x11_0000;
    pub const DOWN: u32 = 0x11_0001;
    pub const LEFT: u32 = 0x11_0002;
    pub const RIGHT: u32 = 0x11_0003;
    pub const HOME: u32 = 0x11_0004;
    pub const END: u32 = 0x11_0005;
    pub const PAGE_UP: u32 = 0x11_0006;
    pub const PAGE_DOWN: u32 = 0x11_0007;
    pub const INSERT: u32 = 0x11_0008;
    /// F1; F2–F12 follow consecutively.
    pub const F1: u32 = 0x11_0010;
    pub const F10: u32 = F1 + 9;

    pub const ARROWS: [u32; 4] = [UP, DOWN, LEFT, RIGHT];

    const NAMES: [(&str, u32); 15] = [
        ("Backspace", BACKSPACE),
        ("Tab", TAB),
        ("Enter", ENTER),
        ("Escape", ESCAPE),
        ("Space", SPACE),
        ("Delete", DELETE),
        ("Up", UP),
        ("Down", DOWN),
        ("Left", LEFT),
        ("Right", RIGHT),
        ("Home", HOME),
        ("End", END),
        ("PageUp", PAGE_UP),
        ("PageDown", PAGE_DOWN),
        ("Insert", INSERT),
    ];

    pub fn name(code: u32) -> Option<String> {
        if let Some((n, _)) = NAMES.iter().find(|(_, c)| *c == code) {
            return Some((*n).to_owned());
        }
        (F1..F1 + 12).contains(&code).then(|| format!("F{}", code - F1 + 1))
    }

    pub fn from_name(name: &str) -> Option<u32> {
        if let Some((_, c)) = NAMES.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)) {
            return Some(*c);
        }
        let n: u32 = name.strip_prefix(['F', 'f'])?.parse().ok()?;
        (1..=12).contains(&n).then(|| F1 + n - 1)
    }

    /// The character a key code stands for, if printable.
    pub fn printable(code: u32) -> Option<char> {
        char::from_u32(code).filter(|c| !c.is_control())
    }
}

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct Modifiers: u8 {
        const SHIFT = 1;
        const CTRL = 2;
        const ALT = 4;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MouseButton {
    Left,
    Right,
    Middle,
}

impl MouseButton {
    pub const ALL: [MouseButton; 3] = [MouseButton::Left, MouseButton::Right, MouseButton::Middle];

    pub fn name(self) -> &'static str {
        match self {
            MouseButton::Left => "left",
            MouseButton::Right => "right",
            MouseButton::Middle => "middle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "1" => Some(MouseButton::Left),
            "right" | "2" => Some(MouseButton::Right),
            "middle" | "3" => Some(MouseButton::Middle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputKind {
    KeyDown { code: u32, mods: Modifiers },
    KeyChar(char),
    MouseMove { x: i32, y: i32 },
    MouseDown { button: MouseButton, x: i32, y: i32 },
    MouseUp { button: MouseButton, x: i32, y: i32 },
}

impl InputKind {
    pub fn position(&self) -> Option<(i32, i32)> {
        match *self {
            InputKind::MouseMove { x, y } | InputKind::MouseDown { x, y, .. } | InputKind::MouseUp { x, y, .. } => Some((x, y)),
            _ => None,
        }
    }

    pub fn is_mouse(&self) -> bool {
        self.position().is_some()
    }

    /// The same event with its position moved by `(dx, dy)`.
    pub fn translated(self, dx: i32, dy: i32) -> Self {
        match self {
            InputKind::MouseMove { x, y } => InputKind::MouseMove { x: x + dx, y: y + dy },
            InputKind::MouseDown { button, x, y } => InputKind::MouseDown { button, x: x + dx, y: y + dy },
            InputKind::MouseUp { button, x, y } => InputKind::MouseUp { button, x: x + dx, y: y + dy },
            other => other,
        }
    }

    /// The same event with its position clamped into `0..w` × `0..h`.
    pub fn clamped(self, w: u32, h: u32) -> Self {
        let cx = |x: i32| x.clamp(0, w.saturating_sub(1) as i32);
        let cy = |y: i32| y.clamp(0, h.saturating_sub(1) as i32);
        match self {
            InputKind::MouseMove { x, y } => InputKind::MouseMove { x: cx(x), y: cy(y) },
            InputKind::MouseDown { button, x, y } => InputKind::MouseDown { button, x: cx(x), y: cy(y) },
            InputKind::MouseUp { button, x, y } => InputKind::MouseUp { button, x: cx(x), y: cy(y) },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RawInputEvent {
    pub tick: u64,
    pub kind: InputKind,
}

impl RawInputEvent {
    pub fn new(tick: u64, kind: InputKind) -> Self {
        RawInputEvent { tick, kind }
    }
}

impl fmt::Display for RawInputEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.tick)?;
        match self.kind {
            InputKind::KeyDown { code, mods } => {
                let name = key::name(code).unwrap_or_else(|| code.to_string());
                write!(f, "KEYDOWN {name} {}", mods.bits())
            }
            InputKind::KeyChar(c) if c.is_ascii_graphic() => write!(f, "CHAR {c}"),
            InputKind::KeyChar(c) => write!(f, "CHAR U+{:04X}", c as u32),
            InputKind::MouseMove { x, y } => write!(f, "MOUSEMOVE {x} {y}"),
            InputKind::MouseDown { button, x, y } => write!(f, "MOUSEDOWN {} {x} {y}", button.name()),
            InputKind::MouseUp { button, x, y } => write!(f, "MOUSEUP {} {x} {y}", button.name()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub events: Vec<RawInputEvent>,
}

impl Script {
    pub fn new(events: Vec<RawInputEvent>) -> Self {
        Script { events }
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut events = Vec::new();
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ScriptError { line: i + 1, message };
            let words: Vec<&str> = line.split_whitespace().collect();
            let tick: u64 = words[0].parse().map_err(|_| err(format!("bad tick {:?}", words[0])))?;
            if tick < last {
                return Err(err(format!("tick {tick} goes backwards from {last}")));
            }
            last = tick;
            let coord = |w: &str| w.parse::<i32>().map_err(|_| err(format!("bad coordinate {w:?}")));
            let button = |w: &str| MouseButton::parse(w).ok_or_else(|| err(format!("bad button {w:?}")));
            let kind = match &words[1..] {
                [cmd, k, m] if cmd.eq_ignore_ascii_case("KEYDOWN") => InputKind::KeyDown {
                    code: k.parse().ok().or_else(|| key::from_name(k)).ok_or_else(|| err(format!("bad key {k:?}")))?,
                    mods: parse_mods(m).ok_or_else(|| err(format!("bad modifiers {m:?}")))?,
                },
                [cmd, k] if cmd.eq_ignore_ascii_case("KEYDOWN") => InputKind::KeyDown {
                    code: k.parse().ok().or_else(|| key::from_name(k)).ok_or_else(|| err(format!("bad key {k:?}")))?,
                    mods: Modifiers::empty(),
                },
                [cmd, c] if cmd.eq_ignore_ascii_case("CHAR") => InputKind::KeyChar(parse_char(c).ok_or_else(|| err(format!("bad character {c:?}")))?),
                [cmd, x, y] if cmd.eq_ignore_ascii_case("MOUSEMOVE") => InputKind::MouseMove { x: coord(x)?, y: coord(y)? },
                [cmd, b, x, y] if cmd.eq_ignore_ascii_case("MOUSEDOWN") => InputKind::MouseDown {
                    button: button(b)?,
                    x: coord(x)?,
                    y: coord(y)?,
                },
                [cmd, b, x, y] if cmd.eq_ignore_ascii_case("MOUSEUP") => InputKind::MouseUp {
                    button: button(b)?,
                    x: coord(x)?,
                    y: coord(y)?,
                },
                _ => return Err(err(format!("unrecognized event {line:?}"))),
            };
            events.push(RawInputEvent { tick, kind });
        }
        Ok(Script { events })
    }

    pub fn to_text(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

fn parse_mods(s: &str) -> Option<Modifiers> {
    if let Ok(n) = s.parse::<u8>() {
        return Modifiers::from_bits(n);
    }
    if s.eq_ignore_ascii_case("none") {
        return Some(Modifiers::empty());
    }
    s.split('+').try_fold(Modifiers::empty(), |acc, part| {
        Some(
            acc | match part.to_ascii_lowercase().as_str() {
                "shift" => Modifiers::SHIFT,
                "ctrl" => Modifiers::CTRL,
                "alt" => Modifiers::ALT,
                _ => return None,
            },
        )
    })
}

fn parse_char(s: &str) -> Option<char> {
    if let Some(hex) = s.strip_prefix("U+").or_else(|| s.strip_prefix("u+")) {
        return char::from_u32(u32::from_str_radix(hex, 16).ok()?);
    }
    let mut chars = s.chars();
    let c = chars.next()?;
    chars.next().is_none().then_some(c)
}
