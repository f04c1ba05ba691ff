//! The 20 event codes of the common widget base and the classifier that
//! turns raw input into them.
//!
//! Decision table (all coordinates widget-local, `inside` meaning the point is
//! in the widget's region and not covered by something above it):
//!
//! | raw event | condition | codes |
//! |---|---|---|
//! | key down / char | widget focused, key accepted | `[1, 2]` if 1 is bound, else `[2]` |
//! | key down / char | widget focused, key not accepted | `[1, 3]` if 1 is bound, else `[3]` |
//! | key down / char | not focused | none |
//! | move | inside, no button held or the held button went down inside | `[4]` on entry, then `14` |
//! | move | inside, a button held that went down elsewhere | `[4]` on entry, then `15`/`16` by button, then `17` |
//! | move | outside, this widget holds a press | `[14]` (pointer capture) |
//! | down | inside | `5`/`6` by button, then `7` |
//! | down | outside | `18`/`19` by button, then `20`; cancels a pending click |
//! | up | inside, same button went down inside | `8`/`11` (or `9`/`12` within the double-click window), then `10`/`13` |
//! | up | outside, same button went down inside | `10`/`13` |
//! | up | inside, no matching press | `10`/`13` |
//!
//! The middle button has no specific codes; it yields only the generic ones.
//! Hidden or disabled widgets classify nothing.

use std::collections::BTreeSet;
use std::fmt;

use crate::input::{key, InputKind, MouseButton};

/// Ticks within which a second click counts as a double click.
pub const DOUBLE_CLICK_TICKS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum EventCode {
    KeyPress = 1,
    SpecificKeyPressed = 2,
    NotRequiredKeyPressed = 3,
    MouseInRegion = 4,
    LeftDown = 5,
    RightDown = 6,
    ButtonDown = 7,
    LeftClicked = 8,
    LeftDoubleClicked = 9,
    LeftUp = 10,
    RightClicked = 11,
    RightDoubleClicked = 12,
    RightUp = 13,
    MouseMove = 14,
    MoveLeftClickedOut = 15,
    MoveRightClickedOut = 16,
    MoveButtonClickedOut = 17,
    LeftDownOut = 18,
    RightDownOut = 19,
    ButtonDownOut = 20,
}

impl EventCode {
    pub const ALL: [EventCode; 20] = [
        EventCode::KeyPress,
        EventCode::SpecificKeyPressed,
        EventCode::NotRequiredKeyPressed,
        EventCode::MouseInRegion,
        EventCode::LeftDown,
        EventCode::RightDown,
        EventCode::ButtonDown,
        EventCode::LeftClicked,
        EventCode::LeftDoubleClicked,
        EventCode::LeftUp,
        EventCode::RightClicked,
        EventCode::RightDoubleClicked,
        EventCode::RightUp,
        EventCode::MouseMove,
        EventCode::MoveLeftClickedOut,
        EventCode::MoveRightClickedOut,
        EventCode::MoveButtonClickedOut,
        EventCode::LeftDownOut,
        EventCode::RightDownOut,
        EventCode::ButtonDownOut,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            EventCode::KeyPress => "KEY PRESS EVENT",
            EventCode::SpecificKeyPressed => "SPECIFIC KEY PRESSED",
            EventCode::NotRequiredKeyPressed => "NOT REQUIRED KEY PRESSED",
            EventCode::MouseInRegion => "MOUSE IN REGION",
            EventCode::LeftDown => "LEFT MOUSE BUTTON DOWN",
            EventCode::RightDown => "RIGHT MOUSE BUTTON DOWN",
            EventCode::ButtonDown => "MOUSE BUTTON DOWN",
            EventCode::LeftClicked => "LEFT MOUSE BUTTON CLICKED",
            EventCode::LeftDoubleClicked => "LEFT MOUSE BUTTON DBCLICKED",
            EventCode::LeftUp => "LEFT MOUSE BUTTON UP",
            EventCode::RightClicked => "RIGHT MOUSE BUTTON CLICKED",
            EventCode::RightDoubleClicked => "RIGHT MOUSE BUTTON DBCLICKED",
            EventCode::RightUp => "RIGHT MOUSE BUTTON UP",
            EventCode::MouseMove => "MOUSE MOVE EVENT",
            EventCode::MoveLeftClickedOut => "MOUSE MOVE AND LEFT MOUSE BUTTON CLICKED OUT",
            EventCode::MoveRightClickedOut => "MOUSE MOVE AND RIGHT MOUSE BUTTON CLICKED OUT",
            EventCode::MoveButtonClickedOut => "MOUSE MOVE AND MOUSE BUTTON CLICKED OUT",
            EventCode::LeftDownOut => "LEFT MOUSE BUTTON DOWN OUT",
            EventCode::RightDownOut => "RIGHT MOUSE BUTTON DOWN OUT",
            EventCode::ButtonDownOut => "MOUSE BUTTON DOWN OUT",
        }
    }
}

impl fmt::Display for EventCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Which keys a widget treats as its own.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeySet {
    pub keys: BTreeSet<u32>,
    /// Every printable character is accepted as well.
    pub printable: bool,
}

impl KeySet {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn of(keys: &[u32]) -> Self {
        KeySet {
            keys: keys.iter().copied().collect(),
            printable: false,
        }
    }

    pub fn with_printable(mut self) -> Self {
        self.printable = true;
        self
    }

    pub fn contains(&self, code: u32) -> bool {
        self.keys.contains(&code) || self.printable && key::printable(code).is_some()
    }
}

/// Per-widget memory the classifier needs between events.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PressState {
    /// The pointer was inside at the previous mouse event.
    pub hover: bool,
    /// A button that went down inside and has not been released.
    pub pressed: Option<MouseButton>,
    /// The last completed click, for double-click detection.
    pub last_click: Option<(MouseButton, u64)>,
}

/// Facts about the world at the moment of classification.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyCtx<'a> {
    pub tick: u64,
    pub inside: bool,
    pub focused: bool,
    pub eligible: bool,
    /// Buttons held before this event.
    pub held: &'a [MouseButton],
    pub accepted: &'a KeySet,
    /// Code 1 has at least one handler bound.
    pub key_press_bound: bool,
}

/// Classifies one raw event for one widget, returning the codes in firing
/// order and the widget's updated press state.
pub fn classify(state: PressState, raw: &InputKind, ctx: &ClassifyCtx<'_>) -> (Vec<EventCode>, PressState) {
    use EventCode::*;
    if !ctx.eligible {
        return (Vec::new(), state);
    }
    let mut next = state;
    let mut codes = Vec::new();
    let key_codes = |code: u32, codes: &mut Vec<EventCode>| {
        if ctx.key_press_bound {
            codes.push(KeyPress);
        }
        codes.push(if ctx.accepted.contains(code) { SpecificKeyPressed } else { NotRequiredKeyPressed });
    };
    match *raw {
        InputKind::KeyDown { code, .. } if ctx.focused => key_codes(code, &mut codes),
        InputKind::KeyChar(c) if ctx.focused => key_codes(c as u32, &mut codes),
        InputKind::KeyDown { .. } | InputKind::KeyChar(_) => {}
        InputKind::MouseMove { .. } => {
            if ctx.inside {
                if !state.hover {
                    codes.push(MouseInRegion);
                }
                let from_outside = state.pressed.is_none() && !ctx.held.is_empty();
                if from_outside {
                    if ctx.held.contains(&MouseButton::Left) {
                        codes.push(MoveLeftClickedOut);
                    } else if ctx.held.contains(&MouseButton::Right) {
                        codes.push(MoveRightClickedOut);
                    }
                    codes.push(MoveButtonClickedOut);
                } else {
                    codes.push(MouseMove);
                }
            } else if state.pressed.is_some() {
                codes.push(MouseMove);
            }
            next.hover = ctx.inside;
        }
        InputKind::MouseDown { button, .. } => {
            if ctx.inside {
                match button {
                    MouseButton::Left => codes.push(LeftDown),
                    MouseButton::Right => codes.push(RightDown),
                    MouseButton::Middle => {}
                }
                codes.push(ButtonDown);
                if next.pressed.is_none() {
                    next.pressed = Some(button);
                }
            } else {
                match button {
                    MouseButton::Left => codes.push(LeftDownOut),
                    MouseButton::Right => codes.push(RightDownOut),
                    MouseButton::Middle => {}
                }
                codes.push(ButtonDownOut);
                next.pressed = None;
                next.last_click = None;
            }
            next.hover = ctx.inside;
        }
        InputKind::MouseUp { button, .. } => {
            let up = match button {
                MouseButton::Left => Some(LeftUp),
                MouseButton::Right => Some(RightUp),
                MouseButton::Middle => None,
            };
            if state.pressed == Some(button) {
                next.pressed = None;
                if ctx.inside {
                    let double = matches!(state.last_click, Some((b, t)) if b == button && ctx.tick.saturating_sub(t) <= DOUBLE_CLICK_TICKS);
                    let click = match (button, double) {
                        (MouseButton::Left, false) => Some(LeftClicked),
                        (MouseButton::Left, true) => Some(LeftDoubleClicked),
                        (MouseButton::Right, false) => Some(RightClicked),
                        (MouseButton::Right, true) => Some(RightDoubleClicked),
                        (MouseButton::Middle, _) => None,
                    };
                    codes.extend(click);
                    next.last_click = if double || click.is_none() { None } else { Some((button, ctx.tick)) };
                }
                codes.extend(up);
            } else if ctx.inside {
                codes.extend(up);
            }
            next.hover = ctx.inside;
        }
    }
    (codes, next)
}
