//! A rule-table model of the widget event classifier, and an exhaustive
//! comparison over every short input history in a two-widget scene.

use groundup::input::{key, InputKind, Modifiers, MouseButton};
use groundup::widgets::{classify, ClassifyCtx, EventCode, KeySet, PressState, DOUBLE_CLICK_TICKS};

/// The code names, in code order.
pub const TABLE: [&str; 20] = [
    "KEY PRESS EVENT",
    "SPECIFIC KEY PRESSED",
    "NOT REQUIRED KEY PRESSED",
    "MOUSE IN REGION",
    "LEFT MOUSE BUTTON DOWN",
    "RIGHT MOUSE BUTTON DOWN",
    "MOUSE BUTTON DOWN",
    "LEFT MOUSE BUTTON CLICKED",
    "LEFT MOUSE BUTTON DBCLICKED",
    "LEFT MOUSE BUTTON UP",
    "RIGHT MOUSE BUTTON CLICKED",
    "RIGHT MOUSE BUTTON DBCLICKED",
    "RIGHT MOUSE BUTTON UP",
    "MOUSE MOVE EVENT",
    "MOUSE MOVE AND LEFT MOUSE BUTTON CLICKED OUT",
    "MOUSE MOVE AND RIGHT MOUSE BUTTON CLICKED OUT",
    "MOUSE MOVE AND MOUSE BUTTON CLICKED OUT",
    "LEFT MOUSE BUTTON DOWN OUT",
    "RIGHT MOUSE BUTTON DOWN OUT",
    "MOUSE BUTTON DOWN OUT",
];

/// Checks the code set against [`TABLE`]: 20 codes, numbered 1..=20,
/// names matching one to one.
pub fn table_matches() -> Result<(), String> {
    if EventCode::ALL.len() != TABLE.len() {
        return Err(format!("{} codes", EventCode::ALL.len()));
    }
    for (i, (c, name)) in EventCode::ALL.iter().zip(TABLE).enumerate() {
        if usize::from(c.number()) != i + 1 || c.name() != name || EventCode::from_number(c.number()) != Some(*c) {
            return Err(format!("code {} is {:?}, want {name:?}", c.number(), c.name()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Model {
    hover: bool,
    owner: Option<MouseButton>,
    last: Option<(MouseButton, u64)>,
}

#[derive(Clone, Copy)]
enum Ev {
    Key { accepted: bool },
    Move,
    Down(MouseButton),
    Up(MouseButton),
}

struct Facts<'a> {
    ev: Ev,
    inside: bool,
    focused: bool,
    bound: bool,
    held: &'a [MouseButton],
    tick: u64,
}

fn code(n: u8) -> EventCode {
    EventCode::from_number(n).unwrap()
}

fn specific(b: MouseButton, left: u8, right: u8) -> Option<u8> {
    match b {
        MouseButton::Left => Some(left),
        MouseButton::Right => Some(right),
        MouseButton::Middle => None,
    }
}

/// The model's codes and next state. Each rule is a guard and the codes it
/// contributes; every matching rule fires, in table order.
fn oracle(m: Model, f: &Facts<'_>) -> (Vec<EventCode>, Model) {
    let mut out: Vec<u8> = Vec::new();
    let mut next = m;
    match f.ev {
        Ev::Key { accepted } => {
            if f.focused {
                if f.bound {
                    out.push(1);
                }
                out.push(if accepted { 2 } else { 3 });
            }
        }
        Ev::Move => {
            let foreign = m.owner.is_none() && !f.held.is_empty();
            let rules: [(bool, Option<u8>); 6] = [
                (f.inside && !m.hover, Some(4)),
                (f.inside && foreign && f.held.contains(&MouseButton::Left), Some(15)),
                (f.inside && foreign && !f.held.contains(&MouseButton::Left) && f.held.contains(&MouseButton::Right), Some(16)),
                (f.inside && foreign, Some(17)),
                (f.inside && !foreign, Some(14)),
                (!f.inside && m.owner.is_some(), Some(14)),
            ];
            out.extend(rules.iter().filter(|(g, _)| *g).filter_map(|(_, c)| *c));
            next.hover = f.inside;
        }
        Ev::Down(b) => {
            if f.inside {
                out.extend(specific(b, 5, 6));
                out.push(7);
                next.owner = m.owner.or(Some(b));
            } else {
                out.extend(specific(b, 18, 19));
                out.push(20);
                next.owner = None;
                next.last = None;
            }
            next.hover = f.inside;
        }
        Ev::Up(b) => {
            let mine = m.owner == Some(b);
            let double = m.last.is_some_and(|(lb, t)| lb == b && f.tick - t <= DOUBLE_CLICK_TICKS);
            if mine && f.inside {
                let click = if double { specific(b, 9, 12) } else { specific(b, 8, 11) };
                out.extend(click);
                next.last = match (click, double) {
                    (Some(_), false) => Some((b, f.tick)),
                    _ => None,
                };
            }
            if mine || f.inside {
                out.extend(specific(b, 10, 13));
            }
            if mine {
                next.owner = None;
            }
            next.hover = f.inside;
        }
    }
    (out.into_iter().map(code).collect(), next)
}

const BUTTONS: [MouseButton; 3] = [MouseButton::Left, MouseButton::Right, MouseButton::Middle];

/// Where the pointer is: only in the lower widget, in the upper widget
/// (which covers the overlap), or in neither.
#[derive(Clone, Copy)]
enum Spot {
    Lower,
    Upper,
    Neither,
}

fn alphabet() -> Vec<(Ev, Spot, u64)> {
    let mut out = vec![(Ev::Key { accepted: true }, Spot::Neither, 1), (Ev::Key { accepted: false }, Spot::Neither, 1)];
    for spot in [Spot::Lower, Spot::Upper, Spot::Neither] {
        out.push((Ev::Move, spot, 1));
        for b in BUTTONS {
            out.push((Ev::Down(b), spot, 1));
            // gaps putting a second click just inside and just outside the double-click window
            for gap in [1, DOUBLE_CLICK_TICKS - 1, DOUBLE_CLICK_TICKS] {
                out.push((Ev::Up(b), spot, gap));
            }
        }
    }
    out
}

#[derive(Clone)]
struct Node {
    tick: u64,
    held: Vec<MouseButton>,
    real: [PressState; 2],
    model: [Model; 2],
}

struct Run<'a> {
    alphabet: &'a [(Ev, Spot, u64)],
    focused: usize,
    bound: [bool; 2],
    keys: KeySet,
    compared: u64,
    history: Vec<usize>,
}

impl Run<'_> {
    fn dfs(&mut self, node: &Node, depth: usize) -> Result<(), String> {
        if depth == 0 {
            return Ok(());
        }
        for (i, &(ev, spot, gap)) in self.alphabet.iter().enumerate() {
            self.history.push(i);
            let tick = node.tick + gap;
            let (x, y) = match spot {
                Spot::Lower => (2, 2),
                Spot::Upper => (12, 12),
                Spot::Neither => (40, 40),
            };
            let raw = match ev {
                Ev::Key { accepted } => InputKind::KeyDown { code: if accepted { key::ENTER } else { key::ESCAPE }, mods: Modifiers::empty() },
                Ev::Move => InputKind::MouseMove { x, y },
                Ev::Down(button) => InputKind::MouseDown { button, x, y },
                Ev::Up(button) => InputKind::MouseUp { button, x, y },
            };
            let mut next = node.clone();
            next.tick = tick;
            for w in 0..2 {
                let inside = matches!((w, spot), (0, Spot::Lower) | (1, Spot::Upper));
                let ctx = ClassifyCtx {
                    tick,
                    inside,
                    focused: self.focused == w,
                    eligible: true,
                    held: &node.held,
                    accepted: &self.keys,
                    key_press_bound: self.bound[w],
                };
                let (got, real) = classify(node.real[w], &raw, &ctx);
                let facts = Facts {
                    ev,
                    inside,
                    focused: self.focused == w,
                    bound: self.bound[w],
                    held: &node.held,
                    tick,
                };
                let (want, model) = oracle(node.model[w], &facts);
                self.compared += 1;
                if got != want {
                    return Err(format!("widget {w} after history {:?}: got {got:?}, want {want:?}", self.history));
                }
                next.real[w] = real;
                next.model[w] = model;
            }
            match ev {
                Ev::Down(b) if !next.held.contains(&b) => next.held.push(b),
                Ev::Up(b) => next.held.retain(|h| *h != b),
                _ => {}
            }
            self.dfs(&next, depth - 1)?;
            self.history.pop();
        }
        Ok(())
    }
}

/// Compares the classifier with the model on every history of up to
/// `depth` events, for two focus/binding configurations. Returns the number
/// of (event, widget) classifications compared.
pub fn exhaustive(depth: usize) -> Result<u64, String> {
    let alphabet = alphabet();
    let mut total = 0;
    for (focused, bound) in [(0, [true, false]), (1, [false, false])] {
        let mut run = Run {
            alphabet: &alphabet,
            focused,
            bound,
            keys: KeySet::of(&[key::ENTER]),
            compared: 0,
            history: Vec::new(),
        };
        let root = Node {
            tick: 0,
            held: Vec::new(),
            real: [PressState::default(); 2],
            model: [Model::default(); 2],
        };
        run.dfs(&root, depth)?;
        total += run.compared;
    }
    Ok(total)
}

/// Hidden or disabled widgets classify nothing, whatever the history.
pub fn ineligible_is_silent() -> Result<(), String> {
    let keys = KeySet::of(&[key::ENTER]).with_printable();
    for (ev, spot, _) in alphabet() {
        for held in [&[][..], &[MouseButton::Left][..]] {
            let state = PressState {
                hover: true,
                pressed: Some(MouseButton::Left),
                last_click: Some((MouseButton::Left, 0)),
            };
            let raw = match ev {
                Ev::Key { .. } => InputKind::KeyChar('a'),
                Ev::Move => InputKind::MouseMove { x: 1, y: 1 },
                Ev::Down(button) => InputKind::MouseDown { button, x: 1, y: 1 },
                Ev::Up(button) => InputKind::MouseUp { button, x: 1, y: 1 },
            };
            let ctx = ClassifyCtx {
                tick: 1,
                inside: !matches!(spot, Spot::Neither),
                focused: true,
                eligible: false,
                held,
                accepted: &keys,
                key_press_bound: true,
            };
            let (codes, after) = classify(state, &raw, &ctx);
            if !codes.is_empty() || after != state {
                return Err(format!("{raw:?} gave {codes:?}"));
            }
        }
    }
    Ok(())
}
