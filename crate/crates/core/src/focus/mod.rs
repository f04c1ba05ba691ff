//! Keyboard focus, moved by mouse clicks, Tab and Shift+Tab, and arrows.
//!
//! The focus ring of a window is its eligible widgets (focusable, shown and
//! enabled) in creation order; ineligible entries are skipped at traversal
//! time. Arrow keys move spatially: to the eligible widget whose centre lies
//! strictly on that side of the current centre, nearest along the arrow's
//! axis, then across it, then earliest created.
//!
//! Every change sends `focus:lost` then `focus:gained` through the veto bus
//! at strength [`FOCUS_STRENGTH`]. A veto of `focus:lost` cancels the change.

use crate::chemical::{ChemSystem, Electron};
use crate::veto::Bus;
use crate::widgets::{Form, WidgetId};
use crate::wm::{Hit, Part, WindowId, WindowManager};

pub const FOCUS_STRENGTH: u8 = 10;
pub const TOPIC_LOST: &str = "focus:lost";
pub const TOPIC_GAINED: &str = "focus:gained";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

/// Eligible widgets in creation order.
pub fn ring(form: &Form) -> Vec<WidgetId> {
    form.iter().map(|w| w.id).filter(|&id| form.eligible(id)).collect()
}

fn step(form: &Form, current: Option<WidgetId>, forward: bool) -> Option<WidgetId> {
    let ring = ring(form);
    if ring.is_empty() {
        return None;
    }
    let n = ring.len();
    match current.and_then(|c| ring.iter().position(|&r| r == c)) {
        Some(i) if forward => Some(ring[(i + 1) % n]),
        Some(i) => Some(ring[(i + n - 1) % n]),
        None => {
            // a stale current keeps its place in creation order
            let pos = current.and_then(|c| form.position(c));
            let at = |id: WidgetId| form.position(id).expect("ring member");
            Some(match pos {
                None if forward => ring[0],
                None => ring[n - 1],
                Some(p) if forward => ring.iter().copied().find(|&r| at(r) > p).unwrap_or(ring[0]),
                Some(p) => ring.iter().rev().copied().find(|&r| at(r) < p).unwrap_or(ring[n - 1]),
            })
        }
    }
}

/// Cyclic successor among eligible widgets.
pub fn next_in(form: &Form, current: Option<WidgetId>) -> Option<WidgetId> {
    step(form, current, true)
}

/// Cyclic predecessor among eligible widgets.
pub fn prev_in(form: &Form, current: Option<WidgetId>) -> Option<WidgetId> {
    step(form, current, false)
}

/// Spatial neighbour of `current` in `dir`, if any.
pub fn arrow_target(form: &Form, current: WidgetId, dir: Direction) -> Option<WidgetId> {
    // doubled centres stay integral
    let centre = |id: WidgetId| {
        let r = form.get(id).expect("known").region();
        (2 * i64::from(r.x) + i64::from(r.w), 2 * i64::from(r.y) + i64::from(r.h))
    };
    form.get(current)?;
    let (cx, cy) = centre(current);
    form.iter()
        .enumerate()
        .filter(|(_, w)| w.id != current && form.eligible(w.id))
        .filter_map(|(i, w)| {
            let (x, y) = centre(w.id);
            let (primary, secondary) = match dir {
                Direction::Right if x > cx => (x - cx, (y - cy).abs()),
                Direction::Left if x < cx => (cx - x, (y - cy).abs()),
                Direction::Down if y > cy => (y - cy, (x - cx).abs()),
                Direction::Up if y < cy => (cy - y, (x - cx).abs()),
                _ => return None,
            };
            Some(((primary, secondary, i), w.id))
        })
        .min_by_key(|(k, _)| *k)
        .map(|(_, id)| id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FocusOutcome {
    Unchanged,
    Changed,
    /// An interceptor vetoed `focus:lost`.
    Vetoed,
}

fn payload(target: Option<(WindowId, WidgetId)>) -> ChemSystem {
    let (win, wid) = target.map_or((-1, -1), |(w, i)| (i64::from(w.0), i64::from(i.0)));
    ChemSystem::pack([("window", Electron::Int(win)), ("widget", Electron::Int(wid))])
}

/// System-wide focus: at most one widget holds it.
#[derive(Debug, Clone, Default)]
pub struct Focus {
    current: Option<(WindowId, WidgetId)>,
}

impl Focus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn current(&self) -> Option<(WindowId, WidgetId)> {
        self.current
    }

    fn eligible(wm: &WindowManager, (win, wid): (WindowId, WidgetId)) -> bool {
        wm.window(win).is_some_and(|w| w.visible() && w.form.eligible(wid))
    }

    fn mark(wm: &mut WindowManager, target: Option<(WindowId, WidgetId)>, on: bool) {
        let Some((win, wid)) = target else { return };
        let mut damage = Vec::new();
        if let Some(w) = wm.window_mut(win).and_then(|w| w.form.get_mut(wid)) {
            w.common.focused = on;
            damage.push(w.region());
            if !on && w.has_popup() {
                let o = w.region().origin();
                damage.extend(w.popup_rects().into_iter().map(|r| r.translate(o.x, o.y)));
                w.close_popup();
            }
        }
        for r in damage {
            wm.damage_client(win, r);
        }
    }

    /// Moves focus to `target`, raising nothing. Ineligible targets mean none.
    pub fn set(&mut self, wm: &mut WindowManager, bus: &mut Bus, target: Option<(WindowId, WidgetId)>) -> FocusOutcome {
        let target = target.filter(|&t| Self::eligible(wm, t));
        if target == self.current {
            return FocusOutcome::Unchanged;
        }
        let lost = bus.send(crate::veto::Message::new(TOPIC_LOST, payload(self.current), FOCUS_STRENGTH));
        if lost.is_ok_and(|r| r.is_vetoed()) {
            return FocusOutcome::Vetoed;
        }
        Self::mark(wm, self.current, false);
        self.current = target;
        Self::mark(wm, target, true);
        let _ = bus.send(crate::veto::Message::new(TOPIC_GAINED, payload(target), FOCUS_STRENGTH));
        FocusOutcome::Changed
    }

    /// Tab (or Shift+Tab) within the active window.
    pub fn tab(&mut self, wm: &mut WindowManager, bus: &mut Bus, backwards: bool) -> FocusOutcome {
        let Some(win) = wm.active() else { return FocusOutcome::Unchanged };
        let form = &wm.window(win).expect("active exists").form;
        let cur = self.current.filter(|c| c.0 == win).map(|c| c.1);
        let next = if backwards { prev_in(form, cur) } else { next_in(form, cur) };
        self.set(wm, bus, next.map(|id| (win, id)))
    }

    /// Spatial move from the focused widget; no candidate leaves focus alone.
    pub fn arrow(&mut self, wm: &mut WindowManager, bus: &mut Bus, dir: Direction) -> FocusOutcome {
        let Some((win, wid)) = self.current else { return FocusOutcome::Unchanged };
        let Some(target) = wm.window(win).and_then(|w| arrow_target(&w.form, wid, dir)) else {
            return FocusOutcome::Unchanged;
        };
        self.set(wm, bus, Some((win, target)))
    }

    /// Pointer press at a screen point: raises the window under it and focuses
    /// the widget under it when eligible. Bare client or chrome of another
    /// window clears focus; the desktop clears focus and activation.
    pub fn click(&mut self, wm: &mut WindowManager, bus: &mut Bus, x: i32, y: i32) -> FocusOutcome {
        match wm.hit_test(x, y) {
            Hit::Desktop => {
                wm.deactivate();
                self.set(wm, bus, None)
            }
            Hit::Popup(..) => FocusOutcome::Unchanged,
            Hit::Window(win, part) => {
                let _ = wm.raise(win);
                let form = &wm.window(win).expect("hit").form;
                let target = match part {
                    Part::Client(path) => path.iter().rev().copied().find(|&id| form.eligible(id)),
                    _ => None,
                };
                match target {
                    Some(id) => self.set(wm, bus, Some((win, id))),
                    None if self.current.is_some_and(|c| c.0 != win) => self.set(wm, bus, None),
                    None => FocusOutcome::Unchanged,
                }
            }
        }
    }

    /// Drops focus that no longer rests on an eligible widget of the active
    /// window. Notifications are sent but cannot veto.
    pub fn revalidate(&mut self, wm: &mut WindowManager, bus: &mut Bus) {
        let Some(cur) = self.current else { return };
        if Self::eligible(wm, cur) && wm.active() == Some(cur.0) {
            return;
        }
        let _ = bus.send(crate::veto::Message::new(TOPIC_LOST, payload(self.current), FOCUS_STRENGTH));
        Self::mark(wm, self.current, false);
        self.current = None;
        let _ = bus.send(crate::veto::Message::new(TOPIC_GAINED, payload(None), FOCUS_STRENGTH));
    }
}
