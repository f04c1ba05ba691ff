//! Built-in reactions of each widget type to classified events, plus the
//! layout helpers shared with painting.

use crate::chemical::Electron;
use crate::input::{key, InputKind, MouseButton};
use crate::kernel::Rect;

use super::menu::{self, MenuOutcome, MenuState, MenuTree};
use super::{EventCode, Kind, ScrollState, TextArea, TextLine, Widget, CHAR_H, CHAR_W, ROW_H, STRIP_W, TAB_H};

/// Something a widget reports to the outside world, posted on the bus as
/// `<widget id>:<name>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Notice {
    pub name: &'static str,
    pub value: Electron,
}

impl Notice {
    fn new(name: &'static str, value: impl Into<Electron>) -> Self {
        Notice { name, value: value.into() }
    }
}

/// Key code carried by a keyboard event.
pub fn key_code(input: &InputKind) -> Option<u32> {
    match *input {
        InputKind::KeyDown { code, .. } => Some(code),
        InputKind::KeyChar(c) => Some(c as u32),
        _ => None,
    }
}

pub(crate) fn visible_rows(h: u32) -> usize {
    (h.saturating_sub(4) / ROW_H).max(1) as usize
}

pub(crate) fn text_cols(w: u32) -> usize {
    (w.saturating_sub(6) / CHAR_W).max(1) as usize
}

/// Scroll bar layout along its axis: `(button, trough start, trough length,
/// thumb start, thumb length)`.
pub(crate) fn scroll_layout(s: &ScrollState, region: Rect) -> (u32, u32, u32, u32, u32) {
    let (len, thick) = if s.vertical { (region.h, region.w) } else { (region.w, region.h) };
    let btn = thick.min(len / 3);
    let trough = len - 2 * btn;
    let thumb = ((u64::from(trough) * u64::from(s.page) / (u64::from(s.max) + u64::from(s.page))) as u32).max(8).min(trough);
    let pos = if s.max == 0 {
        btn
    } else {
        btn + ((u64::from(trough - thumb) * u64::from(s.value)) / u64::from(s.max)) as u32
    };
    (btn, btn, trough, pos, thumb)
}

pub(crate) fn tab_rects(tabs: &[String]) -> Vec<Rect> {
    let mut x = 2;
    tabs.iter()
        .map(|t| {
            let w = t.chars().count() as u32 * CHAR_W + 12;
            let r = Rect::new(x, 0, w, TAB_H);
            x += w as i32;
            r
        })
        .collect()
}

pub(crate) fn bar_items(tree: &MenuTree, h: u32) -> Vec<Rect> {
    let mut x = 4;
    tree.items
        .iter()
        .map(|it| {
            let w = it.caption.chars().count() as u32 * CHAR_W + 16;
            let r = Rect::new(x, 0, w, h);
            x += w as i32;
            r
        })
        .collect()
}

/// Visible panel prefixes and their local rectangles for an open menu bar.
pub(crate) fn bar_panels(tree: &MenuTree, state: &MenuState, h: u32) -> (Vec<Vec<usize>>, Vec<Rect>) {
    let panels = state.panels(tree, true);
    let anchor = state.path.first().and_then(|&r| bar_items(tree, h).get(r).copied()).map_or((0, h as i32), |r| (r.x, h as i32));
    let rects = menu::panel_rects(tree, &panels, anchor, false, CHAR_W);
    (panels, rects)
}

pub(crate) fn combo_list(items: usize, region: Rect) -> Rect {
    Rect::new(0, region.h as i32, region.w, items as u32 * ROW_H + 4)
}

fn step(v: Option<usize>, len: usize, code: u32, page: usize) -> Option<usize> {
    if len == 0 {
        return None;
    }
    let last = len - 1;
    Some(match (code, v) {
        (key::HOME, _) => 0,
        (key::END, _) => last,
        (_, None) => 0,
        (key::UP, Some(i)) => i.saturating_sub(1),
        (key::DOWN, Some(i)) => (i + 1).min(last),
        (key::PAGE_UP, Some(i)) => i.saturating_sub(page),
        (key::PAGE_DOWN, Some(i)) => (i + page).min(last),
        (_, Some(i)) => i,
    })
}

fn keep_visible(top: &mut usize, row: usize, rows: usize) {
    if row < *top {
        *top = row;
    } else if row >= *top + rows {
        *top = row + 1 - rows;
    }
}

impl TextLine {
    fn key(&mut self, code: u32, cols: usize) -> bool {
        let before = self.text.len();
        match code {
            key::BACKSPACE if self.caret > 0 => {
                self.caret -= 1;
                self.text.remove(self.caret);
            }
            key::DELETE if self.caret < self.text.len() => {
                self.text.remove(self.caret);
            }
            key::LEFT => self.caret = self.caret.saturating_sub(1),
            key::RIGHT => self.caret = (self.caret + 1).min(self.text.len()),
            key::HOME => self.caret = 0,
            key::END => self.caret = self.text.len(),
            c => {
                if let Some(ch) = key::printable(c) {
                    self.text.insert(self.caret, ch);
                    self.caret += 1;
                }
            }
        }
        self.caret = self.caret.min(self.text.len());
        keep_visible(&mut self.scroll, self.caret, cols);
        self.text.len() != before
    }
}

impl TextArea {
    fn key(&mut self, code: u32, rows: usize) -> bool {
        let mut changed = false;
        let len = |a: &TextArea, r: usize| a.lines[r].len();
        match code {
            key::BACKSPACE => {
                if self.col > 0 {
                    self.col -= 1;
                    self.lines[self.row].remove(self.col);
                    changed = true;
                } else if self.row > 0 {
                    let tail = self.lines.remove(self.row);
                    self.row -= 1;
                    self.col = self.lines[self.row].len();
                    self.lines[self.row].extend(tail);
                    changed = true;
                }
            }
            key::DELETE => {
                if self.col < len(self, self.row) {
                    self.lines[self.row].remove(self.col);
                    changed = true;
                } else if self.row + 1 < self.lines.len() {
                    let next = self.lines.remove(self.row + 1);
                    self.lines[self.row].extend(next);
                    changed = true;
                }
            }
            key::ENTER => {
                let tail = self.lines[self.row].split_off(self.col);
                self.row += 1;
                self.lines.insert(self.row, tail);
                self.col = 0;
                changed = true;
            }
            key::LEFT => {
                if self.col > 0 {
                    self.col -= 1;
                } else if self.row > 0 {
                    self.row -= 1;
                    self.col = len(self, self.row);
                }
            }
            key::RIGHT => {
                if self.col < len(self, self.row) {
                    self.col += 1;
                } else if self.row + 1 < self.lines.len() {
                    self.row += 1;
                    self.col = 0;
                }
            }
            key::UP => self.row = self.row.saturating_sub(1),
            key::DOWN => self.row = (self.row + 1).min(self.lines.len() - 1),
            key::PAGE_UP => self.row = self.row.saturating_sub(rows),
            key::PAGE_DOWN => self.row = (self.row + rows).min(self.lines.len() - 1),
            key::HOME => self.col = 0,
            key::END => self.col = len(self, self.row),
            c => {
                if let Some(ch) = key::printable(c) {
                    self.lines[self.row].insert(self.col, ch);
                    self.col += 1;
                    changed = true;
                }
            }
        }
        self.col = self.col.min(len(self, self.row));
        keep_visible(&mut self.top, self.row, rows);
        changed
    }
}

impl ScrollState {
    fn set(&mut self, v: i64) -> bool {
        let v = v.clamp(0, self.max.into()) as u32;
        let changed = v != self.value;
        self.value = v;
        changed
    }
}

impl Widget {
    /// Runs the built-in behavior for the codes one raw event produced.
    /// `input` is in widget-local coordinates.
    pub fn react(&mut self, codes: &[EventCode], input: &InputKind) -> Vec<Notice> {
        if !self.common.enabled {
            return Vec::new();
        }
        let mut out = Vec::new();
        let region = self.common.region;
        let local = input.position();
        let key = key_code(input);
        for &code in codes {
            match code {
                EventCode::SpecificKeyPressed => {
                    if let Some(k) = key {
                        self.react_key(k, &mut out);
                    }
                }
                EventCode::LeftDown => {
                    if let Some((x, y)) = local {
                        self.react_press(x, y, region, &mut out);
                    }
                }
                EventCode::MouseMove => {
                    if let (Some((x, y)), Kind::ScrollBar(s)) = (local, &mut self.kind) {
                        if let Some(grab) = s.drag {
                            let (_, start, trough, _, thumb) = scroll_layout(s, region);
                            let a = if s.vertical { y } else { x };
                            let span = i64::from(trough - thumb).max(1);
                            let v = (i64::from(a - grab) - i64::from(start)) * i64::from(s.max) / span;
                            if s.set(v) {
                                out.push(Notice::new("scroll", s.value));
                            }
                        }
                    }
                }
                EventCode::LeftUp => {
                    if let Kind::ScrollBar(s) = &mut self.kind {
                        s.drag = None;
                    }
                }
                EventCode::LeftClicked => match &mut self.kind {
                    Kind::Button { presses, .. } => {
                        *presses += 1;
                        out.push(Notice::new("action", *presses));
                    }
                    Kind::CheckBox { checked, .. } => {
                        *checked = !*checked;
                        out.push(Notice::new("toggle", *checked));
                    }
                    _ => {}
                },
                EventCode::LeftDoubleClicked => {
                    if let Kind::ListBox { selected: Some(i), activations, .. } = &mut self.kind {
                        *activations += 1;
                        out.push(Notice::new("activate", *i as u32));
                    }
                }
                EventCode::LeftDownOut => self.close_popup(),
                _ => {}
            }
        }
        out
    }

    fn react_key(&mut self, k: u32, out: &mut Vec<Notice>) {
        let region = self.common.region;
        match &mut self.kind {
            Kind::Button { presses, .. } if matches!(k, key::ENTER | key::SPACE) => {
                *presses += 1;
                out.push(Notice::new("action", *presses));
            }
            Kind::CheckBox { checked, .. } if k == key::SPACE => {
                *checked = !*checked;
                out.push(Notice::new("toggle", *checked));
            }
            Kind::TextBox(t) => {
                if t.key(k, text_cols(region.w)) {
                    out.push(Notice::new("change", t.text.iter().collect::<String>()));
                }
            }
            Kind::EditBox(t) => {
                if t.key(k, visible_rows(region.h)) {
                    out.push(Notice::new("change", t.text()));
                }
            }
            Kind::ListBox { items, selected, top, activations } => {
                let rows = visible_rows(region.h);
                if matches!(k, key::ENTER | key::SPACE) {
                    if let Some(i) = *selected {
                        *activations += 1;
                        out.push(Notice::new("activate", i as u32));
                    }
                    return;
                }
                let next = step(*selected, items.len(), k, rows);
                if let Some(i) = next {
                    keep_visible(top, i, rows);
                }
                if next != *selected {
                    *selected = next;
                    out.push(Notice::new("select", next.map_or(-1, |i| i as i64)));
                }
            }
            Kind::ScrollBar(s) => {
                let v = i64::from(s.value);
                let page = i64::from(s.page);
                let target = match k {
                    key::UP | key::LEFT => v - 1,
                    key::DOWN | key::RIGHT => v + 1,
                    key::PAGE_UP => v - page,
                    key::PAGE_DOWN => v + page,
                    key::HOME => 0,
                    key::END => s.max.into(),
                    _ => v,
                };
                if s.set(target) {
                    out.push(Notice::new("scroll", s.value));
                }
            }
            Kind::ComboBox { items, selected, open, highlight } => {
                if *open {
                    match k {
                        key::UP | key::DOWN => *highlight = step(*highlight, items.len(), k, 1),
                        key::ENTER | key::SPACE => {
                            *open = false;
                            if *highlight != *selected && highlight.is_some() {
                                *selected = *highlight;
                                out.push(Notice::new("select", selected.map_or(-1, |i| i as i64)));
                            }
                        }
                        key::ESCAPE => *open = false,
                        _ => {}
                    }
                } else {
                    match k {
                        key::UP | key::DOWN => {
                            let next = step(*selected, items.len(), k, 1);
                            if next != *selected {
                                *selected = next;
                                out.push(Notice::new("select", next.map_or(-1, |i| i as i64)));
                            }
                        }
                        key::ENTER | key::SPACE if !items.is_empty() => {
                            *open = true;
                            *highlight = *selected;
                        }
                        _ => {}
                    }
                }
            }
            Kind::Pages { tabs, current } => {
                let next = match k {
                    key::LEFT => current.saturating_sub(1),
                    key::RIGHT => (*current + 1).min(tabs.len() - 1),
                    key::HOME => 0,
                    key::END => tabs.len() - 1,
                    _ => *current,
                };
                if next != *current {
                    *current = next;
                    out.push(Notice::new("page", next as u32));
                }
            }
            Kind::MenuBar { tree, state, highlight } => {
                let roots = tree.items.len();
                if roots == 0 {
                    return;
                }
                match state {
                    None => match k {
                        key::LEFT => *highlight = (*highlight + roots - 1) % roots,
                        key::RIGHT => *highlight = (*highlight + 1) % roots,
                        key::DOWN | key::ENTER | key::SPACE => {
                            let mut s = MenuState { path: vec![*highlight] };
                            s.key(tree, key::DOWN, true);
                            *state = Some(s);
                        }
                        _ => {}
                    },
                    Some(s) => {
                        let outcome = s.key(tree, k, true);
                        if let Some(&r) = s.path.first() {
                            *highlight = r;
                        }
                        match outcome {
                            MenuOutcome::Open => {}
                            MenuOutcome::Closed => *state = None,
                            MenuOutcome::Activated(a) => {
                                *state = None;
                                out.push(Notice::new("menu", a));
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }

    fn react_press(&mut self, x: i32, y: i32, region: Rect, out: &mut Vec<Notice>) {
        match &mut self.kind {
            Kind::TextBox(t) => {
                let col = ((x - 3 + CHAR_W as i32 / 2).max(0) as u32 / CHAR_W) as usize;
                t.caret = (t.scroll + col).min(t.text.len());
            }
            Kind::EditBox(t) => {
                let rows = visible_rows(region.h);
                if x >= (region.w - STRIP_W.min(region.w)) as i32 {
                    let max_top = t.lines.len().saturating_sub(rows);
                    t.top = if y < region.h as i32 / 2 { t.top.saturating_sub(1) } else { (t.top + 1).min(max_top) };
                } else {
                    let row = t.top + ((y - 2).max(0) as u32 / CHAR_H) as usize;
                    t.row = row.min(t.lines.len() - 1);
                    let col = ((x - 3 + CHAR_W as i32 / 2).max(0) as u32 / CHAR_W) as usize;
                    t.col = col.min(t.lines[t.row].len());
                }
            }
            Kind::ListBox { items, selected, top, .. } => {
                let rows = visible_rows(region.h);
                if items.len() > rows && x >= (region.w - STRIP_W.min(region.w)) as i32 {
                    let max_top = items.len() - rows;
                    *top = if y < region.h as i32 / 2 { top.saturating_sub(1) } else { (*top + 1).min(max_top) };
                    return;
                }
                let i = *top + ((y - 2).max(0) as u32 / ROW_H) as usize;
                if i < items.len() && *selected != Some(i) {
                    *selected = Some(i);
                    out.push(Notice::new("select", i as u32));
                }
            }
            Kind::ScrollBar(s) => {
                let (btn, _, _, pos, thumb) = scroll_layout(s, region);
                let (a, len) = if s.vertical { (y, region.h) } else { (x, region.w) };
                let v = i64::from(s.value);
                let target = if a < btn as i32 {
                    v - 1
                } else if a >= (len - btn) as i32 {
                    v + 1
                } else if a >= pos as i32 && a < (pos + thumb) as i32 {
                    s.drag = Some(a - pos as i32);
                    v
                } else if a < pos as i32 {
                    v - i64::from(s.page)
                } else {
                    v + i64::from(s.page)
                };
                if s.set(target) {
                    out.push(Notice::new("scroll", s.value));
                }
            }
            Kind::ComboBox { items, selected, open, highlight } => {
                if *open {
                    *open = false;
                } else if !items.is_empty() {
                    *open = true;
                    *highlight = *selected;
                }
            }
            Kind::Pages { tabs, current } => {
                if let Some(i) = tab_rects(tabs).iter().position(|r| r.contains(x, y)) {
                    if i != *current {
                        *current = i;
                        out.push(Notice::new("page", i as u32));
                    }
                }
            }
            Kind::MenuBar { tree, state, highlight } => {
                if let Some(r) = bar_items(tree, region.h).iter().position(|r| r.contains(x, y)) {
                    *highlight = r;
                    if state.as_ref().is_some_and(|s| s.path.first() == Some(&r)) {
                        *state = None;
                    } else {
                        *state = Some(MenuState { path: vec![r] });
                    }
                }
            }
            _ => {}
        }
    }

    pub fn has_popup(&self) -> bool {
        matches!(self.kind, Kind::ComboBox { open: true, .. } | Kind::MenuBar { state: Some(_), .. })
    }

    /// Popup rectangles in widget-local coordinates.
    pub fn popup_rects(&self) -> Vec<Rect> {
        match &self.kind {
            Kind::ComboBox { items, open: true, .. } => vec![combo_list(items.len(), self.common.region)],
            Kind::MenuBar { tree, state: Some(s), .. } => bar_panels(tree, s, self.common.region.h).1,
            _ => Vec::new(),
        }
    }

    pub fn close_popup(&mut self) {
        match &mut self.kind {
            Kind::ComboBox { open, .. } => *open = false,
            Kind::MenuBar { state, .. } => *state = None,
            _ => {}
        }
    }

    /// Mouse input while this widget's popup holds the capture; `input` is
    /// widget-local. A press outside the widget and its popups dismisses.
    pub fn popup_input(&mut self, input: &InputKind) -> Vec<Notice> {
        let mut out = Vec::new();
        let Some((x, y)) = input.position() else { return out };
        let region = self.common.region;
        let on_widget = x >= 0 && y >= 0 && x < region.w as i32 && y < region.h as i32;
        let down = matches!(input, InputKind::MouseDown { button: MouseButton::Left, .. });
        let any_down = matches!(input, InputKind::MouseDown { .. });
        let moved = matches!(input, InputKind::MouseMove { .. });
        match &mut self.kind {
            Kind::ComboBox { items, selected, open, highlight } => {
                let list = combo_list(items.len(), region);
                let row = list.contains(x, y).then(|| (((y - list.y - 2).max(0) as u32 / ROW_H) as usize).min(items.len().saturating_sub(1)));
                if moved {
                    if row.is_some() {
                        *highlight = row;
                    }
                } else if down && row.is_some() {
                    *open = false;
                    if row != *selected {
                        *selected = row;
                        out.push(Notice::new("select", row.map_or(-1, |i| i as i64)));
                    }
                } else if any_down {
                    *open = false;
                }
            }
            Kind::MenuBar { tree, state, highlight } => {
                let Some(s) = state else { return out };
                let bar = bar_items(tree, region.h);
                let (panels, rects) = bar_panels(tree, s, region.h);
                let on_bar = if on_widget { bar.iter().position(|r| r.contains(x, y)) } else { None };
                let on_item = menu::item_at(&rects, tree, &panels, x, y);
                if moved {
                    if let Some(r) = on_bar {
                        if s.path.first() != Some(&r) {
                            s.path = vec![r];
                            *highlight = r;
                        }
                    } else if let Some((p, i)) = on_item {
                        s.hover(panels[p].len(), i);
                    }
                } else if any_down {
                    if let Some((p, i)) = on_item {
                        if down {
                            match s.click(tree, panels[p].len(), i) {
                                MenuOutcome::Activated(a) => {
                                    *state = None;
                                    out.push(Notice::new("menu", a));
                                }
                                MenuOutcome::Closed => *state = None,
                                MenuOutcome::Open => {}
                            }
                        }
                    } else if let Some(r) = on_bar {
                        if down {
                            *highlight = r;
                            if s.path.first() == Some(&r) {
                                *state = None;
                            } else {
                                s.path = vec![r];
                            }
                        }
                    } else {
                        *state = None;
                    }
                }
            }
            _ => {}
        }
        out
    }
}
