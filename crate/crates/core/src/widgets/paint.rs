//! Painters. Every color comes from a theme role, and every painter is
//! clip-invariant: painting with clip `c` changes exactly the pixels inside
//! `c` that an unclipped paint would, and to the same values.

use crate::kernel::{BitmapFont, FrameBuffer, Point, Rect};

use super::behavior::{bar_items, bar_panels, combo_list, scroll_layout, tab_rects, text_cols, visible_rows};
use super::menu::{MenuState, MenuTree, ITEM_HEIGHT};
use super::{Kind, Role, ShapeKind, Theme, Widget, CHAR_H, CHAR_W, ROW_H, STRIP_W, TAB_H, TRANSPARENT};

/// A framebuffer, a theme, a font and a clip rectangle.
pub struct Canvas<'a> {
    pub fb: &'a mut FrameBuffer,
    pub theme: &'a Theme,
    pub font: &'a BitmapFont,
    pub clip: Rect,
}

impl<'a> Canvas<'a> {
    pub fn new(fb: &'a mut FrameBuffer, theme: &'a Theme, font: &'a BitmapFont, clip: Rect) -> Self {
        debug_assert_eq!(theme.mode, fb.format().mode(), "theme must match the framebuffer mode");
        let clip = clip.intersect(&fb.bounds());
        Canvas { fb, theme, font, clip }
    }

    /// Runs `f` with the clip narrowed to `r`.
    pub fn within(&mut self, r: Rect, f: impl FnOnce(&mut Canvas<'_>)) {
        let saved = self.clip;
        self.clip = saved.intersect(&r);
        if !self.clip.is_empty() {
            f(self);
        }
        self.clip = saved;
    }

    pub fn fill(&mut self, r: Rect, role: Role) {
        let _ = self.fb.fill_rect(r, self.theme.color(role), self.clip);
    }

    pub fn stroke(&mut self, r: Rect, role: Role) {
        let _ = self.fb.stroke_rect(r, self.theme.color(role), self.clip);
    }

    pub fn text(&mut self, s: &str, x: i32, y: i32, role: Role) {
        let _ = self.fb.draw_text(self.font, s, Point::new(x, y), self.theme.color(role), None, self.clip);
    }

    /// Text clipped to `r`, vertically centred.
    pub fn text_in(&mut self, s: &str, r: Rect, dx: i32, role: Role) {
        let y = r.y + (r.h as i32 - CHAR_H as i32) / 2;
        self.within(r, |c| c.text(s, r.x + dx, y, role));
    }

    /// A two-tone edge: light on top and left, dark on bottom and right
    /// (swapped when sunken). Unskinned themes give a plain outline.
    pub fn bevel(&mut self, r: Rect, raised: bool) {
        if r.is_empty() {
            return;
        }
        let (a, b) = if raised { (Role::BorderLight, Role::BorderDark) } else { (Role::BorderDark, Role::BorderLight) };
        self.fill(Rect::new(r.x, r.y, r.w, 1), a);
        self.fill(Rect::new(r.x, r.y, 1, r.h), a);
        self.fill(Rect::new(r.x, r.y + r.h as i32 - 1, r.w, 1), b);
        self.fill(Rect::new(r.x + r.w as i32 - 1, r.y, 1, r.h), b);
    }

    /// A button-face box with a raised or pressed bevel.
    pub fn button(&mut self, r: Rect, pressed: bool) {
        self.fill(r, Role::ButtonFace);
        self.bevel(r, !pressed);
    }

    pub fn ellipse(&mut self, r: Rect, role: Role) {
        let (w, h) = (r.w as i64, r.h as i64);
        for j in 0..h {
            // twice the offset from centre, to stay in integers
            let dy = 2 * j + 1 - h;
            let lhs = h * h - dy * dy;
            if lhs < 0 {
                continue;
            }
            // half-width in doubled units: w * sqrt(lhs) / h
            let half2 = ((w * w * lhs) as f64).sqrt() as i64 / h;
            let left = (w - half2) / 2;
            let right = (w + half2 + 1) / 2;
            if right > left {
                self.fill(Rect::new(r.x + left as i32, r.y + j as i32, (right - left) as u32, 1), role);
            }
        }
    }
}

fn text_role(enabled: bool) -> Role {
    if enabled {
        Role::Text
    } else {
        Role::TextDisabled
    }
}

fn arrow(c: &mut Canvas<'_>, r: Rect, glyph: &str, enabled: bool) {
    c.button(r, false);
    let x = r.x + (r.w as i32 - CHAR_W as i32) / 2;
    c.text_in(glyph, r, x - r.x, text_role(enabled));
}

/// Paints one widget whose client area starts at `origin`.
pub fn paint_widget(w: &Widget, c: &mut Canvas<'_>, origin: Point) {
    let r = w.region().translate(origin.x, origin.y);
    let enabled = w.common.enabled;
    let tr = text_role(enabled);
    c.within(r, |c| match &w.kind {
        Kind::Label { text } => c.text_in(text, r, 0, tr),
        Kind::Shape { shape, role } => match shape {
            ShapeKind::Rect => c.fill(r, *role),
            ShapeKind::Outline => c.stroke(r, *role),
            ShapeKind::Ellipse => c.ellipse(r, *role),
        },
        Kind::Image { width, height, pixels } => {
            for y in 0..*height {
                for x in 0..*width {
                    let v = pixels[(y * width + x) as usize];
                    if v != TRANSPARENT {
                        c.fill(Rect::new(r.x + x as i32, r.y + y as i32, 1, 1), super::Role::ALL[v as usize]);
                    }
                }
            }
        }
        Kind::Button { caption, .. } => {
            let p = &w.common.press;
            let down = p.hover && p.pressed == Some(crate::input::MouseButton::Left);
            c.button(r, down);
            let shift = i32::from(down);
            let tw = (caption.chars().count() as u32 * CHAR_W) as i32;
            let inner = r.translate(shift, shift);
            c.text_in(caption, inner, (r.w as i32 - tw) / 2, tr);
        }
        Kind::TextBox(t) => {
            c.fill(r, Role::WindowFace);
            c.bevel(r, false);
            let cols = text_cols(r.w);
            let shown: String = t.text.iter().skip(t.scroll).take(cols).collect();
            let inner = Rect::new(r.x + 3, r.y, r.w.saturating_sub(6), r.h);
            c.text_in(&shown, inner, 0, tr);
            if w.common.focused {
                let x = r.x + 3 + ((t.caret - t.scroll.min(t.caret)) as u32 * CHAR_W) as i32;
                c.fill(Rect::new(x, r.y + 2, 1, r.h.saturating_sub(4)), Role::Text);
            }
        }
        Kind::EditBox(t) => {
            c.fill(r, Role::WindowFace);
            c.bevel(r, false);
            let rows = visible_rows(r.h);
            let text_w = r.w.saturating_sub(STRIP_W);
            let area = Rect::new(r.x + 1, r.y + 1, text_w.saturating_sub(1), r.h.saturating_sub(2));
            c.within(area, |c| {
                for (i, line) in t.lines.iter().enumerate().skip(t.top).take(rows) {
                    let y = r.y + 2 + ((i - t.top) as u32 * ROW_H) as i32;
                    let s: String = line.iter().collect();
                    c.text(&s, r.x + 3, y, tr);
                    if w.common.focused && i == t.row {
                        c.fill(Rect::new(r.x + 3 + (t.col as u32 * CHAR_W) as i32, y, 1, CHAR_H), Role::Text);
                    }
                }
            });
            scroll_strip(c, r, enabled);
        }
        Kind::ListBox { items, selected, top, .. } => {
            c.fill(r, Role::WindowFace);
            c.bevel(r, false);
            let rows = visible_rows(r.h);
            let strip = items.len() > rows;
            let text_w = if strip { r.w.saturating_sub(STRIP_W) } else { r.w };
            for (i, item) in items.iter().enumerate().skip(*top).take(rows) {
                let row = Rect::new(r.x + 2, r.y + 2 + ((i - top) as u32 * ROW_H) as i32, text_w.saturating_sub(4), ROW_H);
                let role = if *selected == Some(i) {
                    c.fill(row, Role::Selection);
                    Role::WindowFace
                } else {
                    tr
                };
                c.text_in(item, row, 2, role);
            }
            if strip {
                scroll_strip(c, r, enabled);
            }
        }
        Kind::ScrollBar(s) => {
            let (btn, _, _, pos, thumb) = scroll_layout(s, w.region());
            c.fill(r, Role::Shadow);
            let along = |a: u32, len: u32| {
                if s.vertical {
                    Rect::new(r.x, r.y + a as i32, r.w, len)
                } else {
                    Rect::new(r.x + a as i32, r.y, len, r.h)
                }
            };
            let total = if s.vertical { r.h } else { r.w };
            let (g0, g1) = if s.vertical { ("^", "v") } else { ("<", ">") };
            arrow(c, along(0, btn), g0, enabled);
            arrow(c, along(total - btn, btn), g1, enabled);
            c.button(along(pos, thumb), false);
        }
        Kind::ComboBox { items, selected, .. } => {
            c.fill(r, Role::WindowFace);
            c.bevel(r, false);
            let b = r.h.min(r.w);
            let field = Rect::new(r.x + 3, r.y, r.w.saturating_sub(b + 3), r.h);
            if let Some(text) = selected.and_then(|i| items.get(i)) {
                c.text_in(text, field, 0, tr);
            }
            arrow(c, Rect::new(r.x + (r.w - b) as i32, r.y, b, r.h), "v", enabled);
        }
        Kind::Frame { caption } => {
            let top = CHAR_H as i32 / 2;
            c.stroke(Rect::new(r.x, r.y + top, r.w, r.h.saturating_sub(top as u32)), Role::BorderDark);
            if !caption.is_empty() {
                let tw = caption.chars().count() as u32 * CHAR_W + 4;
                c.fill(Rect::new(r.x + 6, r.y, tw, CHAR_H), Role::WindowFace);
                c.text(caption, r.x + 8, r.y, tr);
            }
        }
        Kind::CheckBox { caption, checked } => {
            let b = Rect::new(r.x + 2, r.y + (r.h as i32 - 12) / 2, 12, 12);
            c.fill(b, Role::WindowFace);
            c.stroke(b, Role::BorderDark);
            if *checked {
                c.fill(b.inset(3), tr);
            }
            c.text_in(caption, r, 20, tr);
        }
        Kind::Pages { tabs, current } => {
            let body = Rect::new(r.x, r.y + TAB_H as i32 - 1, r.w, r.h.saturating_sub(TAB_H - 1));
            c.stroke(body, Role::BorderDark);
            for (i, (tab, tr_)) in tabs.iter().zip(tab_rects(tabs)).enumerate() {
                let t = tr_.translate(r.x, r.y);
                let face = if i == *current { Role::WindowFace } else { Role::TitleInactive };
                c.fill(t, face);
                c.stroke(t, Role::BorderDark);
                if i == *current {
                    c.fill(Rect::new(t.x + 1, t.y + t.h as i32 - 1, t.w.saturating_sub(2), 1), Role::WindowFace);
                }
                c.text_in(tab, t, 6, tr);
            }
        }
        Kind::ProgressBar { value } => {
            c.fill(r, Role::WindowFace);
            c.bevel(r, false);
            let inner = r.inset(2);
            c.fill(Rect::new(inner.x, inner.y, inner.w * u32::from(*value) / 100, inner.h), Role::Selection);
        }
        Kind::MenuBar { tree, state, highlight } => {
            c.fill(r, Role::WindowFace);
            let open = state.as_ref().and_then(|s| s.path.first().copied());
            for (i, (item, ir)) in tree.items.iter().zip(bar_items(tree, r.h)).enumerate() {
                let ir = ir.translate(r.x, r.y);
                let role = if open == Some(i) || (w.common.focused && open.is_none() && i == *highlight) {
                    c.fill(ir, Role::Selection);
                    Role::WindowFace
                } else {
                    text_role(enabled && item.enabled)
                };
                c.text_in(&item.caption, ir, 8, role);
            }
        }
    });
    if w.common.focused {
        c.stroke(r, Role::Highlight);
    }
}

fn scroll_strip(c: &mut Canvas<'_>, r: Rect, enabled: bool) {
    let x = r.x + r.w.saturating_sub(STRIP_W) as i32;
    let half = r.h / 2;
    arrow(c, Rect::new(x, r.y, STRIP_W.min(r.w), half), "^", enabled);
    arrow(c, Rect::new(x, r.y + half as i32, STRIP_W.min(r.w), r.h - half), "v", enabled);
}

/// Paints the visible panels of an open menu. `rects` are absolute.
pub fn paint_menu_panels(c: &mut Canvas<'_>, tree: &MenuTree, state: &MenuState, panels: &[Vec<usize>], rects: &[Rect]) {
    for (prefix, r) in panels.iter().zip(rects) {
        let Some(t) = tree.subtree(prefix) else { continue };
        c.fill(*r, Role::WindowFace);
        c.bevel(*r, true);
        let lit = state.path.get(prefix.len()).copied().filter(|_| state.path.starts_with(prefix));
        for (i, item) in t.items.iter().enumerate() {
            let row = Rect::new(r.x + 2, r.y + 2 + (i as u32 * ITEM_HEIGHT) as i32, r.w.saturating_sub(4), ITEM_HEIGHT);
            let role = if lit == Some(i) {
                c.fill(row, Role::Selection);
                Role::WindowFace
            } else {
                text_role(item.enabled)
            };
            c.text_in(&item.caption, row, 6, role);
            if item.submenu.is_some() {
                c.text_in(">", row, row.w as i32 - CHAR_W as i32 - 4, role);
            }
        }
    }
}

/// Paints a widget's open popup, if any; popups sit above every window.
pub fn paint_popup(w: &Widget, c: &mut Canvas<'_>, origin: Point) {
    let at = w.region().origin();
    let (ox, oy) = (origin.x + at.x, origin.y + at.y);
    match &w.kind {
        Kind::ComboBox { items, open: true, highlight, .. } => {
            let list = combo_list(items.len(), w.region()).translate(ox, oy);
            c.fill(list, Role::WindowFace);
            c.stroke(list, Role::BorderDark);
            for (i, item) in items.iter().enumerate() {
                let row = Rect::new(list.x + 2, list.y + 2 + (i as u32 * ROW_H) as i32, list.w.saturating_sub(4), ROW_H);
                let role = if *highlight == Some(i) {
                    c.fill(row, Role::Selection);
                    Role::WindowFace
                } else {
                    Role::Text
                };
                c.text_in(item, row, 2, role);
            }
        }
        Kind::MenuBar { tree, state: Some(s), .. } => {
            let (panels, rects) = bar_panels(tree, s, w.region().h);
            let rects: Vec<Rect> = rects.iter().map(|r| r.translate(ox, oy)).collect();
            paint_menu_panels(c, tree, s, &panels, &rects);
        }
        _ => {}
    }
}
