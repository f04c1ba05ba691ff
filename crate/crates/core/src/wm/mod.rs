//! Windows, z-order, layers and damage-driven composition.
//!
//! Composition paints five layers in ascending order, each clipped to the
//! damaged rectangles: 0 the desktop background, 1 windows in ascending z,
//! 2 widget popups and the shell's own strips and menus, 3 the drag outline,
//! 4 the pointer. [`WindowManager::render_full`] repaints everything and is
//! the reference for incremental composition.

mod damage;

use std::fmt::Write as _;

use thiserror::Error;

use crate::kernel::{BitmapFont, ColorMode, FrameBuffer, Point, Rect};
use crate::widgets::{paint_popup, paint_widget, Canvas, Form, Role, Theme, WidgetId};

pub use damage::DamageList;

/// Title bar height: glyph height plus four.
pub const TITLE_H: u32 = 20;
pub const BORDER: u32 = 2;
/// Side of a close/maximize/minimize button.
pub const BUTTON: u32 = 16;
pub const MIN_W: u32 = 3 * BUTTON + 4 * BORDER + 8;
pub const MIN_H: u32 = TITLE_H + 2 * BORDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WindowId(pub u32);

impl std::fmt::Display for WindowId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowState {
    Normal,
    Maximized,
    Minimized,
}

impl WindowState {
    pub fn name(self) -> &'static str {
        match self {
            WindowState::Normal => "normal",
            WindowState::Maximized => "maximized",
            WindowState::Minimized => "minimized",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WmError {
    #[error("unknown window {0}")]
    UnknownWindow(WindowId),
}

#[derive(Debug, Clone)]
pub struct Window {
    pub id: WindowId,
    pub title: String,
    pub frame: Rect,
    pub state: WindowState,
    /// Frame to return to on restore.
    pub saved: Rect,
    pub z: u32,
    pub form: Form,
    /// Set by mutations, cleared by composition.
    pub dirty: bool,
}

impl Window {
    /// Client area in screen coordinates.
    pub fn client(&self) -> Rect {
        client_of(self.frame)
    }

    pub fn title_bar(&self) -> Rect {
        let f = self.frame;
        Rect::new(f.x + BORDER as i32, f.y + BORDER as i32, f.w.saturating_sub(2 * BORDER), TITLE_H)
    }

    /// Close, maximize and minimize buttons, right to left.
    pub fn buttons(&self) -> [Rect; 3] {
        let t = self.title_bar();
        let y = t.y + 2;
        let right = t.x + t.w as i32 - 2;
        [0, 1, 2].map(|i| Rect::new(right - (i + 1) * (BUTTON as i32 + 2) + 2, y, BUTTON, BUTTON))
    }

    pub fn visible(&self) -> bool {
        self.state != WindowState::Minimized
    }
}

/// The frame whose client area is `w`x`h` with its top-left at (`x`, `y`).
pub fn frame_for_client(x: i32, y: i32, w: u32, h: u32) -> Rect {
    Rect::new(x - BORDER as i32, y - (BORDER + TITLE_H) as i32, w + 2 * BORDER, h + 2 * BORDER + TITLE_H)
}

fn client_of(f: Rect) -> Rect {
    Rect::new(
        f.x + BORDER as i32,
        f.y + (BORDER + TITLE_H) as i32,
        f.w.saturating_sub(2 * BORDER),
        f.h.saturating_sub(2 * BORDER + TITLE_H),
    )
}

/// Which border edges a resize drags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Edges {
    pub left: bool,
    pub right: bool,
    pub top: bool,
    pub bottom: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Part {
    TitleBar,
    Close,
    Maximize,
    Minimize,
    Border(Edges),
    /// Widget path from the outermost container; empty over bare client area.
    Client(Vec<WidgetId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hit {
    Desktop,
    Window(WindowId, Part),
    /// An open widget popup on layer 2.
    Popup(WindowId, WidgetId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DragKind {
    Move,
    Resize(Edges),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Drag {
    pub window: WindowId,
    pub kind: DragKind,
    pub grab: Point,
    pub start: Rect,
    pub outline: Rect,
}

/// Painters for the layers the window manager does not own.
pub trait ShellLayers {
    /// Layer 0.
    fn paint_background(&self, c: &mut Canvas<'_>);
    /// Layer 2, above widget popups.
    fn paint_shell(&self, _c: &mut Canvas<'_>) {}
}

/// A flat desktop and nothing else.
pub struct PlainDesktop;

impl ShellLayers for PlainDesktop {
    fn paint_background(&self, c: &mut Canvas<'_>) {
        let clip = c.clip;
        c.fill(clip, Role::Desktop);
    }
}

const CURSOR: [u16; 12] = [
    0b1000_0000_0000_0000,
    0b1100_0000_0000_0000,
    0b1110_0000_0000_0000,
    0b1111_0000_0000_0000,
    0b1111_1000_0000_0000,
    0b1111_1100_0000_0000,
    0b1111_1110_0000_0000,
    0b1111_1000_0000_0000,
    0b1101_1000_0000_0000,
    0b1000_1100_0000_0000,
    0b0000_1100_0000_0000,
    0b0000_0110_0000_0000,
];

pub struct WindowManager {
    screen: Rect,
    work_area: Rect,
    mode: ColorMode,
    theme: Theme,
    font: BitmapFont,
    windows: Vec<Window>,
    next_id: u32,
    next_z: u32,
    active: Option<WindowId>,
    damage: DamageList,
    drag: Option<Drag>,
    cursor: Option<Point>,
}

impl WindowManager {
    pub fn new(width: u32, height: u32, mode: ColorMode, theme: &Theme) -> Self {
        let screen = Rect::new(0, 0, width, height);
        let mut damage = DamageList::new(screen);
        damage.add(screen);
        WindowManager {
            screen,
            work_area: screen,
            mode,
            theme: theme.converted(mode),
            font: BitmapFont::builtin(),
            windows: Vec::new(),
            next_id: 1,
            next_z: 1,
            active: None,
            damage,
            drag: None,
            cursor: None,
        }
    }

    pub fn screen(&self) -> Rect {
        self.screen
    }

    pub fn mode(&self) -> ColorMode {
        self.mode
    }

    pub fn theme(&self) -> &Theme {
        &self.theme
    }

    pub fn font(&self) -> &BitmapFont {
        &self.font
    }

    /// A framebuffer matching the screen and color mode.
    pub fn new_framebuffer(&self) -> FrameBuffer {
        FrameBuffer::new(self.screen.w, self.screen.h, self.mode.format()).expect("screen is non-empty")
    }

    /// Switches skins; the whole screen is damaged.
    pub fn apply_theme(&mut self, theme: &Theme) {
        self.theme = theme.converted(self.mode);
        self.damage.add(self.screen);
    }

    pub fn work_area(&self) -> Rect {
        self.work_area
    }

    /// Shrinks the area maximized windows fill, refitting them.
    pub fn set_work_area(&mut self, r: Rect) {
        self.work_area = r.intersect(&self.screen);
        let work = self.work_area;
        let ids: Vec<WindowId> = self.windows.iter().filter(|w| w.state == WindowState::Maximized).map(|w| w.id).collect();
        for id in ids {
            self.set_frame(id, work);
        }
    }

    pub fn damage(&self) -> &DamageList {
        &self.damage
    }

    pub fn add_damage(&mut self, r: Rect) {
        self.damage.add(r);
    }

    /// Damages a rectangle given relative to a window's client area.
    pub fn damage_client(&mut self, id: WindowId, local: Rect) {
        if let Some(w) = self.window(id) {
            let c = w.client();
            if w.visible() {
                self.damage.add(local.translate(c.x, c.y));
            }
        }
    }

    pub fn window(&self, id: WindowId) -> Option<&Window> {
        self.windows.iter().find(|w| w.id == id)
    }

    pub fn window_mut(&mut self, id: WindowId) -> Option<&mut Window> {
        self.windows.iter_mut().find(|w| w.id == id)
    }

    fn get(&self, id: WindowId) -> Result<&Window, WmError> {
        self.window(id).ok_or(WmError::UnknownWindow(id))
    }

    /// Windows in creation order.
    pub fn windows(&self) -> impl Iterator<Item = &Window> {
        self.windows.iter()
    }

    /// Window ids bottom to top.
    pub fn z_order(&self) -> Vec<WindowId> {
        let mut v: Vec<&Window> = self.windows.iter().collect();
        v.sort_by_key(|w| w.z);
        v.into_iter().map(|w| w.id).collect()
    }

    pub fn active(&self) -> Option<WindowId> {
        self.active
    }

    pub fn create_window(&mut self, title: &str, frame: Rect) -> WindowId {
        let frame = Rect::new(frame.x, frame.y, frame.w.max(MIN_W), frame.h.max(MIN_H));
        let id = WindowId(self.next_id);
        self.next_id += 1;
        let z = self.next_z;
        self.next_z += 1;
        self.windows.push(Window {
            id,
            title: title.to_owned(),
            frame,
            state: WindowState::Normal,
            saved: frame,
            z,
            form: Form::new(),
            dirty: true,
        });
        self.damage.add(frame);
        self.set_active(Some(id));
        id
    }

    fn set_active(&mut self, id: Option<WindowId>) {
        if self.active == id {
            return;
        }
        for w in [self.active, id].into_iter().flatten() {
            if let Some(win) = self.window(w) {
                if win.visible() {
                    let t = win.title_bar();
                    self.damage.add(t);
                }
            }
        }
        self.active = id;
    }

    /// The topmost visible window other than `except`, for handing on activation.
    fn topmost_visible(&self, except: Option<WindowId>) -> Option<WindowId> {
        self.windows.iter().filter(|w| w.visible() && Some(w.id) != except).max_by_key(|w| w.z).map(|w| w.id)
    }

    fn set_frame(&mut self, id: WindowId, frame: Rect) {
        let Some(w) = self.window_mut(id) else { return };
        let old = w.frame;
        if old == frame {
            return;
        }
        w.frame = frame;
        w.dirty = true;
        if w.visible() {
            self.damage.add(old);
            self.damage.add(frame);
        }
    }

    pub fn move_by(&mut self, id: WindowId, dx: i32, dy: i32) -> Result<(), WmError> {
        let w = self.get(id)?;
        if w.state == WindowState::Normal {
            let f = w.frame.translate(dx, dy);
            self.set_frame(id, f);
        }
        Ok(())
    }

    pub fn move_to(&mut self, id: WindowId, x: i32, y: i32) -> Result<(), WmError> {
        let f = self.get(id)?.frame;
        self.move_by(id, x - f.x, y - f.y)
    }

    /// Resizes a normal window, clamping to the minimum size.
    pub fn resize(&mut self, id: WindowId, w: u32, h: u32) -> Result<(), WmError> {
        let win = self.get(id)?;
        if win.state == WindowState::Normal {
            let f = win.frame;
            self.set_frame(id, Rect::new(f.x, f.y, w.max(MIN_W), h.max(MIN_H)));
        }
        Ok(())
    }

    /// Move and size at once; used when committing drags.
    pub fn set_bounds(&mut self, id: WindowId, r: Rect) -> Result<(), WmError> {
        if self.get(id)?.state == WindowState::Normal {
            self.set_frame(id, Rect::new(r.x, r.y, r.w.max(MIN_W), r.h.max(MIN_H)));
        }
        Ok(())
    }

    pub fn maximize(&mut self, id: WindowId) -> Result<(), WmError> {
        let w = self.get(id)?;
        let (state, frame) = (w.state, w.frame);
        if state == WindowState::Maximized {
            return Ok(());
        }
        let work = self.work_area;
        let w = self.window_mut(id).expect("checked");
        if state == WindowState::Normal {
            w.saved = frame;
        }
        w.state = WindowState::Maximized;
        w.frame = work;
        w.dirty = true;
        self.damage.add(frame);
        self.damage.add(work);
        Ok(())
    }

    pub fn minimize(&mut self, id: WindowId) -> Result<(), WmError> {
        let w = self.get(id)?;
        let (state, frame) = (w.state, w.frame);
        if state == WindowState::Minimized {
            return Ok(());
        }
        let w = self.window_mut(id).expect("checked");
        if state == WindowState::Normal {
            w.saved = frame;
        }
        w.state = WindowState::Minimized;
        w.dirty = true;
        self.damage.add(frame);
        if self.active == Some(id) {
            self.active = None;
            let next = self.topmost_visible(Some(id));
            self.set_active(next);
        }
        if self.drag.is_some_and(|d| d.window == id) {
            self.cancel_drag();
        }
        Ok(())
    }

    /// Back to the normal state and the saved frame.
    pub fn restore(&mut self, id: WindowId) -> Result<(), WmError> {
        let w = self.get(id)?;
        let (state, frame, saved) = (w.state, w.frame, w.saved);
        if state == WindowState::Normal {
            return Ok(());
        }
        let w = self.window_mut(id).expect("checked");
        w.state = WindowState::Normal;
        w.frame = saved;
        w.dirty = true;
        if state != WindowState::Minimized {
            self.damage.add(frame);
        }
        self.damage.add(saved);
        if self.active.is_none() {
            self.set_active(Some(id));
        }
        Ok(())
    }

    pub fn close(&mut self, id: WindowId) -> Result<Window, WmError> {
        let i = self.windows.iter().position(|w| w.id == id).ok_or(WmError::UnknownWindow(id))?;
        let w = self.windows.remove(i);
        if w.visible() {
            self.damage.add(w.frame);
            if let Some(wid) = w.form.open_popup() {
                self.damage_popups(&w, wid);
            }
        }
        if self.active == Some(id) {
            self.active = None;
            let next = self.topmost_visible(None);
            self.set_active(next);
        }
        if self.drag.is_some_and(|d| d.window == id) {
            self.cancel_drag();
        }
        Ok(w)
    }

    fn damage_popups(&mut self, w: &Window, wid: WidgetId) {
        let c = w.client();
        if let Some(widget) = w.form.get(wid) {
            let o = widget.region().origin();
            for r in widget.popup_rects() {
                self.damage.add(r.translate(c.x + o.x, c.y + o.y));
            }
        }
    }

    /// Puts a window on top (keeping the others' relative order) and activates it.
    pub fn raise(&mut self, id: WindowId) -> Result<(), WmError> {
        let w = self.get(id)?;
        let top = self.windows.iter().map(|w| w.z).max().unwrap_or(0);
        if w.z != top {
            let (frame, visible) = (w.frame, w.visible());
            let z = self.next_z;
            self.next_z += 1;
            let w = self.window_mut(id).expect("checked");
            w.z = z;
            w.dirty = true;
            if visible {
                self.damage.add(frame);
                // popups of the raised window now sit above others'
                let wid = self.window(id).and_then(|w| w.form.open_popup());
                if let Some(wid) = wid {
                    let w = self.window(id).expect("checked").clone();
                    self.damage_popups(&w, wid);
                }
            }
        }
        if self.get(id)?.visible() {
            self.set_active(Some(id));
        }
        Ok(())
    }

    /// Deactivates every window (a click on the desktop).
    pub fn deactivate(&mut self) {
        self.set_active(None);
    }

    /// What lies under a screen point: open popups first, then windows top down.
    pub fn hit_test(&self, x: i32, y: i32) -> Hit {
        let mut order: Vec<&Window> = self.windows.iter().filter(|w| w.visible()).collect();
        order.sort_by_key(|w| std::cmp::Reverse(w.z));
        for w in &order {
            if let Some(wid) = w.form.open_popup() {
                let c = w.client();
                let widget = w.form.get(wid).expect("open popup exists");
                let o = widget.region().origin();
                if widget.popup_rects().iter().any(|r| r.translate(c.x + o.x, c.y + o.y).contains(x, y)) {
                    return Hit::Popup(w.id, wid);
                }
            }
        }
        for w in order {
            if !w.frame.contains(x, y) {
                continue;
            }
            let [close, max, min] = w.buttons();
            let part = if close.contains(x, y) {
                Part::Close
            } else if max.contains(x, y) {
                Part::Maximize
            } else if min.contains(x, y) {
                Part::Minimize
            } else if w.title_bar().contains(x, y) {
                Part::TitleBar
            } else if w.client().contains(x, y) {
                let c = w.client();
                Part::Client(w.form.hit(x - c.x, y - c.y).map(|id| w.form.path(id)).unwrap_or_default())
            } else {
                let f = w.frame;
                let b = BORDER as i32;
                let corner = 12;
                let left = x < f.x + b || (x < f.x + corner && (y < f.y + b || y >= f.y + f.h as i32 - b));
                let right = x >= f.x + f.w as i32 - b || (x >= f.x + f.w as i32 - corner && (y < f.y + b || y >= f.y + f.h as i32 - b));
                let top = y < f.y + b || (y < f.y + corner && (x < f.x + b || x >= f.x + f.w as i32 - b));
                let bottom = y >= f.y + f.h as i32 - b || (y >= f.y + f.h as i32 - corner && (x < f.x + b || x >= f.x + f.w as i32 - b));
                Part::Border(Edges { left, right, top, bottom })
            };
            return Hit::Window(w.id, part);
        }
        Hit::Desktop
    }

    pub fn drag(&self) -> Option<Drag> {
        self.drag
    }

    fn damage_outline(&mut self, r: Rect) {
        for e in outline_edges(r) {
            self.damage.add(e);
        }
    }

    /// Starts a move or resize drag of a normal window; the outline shows on
    /// layer 3 until [`end_drag`](Self::end_drag).
    pub fn begin_drag(&mut self, id: WindowId, kind: DragKind, at: Point) -> Result<(), WmError> {
        let w = self.get(id)?;
        if w.state != WindowState::Normal {
            return Ok(());
        }
        let frame = w.frame;
        if let Some(old) = self.drag.take() {
            self.damage_outline(old.outline);
        }
        self.drag = Some(Drag {
            window: id,
            kind,
            grab: at,
            start: frame,
            outline: frame,
        });
        self.damage_outline(frame);
        Ok(())
    }

    pub fn drag_to(&mut self, at: Point) {
        let Some(mut d) = self.drag else { return };
        let (dx, dy) = (at.x - d.grab.x, at.y - d.grab.y);
        let s = d.start;
        let next = match d.kind {
            DragKind::Move => s.translate(dx, dy),
            DragKind::Resize(e) => {
                let (mut l, mut t, mut r, mut b) = (s.left(), s.top(), s.right(), s.bottom());
                if e.left {
                    l = (l + i64::from(dx)).min(r - i64::from(MIN_W));
                }
                if e.right {
                    r = (r + i64::from(dx)).max(l + i64::from(MIN_W));
                }
                if e.top {
                    t = (t + i64::from(dy)).min(b - i64::from(MIN_H));
                }
                if e.bottom {
                    b = (b + i64::from(dy)).max(t + i64::from(MIN_H));
                }
                Rect::from_edges(l, t, r, b)
            }
        };
        if next != d.outline {
            self.damage_outline(d.outline);
            d.outline = next;
            self.damage_outline(next);
            self.drag = Some(d);
        }
    }

    /// Commits the outline as the window's new frame.
    pub fn end_drag(&mut self) {
        if let Some(d) = self.drag.take() {
            self.damage_outline(d.outline);
            let _ = self.set_bounds(d.window, d.outline);
        }
    }

    pub fn cancel_drag(&mut self) {
        if let Some(d) = self.drag.take() {
            self.damage_outline(d.outline);
        }
    }

    pub fn cursor(&self) -> Option<Point> {
        self.cursor
    }

    /// Shows the pointer on layer 4 at `p`, or hides it.
    pub fn set_cursor(&mut self, p: Option<Point>) {
        if self.cursor == p {
            return;
        }
        for q in [self.cursor, p].into_iter().flatten() {
            self.damage.add(Rect::new(q.x, q.y, 8, CURSOR.len() as u32));
        }
        self.cursor = p;
    }

    /// Repaints the damaged pixels and clears the damage. Returns whether
    /// anything was painted.
    pub fn compose(&mut self, fb: &mut FrameBuffer, shell: &dyn ShellLayers) -> bool {
        if self.damage.is_empty() {
            return false;
        }
        let rects = self.damage.take();
        for d in rects {
            self.paint_region(fb, shell, d);
        }
        for w in &mut self.windows {
            w.dirty = false;
        }
        true
    }

    /// Repaints the whole screen from scratch.
    pub fn render_full(&mut self, fb: &mut FrameBuffer, shell: &dyn ShellLayers) {
        self.damage.add(self.screen);
        self.compose(fb, shell);
    }

    fn paint_region(&self, fb: &mut FrameBuffer, shell: &dyn ShellLayers, d: Rect) {
        let mut c = Canvas::new(fb, &self.theme, &self.font, d);
        shell.paint_background(&mut c);
        let mut order: Vec<&Window> = self.windows.iter().filter(|w| w.visible() && w.frame.intersects(&d)).collect();
        order.sort_by_key(|w| w.z);
        for w in &order {
            c.within(w.frame, |c| self.paint_window(w, c));
        }
        let mut all: Vec<&Window> = self.windows.iter().filter(|w| w.visible()).collect();
        all.sort_by_key(|w| w.z);
        for w in all {
            if let Some(wid) = w.form.open_popup() {
                let widget = w.form.get(wid).expect("open popup exists");
                paint_popup(widget, &mut c, w.client().origin());
            }
        }
        shell.paint_shell(&mut c);
        if let Some(drag) = self.drag {
            for e in outline_edges(drag.outline) {
                c.fill(e, Role::Highlight);
            }
        }
        if let Some(p) = self.cursor {
            for (row, bits) in CURSOR.iter().enumerate() {
                for col in 0..8 {
                    if bits & (0x8000 >> col) != 0 {
                        c.fill(Rect::new(p.x + col, p.y + row as i32, 1, 1), Role::Text);
                    }
                }
            }
        }
    }

    fn paint_window(&self, w: &Window, c: &mut Canvas<'_>) {
        let f = w.frame;
        c.fill(f, Role::WindowFace);
        c.bevel(f, true);
        c.bevel(f.inset(1), true);
        let title = w.title_bar();
        let active = self.active == Some(w.id);
        c.fill(title, if active { Role::TitleActive } else { Role::TitleInactive });
        let buttons = w.buttons();
        let text_w = (buttons[2].x - title.x - 4).max(0) as u32;
        c.text_in(&w.title, Rect::new(title.x, title.y, text_w, title.h), 4, Role::WindowFace);
        let max_glyph = if w.state == WindowState::Maximized { "=" } else { "+" };
        for (r, g) in buttons.iter().zip(["x", max_glyph, "_"]) {
            c.button(*r, false);
            c.text_in(g, *r, (BUTTON as i32 - 8) / 2, Role::Text);
        }
        let client = w.client();
        c.within(client, |c| {
            for widget in w.form.iter() {
                if w.form.shown(widget.id) {
                    paint_widget(widget, c, client.origin());
                }
            }
        });
    }

    /// Scene dump for golden tests: one line per window bottom to top.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for id in self.z_order() {
            let w = self.window(id).expect("listed");
            let _ = writeln!(out, "window {} z={} {} {} {:?}", w.id, w.z, w.state.name(), w.frame, w.title);
        }
        let _ = writeln!(out, "active {}", self.active.map_or("none".to_owned(), |a| a.to_string()));
        out
    }
}

/// The four one-pixel edges of a rectangle.
pub fn outline_edges(r: Rect) -> [Rect; 4] {
    [
        Rect::new(r.x, r.y, r.w, 1),
        Rect::new(r.x, r.y + r.h as i32 - 1, r.w, 1),
        Rect::new(r.x, r.y, 1, r.h),
        Rect::new(r.x + r.w as i32 - 1, r.y, 1, r.h),
    ]
}
