//! The desktop shell: icons on a grid, the taskbar with its start button,
//! and the cascading start menu.
//!
//! [`Shell`] owns the whole live scene (window manager, focus, message bus,
//! widget handler bindings, and pointer state) and implements the input
//! stages the runtime wires into its event circuit.

mod shell;

use thiserror::Error;

use crate::chemical::{AtomId, ChemSystem, Electron, ParseError};
use crate::kernel::Rect;
use crate::widgets::{paint_menu_panels, Canvas, MenuItem, MenuState, MenuTree, Role, CHAR_H, CHAR_W};
use crate::wm::{ShellLayers, WindowId, WindowManager, WindowState};

pub use shell::{Call, Dispatch, Shell, Stage, NOTICE_STRENGTH, TOPIC_LAUNCH};

pub const CELL_W: u32 = 64;
pub const CELL_H: u32 = 48;
/// Icon glyphs are 16x16 role indices, drawn doubled.
pub const GLYPH: u32 = 16;
/// Taskbar height: glyph height plus eight.
pub const TASKBAR_H: u32 = CHAR_H + 8;
pub const START_W: u32 = 56;

#[derive(Debug, Error)]
pub enum DesktopError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesktopIcon {
    pub id: u32,
    pub caption: String,
    /// `GLYPH * GLYPH` role indices; 255 is transparent.
    pub glyph: Vec<u8>,
    pub slot: (u32, u32),
    pub action: u64,
}

/// A simple framed glyph tinted by `role`.
pub fn default_glyph(role: Role) -> Vec<u8> {
    let mut g = vec![crate::widgets::TRANSPARENT; (GLYPH * GLYPH) as usize];
    for y in 1..GLYPH - 1 {
        for x in 2..GLYPH - 2 {
            let edge = y == 1 || y == GLYPH - 2 || x == 2 || x == GLYPH - 3;
            let v = if edge {
                Role::BorderDark
            } else if y < 5 {
                Role::TitleActive
            } else {
                role
            };
            g[(y * GLYPH + x) as usize] = v.index() as u8;
        }
    }
    g
}

/// Desktop contents: icons and the start menu.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Desktop {
    pub icons: Vec<DesktopIcon>,
    pub start_menu: MenuTree,
}

impl Desktop {
    /// Adds an icon in the next free grid slot, column-major within `rows`.
    pub fn add_icon(&mut self, caption: &str, action: u64, glyph: Vec<u8>, rows: u32) -> u32 {
        let rows = rows.max(1);
        let slot = (0..)
            .map(|i| (i % rows, i / rows))
            .find(|s| self.icons.iter().all(|ic| ic.slot != *s))
            .expect("grid is unbounded");
        let id = self.icons.iter().map(|i| i.id).max().unwrap_or(0) + 1;
        self.icons.push(DesktopIcon {
            id,
            caption: caption.to_owned(),
            glyph,
            slot,
            action,
        });
        id
    }

    /// Grid rows that fit a work area.
    pub fn rows_for(work: Rect) -> u32 {
        (work.h / CELL_H).max(1)
    }

    pub fn cell(slot: (u32, u32)) -> Rect {
        Rect::new((slot.1 * CELL_W) as i32, (slot.0 * CELL_H) as i32, CELL_W, CELL_H)
    }

    pub fn icon_at(&self, x: i32, y: i32) -> Option<u32> {
        self.icons.iter().find(|i| Self::cell(i.slot).contains(x, y)).map(|i| i.id)
    }

    /// Reads a desktop description: `icon` atoms with `caption`, `action`
    /// and optional `row`, `col` and `glyph` (a blob), and `menu` atoms with
    /// `caption`, optional `action`, `enabled` and `parent` (a reference to
    /// another `menu` atom).
    pub fn from_chemical(sys: &ChemSystem, rows: u32) -> Result<Desktop, DesktopError> {
        let mut d = Desktop::default();
        for a in sys.atoms().filter(|a| a.name() == "icon") {
            let caption = a.get("caption").as_text().ok_or_else(|| DesktopError::Invalid("icon without caption".into()))?;
            let action = a.get("action").as_int().and_then(|v| u64::try_from(v).ok()).ok_or_else(|| DesktopError::Invalid(format!("icon {caption:?} has no action")))?;
            let glyph = match a.get("glyph") {
                Electron::Blob(b) if b.len() == (GLYPH * GLYPH) as usize => b.clone(),
                Electron::Null => default_glyph(Role::Highlight),
                _ => return Err(DesktopError::Invalid(format!("icon {caption:?} has a malformed glyph"))),
            };
            let id = d.add_icon(caption, action, glyph, rows);
            if let (Some(r), Some(c)) = (a.get("row").as_int(), a.get("col").as_int()) {
                let slot = (u32::try_from(r).unwrap_or(0), u32::try_from(c).unwrap_or(0));
                if d.icons.iter().any(|i| i.slot == slot && i.id != id) {
                    return Err(DesktopError::Invalid(format!("slot {slot:?} is taken")));
                }
                d.icons.last_mut().expect("just added").slot = slot;
            }
        }
        let menus: Vec<AtomId> = sys.atoms().filter(|a| a.name() == "menu").map(|a| a.id()).collect();
        d.start_menu = build_menu(sys, &menus, None, 0)?;
        Ok(d)
    }

    pub fn parse(text: &str, rows: u32) -> Result<Desktop, DesktopError> {
        Desktop::from_chemical(&ChemSystem::deserialize(text)?, rows)
    }
}

fn build_menu(sys: &ChemSystem, all: &[AtomId], parent: Option<AtomId>, depth: usize) -> Result<MenuTree, DesktopError> {
    if depth > 16 {
        return Err(DesktopError::Invalid("menu nesting too deep".into()));
    }
    let mut items = Vec::new();
    for &id in all {
        let a = sys.atom(id).expect("listed");
        let p = match a.get("parent") {
            Electron::AtomRef(p) => Some(*p),
            _ => None,
        };
        if p != parent {
            continue;
        }
        let caption = a.get("caption").as_text().unwrap_or_default();
        let sub = build_menu(sys, all, Some(id), depth + 1)?;
        let mut item = match a.get("action").as_int() {
            Some(act) if sub.items.is_empty() => MenuItem::leaf(caption, u64::try_from(act).map_err(|_| DesktopError::Invalid("negative action".into()))?),
            _ => MenuItem::sub(caption, sub),
        };
        item.enabled = a.get("enabled").as_bool().unwrap_or(true);
        items.push(item);
    }
    Ok(MenuTree::new(items))
}

/// Taskbar geometry for a screen.
pub fn taskbar_strip(screen: Rect) -> Rect {
    Rect::new(screen.x, screen.y + screen.h as i32 - TASKBAR_H as i32, screen.w, TASKBAR_H)
}

pub fn start_button(strip: Rect) -> Rect {
    Rect::new(strip.x + 2, strip.y + 2, START_W, strip.h - 4)
}

/// One button per open window, in creation order.
pub fn taskbar_buttons(strip: Rect, windows: &[WindowId]) -> Vec<(WindowId, Rect)> {
    if windows.is_empty() {
        return Vec::new();
    }
    let x0 = strip.x + START_W as i32 + 8;
    let avail = (strip.right() - i64::from(x0) - 2).max(0) as u32;
    let w = (avail / windows.len() as u32).min(140);
    windows
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, Rect::new(x0 + (i as u32 * w) as i32, strip.y + 2, w.saturating_sub(2), strip.h - 4)))
        .collect()
}

/// Start menu panels and their screen rectangles, opening upward from the
/// start button.
pub fn start_panels(tree: &MenuTree, state: &MenuState, strip: Rect) -> (Vec<Vec<usize>>, Vec<Rect>) {
    let panels = state.panels(tree, false);
    let start = start_button(strip);
    let rects = crate::widgets::menu::panel_rects(tree, &panels, (start.x, strip.y), true, CHAR_W);
    (panels, rects)
}

/// What the taskbar shows for one window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskEntry {
    pub id: WindowId,
    pub title: String,
    pub state: WindowState,
    pub active: bool,
}

pub fn task_entries(wm: &WindowManager) -> Vec<TaskEntry> {
    wm.windows()
        .map(|w| TaskEntry {
            id: w.id,
            title: w.title.clone(),
            state: w.state,
            active: wm.active() == Some(w.id),
        })
        .collect()
}

/// Layer 0 and layer 2 painter for the desktop.
pub struct DesktopPainter<'a> {
    pub desktop: &'a Desktop,
    pub selected: Option<u32>,
    /// `None` paints a bare desktop with no taskbar.
    pub strip: Option<Rect>,
    pub tasks: Vec<TaskEntry>,
    pub menu: Option<&'a MenuState>,
    pub start_down: bool,
}

impl ShellLayers for DesktopPainter<'_> {
    fn paint_background(&self, c: &mut Canvas<'_>) {
        let clip = c.clip;
        c.fill(clip, Role::Desktop);
        for icon in &self.desktop.icons {
            let cell = Desktop::cell(icon.slot);
            if !cell.intersects(&clip) {
                continue;
            }
            let gx = cell.x + (CELL_W as i32 - 2 * GLYPH as i32) / 2;
            for y in 0..GLYPH {
                for x in 0..GLYPH {
                    let v = icon.glyph[(y * GLYPH + x) as usize];
                    if let Some(role) = Role::ALL.get(v as usize) {
                        c.fill(Rect::new(gx + 2 * x as i32, cell.y + 2 * y as i32, 2, 2), *role);
                    }
                }
            }
            let label = Rect::new(cell.x, cell.y + 2 * GLYPH as i32, CELL_W, CELL_H - 2 * GLYPH);
            let tw = (icon.caption.chars().count() as u32 * CHAR_W).min(CELL_W) as i32;
            let role = if self.selected == Some(icon.id) {
                c.fill(Rect::new(label.x + (CELL_W as i32 - tw) / 2, label.y, tw as u32, label.h), Role::Selection);
                Role::WindowFace
            } else {
                Role::Text
            };
            c.text_in(&icon.caption, label, (CELL_W as i32 - tw) / 2, role);
        }
    }

    fn paint_shell(&self, c: &mut Canvas<'_>) {
        let Some(strip) = self.strip else { return };
        c.fill(strip, Role::WindowFace);
        c.fill(Rect::new(strip.x, strip.y, strip.w, 1), Role::BorderLight);
        let start = start_button(strip);
        c.button(start, self.start_down || self.menu.is_some());
        c.text_in("Start", start, 8, Role::Text);
        let ids: Vec<WindowId> = self.tasks.iter().map(|t| t.id).collect();
        for (t, (_, r)) in self.tasks.iter().zip(taskbar_buttons(strip, &ids)) {
            c.button(r, t.active);
            let role = if t.state == WindowState::Minimized { Role::TextDisabled } else { Role::Text };
            c.text_in(&t.title, r, 6, role);
        }
        if let Some(state) = self.menu {
            let (panels, rects) = start_panels(&self.desktop.start_menu, state, strip);
            paint_menu_panels(c, &self.desktop.start_menu, state, &panels, &rects);
        }
    }
}
