//! Menu trees and the open-path state machine shared by the start menu and
//! menu bars.
//!
//! While a menu is open its state is a path of highlighted item indices, one
//! per depth. The item highlighted at depth `d` opens its submenu as the
//! panel for depth `d + 1`, so the visible panels always form one
//! root-to-node path through the tree.

use crate::chemical::Electron;
use crate::input::key;
use crate::kernel::Rect;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuItem {
    pub caption: String,
    pub action: Option<u64>,
    pub submenu: Option<MenuTree>,
    pub enabled: bool,
}

impl MenuItem {
    pub fn leaf(caption: &str, action: u64) -> Self {
        MenuItem {
            caption: caption.to_owned(),
            action: Some(action),
            submenu: None,
            enabled: true,
        }
    }

    pub fn sub(caption: &str, tree: MenuTree) -> Self {
        MenuItem {
            caption: caption.to_owned(),
            action: None,
            submenu: Some(tree),
            enabled: true,
        }
    }

    pub fn disabled(mut self) -> Self {
        self.enabled = false;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MenuTree {
    pub items: Vec<MenuItem>,
}

impl MenuTree {
    pub fn new(items: Vec<MenuItem>) -> Self {
        MenuTree { items }
    }

    /// The tree whose items are shown at depth `prefix.len()`, if the prefix
    /// walks through submenus.
    pub fn subtree(&self, prefix: &[usize]) -> Option<&MenuTree> {
        let mut t = self;
        for &i in prefix {
            t = t.items.get(i)?.submenu.as_ref()?;
        }
        Some(t)
    }

    pub fn item(&self, path: &[usize]) -> Option<&MenuItem> {
        let (last, prefix) = path.split_last()?;
        self.subtree(prefix)?.items.get(*last)
    }

    /// Encodes as nested lists: `[caption, action or -1, enabled, [items...]]`.
    pub fn to_electron(&self) -> Electron {
        Electron::List(
            self.items
                .iter()
                .map(|it| {
                    Electron::List(vec![
                        Electron::from(it.caption.as_str()),
                        Electron::Int(it.action.map_or(-1, |a| a as i64)),
                        Electron::Bool(it.enabled),
                        it.submenu.as_ref().map_or(Electron::Null, MenuTree::to_electron),
                    ])
                })
                .collect(),
        )
    }

    pub fn from_electron(e: &Electron) -> Option<MenuTree> {
        let items = e
            .as_list()?
            .iter()
            .map(|item| {
                let [caption, action, enabled, sub] = item.as_list()? else {
                    return None;
                };
                Some(MenuItem {
                    caption: caption.as_text()?.to_owned(),
                    action: match action.as_int()? {
                        -1 => None,
                        a => Some(u64::try_from(a).ok()?),
                    },
                    enabled: enabled.as_bool()?,
                    submenu: match sub {
                        Electron::Null => None,
                        other => Some(MenuTree::from_electron(other)?),
                    },
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(MenuTree { items })
    }
}

/// Result of feeding one interaction to an open menu.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MenuOutcome {
    /// Still open (possibly with a different path).
    Open,
    /// A leaf was chosen; the menu is closed.
    Activated(u64),
    /// Dismissed without a choice.
    Closed,
}

/// Open-path state of one menu.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MenuState {
    pub path: Vec<usize>,
}

impl MenuState {
    /// Prefixes identifying the visible panels. With `bar`, depth 0 is the
    /// bar itself and has no panel.
    pub fn panels(&self, tree: &MenuTree, bar: bool) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if !bar {
            out.push(Vec::new());
        }
        for d in 0..self.path.len() {
            let prefix = &self.path[..=d];
            if tree.item(prefix).is_some_and(|it| it.submenu.is_some()) {
                out.push(prefix.to_vec());
            }
        }
        out
    }

    /// Pointer over item `i` of the panel at `depth`.
    pub fn hover(&mut self, depth: usize, i: usize) {
        self.path.truncate(depth);
        self.path.push(i);
    }

    fn activate(&mut self, tree: &MenuTree) -> MenuOutcome {
        match tree.item(&self.path) {
            Some(MenuItem { enabled: true, submenu: Some(sub), .. }) if !sub.items.is_empty() => {
                self.path.push(0);
                MenuOutcome::Open
            }
            Some(MenuItem { enabled: true, action: Some(a), submenu: None, .. }) => {
                self.path.clear();
                MenuOutcome::Activated(*a)
            }
            _ => MenuOutcome::Open,
        }
    }

    /// Pointer press on item `i` at `depth`.
    pub fn click(&mut self, tree: &MenuTree, depth: usize, i: usize) -> MenuOutcome {
        self.hover(depth, i);
        match tree.item(&self.path) {
            Some(MenuItem { submenu: Some(_), .. }) => MenuOutcome::Open,
            _ => self.activate(tree),
        }
    }

    /// Keyboard navigation.
    pub fn key(&mut self, tree: &MenuTree, code: u32, bar: bool) -> MenuOutcome {
        let roots = tree.items.len();
        let siblings = |path: &[usize]| path.split_last().and_then(|(_, p)| tree.subtree(p)).map_or(0, |t| t.items.len());
        match code {
            key::ESCAPE => {
                self.path.clear();
                MenuOutcome::Closed
            }
            key::UP | key::DOWN if self.path.is_empty() || bar && self.path.len() == 1 => {
                if self.path.is_empty() {
                    if roots > 0 {
                        self.path.push(if code == key::DOWN || bar { 0 } else { roots - 1 });
                    }
                } else if code == key::DOWN && tree.item(&self.path).is_some_and(|it| it.enabled && it.submenu.as_ref().is_some_and(|s| !s.items.is_empty())) {
                    self.path.push(0);
                }
                MenuOutcome::Open
            }
            key::UP | key::DOWN => {
                let n = siblings(&self.path);
                if let Some(last) = self.path.last_mut() {
                    *last = if code == key::DOWN { (*last + 1) % n } else { (*last + n - 1) % n };
                }
                MenuOutcome::Open
            }
            key::RIGHT => {
                let has_sub = tree.item(&self.path).is_some_and(|it| it.enabled && it.submenu.as_ref().is_some_and(|s| !s.items.is_empty()));
                if has_sub && !(bar && self.path.len() == 1) {
                    self.path.push(0);
                } else if bar && roots > 0 {
                    let r = self.path.first().map_or(0, |r| (r + 1) % roots);
                    self.path = vec![r];
                }
                MenuOutcome::Open
            }
            key::LEFT => {
                if self.path.len() > if bar { 2 } else { 1 } {
                    self.path.pop();
                } else if bar && roots > 0 {
                    let r = self.path.first().map_or(0, |r| (r + roots - 1) % roots);
                    self.path = vec![r];
                }
                MenuOutcome::Open
            }
            key::ENTER | key::SPACE => {
                if self.path.is_empty() {
                    if roots > 0 {
                        self.path.push(0);
                    }
                    MenuOutcome::Open
                } else {
                    self.activate(tree)
                }
            }
            _ => MenuOutcome::Open,
        }
    }
}

/// Height of one menu row.
pub const ITEM_HEIGHT: u32 = 20;

/// Screen rectangles of the visible panels, parallel to
/// [`MenuState::panels`]. `anchor` is where the first panel attaches: its
/// top-left corner, or bottom-left when `upward`. Bar menus pass the
/// top-left corner below the highlighted bar item.
pub fn panel_rects(tree: &MenuTree, panels: &[Vec<usize>], anchor: (i32, i32), upward: bool, char_width: u32) -> Vec<Rect> {
    let mut out: Vec<Rect> = Vec::new();
    for prefix in panels {
        let Some(t) = tree.subtree(prefix) else { break };
        let w = t.items.iter().map(|it| it.caption.chars().count() as u32).max().unwrap_or(0) * char_width + 28;
        let h = t.items.len() as u32 * ITEM_HEIGHT + 4;
        let r = match out.last() {
            None if upward => Rect::new(anchor.0, anchor.1 - h as i32, w, h),
            None => Rect::new(anchor.0, anchor.1, w, h),
            Some(parent) => {
                let row = *prefix.last().unwrap_or(&0) as i32;
                Rect::new(parent.x + parent.w as i32 - 2, parent.y + row * ITEM_HEIGHT as i32, w, h)
            }
        };
        out.push(r);
    }
    out
}

/// Which panel item, if any, lies under `(x, y)`: `(panel index, item)`.
pub fn item_at(rects: &[Rect], tree: &MenuTree, panels: &[Vec<usize>], x: i32, y: i32) -> Option<(usize, usize)> {
    // later panels sit on top
    for (p, r) in rects.iter().enumerate().rev() {
        if r.contains(x, y) {
            let n = tree.subtree(&panels[p])?.items.len();
            let i = (y - r.y - 2).max(0) as usize / ITEM_HEIGHT as usize;
            return Some((p, i.min(n.saturating_sub(1))));
        }
    }
    None
}
