//! The common widget base, the widget set, and skinning.
//!
//! Every widget shares a [`Common`] part: its region (relative to the window's
//! client area), visibility and enablement, focus eligibility, the keys it
//! claims, and the press memory the [`events::classify`] function uses to
//! turn raw input into the 20 event codes. The per-type state lives in
//! [`Kind`]; built-in behavior reacts to event codes in [`Widget::react`] and
//! painting is in the `paint` submodule.
//!
//! Widgets of a window live in a [`Form`] in creation order. Frames and page
//! sets are containers: a child's region must lie inside its parent's, and
//! a child of a page set is shown only while its page is current.

pub mod events;
pub mod menu;
mod behavior;
mod paint;
pub mod theme;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::chemical::Electron;
use crate::input::key;
use crate::kernel::{Point, Rect};

pub use behavior::Notice;
pub use events::{classify, ClassifyCtx, EventCode, KeySet, PressState, DOUBLE_CLICK_TICKS};
pub use menu::{MenuItem, MenuOutcome, MenuState, MenuTree, ITEM_HEIGHT};
pub use paint::{paint_menu_panels, paint_popup, paint_widget, Canvas};
pub use behavior::key_code;
pub use theme::{Role, Theme, ThemeError};

/// Glyph cell of the built-in font, used for text layout.
pub const CHAR_W: u32 = 8;
pub const CHAR_H: u32 = 16;
/// Height of a list, combo or edit row.
pub const ROW_H: u32 = 16;
/// Width of the scroll strip on lists and edit boxes.
pub const STRIP_W: u32 = 12;
/// Height of the tab strip on a page set.
pub const TAB_H: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WidgetId(pub u32);

impl fmt::Display for WidgetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WidgetType {
    Label,
    Shape,
    Image,
    Button,
    TextBox,
    EditBox,
    ListBox,
    ScrollBar,
    ComboBox,
    Frame,
    CheckBox,
    Pages,
    ProgressBar,
    MenuBar,
}

impl WidgetType {
    pub const ALL: [WidgetType; 14] = [
        WidgetType::Label,
        WidgetType::Shape,
        WidgetType::Image,
        WidgetType::Button,
        WidgetType::TextBox,
        WidgetType::EditBox,
        WidgetType::ListBox,
        WidgetType::ScrollBar,
        WidgetType::ComboBox,
        WidgetType::Frame,
        WidgetType::CheckBox,
        WidgetType::Pages,
        WidgetType::ProgressBar,
        WidgetType::MenuBar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WidgetType::Label => "label",
            WidgetType::Shape => "shape",
            WidgetType::Image => "image",
            WidgetType::Button => "button",
            WidgetType::TextBox => "textbox",
            WidgetType::EditBox => "editbox",
            WidgetType::ListBox => "listbox",
            WidgetType::ScrollBar => "scrollbar",
            WidgetType::ComboBox => "combobox",
            WidgetType::Frame => "frame",
            WidgetType::CheckBox => "checkbox",
            WidgetType::Pages => "pages",
            WidgetType::ProgressBar => "progressbar",
            WidgetType::MenuBar => "menubar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Size given to a freshly placed widget.
    pub fn default_size(self) -> (u32, u32) {
        match self {
            WidgetType::Label => (80, 16),
            WidgetType::Shape => (40, 40),
            WidgetType::Image => (16, 16),
            WidgetType::Button => (72, 24),
            WidgetType::TextBox => (120, 22),
            WidgetType::EditBox => (160, 84),
            WidgetType::ListBox => (120, 84),
            WidgetType::ScrollBar => (16, 96),
            WidgetType::ComboBox => (120, 22),
            WidgetType::Frame => (160, 100),
            WidgetType::CheckBox => (100, 18),
            WidgetType::Pages => (200, 140),
            WidgetType::ProgressBar => (120, 16),
            WidgetType::MenuBar => (200, 20),
        }
    }

    pub fn is_container(self) -> bool {
        matches!(self, WidgetType::Frame | WidgetType::Pages)
    }

    /// Whether the type reacts to input at all.
    pub fn is_interactive(self) -> bool {
        !matches!(self, WidgetType::Label | WidgetType::Shape | WidgetType::Image | WidgetType::Frame | WidgetType::ProgressBar)
    }

    pub fn default_props(self) -> BTreeMap<String, Electron> {
        Kind::default_for(self).props()
    }
}

impl fmt::Display for WidgetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WidgetError {
    #[error("unknown widget type {0:?}")]
    UnknownType(String),
    #[error("bad geometry: {0}")]
    BadGeometry(String),
    #[error("property {key:?}: {reason}")]
    BadProperty { key: String, reason: String },
    #[error("unknown widget {0}")]
    UnknownWidget(WidgetId),
    #[error("widget {0} already exists")]
    DuplicateWidget(WidgetId),
}

fn bad(key: &str, reason: impl Into<String>) -> WidgetError {
    WidgetError::BadProperty {
        key: key.to_owned(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Rect,
    Outline,
    Ellipse,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Rect => "rect",
            ShapeKind::Outline => "outline",
            ShapeKind::Ellipse => "ellipse",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [ShapeKind::Rect, ShapeKind::Outline, ShapeKind::Ellipse].into_iter().find(|k| k.name() == s)
    }
}

/// Pixel value marking a transparent image pixel; others index [`Role::ALL`].
pub const TRANSPARENT: u8 = 255;

/// Single-line text with a caret and horizontal scroll, both in characters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TextLine {
    pub text: Vec<char>,
    pub caret: usize,
    pub scroll: usize,
}

/// Multi-line text: caret as (row, column) and the first visible row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextArea {
    pub lines: Vec<Vec<char>>,
    pub row: usize,
    pub col: usize,
    pub top: usize,
}

impl Default for TextArea {
    fn default() -> Self {
        TextArea {
            lines: vec![Vec::new()],
            row: 0,
            col: 0,
            top: 0,
        }
    }
}

impl TextArea {
    pub fn text(&self) -> String {
        self.lines.iter().map(|l| l.iter().collect::<String>()).collect::<Vec<_>>().join("\n")
    }

    pub fn from_text(s: &str) -> Self {
        TextArea {
            lines: s.split('\n').map(|l| l.chars().collect()).collect(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScrollState {
    pub vertical: bool,
    pub max: u32,
    pub value: u32,
    pub page: u32,
    /// Grab offset within the thumb while dragging.
    pub drag: Option<i32>,
}

/// Per-type state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Label { text: String },
    Shape { shape: ShapeKind, role: Role },
    Image { width: u32, height: u32, pixels: Vec<u8> },
    Button { caption: String, presses: u32 },
    TextBox(TextLine),
    EditBox(TextArea),
    ListBox { items: Vec<String>, selected: Option<usize>, top: usize, activations: u32 },
    ScrollBar(ScrollState),
    ComboBox { items: Vec<String>, selected: Option<usize>, open: bool, highlight: Option<usize> },
    Frame { caption: String },
    CheckBox { caption: String, checked: bool },
    Pages { tabs: Vec<String>, current: usize },
    ProgressBar { value: u8 },
    MenuBar { tree: MenuTree, state: Option<MenuState>, highlight: usize },
}

fn get_text(props: &BTreeMap<String, Electron>, key: &str, default: &str) -> Result<String, WidgetError> {
    match props.get(key) {
        None => Ok(default.to_owned()),
        Some(e) => e.as_text().map(str::to_owned).ok_or_else(|| bad(key, "expected text")),
    }
}

fn get_int(props: &BTreeMap<String, Electron>, key: &str, default: i64) -> Result<i64, WidgetError> {
    match props.get(key) {
        None => Ok(default),
        Some(e) => e.as_int().ok_or_else(|| bad(key, "expected an integer")),
    }
}

fn get_bool(props: &BTreeMap<String, Electron>, key: &str, default: bool) -> Result<bool, WidgetError> {
    match props.get(key) {
        None => Ok(default),
        Some(e) => e.as_bool().ok_or_else(|| bad(key, "expected a boolean")),
    }
}

fn get_list(props: &BTreeMap<String, Electron>, key: &str) -> Result<Vec<String>, WidgetError> {
    match props.get(key) {
        None => Ok(Vec::new()),
        Some(e) => e
            .as_list()
            .and_then(|l| l.iter().map(|x| x.as_text().map(str::to_owned)).collect::<Option<Vec<_>>>())
            .ok_or_else(|| bad(key, "expected a list of text")),
    }
}

fn get_index(props: &BTreeMap<String, Electron>, key: &str, len: usize) -> Result<Option<usize>, WidgetError> {
    match get_int(props, key, -1)? {
        -1 => Ok(None),
        i if i >= 0 && (i as usize) < len => Ok(Some(i as usize)),
        i => Err(bad(key, format!("index {i} out of range 0..{len}"))),
    }
}

fn get_u32(props: &BTreeMap<String, Electron>, key: &str, default: u32) -> Result<u32, WidgetError> {
    u32::try_from(get_int(props, key, default.into())?).map_err(|_| bad(key, "out of range"))
}

fn texts(items: &[String]) -> Electron {
    Electron::List(items.iter().map(|s| Electron::from(s.as_str())).collect())
}

fn index(i: Option<usize>) -> Electron {
    Electron::Int(i.map_or(-1, |i| i as i64))
}

impl Kind {
    pub fn widget_type(&self) -> WidgetType {
        match self {
            Kind::Label { .. } => WidgetType::Label,
            Kind::Shape { .. } => WidgetType::Shape,
            Kind::Image { .. } => WidgetType::Image,
            Kind::Button { .. } => WidgetType::Button,
            Kind::TextBox(_) => WidgetType::TextBox,
            Kind::EditBox(_) => WidgetType::EditBox,
            Kind::ListBox { .. } => WidgetType::ListBox,
            Kind::ScrollBar(_) => WidgetType::ScrollBar,
            Kind::ComboBox { .. } => WidgetType::ComboBox,
            Kind::Frame { .. } => WidgetType::Frame,
            Kind::CheckBox { .. } => WidgetType::CheckBox,
            Kind::Pages { .. } => WidgetType::Pages,
            Kind::ProgressBar { .. } => WidgetType::ProgressBar,
            Kind::MenuBar { .. } => WidgetType::MenuBar,
        }
    }

    pub fn default_for(ty: WidgetType) -> Kind {
        Kind::from_props(ty, &BTreeMap::new()).expect("defaults are valid")
    }

    pub fn label(text: &str) -> Kind {
        Kind::Label { text: text.to_owned() }
    }

    pub fn button(caption: &str) -> Kind {
        Kind::Button {
            caption: caption.to_owned(),
            presses: 0,
        }
    }

    pub fn textbox(text: &str) -> Kind {
        Kind::TextBox(TextLine {
            text: text.chars().collect(),
            ..Default::default()
        })
    }

    pub fn editbox(text: &str) -> Kind {
        Kind::EditBox(TextArea::from_text(text))
    }

    pub fn listbox(items: &[&str]) -> Kind {
        Kind::ListBox {
            items: items.iter().map(|s| s.to_string()).collect(),
            selected: None,
            top: 0,
            activations: 0,
        }
    }

    pub fn scrollbar(vertical: bool, max: u32, page: u32) -> Kind {
        Kind::ScrollBar(ScrollState {
            vertical,
            max,
            value: 0,
            page: page.max(1),
            drag: None,
        })
    }

    pub fn combobox(items: &[&str], selected: Option<usize>) -> Kind {
        Kind::ComboBox {
            items: items.iter().map(|s| s.to_string()).collect(),
            selected,
            open: false,
            highlight: None,
        }
    }

    pub fn frame(caption: &str) -> Kind {
        Kind::Frame { caption: caption.to_owned() }
    }

    pub fn checkbox(caption: &str, checked: bool) -> Kind {
        Kind::CheckBox {
            caption: caption.to_owned(),
            checked,
        }
    }

    pub fn pages(tabs: &[&str]) -> Kind {
        Kind::Pages {
            tabs: tabs.iter().map(|s| s.to_string()).collect(),
            current: 0,
        }
    }

    pub fn progress(value: u32) -> Kind {
        Kind::ProgressBar { value: value.min(100) as u8 }
    }

    pub fn menubar(tree: MenuTree) -> Kind {
        Kind::MenuBar {
            tree,
            state: None,
            highlight: 0,
        }
    }

    /// Builds a widget's state from its property map; missing keys take
    /// their defaults and invalid values are rejected.
    pub fn from_props(ty: WidgetType, p: &BTreeMap<String, Electron>) -> Result<Kind, WidgetError> {
        Ok(match ty {
            WidgetType::Label => Kind::Label { text: get_text(p, "text", "Label")? },
            WidgetType::Shape => Kind::Shape {
                shape: ShapeKind::parse(&get_text(p, "shape", "rect")?).ok_or_else(|| bad("shape", "expected rect, outline or ellipse"))?,
                role: Role::parse(&get_text(p, "role", "highlight")?).ok_or_else(|| bad("role", "unknown role"))?,
            },
            WidgetType::Image => {
                let width = get_u32(p, "width", 8)?;
                let height = get_u32(p, "height", 8)?;
                let pixels = match p.get("pixels") {
                    None => vec![Role::Highlight.index() as u8; (width * height) as usize],
                    Some(Electron::Blob(b)) => b.clone(),
                    Some(_) => return Err(bad("pixels", "expected a blob")),
                };
                if pixels.len() != (width as usize) * (height as usize) {
                    return Err(bad("pixels", format!("expected {} pixels", width * height)));
                }
                if pixels.iter().any(|&v| v != TRANSPARENT && v as usize >= Role::ALL.len()) {
                    return Err(bad("pixels", "pixel values must be role indices or 255"));
                }
                Kind::Image { width, height, pixels }
            }
            WidgetType::Button => Kind::button(&get_text(p, "caption", "Button")?),
            WidgetType::TextBox => Kind::textbox(&get_text(p, "text", "")?),
            WidgetType::EditBox => Kind::editbox(&get_text(p, "text", "")?),
            WidgetType::ListBox => {
                let items = get_list(p, "items")?;
                let selected = get_index(p, "selected", items.len())?;
                Kind::ListBox {
                    items,
                    selected,
                    top: 0,
                    activations: 0,
                }
            }
            WidgetType::ScrollBar => {
                let max = get_u32(p, "max", 100)?;
                let value = get_u32(p, "value", 0)?;
                if value > max {
                    return Err(bad("value", format!("must be at most max ({max})")));
                }
                let page = get_u32(p, "page", 10)?;
                if page == 0 {
                    return Err(bad("page", "must be positive"));
                }
                Kind::ScrollBar(ScrollState {
                    vertical: get_bool(p, "vertical", true)?,
                    max,
                    value,
                    page,
                    drag: None,
                })
            }
            WidgetType::ComboBox => {
                let items = get_list(p, "items")?;
                let selected = get_index(p, "selected", items.len())?;
                Kind::ComboBox {
                    items,
                    selected,
                    open: false,
                    highlight: None,
                }
            }
            WidgetType::Frame => Kind::frame(&get_text(p, "caption", "")?),
            WidgetType::CheckBox => Kind::checkbox(&get_text(p, "caption", "Check")?, get_bool(p, "checked", false)?),
            WidgetType::Pages => {
                let tabs = match p.get("tabs") {
                    None => vec!["Page 1".to_owned(), "Page 2".to_owned()],
                    Some(_) => get_list(p, "tabs")?,
                };
                if tabs.is_empty() {
                    return Err(bad("tabs", "need at least one tab"));
                }
                let current = get_int(p, "current", 0)?;
                if current < 0 || current as usize >= tabs.len() {
                    return Err(bad("current", "no such tab"));
                }
                Kind::Pages {
                    tabs,
                    current: current as usize,
                }
            }
            WidgetType::ProgressBar => {
                let v = get_int(p, "value", 0)?;
                if !(0..=100).contains(&v) {
                    return Err(bad("value", "must be within 0..=100"));
                }
                Kind::progress(v as u32)
            }
            WidgetType::MenuBar => {
                let tree = match p.get("menus") {
                    None => MenuTree::default(),
                    Some(e) => MenuTree::from_electron(e).ok_or_else(|| bad("menus", "malformed menu tree"))?,
                };
                Kind::menubar(tree)
            }
        })
    }

    /// The persistent properties; runtime state such as carets is omitted.
    pub fn props(&self) -> BTreeMap<String, Electron> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Electron| {
            m.insert(k.to_owned(), v);
        };
        match self {
            Kind::Label { text } => put("text", text.as_str().into()),
            Kind::Shape { shape, role } => {
                put("shape", shape.name().into());
                put("role", role.name().into());
            }
            Kind::Image { width, height, pixels } => {
                put("width", (*width).into());
                put("height", (*height).into());
                put("pixels", Electron::Blob(pixels.clone()));
            }
            Kind::Button { caption, .. } => put("caption", caption.as_str().into()),
            Kind::TextBox(t) => put("text", t.text.iter().collect::<String>().into()),
            Kind::EditBox(t) => put("text", t.text().into()),
            Kind::ListBox { items, selected, .. } => {
                put("items", texts(items));
                put("selected", index(*selected));
            }
            Kind::ScrollBar(s) => {
                put("vertical", s.vertical.into());
                put("max", s.max.into());
                put("value", s.value.into());
                put("page", s.page.into());
            }
            Kind::ComboBox { items, selected, .. } => {
                put("items", texts(items));
                put("selected", index(*selected));
            }
            Kind::Frame { caption } => put("caption", caption.as_str().into()),
            Kind::CheckBox { caption, checked } => {
                put("caption", caption.as_str().into());
                put("checked", (*checked).into());
            }
            Kind::Pages { tabs, current } => {
                put("tabs", texts(tabs));
                put("current", (*current as u32).into());
            }
            Kind::ProgressBar { value } => put("value", u32::from(*value).into()),
            Kind::MenuBar { tree, .. } => put("menus", tree.to_electron()),
        }
        m
    }

    fn default_keys(&self) -> KeySet {
        use key::*;
        match self {
            Kind::Button { .. } => KeySet::of(&[ENTER, SPACE]),
            Kind::TextBox(_) => KeySet::of(&[BACKSPACE, DELETE, LEFT, RIGHT, HOME, END]).with_printable(),
            Kind::EditBox(_) => KeySet::of(&[BACKSPACE, DELETE, ENTER, UP, DOWN, LEFT, RIGHT, HOME, END, PAGE_UP, PAGE_DOWN]).with_printable(),
            Kind::ListBox { .. } => KeySet::of(&[UP, DOWN, HOME, END, PAGE_UP, PAGE_DOWN, ENTER, SPACE]),
            Kind::ScrollBar(_) => KeySet::of(&[UP, DOWN, LEFT, RIGHT, HOME, END, PAGE_UP, PAGE_DOWN]),
            Kind::ComboBox { .. } => KeySet::of(&[UP, DOWN, ENTER, SPACE, ESCAPE]),
            Kind::CheckBox { .. } => KeySet::of(&[SPACE]),
            Kind::Pages { .. } => KeySet::of(&[LEFT, RIGHT, HOME, END]),
            Kind::MenuBar { .. } => KeySet::of(&[LEFT, RIGHT, UP, DOWN, ENTER, SPACE, ESCAPE]),
            _ => KeySet::none(),
        }
    }
}

/// State shared by every widget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Common {
    /// Relative to the window's client area.
    pub region: Rect,
    pub visible: bool,
    pub enabled: bool,
    pub focusable: bool,
    pub focused: bool,
    pub accepted: KeySet,
    pub press: PressState,
    /// Container and slot (the page index for page sets, 0 for frames).
    pub parent: Option<(WidgetId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Widget {
    pub id: WidgetId,
    pub common: Common,
    pub kind: Kind,
}

impl Widget {
    pub fn new(id: WidgetId, region: Rect, kind: Kind) -> Result<Widget, WidgetError> {
        if region.is_empty() {
            return Err(WidgetError::BadGeometry(format!("{id} has an empty region {region}")));
        }
        let ty = kind.widget_type();
        Ok(Widget {
            id,
            common: Common {
                region,
                visible: true,
                enabled: true,
                focusable: ty.is_interactive(),
                focused: false,
                accepted: kind.default_keys(),
                press: PressState::default(),
                parent: None,
            },
            kind,
        })
    }

    pub fn from_props(id: WidgetId, ty: WidgetType, region: Rect, props: &BTreeMap<String, Electron>) -> Result<Widget, WidgetError> {
        let mut w = Widget::new(id, region, Kind::from_props(ty, props)?)?;
        w.common.enabled = get_bool(props, "enabled", true)?;
        Ok(w)
    }

    pub fn widget_type(&self) -> WidgetType {
        self.kind.widget_type()
    }

    pub fn region(&self) -> Rect {
        self.common.region
    }

    /// Persistent properties, including enablement.
    pub fn props(&self) -> BTreeMap<String, Electron> {
        let mut m = self.kind.props();
        m.insert("enabled".into(), self.common.enabled.into());
        m
    }
}

/// The widgets of one window, in creation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Form {
    widgets: Vec<Widget>,
}

impl Form {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.widgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widgets.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Widget> {
        self.widgets.iter()
    }

    pub fn get(&self, id: WidgetId) -> Option<&Widget> {
        self.widgets.iter().find(|w| w.id == id)
    }

    pub fn get_mut(&mut self, id: WidgetId) -> Option<&mut Widget> {
        self.widgets.iter_mut().find(|w| w.id == id)
    }

    pub fn position(&self, id: WidgetId) -> Option<usize> {
        self.widgets.iter().position(|w| w.id == id)
    }

    /// Adds a widget, checking that it fits its container.
    pub fn add(&mut self, mut widget: Widget, parent: Option<(WidgetId, usize)>) -> Result<WidgetId, WidgetError> {
        if self.get(widget.id).is_some() {
            return Err(WidgetError::DuplicateWidget(widget.id));
        }
        if let Some((pid, slot)) = parent {
            let p = self.get(pid).ok_or(WidgetError::UnknownWidget(pid))?;
            let inner = match &p.kind {
                Kind::Frame { .. } if slot == 0 => p.region(),
                Kind::Pages { tabs, .. } if slot < tabs.len() => p.region(),
                _ => return Err(WidgetError::BadGeometry(format!("{pid} cannot hold a child in slot {slot}"))),
            };
            if !inner.contains_rect(&widget.region()) {
                return Err(WidgetError::BadGeometry(format!("{} lies outside its container {pid}", widget.id)));
            }
        }
        widget.common.parent = parent;
        let id = widget.id;
        self.widgets.push(widget);
        Ok(id)
    }

    /// Removes a widget and, recursively, its children.
    pub fn remove(&mut self, id: WidgetId) -> Option<Widget> {
        let i = self.position(id)?;
        let w = self.widgets.remove(i);
        let children: Vec<WidgetId> = self.widgets.iter().filter(|c| c.common.parent.map(|p| p.0) == Some(id)).map(|c| c.id).collect();
        for c in children {
            self.remove(c);
        }
        Some(w)
    }

    /// Visible itself, inside visible containers, and on the current page.
    pub fn shown(&self, id: WidgetId) -> bool {
        let mut cur = self.get(id);
        while let Some(w) = cur {
            if !w.common.visible {
                return false;
            }
            match w.common.parent {
                None => return true,
                Some((pid, slot)) => {
                    let p = self.get(pid);
                    if let Some(Widget { kind: Kind::Pages { current, .. }, .. }) = p {
                        if *current != slot {
                            return false;
                        }
                    }
                    cur = p;
                }
            }
        }
        false
    }

    /// Shown, enabled and focusable.
    pub fn eligible(&self, id: WidgetId) -> bool {
        self.get(id).is_some_and(|w| w.common.focusable && w.common.enabled) && self.shown(id)
    }

    /// The topmost shown widget under a client-area point (last created wins).
    pub fn hit(&self, x: i32, y: i32) -> Option<WidgetId> {
        self.widgets.iter().rev().find(|w| w.region().contains(x, y) && self.shown(w.id)).map(|w| w.id)
    }

    /// Container chain from the outermost container down to `id`.
    pub fn path(&self, id: WidgetId) -> Vec<WidgetId> {
        let mut out = vec![id];
        let mut cur = self.get(id).and_then(|w| w.common.parent);
        while let Some((pid, _)) = cur {
            out.push(pid);
            cur = self.get(pid).and_then(|w| w.common.parent);
        }
        out.reverse();
        out
    }

    /// The widget whose popup is open, if any.
    pub fn open_popup(&self) -> Option<WidgetId> {
        self.widgets.iter().find(|w| w.has_popup()).map(|w| w.id)
    }

    /// Offset helper: a client-local point relative to a widget's origin.
    pub fn local(&self, id: WidgetId, p: Point) -> Option<Point> {
        self.get(id).map(|w| Point::new(p.x - w.region().x, p.y - w.region().y))
    }
}
