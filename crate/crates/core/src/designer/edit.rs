use std::collections::VecDeque;

use crate::chemical::Electron;
use crate::kernel::{Point, Rect};
use crate::widgets::WidgetType;

use super::{FormDocument, WidgetRecord};

/// Moves and resizes change geometry in multiples of this.
pub const GRID: i32 = 4;
/// Undo depth.
pub const UNDO_LIMIT: usize = 100;
/// Size of the resize grip in a selection's bottom-right corner.
const GRIP: u32 = 6;

fn snap(d: i32) -> i32 {
    d / GRID * GRID
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignerMode {
    Select,
    Place(WidgetType),
}

/// One undoable change, holding what is needed to revert it.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Appends a record.
    Place(WidgetRecord),
    /// Removes a record and its descendants, kept with their old indices.
    Delete { index: usize, removed: Vec<(usize, WidgetRecord)> },
    /// `(index, before, after)` per moved record.
    Geometry(Vec<(usize, Rect, Rect)>),
    Property { index: usize, key: String, old: Option<Electron>, new: Electron },
}

impl Command {
    pub fn apply(&self, doc: &mut FormDocument) {
        match self {
            Command::Place(r) => doc.widgets.push(r.clone()),
            Command::Delete { index, .. } => {
                delete_subtree(doc, *index);
            }
            Command::Geometry(changes) => {
                for &(i, _, after) in changes {
                    doc.widgets[i].region = after;
                }
            }
            Command::Property { index, key, new, .. } => {
                doc.widgets[*index].props.insert(key.clone(), new.clone());
            }
        }
    }

    pub fn revert(&self, doc: &mut FormDocument) {
        match self {
            Command::Place(_) => {
                doc.widgets.pop();
            }
            Command::Delete { removed, .. } => restore(doc, removed),
            Command::Geometry(changes) => {
                for &(i, before, _) in changes {
                    doc.widgets[i].region = before;
                }
            }
            Command::Property { index, key, old, .. } => {
                let props = &mut doc.widgets[*index].props;
                match old {
                    Some(v) => props.insert(key.clone(), v.clone()),
                    None => props.remove(key),
                };
            }
        }
    }
}

/// `index` followed by every record nested inside it.
pub(crate) fn subtree(doc: &FormDocument, index: usize) -> Vec<usize> {
    let mut out = vec![index];
    for (j, r) in doc.widgets.iter().enumerate().skip(index + 1) {
        if r.parent.is_some_and(|(p, _)| out.contains(&p)) {
            out.push(j);
        }
    }
    out
}

fn delete_subtree(doc: &mut FormDocument, index: usize) -> Vec<(usize, WidgetRecord)> {
    let gone = subtree(doc, index);
    let removed: Vec<(usize, WidgetRecord)> = gone.iter().map(|&i| (i, doc.widgets[i].clone())).collect();
    let shift = |old: usize| old - gone.iter().filter(|&&g| g < old).count();
    doc.widgets = std::mem::take(&mut doc.widgets)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !gone.contains(i))
        .map(|(_, mut r)| {
            r.parent = r.parent.map(|(p, s)| (shift(p), s));
            r
        })
        .collect();
    removed
}

fn restore(doc: &mut FormDocument, removed: &[(usize, WidgetRecord)]) {
    let n = doc.widgets.len() + removed.len();
    let free: Vec<usize> = (0..n).filter(|i| !removed.iter().any(|(g, _)| g == i)).collect();
    let mut out: Vec<Option<WidgetRecord>> = vec![None; n];
    for (j, mut r) in std::mem::take(&mut doc.widgets).into_iter().enumerate() {
        r.parent = r.parent.map(|(p, s)| (free[p], s));
        out[free[j]] = Some(r);
    }
    for (i, r) in removed {
        out[*i] = Some(r.clone());
    }
    doc.widgets = out.into_iter().map(|r| r.expect("every slot filled")).collect();
}

fn parse_value(old: &Electron, text: &str) -> Result<Electron, String> {
    let t = text.trim();
    match old {
        Electron::Int(_) => t.parse().map(Electron::Int).map_err(|_| format!("{t:?} is not an integer")),
        Electron::Bool(_) => match t {
            "true" | "yes" | "1" => Ok(Electron::Bool(true)),
            "false" | "no" | "0" => Ok(Electron::Bool(false)),
            _ => Err(format!("{t:?} is not true or false")),
        },
        Electron::List(_) => Ok(Electron::List(t.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Electron::from).collect())),
        Electron::Blob(_) => (0..t.len())
            .step_by(2)
            .map(|i| t.get(i..i + 2).and_then(|h| u8::from_str_radix(h, 16).ok()))
            .collect::<Option<Vec<u8>>>()
            .map(Electron::Blob)
            .ok_or_else(|| "expected hex bytes".to_owned()),
        _ => Ok(Electron::from(text)),
    }
}

#[derive(Debug, Clone, PartialEq)]
struct DragState {
    index: usize,
    grab: Point,
    resize: bool,
    /// Rects of the dragged subtree when the drag began.
    original: Vec<(usize, Rect)>,
}

/// Editing state over a document. Every change is a [`Command`] in a log
/// bounded at [`UNDO_LIMIT`]; replaying the log over [`Designer::base`]
/// reproduces the current document.
#[derive(Debug, Clone)]
pub struct Designer {
    doc: FormDocument,
    base: FormDocument,
    log: VecDeque<Command>,
    mode: DesignerMode,
    selection: Option<usize>,
    drag: Option<DragState>,
    status: String,
}

impl Designer {
    pub fn new(doc: FormDocument) -> Designer {
        Designer {
            base: doc.clone(),
            doc,
            log: VecDeque::new(),
            mode: DesignerMode::Select,
            selection: None,
            drag: None,
            status: String::new(),
        }
    }

    pub fn document(&self) -> &FormDocument {
        &self.doc
    }

    /// The document before the oldest command still in the log.
    pub fn base(&self) -> &FormDocument {
        &self.base
    }

    pub fn log(&self) -> impl ExactSizeIterator<Item = &Command> {
        self.log.iter()
    }

    /// Applies the log to the base document.
    pub fn replay(&self) -> FormDocument {
        let mut d = self.base.clone();
        for c in &self.log {
            c.apply(&mut d);
        }
        d
    }

    pub fn mode(&self) -> DesignerMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: DesignerMode) {
        self.mode = mode;
    }

    pub fn selection(&self) -> Option<usize> {
        self.selection
    }

    pub fn select(&mut self, index: Option<usize>) {
        self.selection = index.filter(|&i| i < self.doc.widgets.len());
    }

    pub fn is_dragging(&self) -> bool {
        self.drag.is_some()
    }

    /// The status-bar message of the last operation.
    pub fn status(&self) -> &str {
        &self.status
    }

    pub fn set_status(&mut self, msg: String) {
        self.status = msg;
    }

    fn push(&mut self, cmd: Command) {
        cmd.apply(&mut self.doc);
        self.log.push_back(cmd);
        if self.log.len() > UNDO_LIMIT {
            let oldest = self.log.pop_front().expect("non-empty");
            oldest.apply(&mut self.base);
        }
    }

    fn fail<T>(&mut self, msg: String) -> Result<T, String> {
        self.status = msg.clone();
        Err(msg)
    }

    /// Reverts the latest command; false when the log is empty.
    pub fn undo(&mut self) -> bool {
        if let Some(d) = self.drag.take() {
            for (i, o) in d.original {
                self.doc.widgets[i].region = o;
            }
        }
        match self.log.pop_back() {
            Some(c) => {
                c.revert(&mut self.doc);
                self.selection = self.selection.filter(|&i| i < self.doc.widgets.len());
                self.status = "undone".into();
                true
            }
            None => {
                self.status = "nothing to undo".into();
                false
            }
        }
    }

    /// Whether a record and every container above it are on screen.
    fn shown(&self, i: usize) -> bool {
        let mut cur = self.doc.widgets[i].parent;
        while let Some((p, slot)) = cur {
            let r = &self.doc.widgets[p];
            if r.ty == WidgetType::Pages && r.props.get("current").and_then(Electron::as_int) != Some(slot as i64) {
                return false;
            }
            cur = r.parent;
        }
        true
    }

    /// The topmost shown record under a form point.
    pub fn record_at(&self, x: i32, y: i32) -> Option<usize> {
        (0..self.doc.widgets.len()).rev().find(|&i| self.shown(i) && self.doc.widgets[i].region.contains(x, y))
    }

    /// Where a rect may live: inside its container, else inside the form.
    fn bound_of(&self, parent: Option<(usize, usize)>) -> Rect {
        parent.map_or(self.doc.bounds(), |(p, _)| self.doc.widgets[p].region)
    }

    /// Adds a record of `ty` with its default size at a form point, moved
    /// inward if it would overhang. It joins the innermost shown container
    /// that holds it whole.
    pub fn place(&mut self, ty: WidgetType, x: i32, y: i32) -> Result<usize, String> {
        if !self.doc.bounds().contains(x, y) {
            return self.fail(format!("({x},{y}) lies outside the form"));
        }
        let (w, h) = ty.default_size();
        let b = self.doc.bounds();
        if w > b.w || h > b.h {
            return self.fail(format!("a {ty} does not fit this form"));
        }
        let region = Rect::new(x.min(b.right() as i32 - w as i32), y.min(b.bottom() as i32 - h as i32), w, h);
        let parent = (0..self.doc.widgets.len()).rev().find_map(|i| {
            let r = &self.doc.widgets[i];
            let slot = match r.ty {
                WidgetType::Frame => 0,
                WidgetType::Pages => r.props.get("current").and_then(Electron::as_int)? as usize,
                _ => return None,
            };
            (self.shown(i) && r.region.contains_rect(&region)).then_some((i, slot))
        });
        let mut record = WidgetRecord::new(ty, region);
        record.parent = parent;
        self.push(Command::Place(record));
        let index = self.doc.widgets.len() - 1;
        self.selection = Some(index);
        self.status = format!("placed {ty} #{index}");
        Ok(index)
    }

    /// Moves a record and its contents by a snapped offset, kept inside its
    /// container.
    pub fn move_by(&mut self, index: usize, dx: i32, dy: i32) -> Result<(), String> {
        let changes = self.moved(index, dx, dy, &self.rects_of(index));
        self.commit_geometry(changes)
    }

    /// Resizes a record by a snapped amount, kept inside its container and
    /// around its contents.
    pub fn resize_by(&mut self, index: usize, dw: i32, dh: i32) -> Result<(), String> {
        let changes = self.resized(index, dw, dh, self.doc.widgets.get(index).map(|r| r.region));
        self.commit_geometry(changes)
    }

    fn rects_of(&self, index: usize) -> Vec<(usize, Rect)> {
        if index >= self.doc.widgets.len() {
            return Vec::new();
        }
        subtree(&self.doc, index).into_iter().map(|i| (i, self.doc.widgets[i].region)).collect()
    }

    fn moved(&self, index: usize, dx: i32, dy: i32, original: &[(usize, Rect)]) -> Vec<(usize, Rect, Rect)> {
        let Some(&(_, r)) = original.first() else { return Vec::new() };
        let b = self.bound_of(self.doc.widgets[index].parent);
        let dx = snap(dx).clamp(b.x - r.x, (b.right() - r.right()) as i32);
        let dy = snap(dy).clamp(b.y - r.y, (b.bottom() - r.bottom()) as i32);
        original.iter().map(|&(i, o)| (i, self.doc.widgets[i].region, o.translate(dx, dy))).collect()
    }

    fn resized(&self, index: usize, dw: i32, dh: i32, original: Option<Rect>) -> Vec<(usize, Rect, Rect)> {
        let Some(r) = original else { return Vec::new() };
        let b = self.bound_of(self.doc.widgets[index].parent);
        let (mut min_w, mut min_h) = (GRID, GRID);
        for &c in &subtree(&self.doc, index)[1..] {
            let cr = self.doc.widgets[c].region;
            min_w = min_w.max((cr.right() - r.left()) as i32);
            min_h = min_h.max((cr.bottom() - r.top()) as i32);
        }
        let (max_w, max_h) = ((b.right() - r.left()) as i32, (b.bottom() - r.top()) as i32);
        let w = (r.w as i32 + snap(dw)).clamp(min_w.min(max_w), max_w);
        let h = (r.h as i32 + snap(dh)).clamp(min_h.min(max_h), max_h);
        vec![(index, self.doc.widgets[index].region, Rect::new(r.x, r.y, w as u32, h as u32))]
    }

    fn commit_geometry(&mut self, changes: Vec<(usize, Rect, Rect)>) -> Result<(), String> {
        if changes.is_empty() {
            return self.fail("no such widget".into());
        }
        let changes: Vec<_> = changes.into_iter().filter(|(_, a, b)| a != b).collect();
        if !changes.is_empty() {
            self.push(Command::Geometry(changes));
        }
        Ok(())
    }

    /// Sets a property from a value, rejecting it if the form would no
    /// longer be valid.
    pub fn set_property(&mut self, index: usize, key: &str, value: Electron) -> Result<(), String> {
        let Some(r) = self.doc.widgets.get(index) else {
            return self.fail(format!("no widget #{index}"));
        };
        let Some(old) = r.props.get(key).cloned() else {
            return self.fail(format!("a {} has no property {key:?}", r.ty));
        };
        let mut trial = self.doc.clone();
        trial.widgets[index].props.insert(key.to_owned(), value.clone());
        if let Err(e) = trial.validate() {
            return self.fail(format!("rejected: {e}"));
        }
        self.push(Command::Property {
            index,
            key: key.to_owned(),
            old: Some(old),
            new: value,
        });
        self.status = format!("set {key}");
        Ok(())
    }

    /// Sets a property from text, parsed by the property's current type.
    pub fn set_property_text(&mut self, index: usize, key: &str, text: &str) -> Result<(), String> {
        let Some(old) = self.doc.widgets.get(index).and_then(|r| r.props.get(key)).cloned() else {
            return self.set_property(index, key, Electron::Null);
        };
        match parse_value(&old, text) {
            Ok(v) => self.set_property(index, key, v),
            Err(e) => self.fail(format!("rejected: {key}: {e}")),
        }
    }

    pub fn delete(&mut self, index: usize) -> Result<(), String> {
        if index >= self.doc.widgets.len() {
            return self.fail(format!("no widget #{index}"));
        }
        let mut probe = self.doc.clone();
        let removed = delete_subtree(&mut probe, index);
        self.push(Command::Delete { index, removed });
        self.selection = None;
        self.status = format!("deleted #{index}");
        Ok(())
    }

    /// Pointer press at a form point.
    pub fn mouse_down(&mut self, x: i32, y: i32) {
        if let DesignerMode::Place(ty) = self.mode {
            self.mode = DesignerMode::Select;
            let _ = self.place(ty, x, y);
            return;
        }
        let grip = self.selection.and_then(|i| {
            let r = self.doc.widgets[i].region;
            let g = Rect::new(r.right() as i32 - GRIP as i32, r.bottom() as i32 - GRIP as i32, GRIP, GRIP);
            (self.shown(i) && g.contains(x, y)).then_some(i)
        });
        let (index, resize) = match grip {
            Some(i) => (i, true),
            None => match self.record_at(x, y) {
                Some(i) => (i, false),
                None => {
                    self.selection = None;
                    return;
                }
            },
        };
        self.selection = Some(index);
        self.drag = Some(DragState {
            index,
            grab: Point::new(x, y),
            resize,
            original: self.rects_of(index),
        });
    }

    /// Pointer motion; during a drag the document follows live.
    pub fn mouse_move(&mut self, x: i32, y: i32) {
        let Some(d) = self.drag.clone() else { return };
        let (dx, dy) = (x - d.grab.x, y - d.grab.y);
        let changes = if d.resize {
            self.resized(d.index, dx, dy, d.original.first().map(|o| o.1))
        } else {
            self.moved(d.index, dx, dy, &d.original)
        };
        for (i, _, after) in changes {
            self.doc.widgets[i].region = after;
        }
    }

    /// Pointer release; a drag that changed anything becomes one command.
    pub fn mouse_up(&mut self, x: i32, y: i32) {
        self.mouse_move(x, y);
        let Some(d) = self.drag.take() else { return };
        let changes: Vec<_> = d.original.iter().map(|&(i, o)| (i, o, self.doc.widgets[i].region)).filter(|(_, a, b)| a != b).collect();
        if changes.is_empty() {
            return;
        }
        for &(i, o, _) in &changes {
            self.doc.widgets[i].region = o;
        }
        self.push(Command::Geometry(changes));
        self.status = format!("{} #{}", if d.resize { "resized" } else { "moved" }, d.index);
    }
}
