//! The form designer: documents describing a form, their file format, and
//! the interactive editor that runs as a window of this toolkit.
//!
//! A form file is chemical text. One `form` atom carries `title`, `width`,
//! `height` and `theme`; each widget is a `widget` atom with `order`,
//! `type`, `x`, `y`, `w`, `h`, optional `parent` and `slot`, and one
//! `prop.<key>` field per property of its type.

mod edit;
mod host;

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::chemical::{ChemSystem, Electron, ParseError};
use crate::desktop::Shell;
use crate::kernel::Rect;
use crate::widgets::{Widget, WidgetError, WidgetId, WidgetType};
use crate::wm::{frame_for_client, WindowId};

pub use edit::{Command, Designer, DesignerMode, GRID, UNDO_LIMIT};
pub use host::{host, DesignerUi};

const PROP_PREFIX: &str = "prop.";

#[derive(Debug, Error)]
pub enum DesignerError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown widget type {0:?}")]
    UnknownType(String),
    #[error("widget {index}: {reason}")]
    Invalid { index: usize, reason: String },
    #[error("form: {0}")]
    Form(String),
    #[error(transparent)]
    Widget(#[from] WidgetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One widget of a form, in form coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WidgetRecord {
    pub ty: WidgetType,
    pub region: Rect,
    pub props: BTreeMap<String, Electron>,
    /// Index of the containing record and the slot within it.
    pub parent: Option<(usize, usize)>,
}

impl WidgetRecord {
    /// A record of the type's defaults at `region`.
    pub fn new(ty: WidgetType, region: Rect) -> WidgetRecord {
        let w = Widget::new(WidgetId(0), region, crate::widgets::Kind::default_for(ty)).expect("default sizes are non-empty");
        WidgetRecord {
            ty,
            region,
            props: w.props(),
            parent: None,
        }
    }

    /// Builds the widget, validating the properties.
    pub fn build(&self, id: WidgetId) -> Result<Widget, WidgetError> {
        Widget::from_props(id, self.ty, self.region, &self.props)
    }
}

/// A form under design.
#[derive(Debug, Clone, PartialEq)]
pub struct FormDocument {
    pub title: String,
    pub width: u32,
    pub height: u32,
    pub theme: String,
    /// In creation order.
    pub widgets: Vec<WidgetRecord>,
}

impl FormDocument {
    pub fn new(title: &str, width: u32, height: u32) -> FormDocument {
        FormDocument {
            title: title.to_owned(),
            width,
            height,
            theme: "classic".to_owned(),
            widgets: Vec::new(),
        }
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    /// Checks geometry, containment and properties of every record.
    pub fn validate(&self) -> Result<(), DesignerError> {
        for (i, r) in self.widgets.iter().enumerate() {
            let invalid = |reason: String| DesignerError::Invalid { index: i, reason };
            if r.region.is_empty() || !self.bounds().contains_rect(&r.region) {
                return Err(invalid(format!("geometry {} outside the form", r.region)));
            }
            if let Some((p, slot)) = r.parent {
                let Some(parent) = self.widgets.get(p).filter(|_| p < i) else {
                    return Err(invalid(format!("parent {p} must be an earlier widget")));
                };
                let slots = match parent.ty {
                    WidgetType::Frame => 1,
                    WidgetType::Pages => parent.props.get("tabs").and_then(Electron::as_list).map_or(0, <[Electron]>::len),
                    _ => 0,
                };
                if slot >= slots {
                    return Err(invalid(format!("parent {p} has no slot {slot}")));
                }
                if !parent.region.contains_rect(&r.region) {
                    return Err(invalid(format!("outside its container {p}")));
                }
            }
            r.build(WidgetId(0)).map_err(|e| invalid(e.to_string()))?;
        }
        Ok(())
    }

    pub fn to_chemical(&self) -> ChemSystem {
        let mut sys = ChemSystem::new();
        sys.add_atom(
            "form",
            [
                ("title", Electron::from(self.title.as_str())),
                ("width", self.width.into()),
                ("height", self.height.into()),
                ("theme", self.theme.as_str().into()),
            ],
        );
        for (i, r) in self.widgets.iter().enumerate() {
            let mut fields: Vec<(String, Electron)> = vec![
                ("order".into(), (i as u64).into()),
                ("type".into(), r.ty.name().into()),
                ("x".into(), r.region.x.into()),
                ("y".into(), r.region.y.into()),
                ("w".into(), r.region.w.into()),
                ("h".into(), r.region.h.into()),
            ];
            if let Some((p, slot)) = r.parent {
                fields.push(("parent".into(), (p as u64).into()));
                fields.push(("slot".into(), (slot as u64).into()));
            }
            fields.extend(r.props.iter().map(|(k, v)| (format!("{PROP_PREFIX}{k}"), v.clone())));
            sys.add_atom("widget", fields);
        }
        sys
    }

    pub fn from_chemical(sys: &ChemSystem) -> Result<FormDocument, DesignerError> {
        let forms: Vec<_> = sys.atoms().filter(|a| a.name() == "form").collect();
        let [form] = forms.as_slice() else {
            return Err(DesignerError::Form(format!("expected one form atom, found {}", forms.len())));
        };
        let text = |a: &crate::chemical::Atom, k: &str| a.get(k).as_text().map(str::to_owned);
        let int = |a: &crate::chemical::Atom, k: &str| a.get(k).as_int();
        let size = |k: &str| int(form, k).and_then(|v| u32::try_from(v).ok()).filter(|&v| v > 0).ok_or_else(|| DesignerError::Form(format!("bad {k}")));
        let mut doc = FormDocument {
            title: text(form, "title").unwrap_or_default(),
            width: size("width")?,
            height: size("height")?,
            theme: text(form, "theme").unwrap_or_else(|| "classic".into()),
            widgets: Vec::new(),
        };
        let mut records: Vec<(i64, WidgetRecord)> = Vec::new();
        for (n, a) in sys.atoms().filter(|a| a.name() == "widget").enumerate() {
            let invalid = |reason: &str| DesignerError::Invalid { index: n, reason: reason.to_owned() };
            let ty_name = text(a, "type").ok_or_else(|| invalid("missing type"))?;
            let ty = WidgetType::parse(&ty_name).ok_or(DesignerError::UnknownType(ty_name))?;
            let coord = |k: &str| int(a, k).and_then(|v| i32::try_from(v).ok()).ok_or_else(|| invalid(&format!("bad {k}")));
            let dim = |k: &str| int(a, k).and_then(|v| u32::try_from(v).ok()).ok_or_else(|| invalid(&format!("bad {k}")));
            let parent = match (int(a, "parent"), int(a, "slot")) {
                (None, None) => None,
                (Some(p), Some(s)) if p >= 0 && s >= 0 => Some((p as usize, s as usize)),
                _ => return Err(invalid("parent and slot go together")),
            };
            let props = a
                .fields()
                .filter_map(|(k, v)| k.strip_prefix(PROP_PREFIX).map(|k| (k.to_owned(), v.clone())))
                .collect();
            let order = int(a, "order").unwrap_or(n as i64);
            records.push((
                order,
                WidgetRecord {
                    ty,
                    region: Rect::new(coord("x")?, coord("y")?, dim("w")?, dim("h")?),
                    props,
                    parent,
                },
            ));
        }
        records.sort_by_key(|(o, _)| *o);
        doc.widgets = records.into_iter().map(|(_, r)| r).collect();
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        self.to_chemical().serialize()
    }

    pub fn parse(text: &str) -> Result<FormDocument, DesignerError> {
        FormDocument::from_chemical(&ChemSystem::deserialize(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), DesignerError> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn load(path: &Path) -> Result<FormDocument, DesignerError> {
        FormDocument::parse(&std::fs::read_to_string(path)?)
    }
}

/// Opens a window showing the form with its client area at (`x`, `y`).
pub fn instantiate(doc: &FormDocument, shell: &mut Shell, x: i32, y: i32) -> Result<WindowId, DesignerError> {
    doc.validate()?;
    let win = shell.open_window(&doc.title, frame_for_client(x, y, doc.width, doc.height));
    let mut ids: Vec<WidgetId> = Vec::with_capacity(doc.widgets.len());
    for r in &doc.widgets {
        let parent = r.parent.map(|(p, slot)| (ids[p], slot));
        ids.push(shell.add_widget_props(win, r.ty, r.region, &r.props, parent)?);
    }
    Ok(win)
}

/// Reads a live window back into a document.
pub fn introspect(shell: &Shell, win: WindowId, theme: &str) -> Option<FormDocument> {
    let w = shell.wm.window(win)?;
    let client = w.client();
    let order: Vec<WidgetId> = w.form.iter().map(|x| x.id).collect();
    let widgets = w
        .form
        .iter()
        .map(|x| WidgetRecord {
            ty: x.widget_type(),
            region: x.region(),
            props: x.props(),
            parent: x.common.parent.map(|(p, slot)| (order.iter().position(|&o| o == p).expect("parent in form"), slot)),
        })
        .collect();
    Some(FormDocument {
        title: w.title.clone(),
        width: client.w,
        height: client.h,
        theme: theme.to_owned(),
        widgets,
    })
}
