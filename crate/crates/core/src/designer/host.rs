use std::cell::RefCell;
use std::path::PathBuf;
use std::rc::Rc;

use crate::chemical::Electron;
use crate::desktop::{Shell, Stage};
use crate::input::{InputKind, MouseButton};
use crate::kernel::{Point, Rect};
use crate::runtime::Runtime;
use crate::widgets::{Kind, Role, ShapeKind, WidgetId, WidgetType};
use crate::wm::{frame_for_client, Hit, Part, WindowId};

use super::{Designer, DesignerMode, FormDocument};

const CANVAS: Point = Point { x: 104, y: 4 };
const PALETTE_H: u32 = 15 * 16 + 4;
const ROW: i32 = 26;

/// The designer's window and the widgets it is built from.
pub struct DesignerUi {
    pub designer: Designer,
    pub window: WindowId,
    pub palette: WidgetId,
    pub key_box: WidgetId,
    pub value_box: WidgetId,
    pub set_button: WidgetId,
    pub delete_button: WidgetId,
    pub undo_button: WidgetId,
    pub save_button: WidgetId,
    pub status: WidgetId,
    path: Option<PathBuf>,
    mirrored: Vec<WidgetId>,
    marker: Option<WidgetId>,
    shown: Option<(FormDocument, Option<usize>)>,
}

fn text_of(shell: &Shell, id: WidgetId) -> String {
    match shell.widget(id).map(|w| &w.kind) {
        Some(Kind::TextBox(t)) => t.text.iter().collect(),
        _ => String::new(),
    }
}

impl DesignerUi {
    /// Screen rectangle of the form canvas.
    pub fn canvas(&self, shell: &Shell) -> Option<Rect> {
        let c = shell.wm.window(self.window)?.client();
        let d = self.designer.document();
        Some(Rect::new(c.x + CANVAS.x, c.y + CANVAS.y, d.width, d.height))
    }

    pub fn set_path(&mut self, path: Option<PathBuf>) {
        self.path = path;
    }

    fn save(&mut self) -> String {
        match &self.path {
            None => "no file to save to".into(),
            Some(p) => match self.designer.document().save(p) {
                Ok(()) => format!("saved {}", p.display()),
                Err(e) => format!("save failed: {e}"),
            },
        }
    }

    /// Rebuilds the canvas and status bar from the designer state.
    pub fn sync(&mut self, shell: &mut Shell) {
        let status = self.designer.status().to_owned();
        shell.with_widget(self.status, |w| {
            if let Kind::Label { text } = &mut w.kind {
                *text = status;
            }
        });
        if self.designer.mode() == DesignerMode::Select {
            shell.with_widget(self.palette, |w| {
                if let Kind::ListBox { selected, .. } = &mut w.kind {
                    *selected = Some(0);
                }
            });
        }
        let now = (self.designer.document().clone(), self.designer.selection());
        if self.shown.as_ref() == Some(&now) {
            return;
        }
        for id in self.mirrored.drain(..).chain(self.marker.take()) {
            shell.remove_widget(id);
        }
        let (doc, sel) = &now;
        for r in &doc.widgets {
            let region = r.region.translate(CANVAS.x, CANVAS.y);
            let parent = r.parent.map(|(p, s)| (self.mirrored[p], s));
            let id = shell.add_widget_props(self.window, r.ty, region, &r.props, parent).expect("document was validated");
            shell.with_widget(id, |w| w.common.focusable = false);
            self.mirrored.push(id);
        }
        if let Some(i) = *sel {
            let region = doc.widgets[i].region.translate(CANVAS.x, CANVAS.y);
            let kind = Kind::Shape {
                shape: ShapeKind::Outline,
                role: Role::Selection,
            };
            self.marker = shell.add_widget(self.window, region, kind, None).ok();
        }
        self.shown = Some(now);
    }

    fn pointer(&mut self, shell: &mut Shell, ev: InputKind) -> bool {
        let (Some((x, y)), Some(canvas)) = (ev.position(), self.canvas(shell)) else { return false };
        let over = canvas.contains(x, y) && matches!(shell.wm.hit_test(x, y), Hit::Window(w, Part::Client(_)) if w == self.window);
        if !over && !self.designer.is_dragging() {
            return false;
        }
        let (fx, fy) = (x - canvas.x, y - canvas.y);
        match ev {
            InputKind::MouseDown { button: MouseButton::Left, .. } if over => self.designer.mouse_down(fx, fy),
            InputKind::MouseMove { .. } => self.designer.mouse_move(fx, fy),
            InputKind::MouseUp { button: MouseButton::Left, .. } => self.designer.mouse_up(fx, fy),
            _ => {}
        }
        self.sync(shell);
        true
    }
}

/// Opens the designer on `doc` as a window whose client area starts at
/// `origin`, wiring its canvas into the runtime's event circuit.
pub fn host(rt: &mut Runtime, doc: FormDocument, origin: Point, path: Option<PathBuf>) -> Rc<RefCell<DesignerUi>> {
    let w = (CANVAS.x as u32 + doc.width + 4).max(408);
    let prop_y = CANVAS.y + doc.height as i32 + 6;
    let h = ((4 + PALETTE_H as i32 + 4 + 3 * ROW).max(prop_y + ROW) + 20) as u32;
    let shell = &mut rt.shell;
    let window = shell.open_window("Form Designer", frame_for_client(origin.x, origin.y, w, h));
    let mut add = |r: Rect, k: Kind| shell.add_widget(window, r, k, None).expect("designer layout fits");
    let mut items = vec!["select"];
    items.extend(WidgetType::ALL.iter().map(|t| t.name()));
    let palette = add(Rect::new(4, 4, 96, PALETTE_H), Kind::listbox(&items));
    let by = 4 + PALETTE_H as i32 + 4;
    let delete_button = add(Rect::new(4, by, 96, 22), Kind::button("Delete"));
    let undo_button = add(Rect::new(4, by + ROW, 96, 22), Kind::button("Undo"));
    let save_button = add(Rect::new(4, by + 2 * ROW, 96, 22), Kind::button("Save"));
    let outline = Kind::Shape {
        shape: ShapeKind::Outline,
        role: Role::BorderDark,
    };
    add(Rect::new(CANVAS.x - 1, CANVAS.y - 1, doc.width + 2, doc.height + 2), outline);
    let key_box = add(Rect::new(CANVAS.x, prop_y, 96, 22), Kind::textbox(""));
    let value_box = add(Rect::new(CANVAS.x + 100, prop_y, 140, 22), Kind::textbox(""));
    let set_button = add(Rect::new(CANVAS.x + 244, prop_y, 56, 22), Kind::button("Set"));
    let status = add(Rect::new(4, h as i32 - 18, w - 8, 16), Kind::label(""));
    shell.with_widget(palette, |w| {
        if let Kind::ListBox { selected, .. } = &mut w.kind {
            *selected = Some(0);
        }
    });

    let ui = Rc::new(RefCell::new(DesignerUi {
        designer: Designer::new(doc),
        window,
        palette,
        key_box,
        value_box,
        set_button,
        delete_button,
        undo_button,
        save_button,
        status,
        path,
        mirrored: Vec::new(),
        marker: None,
        shown: None,
    }));
    ui.borrow_mut().sync(&mut rt.shell);

    let u = ui.clone();
    let filter = rt.register_filter(move |shell, payload, _| {
        if payload.arg("consumed").as_bool() == Some(true) {
            return;
        }
        let Some(ev) = shell.current_event() else { return };
        if u.borrow_mut().pointer(shell, ev) {
            payload.set_arg("consumed", Electron::Bool(true));
        }
    });
    rt.splice_before(Stage::Widgets, filter).expect("default circuit accepts the designer");

    let u = ui.clone();
    let h = rt.register_handler(move |shell, _| {
        let mut ui = u.borrow_mut();
        let selected = match shell.widget(ui.palette).map(|w| &w.kind) {
            Some(Kind::ListBox { selected, .. }) => *selected,
            _ => None,
        };
        let mode = match selected {
            Some(i) if i > 0 => DesignerMode::Place(WidgetType::ALL[i - 1]),
            _ => DesignerMode::Select,
        };
        ui.designer.set_mode(mode);
    });
    rt.shell.bind_notice(palette, "select", h);

    let u = ui.clone();
    let h = rt.register_handler(move |shell, _| {
        let mut ui = u.borrow_mut();
        let (key, value) = (text_of(shell, ui.key_box), text_of(shell, ui.value_box));
        match ui.designer.selection() {
            Some(i) => {
                let _ = ui.designer.set_property_text(i, key.trim(), &value);
            }
            None => ui.designer.set_status("select a widget first".into()),
        }
        ui.sync(shell);
    });
    rt.shell.bind_notice(set_button, "action", h);

    let u = ui.clone();
    let h = rt.register_handler(move |shell, _| {
        let mut ui = u.borrow_mut();
        if let Some(i) = ui.designer.selection() {
            let _ = ui.designer.delete(i);
        }
        ui.sync(shell);
    });
    rt.shell.bind_notice(delete_button, "action", h);

    let u = ui.clone();
    let h = rt.register_handler(move |shell, _| {
        let mut ui = u.borrow_mut();
        ui.designer.undo();
        ui.sync(shell);
    });
    rt.shell.bind_notice(undo_button, "action", h);

    let u = ui.clone();
    let h = rt.register_handler(move |shell, _| {
        let mut ui = u.borrow_mut();
        let msg = ui.save();
        ui.designer.set_status(msg);
        ui.sync(shell);
    });
    rt.shell.bind_notice(save_button, "action", h);

    ui
}
