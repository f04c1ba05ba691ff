//! Per-type widget checks shared by the widget suite and the acceptance
//! gate: mouse/keyboard parity and painting.

use std::collections::BTreeMap;

use groundup::chemical::Electron;
use groundup::input::key;
use groundup::kernel::Rect;
use groundup::widgets::{Kind, MenuItem, MenuTree, Widget, WidgetId, WidgetType, CHAR_H, CHAR_W, ITEM_HEIGHT, ROW_H, TAB_H};

use super::rig::{Rig, ORIGIN};

pub const AT: (i32, i32) = (40, 40);

pub fn region(ty: WidgetType) -> Rect {
    let (w, h) = ty.default_size();
    Rect::new(AT.0, AT.1, w, h)
}

fn last_by_name(n: &[(String, Electron)]) -> BTreeMap<String, Electron> {
    n.iter().cloned().collect()
}

type Drive = fn(&mut Rig, WidgetId);

/// Builds the same widget in two rigs, drives one by mouse and the other by
/// keyboard, and requires equal end states and equal final notices.
pub fn parity(kind: &Kind, mouse: Drive, keyboard: Drive) -> Result<(Kind, Vec<(String, Electron)>), String> {
    let ty = kind.widget_type();
    let r = region(ty);
    let mut m = Rig::new();
    let mid = m.add(r, kind.clone());
    mouse(&mut m, mid);
    let mut k = Rig::new();
    let kid = k.add(r, kind.clone());
    keyboard(&mut k, kid);
    let (mk, kk) = (m.kind(mid), k.kind(kid));
    if mk != kk {
        return Err(format!("{ty}: mouse ended in {mk:?}, keyboard in {kk:?}"));
    }
    let (mn, kn) = (m.taken_notices(), k.taken_notices());
    if last_by_name(&mn) != last_by_name(&kn) {
        return Err(format!("{ty}: mouse notices {mn:?}, keyboard notices {kn:?}"));
    }
    if &mk == kind {
        return Err(format!("{ty}: neither script changed anything"));
    }
    Ok((mk, mn))
}

pub fn menu_tree() -> MenuTree {
    MenuTree::new(vec![
        MenuItem::sub("File", MenuTree::new(vec![MenuItem::leaf("New", 1), MenuItem::leaf("Open", 2)])),
        MenuItem::sub("Edit", MenuTree::new(vec![MenuItem::leaf("Cut", 3), MenuItem::leaf("Copy", 4)])),
    ])
}

const LIST_ROW2: (i32, i32) = (AT.0 + 20, AT.1 + 2 + 2 * ROW_H as i32 + 4);

/// One parity case per interactive type: the widget, a mouse-only script,
/// a keyboard-only script, and a check of the shared end state.
pub struct Case {
    pub kind: Kind,
    pub mouse: Drive,
    pub keyboard: Drive,
    pub expect: fn(&Kind, &[(String, Electron)]) -> bool,
}

pub fn cases() -> Vec<Case> {
    vec![
        Case {
            kind: Kind::button("Go"),
            mouse: |r, _| r.click(AT.0 + 10, AT.1 + 10),
            keyboard: |r, _| {
                r.tab();
                r.key(key::ENTER);
            },
            expect: |k, n| matches!(k, Kind::Button { presses: 1, .. }) && n == [("action".into(), Electron::Int(1))],
        },
        Case {
            kind: Kind::checkbox("x", false),
            mouse: |r, _| r.click(AT.0 + 5, AT.1 + 5),
            keyboard: |r, _| {
                r.tab();
                r.key(key::SPACE);
            },
            expect: |k, _| matches!(k, Kind::CheckBox { checked: true, .. }),
        },
        Case {
            kind: Kind::textbox("hello"),
            mouse: |r, _| r.click(AT.0 + 3 + 2 * CHAR_W as i32, AT.1 + 8),
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::HOME, key::RIGHT, key::RIGHT]);
            },
            expect: |k, _| matches!(k, Kind::TextBox(t) if t.caret == 2),
        },
        Case {
            kind: Kind::editbox("ab\ncd\nef"),
            mouse: |r, _| r.click(AT.0 + 3 + CHAR_W as i32, AT.1 + 2 + CHAR_H as i32 + 4),
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::DOWN, key::RIGHT]);
            },
            expect: |k, _| matches!(k, Kind::EditBox(t) if (t.row, t.col) == (1, 1)),
        },
        Case {
            kind: Kind::listbox(&["a", "b", "c", "d", "e", "f", "g"]),
            mouse: |r, _| {
                r.click(LIST_ROW2.0, LIST_ROW2.1);
                r.click(LIST_ROW2.0, LIST_ROW2.1);
            },
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::DOWN, key::DOWN, key::DOWN, key::ENTER]);
            },
            expect: |k, n| matches!(k, Kind::ListBox { selected: Some(2), activations: 1, .. }) && n.contains(&("activate".into(), Electron::Int(2))),
        },
        Case {
            kind: Kind::scrollbar(true, 100, 10),
            mouse: |r, _| {
                r.click(AT.0 + 8, AT.1 + 90);
                r.click(AT.0 + 8, AT.1 + 90);
                r.click(AT.0 + 8, AT.1 + 60);
            },
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::DOWN, key::DOWN, key::PAGE_DOWN]);
            },
            expect: |k, _| matches!(k, Kind::ScrollBar(s) if s.value == 12),
        },
        Case {
            kind: Kind::combobox(&["red", "green", "blue"], None),
            mouse: |r, _| {
                let y = AT.1 + WidgetType::ComboBox.default_size().1 as i32 + 2 + 2 * ROW_H as i32 + 4;
                r.click(AT.0 + 10, AT.1 + 10);
                r.move_to(AT.0 + 10, y);
                r.click(AT.0 + 10, y);
            },
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::ENTER, key::DOWN, key::DOWN, key::DOWN, key::ENTER]);
            },
            expect: |k, _| matches!(k, Kind::ComboBox { selected: Some(2), open: false, .. }),
        },
        Case {
            kind: Kind::pages(&["One", "Two", "Six"]),
            mouse: |r, _| r.click(AT.0 + 2 + 2 * (3 * CHAR_W as i32 + 12) + 10, AT.1 + TAB_H as i32 / 2),
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::RIGHT, key::RIGHT]);
            },
            expect: |k, _| matches!(k, Kind::Pages { current: 2, .. }),
        },
        Case {
            kind: Kind::menubar(menu_tree()),
            mouse: |r, id| {
                r.click(AT.0 + 4 + (4 * CHAR_W as i32 + 16) + 10, AT.1 + 10);
                let panel = r.widget(id).popup_rects()[0];
                let y = AT.1 + panel.y + 2 + ITEM_HEIGHT as i32 / 2;
                r.move_to(AT.0 + panel.x + 10, y);
                r.click(AT.0 + panel.x + 10, y);
            },
            keyboard: |r, _| {
                r.tab();
                r.keys(&[key::RIGHT, key::DOWN, key::ENTER]);
            },
            expect: |k, n| matches!(k, Kind::MenuBar { state: None, highlight: 1, .. }) && n == [("menu".into(), Electron::Int(3))],
        },
    ]
}

/// Runs every parity case; returns the number of types covered.
pub fn parity_suite() -> Result<usize, String> {
    let cases = cases();
    let covered: Vec<WidgetType> = cases.iter().map(|c| c.kind.widget_type()).collect();
    for ty in WidgetType::ALL.into_iter().filter(|t| t.is_interactive()) {
        if !covered.contains(&ty) {
            return Err(format!("{ty} has no parity case"));
        }
    }
    for c in &cases {
        let (k, n) = parity(&c.kind, c.mouse, c.keyboard)?;
        if !(c.expect)(&k, &n) {
            return Err(format!("{}: unexpected end state {k:?} {n:?}", c.kind.widget_type()));
        }
    }
    Ok(cases.len())
}

/// Every type constructs from its defaults, survives a property
/// roundtrip, and paints inside (and only inside) its region.
pub fn paint_suite() -> Result<(), String> {
    if WidgetType::ALL.len() != 14 {
        return Err(format!("{} widget types", WidgetType::ALL.len()));
    }
    let mut bare = Rig::new();
    bare.rt.pump();
    let a = bare.rt.shell.framebuffer().clone();
    for ty in WidgetType::ALL {
        if WidgetType::parse(ty.name()) != Some(ty) {
            return Err(format!("{ty}: name does not parse back"));
        }
        let kind = Kind::default_for(ty);
        let w = Widget::new(WidgetId(1), region(ty), kind.clone()).map_err(|e| format!("{ty}: {e}"))?;
        let back = Widget::from_props(WidgetId(1), ty, region(ty), &w.props()).map_err(|e| format!("{ty}: {e}"))?;
        if back.kind != kind {
            return Err(format!("{ty}: properties do not roundtrip"));
        }
        // an empty bar is indistinguishable from the window face
        let shown = if ty == WidgetType::MenuBar { Kind::menubar(menu_tree()) } else { kind };
        let mut rig = Rig::new();
        rig.add(region(ty), shown);
        rig.rt.pump();
        let b = rig.rt.shell.framebuffer();
        let r = region(ty).translate(ORIGIN.0, ORIGIN.1);
        let (mut inside, mut outside) = (0, 0);
        for y in 0..b.height() as i32 {
            for x in 0..b.width() as i32 {
                if a.get(x, y) != b.get(x, y) {
                    if r.contains(x, y) {
                        inside += 1;
                    } else {
                        outside += 1;
                    }
                }
            }
        }
        if inside == 0 {
            return Err(format!("{ty} painted nothing"));
        }
        if outside > 0 {
            return Err(format!("{ty} painted {outside} pixels outside its region"));
        }
    }
    Ok(())
}
