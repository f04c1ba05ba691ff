//! The demo scenes, by name, each with a bundled tour script.

use std::cell::{Cell, RefCell};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, NodeId, NodeKind, SwitchState};
use crate::designer::{self, DesignerUi, FormDocument};
use crate::desktop::{Desktop, Shell, Stage, CELL_H, TASKBAR_H};
use crate::kernel::{ColorMode, Point, Rect, Rgb};
use crate::runtime::{Runtime, TaskStep, INPUT_EVENT};
use crate::widgets::{Kind, MenuItem, MenuTree, Role, ShapeKind, Theme, WidgetId, TRANSPARENT};
use crate::wm::{frame_for_client, WindowId};

pub const NAMES: [&str; 8] = ["circuit", "skin", "focus", "menu", "desktop", "taskbar", "desktop-noskin", "designer"];

/// Desktop icons and start menu shared by the desktop demos.
pub const DESKTOP_CONFIG: &str = include_str!("../assets/desktop.chem");
/// The form opened by the desktop's "Form" icon.
pub const SAMPLE_FORM: &str = include_str!("../assets/sample.form");

/// The bundled tour script of a demo.
pub fn tour(name: &str) -> Option<&'static str> {
    Some(match name {
        "circuit" => include_str!("../scripts/circuit.script"),
        "skin" => include_str!("../scripts/skin.script"),
        "focus" => include_str!("../scripts/focus.script"),
        "menu" => include_str!("../scripts/menu.script"),
        "desktop" => include_str!("../scripts/desktop.script"),
        "taskbar" => include_str!("../scripts/taskbar.script"),
        "desktop-noskin" => include_str!("../scripts/desktop.script"),
        "designer" => include_str!("../scripts/designer.script"),
        _ => return None,
    })
}

#[derive(Debug, Clone)]
pub struct DemoOptions {
    pub width: u32,
    pub height: u32,
    pub mode: ColorMode,
    /// Overrides the demo's own skin.
    pub theme: Option<Theme>,
    pub seed: u64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions {
            width: 640,
            height: 480,
            mode: ColorMode::HiColor,
            theme: None,
            seed: 0,
        }
    }
}

impl DemoOptions {
    fn theme(&self) -> Theme {
        self.theme.clone().unwrap_or_else(Theme::classic).converted(self.mode)
    }
}

/// A built scene.
pub struct Demo {
    pub name: &'static str,
    pub runtime: Runtime,
    /// Present for the designer demo.
    pub designer: Option<Rc<RefCell<DesignerUi>>>,
}

/// Builds a demo scene; `None` for an unknown name.
pub fn build(name: &str, opts: &DemoOptions) -> Option<Demo> {
    let name = NAMES.into_iter().find(|n| *n == name)?;
    let mut designer = None;
    let runtime = match name {
        "circuit" => circuit(opts),
        "skin" => skin(opts),
        "focus" => focus(opts),
        "menu" => menu(opts),
        "desktop" => desktop(opts, opts.theme(), 0),
        "taskbar" => desktop(opts, opts.theme(), 4),
        "desktop-noskin" => desktop(opts, Theme::minimal().converted(opts.mode), 0),
        _ => {
            let mut rt = plain(opts);
            designer = Some(designer::host(&mut rt, FormDocument::new("Untitled", 320, 240), Point::new(100, 40), None));
            rt
        }
    };
    Some(Demo { name, runtime, designer })
}

fn plain(opts: &DemoOptions) -> Runtime {
    Runtime::new(Shell::new(opts.width, opts.height, opts.mode, &opts.theme(), Desktop::default(), false))
}

fn add(shell: &mut Shell, win: WindowId, r: Rect, kind: Kind) -> WidgetId {
    shell.add_widget(win, r, kind, None).expect("demo layout fits")
}

fn set_label(shell: &mut Shell, id: WidgetId, s: &str) {
    shell.with_widget(id, |w| {
        if let Kind::Label { text } = &mut w.kind {
            if text != s {
                *text = s.to_owned();
            }
        }
    });
}

fn checked(shell: &Shell, id: WidgetId) -> bool {
    matches!(shell.widget(id).map(|w| &w.kind), Some(Kind::CheckBox { checked: true, .. }))
}

/// Events reach the stages on one parallel branch; on the other, a gate
/// handler reads the checkbox and flips a switch in front of a counter.
fn circuit(opts: &DemoOptions) -> Runtime {
    let mut rt = plain(opts);
    let s = &mut rt.shell;
    let win = s.open_window("Circuit Test", Rect::new(40, 40, 360, 220));
    let routed = add(s, win, Rect::new(8, 8, 200, 16), Kind::label("routed: 0"));
    let gate_box = add(s, win, Rect::new(8, 32, 140, 18), Kind::checkbox("Count events", true));
    let pulse = add(s, win, Rect::new(8, 60, 72, 24), Kind::button("Pulse"));
    let pulses = add(s, win, Rect::new(90, 64, 160, 16), Kind::label("pulses: 0"));
    let bar = add(s, win, Rect::new(8, 96, 200, 16), Kind::progress(0));
    let job = add(s, win, Rect::new(8, 120, 240, 16), Kind::label("job: idle"));

    const SWITCH: NodeId = NodeId(9);
    let gate = rt.register_filter(move |shell, _, ctl| {
        let state = if checked(shell, gate_box) { SwitchState::Closed } else { SwitchState::Open };
        let _ = ctl.set_switch(SWITCH, state);
    });
    let count = Rc::new(Cell::new(0u64));
    let c = count.clone();
    let counter = rt.register_filter(move |shell, _, _| {
        c.set(c.get() + 1);
        set_label(shell, routed, &format!("routed: {}", c.get()));
    });
    let mut cir = Circuit::new();
    let nodes = [
        (1, NodeKind::Source(INPUT_EVENT.into())),
        (2, NodeKind::Parallel),
        (3, NodeKind::handler(Stage::Capture.handler(), 0)),
        (4, NodeKind::handler(Stage::Chrome.handler(), 0)),
        (5, NodeKind::handler(Stage::Focus.handler(), 0)),
        (6, NodeKind::handler(Stage::Widgets.handler(), 0)),
        (7, NodeKind::Ground),
        (8, NodeKind::handler(gate, 5)),
        (SWITCH.0, NodeKind::Switch(SwitchState::Closed)),
        (10, NodeKind::handler(counter, 10)),
    ];
    for (id, kind) in nodes {
        cir.insert(NodeId(id), kind).expect("fresh ids");
    }
    cir.chain(&[1, 2, 3, 4, 5, 6, 7].map(NodeId));
    cir.chain(&[2, 8, SWITCH.0, 10, 7].map(NodeId));
    *rt.circuit_mut() = cir;

    let n = Rc::new(Cell::new(0u32));
    let h = rt.register_handler(move |shell, _| {
        n.set(n.get() + 1);
        set_label(shell, pulses, &format!("pulses: {}", n.get()));
    });
    rt.shell.bind_notice(pulse, "action", h);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut value = 0u32;
    let mut steps = 0u32;
    rt.spawn_task(move |ctx| {
        value = (value + rng.random_range(1..=7)) % 101;
        steps += 1;
        ctx.shell.with_widget(bar, |w| {
            if let Kind::ProgressBar { value: v } = &mut w.kind {
                *v = value as u8;
            }
        });
        set_label(ctx.shell, job, &format!("job: step {steps}"));
        TaskStep::Sleep(rng.random_range(0..4))
    });
    rt
}

fn slate() -> Theme {
    let c = Theme::classic();
    let mut rgb = Role::ALL.map(|r| c.rgb(r));
    rgb[Role::Desktop.index()] = Rgb::new(48, 56, 72);
    rgb[Role::WindowFace.index()] = Rgb::new(176, 184, 200);
    rgb[Role::TitleActive.index()] = Rgb::new(96, 32, 64);
    rgb[Role::ButtonFace.index()] = Rgb::new(208, 200, 184);
    rgb[Role::Selection.index()] = Rgb::new(96, 32, 64);
    Theme::from_rgb("slate", crate::kernel::ColorMode::HiColor, rgb)
}

/// One of every widget type, and a button that cycles the skin.
fn skin(opts: &DemoOptions) -> Runtime {
    let mut rt = plain(opts);
    let s = &mut rt.shell;
    let win = s.open_window("Skin Test", Rect::new(20, 20, 600, 400));
    add(s, win, Rect::new(8, 8, 120, 16), Kind::label("Every widget"));
    add(s, win, Rect::new(8, 30, 40, 40), Kind::Shape { shape: ShapeKind::Rect, role: Role::Highlight });
    add(s, win, Rect::new(56, 30, 40, 40), Kind::Shape { shape: ShapeKind::Ellipse, role: Role::Selection });
    let mut pixels = vec![TRANSPARENT; 256];
    for y in 2..14 {
        for x in 2..14 {
            let role = if (x / 4 + y / 4) % 2 == 0 { Role::Highlight } else { Role::TitleActive };
            pixels[y * 16 + x] = role.index() as u8;
        }
    }
    add(s, win, Rect::new(104, 30, 16, 16), Kind::Image { width: 16, height: 16, pixels });
    let switch = add(s, win, Rect::new(8, 80, 100, 24), Kind::button("Switch skin"));
    add(s, win, Rect::new(8, 112, 160, 22), Kind::textbox("single line"));
    add(s, win, Rect::new(8, 140, 200, 84), Kind::editbox("several\nlines of\ntext"));
    add(s, win, Rect::new(220, 8, 120, 84), Kind::listbox(&["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]));
    add(s, win, Rect::new(350, 8, 16, 96), Kind::scrollbar(true, 100, 10));
    add(s, win, Rect::new(220, 100, 120, 22), Kind::combobox(&["red", "green", "blue"], Some(0)));
    let frame = add(s, win, Rect::new(380, 8, 200, 100), Kind::frame("Frame"));
    s.add_widget(win, Rect::new(388, 30, 120, 18), Kind::checkbox("Inside", true), Some((frame, 0))).expect("fits");
    let pages = add(s, win, Rect::new(220, 140, 200, 120), Kind::pages(&["One", "Two"]));
    s.add_widget(win, Rect::new(228, 170, 150, 16), Kind::label("first page"), Some((pages, 0))).expect("fits");
    s.add_widget(win, Rect::new(228, 170, 150, 16), Kind::label("second page"), Some((pages, 1))).expect("fits");
    add(s, win, Rect::new(8, 240, 200, 16), Kind::progress(60));
    let tree = MenuTree::new(vec![
        MenuItem::sub("File", MenuTree::new(vec![MenuItem::leaf("Open", 1), MenuItem::leaf("Close", 2)])),
        MenuItem::sub("View", MenuTree::new(vec![MenuItem::leaf("Zoom", 3)])),
    ]);
    add(s, win, Rect::new(380, 120, 200, 20), Kind::menubar(tree));

    let mode = opts.mode;
    let themes = [opts.theme(), Theme::minimal(), slate()];
    let at = Cell::new(0usize);
    let h = rt.register_handler(move |shell, _| {
        at.set((at.get() + 1) % themes.len());
        shell.apply_theme(&themes[at.get()].converted(mode));
    });
    rt.shell.bind_notice(switch, "action", h);
    rt
}

fn focus_name(shell: &Shell) -> String {
    match shell.focus.current() {
        None => "focus: none".into(),
        Some((win, wid)) => {
            let title = shell.wm.window(win).map_or("?", |w| w.title.as_str());
            let ty = shell.widget(wid).map_or("?", |w| w.widget_type().name());
            format!("focus: {ty} {wid} in {title}")
        }
    }
}

/// Two windows of focusable widgets; a background task reports the focus.
fn focus(opts: &DemoOptions) -> Runtime {
    let mut rt = plain(opts);
    let s = &mut rt.shell;
    let a = s.open_window("Focus Test", Rect::new(30, 30, 300, 200));
    add(s, a, Rect::new(8, 8, 120, 22), Kind::textbox(""));
    add(s, a, Rect::new(140, 8, 120, 22), Kind::textbox(""));
    add(s, a, Rect::new(8, 40, 72, 24), Kind::button("One"));
    add(s, a, Rect::new(140, 44, 100, 18), Kind::checkbox("Two", false));
    let off = add(s, a, Rect::new(8, 72, 72, 24), Kind::button("Off"));
    s.with_widget(off, |w| w.common.enabled = false);
    add(s, a, Rect::new(140, 72, 120, 60), Kind::listbox(&["north", "south", "east", "west"]));
    let status = add(s, a, Rect::new(8, 156, 280, 16), Kind::label("focus: none"));
    let b = s.open_window("Second", Rect::new(340, 60, 260, 160));
    add(s, b, Rect::new(8, 8, 120, 22), Kind::textbox(""));
    add(s, b, Rect::new(8, 40, 72, 24), Kind::button("Three"));
    rt.spawn_task(move |ctx| {
        let name = focus_name(ctx.shell);
        set_label(ctx.shell, status, &name);
        TaskStep::Continue
    });
    rt
}

fn nested_menu() -> MenuTree {
    let more = MenuTree::new(vec![MenuItem::leaf("c.txt", 5)]);
    let recent = MenuTree::new(vec![MenuItem::leaf("a.txt", 3), MenuItem::leaf("b.txt", 4), MenuItem::sub("More", more)]);
    MenuTree::new(vec![
        MenuItem::sub(
            "File",
            MenuTree::new(vec![MenuItem::leaf("New", 1), MenuItem::leaf("Open", 2), MenuItem::sub("Recent", recent), MenuItem::leaf("Exit", 6)]),
        ),
        MenuItem::sub(
            "Edit",
            MenuTree::new(vec![MenuItem::leaf("Cut", 7), MenuItem::leaf("Copy", 8), MenuItem::leaf("Paste", 9).disabled()]),
        ),
        MenuItem::sub("Help", MenuTree::new(vec![MenuItem::leaf("About", 10)])),
    ])
}

/// A menu bar three levels deep; activations are shown in a label.
fn menu(opts: &DemoOptions) -> Runtime {
    let mut rt = plain(opts);
    let s = &mut rt.shell;
    let win = s.open_window("Nested Menu", Rect::new(40, 40, 400, 260));
    let bar = add(s, win, Rect::new(0, 0, 396, 20), Kind::menubar(nested_menu()));
    let last = add(s, win, Rect::new(8, 40, 300, 16), Kind::label("last action: none"));
    let h = rt.register_handler(move |shell, call| {
        let action = call.payload.arg("value").as_int().unwrap_or(-1);
        set_label(shell, last, &format!("last action: {action}"));
    });
    rt.shell.bind_notice(bar, "menu", h);
    rt
}

fn cascade(shell: &Shell, w: u32, h: u32) -> Rect {
    let k = shell.wm.windows().count() as i32 % 8;
    Rect::new(60 + 24 * k, 30 + 24 * k, w, h)
}

/// The desktop shell with icons, a taskbar and a start menu; `windows`
/// plain windows are opened up front.
fn desktop(opts: &DemoOptions, theme: Theme, windows: usize) -> Runtime {
    let rows = ((opts.height.saturating_sub(TASKBAR_H)) / CELL_H).max(1);
    let config = Desktop::parse(DESKTOP_CONFIG, rows).expect("bundled desktop config parses");
    let mut rt = Runtime::new(Shell::new(opts.width, opts.height, opts.mode, &theme, config, true));

    for k in 1..=windows {
        let s = &mut rt.shell;
        let r = cascade(s, 240, 120);
        let win = s.open_window(&format!("Window {k}"), r);
        add(s, win, Rect::new(8, 8, 200, 16), Kind::label(&format!("This is window {k}")));
    }

    let close = rt.register_handler(|shell, call| {
        let wid = WidgetId(call.payload.arg("widget").as_int().unwrap_or(0) as u32);
        if let Some(win) = shell.window_of(wid) {
            shell.close_window(win);
        }
    });
    let clocks: Rc<RefCell<Vec<WidgetId>>> = Rc::default();

    rt.on_launch(1, |shell| {
        let r = cascade(shell, 260, 180);
        let win = shell.open_window("Notes", r);
        let c = shell.wm.window(win).expect("open").client();
        add(shell, win, Rect::new(4, 4, c.w - 8, c.h - 8), Kind::editbox(""));
    });
    let cl = clocks.clone();
    rt.on_launch(2, move |shell| {
        let r = cascade(shell, 200, 80);
        let win = shell.open_window("Clock", r);
        cl.borrow_mut().push(add(shell, win, Rect::new(8, 8, 180, 16), Kind::label("uptime")));
    });
    rt.on_launch(3, move |shell| {
        let r = cascade(shell, 240, 110);
        let win = shell.open_window("About", r);
        add(shell, win, Rect::new(8, 8, 220, 16), Kind::label("groundup desktop"));
        let ok = add(shell, win, Rect::new(8, 40, 72, 24), Kind::button("OK"));
        shell.bind_notice(ok, "action", close);
    });
    rt.on_launch(4, |shell| {
        let doc = FormDocument::parse(SAMPLE_FORM).expect("bundled form parses");
        let r = cascade(shell, doc.width, doc.height);
        let c = frame_for_client(0, 0, doc.width, doc.height);
        let _ = designer::instantiate(&doc, shell, r.x - c.x, r.y - c.y);
    });
    rt.on_launch(99, |shell| {
        let all: Vec<WindowId> = shell.wm.windows().map(|w| w.id).collect();
        for w in all {
            shell.close_window(w);
        }
    });

    rt.spawn_task(move |ctx| {
        let secs = ctx.tick / 60;
        let text = format!("uptime {:02}:{:02}", secs / 60, secs % 60);
        let labels = clocks.borrow().clone();
        for id in labels {
            set_label(ctx.shell, id, &text);
        }
        TaskStep::Sleep(9)
    });
    rt
}
