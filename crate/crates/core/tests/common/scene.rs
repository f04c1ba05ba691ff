//! Seeded window-manager sessions checked against a full repaint.

use groundup::demo::{self, DemoOptions};
use groundup::input::{key, InputKind, Modifiers, MouseButton, RawInputEvent};
use groundup::kernel::Rect;
use groundup::runtime::Runtime;
use groundup::widgets::{Kind, WidgetId};
use groundup::wm::{Hit, Part, WindowId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The taskbar demo: icons, a taskbar and several windows with widgets.
pub fn scene() -> Runtime {
    demo::build("taskbar", &DemoOptions::default()).expect("taskbar demo").runtime
}

fn pick_window(rt: &Runtime, rng: &mut ChaCha8Rng) -> Option<WindowId> {
    let ids: Vec<WindowId> = rt.shell.wm.windows().map(|w| w.id).collect();
    (!ids.is_empty()).then(|| ids[rng.random_range(0..ids.len())])
}

fn pick_widget(rt: &Runtime, rng: &mut ChaCha8Rng) -> Option<WidgetId> {
    let ids: Vec<WidgetId> = rt.shell.wm.windows().flat_map(|w| w.form.iter().map(|x| x.id)).collect();
    (!ids.is_empty()).then(|| ids[rng.random_range(0..ids.len())])
}

fn random_kind(rng: &mut ChaCha8Rng) -> Kind {
    match rng.random_range(0..6) {
        0 => Kind::label("note"),
        1 => Kind::button("Go"),
        2 => Kind::textbox("abc"),
        3 => Kind::listbox(&["one", "two", "three"]),
        4 => Kind::combobox(&["red", "green"], Some(0)),
        _ => Kind::checkbox("flag", false),
    }
}

/// A point near something interesting: a title bar, a border, a client area,
/// the taskbar, or anywhere.
fn target(rt: &Runtime, rng: &mut ChaCha8Rng) -> (i32, i32) {
    let screen = rt.shell.wm.screen();
    let any = |rng: &mut ChaCha8Rng| (rng.random_range(-4..screen.w as i32 + 4), rng.random_range(-4..screen.h as i32 + 4));
    let Some(id) = pick_window(rt, rng) else { return any(rng) };
    let w = rt.shell.wm.window(id).unwrap();
    let inside = |r: Rect, rng: &mut ChaCha8Rng| (r.x + rng.random_range(0..r.w.max(1) as i32), r.y + rng.random_range(0..r.h.max(1) as i32));
    match rng.random_range(0..6) {
        0 | 1 => inside(w.title_bar(), rng),
        2 => inside(w.buttons()[rng.random_range(0..3)], rng),
        3 => inside(w.client(), rng),
        4 => (w.frame.x + w.frame.w as i32 - 1, w.frame.y + w.frame.h as i32 - 1),
        _ => any(rng),
    }
}

/// Applies one random operation, either a direct window-manager or widget
/// mutation or an input event through the runtime, and returns its label.
pub fn random_op(rt: &mut Runtime, rng: &mut ChaCha8Rng, cursor: &mut (i32, i32)) -> String {
    let input = |rt: &mut Runtime, k: InputKind| {
        rt.post_event(RawInputEvent::new(0, k));
    };
    let op = rng.random_range(0..20);
    let win = pick_window(rt, rng);
    let label = match (op, win) {
        (0, _) if rt.shell.wm.windows().count() < 7 => {
            let (x, y) = (rng.random_range(-40..560), rng.random_range(-20..400));
            let (w, h) = (rng.random_range(60..300), rng.random_range(50..240));
            let id = rt.shell.open_window("extra", Rect::new(x, y, w, h));
            let c = rt.shell.wm.window(id).unwrap().client();
            for i in 0..rng.random_range(0..3) {
                let r = Rect::new(4, 4 + 26 * i, c.w.saturating_sub(8).max(20), 22);
                let _ = rt.shell.add_widget(id, r, random_kind(rng), None);
            }
            format!("open {id}")
        }
        (1, Some(id)) => {
            rt.shell.close_window(id);
            format!("close {id}")
        }
        (2, Some(id)) => {
            let (dx, dy) = (rng.random_range(-80..80), rng.random_range(-60..60));
            rt.shell.wm.move_by(id, dx, dy).unwrap();
            format!("move {id} {dx} {dy}")
        }
        (3, Some(id)) => {
            let (w, h) = (rng.random_range(0..400), rng.random_range(0..300));
            rt.shell.wm.resize(id, w, h).unwrap();
            format!("resize {id} {w}x{h}")
        }
        (4, Some(id)) => {
            rt.shell.wm.maximize(id).unwrap();
            format!("maximize {id}")
        }
        (5, Some(id)) => {
            rt.shell.wm.minimize(id).unwrap();
            let s = &mut rt.shell;
            s.focus.revalidate(&mut s.wm, &mut s.bus);
            format!("minimize {id}")
        }
        (6, Some(id)) => {
            rt.shell.wm.restore(id).unwrap();
            format!("restore {id}")
        }
        (7, Some(id)) => {
            rt.shell.wm.raise(id).unwrap();
            format!("raise {id}")
        }
        (8, _) => {
            rt.shell.wm.deactivate();
            "deactivate".to_owned()
        }
        (9, _) => match pick_widget(rt, rng) {
            Some(wid) => {
                let n = rng.random_range(0..100u32);
                rt.shell.with_widget(wid, |w| match &mut w.kind {
                    Kind::Label { text } => *text = format!("v{n}"),
                    Kind::ProgressBar { value } => *value = n as u8,
                    Kind::CheckBox { checked, .. } => *checked = !*checked,
                    Kind::Button { caption, .. } => *caption = format!("b{n}"),
                    _ => w.common.enabled = !w.common.enabled,
                });
                format!("mutate {wid}")
            }
            None => "noop".to_owned(),
        },
        (10..=13, _) => {
            *cursor = target(rt, rng);
            let (x, y) = *cursor;
            input(rt, InputKind::MouseMove { x, y });
            format!("mouse move {x} {y}")
        }
        (14 | 15, _) => {
            let (x, y) = *cursor;
            input(rt, InputKind::MouseDown { button: MouseButton::Left, x, y });
            format!("mouse down {x} {y}")
        }
        (16 | 17, _) => {
            let (x, y) = *cursor;
            input(rt, InputKind::MouseUp { button: MouseButton::Left, x, y });
            format!("mouse up {x} {y}")
        }
        (18, _) => {
            let keys = [key::TAB, key::ENTER, key::ESCAPE, key::SPACE, key::DOWN, key::RIGHT, key::F10];
            let code = keys[rng.random_range(0..keys.len())];
            input(rt, InputKind::KeyDown { code, mods: Modifiers::empty() });
            format!("key {code}")
        }
        _ => {
            input(rt, InputKind::KeyChar(rng.random_range(b'a'..=b'z') as char));
            "char".to_owned()
        }
    };
    label
}

/// Runs `ops` seeded operations, recomposing incrementally after each and
/// comparing with a full repaint. Returns the number of operations checked.
pub fn redraw_session(seed: u64, ops: usize) -> Result<usize, String> {
    let mut rt = scene();
    rt.pump();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cursor = (0, 0);
    for i in 0..ops {
        let label = random_op(&mut rt, &mut rng, &mut cursor);
        rt.pump();
        rt.shell.compose();
        let full = rt.shell.render_full();
        if full != *rt.shell.framebuffer() {
            let fb = rt.shell.framebuffer();
            let s = rt.shell.wm.screen();
            let at = (0..s.h as i32).flat_map(|y| (0..s.w as i32).map(move |x| (x, y))).find(|&(x, y)| fb.get(x, y) != full.get(x, y));
            return Err(format!("seed {seed} op {i} ({label}): incremental frame differs from full repaint at {at:?}"));
        }
        if full.snapshot_hash() != rt.shell.hash() {
            return Err(format!("seed {seed} op {i} ({label}): hash mismatch"));
        }
    }
    Ok(ops)
}

/// Windows by hit testing: the topmost visible window whose frame holds the
/// point, ignoring popups.
pub fn z_scan(rt: &Runtime, x: i32, y: i32) -> Option<WindowId> {
    let mut ws: Vec<_> = rt.shell.wm.windows().filter(|w| w.visible()).collect();
    ws.sort_by_key(|w| std::cmp::Reverse(w.z));
    ws.into_iter().find(|w| w.frame.contains(x, y)).map(|w| w.id)
}

pub fn hit_window(h: &Hit) -> Option<WindowId> {
    match h {
        Hit::Window(id, _) | Hit::Popup(id, _) => Some(*id),
        _ => None,
    }
}

pub fn is_client(h: &Hit) -> bool {
    matches!(h, Hit::Window(_, Part::Client(_)))
}

/// Median time of `runs` full-screen recompositions of a busy 640x480
/// hicolor scene: icons, taskbar, four windows and a launched form.
pub fn full_recompose_time(runs: usize) -> std::time::Duration {
    let mut rt = scene();
    rt.shell.launch(4);
    rt.pump();
    let screen = rt.shell.wm.screen();
    let mut times: Vec<std::time::Duration> = (0..runs.max(1))
        .map(|_| {
            rt.shell.wm.add_damage(screen);
            let t = std::time::Instant::now();
            rt.shell.compose();
            t.elapsed()
        })
        .collect();
    times.sort();
    times[times.len() / 2]
}
