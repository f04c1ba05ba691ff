mod common;

use std::cell::RefCell;
use std::rc::Rc;

use common::rig::Rig;
use groundup::demo::{self, DemoOptions, DESKTOP_CONFIG};
use groundup::desktop::{taskbar_strip, taskbar_buttons, Desktop, Shell, CELL_H, CELL_W, NOTICE_STRENGTH, TOPIC_LAUNCH};
use groundup::focus::{Direction, FocusOutcome, FOCUS_STRENGTH, TOPIC_LOST};
use groundup::input::{key, InputKind, Modifiers, MouseButton, RawInputEvent, Script};
use groundup::kernel::{ColorMode, Rect};
use groundup::runtime::Runtime;
use groundup::veto::{Action, Deliver, Intercept};
use groundup::widgets::{Kind, MenuItem, MenuTree, Theme, WidgetId};
use groundup::wm::{WindowId, WindowState};
use proptest::prelude::*;

fn ev(tick: u64, kind: InputKind) -> RawInputEvent {
    RawInputEvent::new(tick, kind)
}

fn click_at(tick: u64, x: i32, y: i32) -> [RawInputEvent; 2] {
    [ev(tick, InputKind::MouseDown { button: MouseButton::Left, x, y }), ev(tick, InputKind::MouseUp { button: MouseButton::Left, x, y })]
}

fn keydown(code: u32) -> InputKind {
    InputKind::KeyDown { code, mods: Modifiers::empty() }
}

fn desktop_demo() -> Runtime {
    demo::build("desktop", &DemoOptions::default()).unwrap().runtime
}

fn titles(rt: &Runtime) -> Vec<String> {
    rt.shell.wm.windows().map(|w| w.title.clone()).collect()
}

/// Records every delivered launch request.
fn launch_log(rt: &mut Runtime) -> Rc<RefCell<Vec<i64>>> {
    let log: Rc<RefCell<Vec<i64>>> = Rc::default();
    let l = log.clone();
    let p = rt.shell.bus.register_with("launch-log", 0, Deliver(move |_: &str, payload: &groundup::chemical::ChemSystem| {
        l.borrow_mut().push(payload.arg("action").as_int().unwrap());
    }));
    rt.shell.bus.listen(p, TOPIC_LAUNCH).unwrap();
    log
}

// Configuration

#[test]
fn bundled_config_fills_the_grid_column_major() {
    let d = Desktop::parse(DESKTOP_CONFIG, 2).unwrap();
    let slots: Vec<(u32, u32)> = d.icons.iter().map(|i| i.slot).collect();
    assert_eq!(slots, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
    let actions: Vec<u64> = d.icons.iter().map(|i| i.action).collect();
    assert_eq!(actions, vec![1, 2, 3, 4]);
    let roots: Vec<&str> = d.start_menu.items.iter().map(|i| i.caption.as_str()).collect();
    assert_eq!(roots.len(), 4);
    let programs = d.start_menu.items[0].submenu.as_ref().unwrap();
    assert_eq!(programs.items.iter().map(|i| i.action).collect::<Vec<_>>(), vec![Some(1), Some(2)]);
    assert_eq!(d.start_menu.items[3].action, Some(99));
}

#[test]
fn explicit_slots_are_honoured_and_collisions_rejected() {
    let text = "ATOM 1 icon\nFIELD 1 caption text:A\nFIELD 1 action int:1\nFIELD 1 row int:3\nFIELD 1 col int:2\n";
    let d = Desktop::parse(text, 5).unwrap();
    assert_eq!(d.icons[0].slot, (3, 2));
    assert_eq!(d.icon_at(2 * CELL_W as i32 + 1, 3 * CELL_H as i32 + 1), Some(d.icons[0].id));

    let clash = "ATOM 1 icon\nFIELD 1 caption text:A\nFIELD 1 action int:1\nATOM 2 icon\nFIELD 2 caption text:B\nFIELD 2 action int:2\nFIELD 2 row int:0\nFIELD 2 col int:0\n";
    assert!(Desktop::parse(clash, 5).is_err());
}

#[test]
fn malformed_configs_are_errors() {
    for bad in [
        "ATOM 1 icon\nFIELD 1 action int:1\n",
        "ATOM 1 icon\nFIELD 1 caption text:A\n",
        "ATOM 1 icon\nFIELD 1 caption text:A\nFIELD 1 action int:1\nFIELD 1 glyph blob:00ff\n",
        "ATOM 1 icon\nFIELD 1 caption text:A\nFIELD 1 action int:-3\nATOM 2 menu\nFIELD 2 caption text:M\nFIELD 2 action int:-1\n",
        "this is not a description",
    ] {
        assert!(Desktop::parse(bad, 4).is_err(), "{bad:?}");
    }
}

// Icons

#[test]
fn double_click_on_an_icon_launches_its_action() {
    let mut rt = desktop_demo();
    let log = launch_log(&mut rt);
    let mut events = Vec::new();
    events.extend(click_at(2, 32, 24));
    events.extend(click_at(6, 32, 24));
    rt.run_script(&Script::new(events));
    assert_eq!(*log.borrow(), vec![1]);
    assert_eq!(titles(&rt), vec!["Notes"]);
    assert_eq!(rt.shell.selected_icon(), Some(1));
}

#[test]
fn slow_second_click_only_selects() {
    let mut rt = desktop_demo();
    let log = launch_log(&mut rt);
    let mut events = Vec::new();
    events.extend(click_at(2, 32, 24));
    events.extend(click_at(2 + groundup::widgets::DOUBLE_CLICK_TICKS + 1, 32, 24));
    rt.run_script(&Script::new(events));
    assert!(log.borrow().is_empty());
    assert!(titles(&rt).is_empty());
    assert_eq!(rt.shell.selected_icon(), Some(1));
}

#[test]
fn clicks_on_two_different_icons_do_not_launch() {
    let mut rt = desktop_demo();
    let mut events = Vec::new();
    events.extend(click_at(2, 32, 24));
    events.extend(click_at(3, 32, 24 + CELL_H as i32));
    rt.run_script(&Script::new(events));
    assert!(titles(&rt).is_empty());
    assert_eq!(rt.shell.selected_icon(), Some(2));
}

#[test]
fn a_vetoed_launch_does_nothing() {
    let mut rt = desktop_demo();
    let guard = rt.shell.bus.register_with("guard", NOTICE_STRENGTH, Intercept(|_: &groundup::veto::Message| Action::Veto));
    rt.shell.bus.subscribe(guard, TOPIC_LAUNCH, 0).unwrap();
    let mut events = Vec::new();
    events.extend(click_at(2, 32, 24));
    events.extend(click_at(4, 32, 24));
    rt.run_script(&Script::new(events));
    assert!(titles(&rt).is_empty());
}

#[test]
fn clicking_empty_desktop_clears_selection_and_activation() {
    let mut rt = demo::build("taskbar", &DemoOptions::default()).unwrap().runtime;
    assert!(rt.shell.wm.active().is_some());
    let mut events = Vec::new();
    events.extend(click_at(1, 32, 24));
    events.extend(click_at(20, 620, 10));
    rt.run_script(&Script::new(events));
    assert_eq!(rt.shell.selected_icon(), None);
    assert_eq!(rt.shell.wm.active(), None);
}

// Taskbar

#[derive(Debug, Clone, PartialEq)]
struct Snap {
    states: Vec<(WindowId, WindowState)>,
    top: Option<WindowId>,
    active: Option<WindowId>,
}

fn snap(rt: &Runtime) -> Snap {
    Snap {
        states: rt.shell.wm.windows().map(|w| (w.id, w.state)).collect(),
        top: rt.shell.wm.z_order().last().copied(),
        active: rt.shell.wm.active(),
    }
}

/// What a taskbar button press should do to the scene.
fn taskbar_oracle(rt: &Runtime, win: WindowId) -> Snap {
    let mut s = snap(rt);
    let state = s.states.iter().find(|(id, _)| *id == win).unwrap().1;
    let set = |s: &mut Snap, st: WindowState| s.states.iter_mut().find(|(id, _)| *id == win).unwrap().1 = st;
    if state == WindowState::Minimized {
        set(&mut s, WindowState::Normal);
        s.top = Some(win);
        s.active = Some(win);
    } else if rt.shell.wm.active() == Some(win) {
        set(&mut s, WindowState::Minimized);
        let mut z = rt.shell.wm.z_order();
        z.retain(|&w| w != win && rt.shell.wm.window(w).unwrap().state != WindowState::Minimized);
        s.active = z.last().copied();
    } else {
        s.top = Some(win);
        s.active = Some(win);
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn taskbar_buttons_follow_the_rules(presses in proptest::collection::vec((0..4usize, any::<bool>()), 1..30)) {
        let mut rt = demo::build("taskbar", &DemoOptions::default()).unwrap().runtime;
        rt.pump();
        let strip = taskbar_strip(rt.shell.wm.screen());
        for (i, deactivate) in presses {
            if deactivate {
                rt.shell.wm.deactivate();
            }
            let ids: Vec<WindowId> = rt.shell.wm.windows().map(|w| w.id).collect();
            let (win, r) = taskbar_buttons(strip, &ids)[i];
            let want = taskbar_oracle(&rt, win);
            let (x, y) = (r.x + r.w as i32 / 2, r.y + r.h as i32 / 2);
            rt.post_event(ev(0, InputKind::MouseDown { button: MouseButton::Left, x, y }));
            rt.post_event(ev(0, InputKind::MouseUp { button: MouseButton::Left, x, y }));
            rt.pump();
            prop_assert_eq!(snap(&rt), want);
        }
    }
}

#[test]
fn taskbar_shows_one_button_per_window_in_creation_order() {
    let mut rt = demo::build("taskbar", &DemoOptions::default()).unwrap().runtime;
    let ids: Vec<WindowId> = rt.shell.wm.windows().map(|w| w.id).collect();
    let strip = taskbar_strip(rt.shell.wm.screen());
    let buttons = taskbar_buttons(strip, &ids);
    assert_eq!(buttons.len(), 4);
    assert!(buttons.windows(2).all(|p| p[0].1.x < p[1].1.x && p[0].1.right() <= p[1].1.x as i64));
    assert!(buttons.iter().all(|(_, r)| strip.contains_rect(r)));
    rt.shell.close_window(ids[1]);
    let left: Vec<WindowId> = rt.shell.wm.windows().map(|w| w.id).collect();
    assert_eq!(left, vec![ids[0], ids[2], ids[3]]);
}

// Start menu

fn menu_tree() -> impl Strategy<Value = MenuTree> {
    let leaf = (1..50u64, any::<bool>()).prop_map(|(a, on)| {
        let it = MenuItem::leaf(&format!("item{a}"), a);
        if on { it } else { it.disabled() }
    });
    let item = leaf.prop_recursive(2, 12, 4, |inner| {
        (proptest::collection::vec(inner, 1..4), any::<bool>()).prop_map(|(items, on)| {
            let it = MenuItem::sub("more", MenuTree::new(items));
            if on { it } else { it.disabled() }
        })
    });
    proptest::collection::vec(item, 1..5).prop_map(MenuTree::new)
}

/// Keyboard model of an open start menu: the path of highlighted items.
#[derive(Debug, Default)]
struct MenuModel {
    open: bool,
    path: Vec<usize>,
}

impl MenuModel {
    fn width(tree: &MenuTree, prefix: &[usize]) -> usize {
        let mut t = tree;
        for &i in prefix {
            t = t.items[i].submenu.as_ref().unwrap();
        }
        t.items.len()
    }

    fn item<'a>(tree: &'a MenuTree, path: &[usize]) -> &'a MenuItem {
        let (last, prefix) = path.split_last().unwrap();
        let mut t = tree;
        for &i in prefix {
            t = t.items[i].submenu.as_ref().unwrap();
        }
        &t.items[*last]
    }

    fn opens(tree: &MenuTree, path: &[usize]) -> bool {
        !path.is_empty() && {
            let it = MenuModel::item(tree, path);
            it.enabled && it.submenu.as_ref().is_some_and(|s| !s.items.is_empty())
        }
    }

    /// Returns an action when a leaf is chosen.
    fn key(&mut self, tree: &MenuTree, code: u32) -> Option<u64> {
        if !self.open {
            if code == key::F10 {
                self.open = true;
                self.path.clear();
            }
            return None;
        }
        let n = tree.items.len();
        match code {
            key::ESCAPE => {
                self.open = false;
                self.path.clear();
            }
            key::DOWN if self.path.is_empty() => self.path.push(0),
            key::UP if self.path.is_empty() => self.path.push(n - 1),
            key::DOWN | key::UP => {
                let (last, prefix) = self.path.split_last().unwrap();
                let w = MenuModel::width(tree, prefix);
                let next = if code == key::DOWN { (last + 1) % w } else { (last + w - 1) % w };
                *self.path.last_mut().unwrap() = next;
            }
            key::RIGHT if MenuModel::opens(tree, &self.path) => self.path.push(0),
            key::LEFT if self.path.len() > 1 => {
                self.path.pop();
            }
            key::ENTER | key::SPACE if self.path.is_empty() => self.path.push(0),
            key::ENTER | key::SPACE => {
                if MenuModel::opens(tree, &self.path) {
                    self.path.push(0);
                } else {
                    let it = MenuModel::item(tree, &self.path);
                    if it.enabled && it.submenu.is_none() {
                        let a = it.action;
                        self.open = false;
                        self.path.clear();
                        return a;
                    }
                }
            }
            _ => {}
        }
        None
    }
}

const MENU_KEYS: [u32; 8] = [key::F10, key::UP, key::DOWN, key::LEFT, key::RIGHT, key::ENTER, key::SPACE, key::ESCAPE];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn start_menu_keys_follow_the_path_model(tree in menu_tree(), keys in proptest::collection::vec(0..MENU_KEYS.len(), 1..40)) {
        let desktop = Desktop { icons: Vec::new(), start_menu: tree.clone() };
        let mut rt = Runtime::new(Shell::new(640, 480, ColorMode::HiColor, &Theme::classic(), desktop, true));
        let log = launch_log(&mut rt);
        let mut model = MenuModel::default();
        let mut want = Vec::new();
        for k in keys {
            let code = MENU_KEYS[k];
            if let Some(a) = model.key(&tree, code) {
                want.push(a as i64);
            }
            rt.post_event(ev(0, keydown(code)));
            rt.pump();
            let got = rt.shell.start_menu().map(|m| m.path.clone());
            prop_assert_eq!(got, model.open.then(|| model.path.clone()));
            prop_assert_eq!(&*log.borrow(), &want);
        }
    }
}

#[test]
fn start_button_opens_the_menu_and_an_outside_press_dismisses_it() {
    let mut rt = desktop_demo();
    let strip = taskbar_strip(rt.shell.wm.screen());
    let mut events = Vec::new();
    events.extend(click_at(1, strip.x + 10, strip.y + 10));
    rt.run_script(&Script::new(events));
    assert_eq!(rt.shell.start_menu().map(|m| m.path.len()), Some(0));
    rt.run_script(&Script::new(click_at(rt.clock().now() + 1, 600, 100).to_vec()));
    assert!(rt.shell.start_menu().is_none());
    assert_eq!(rt.shell.selected_icon(), None, "the dismissing press is not re-dispatched");
}

#[test]
fn keyboard_launch_through_the_start_menu_opens_a_window() {
    let mut rt = desktop_demo();
    // Programs > Clock
    let keys = [key::F10, key::DOWN, key::RIGHT, key::DOWN, key::ENTER];
    let script = Script::new(keys.iter().enumerate().map(|(i, &k)| ev(i as u64, keydown(k))).collect());
    rt.run_script(&script);
    assert_eq!(titles(&rt), vec!["Clock"]);
    assert!(rt.shell.start_menu().is_none());
}

// Focus

fn shell_with(form: &[(Rect, Kind, bool, bool)]) -> (Rig, Vec<WidgetId>) {
    let mut rig = Rig::new();
    let mut ids = Vec::new();
    for (r, k, enabled, visible) in form {
        let id = rig.add(*r, k.clone());
        rig.rt.shell.with_widget(id, |w| {
            w.common.enabled = *enabled;
            w.common.visible = *visible;
        });
        ids.push(id);
    }
    (rig, ids)
}

fn form_strategy() -> impl Strategy<Value = Vec<(Rect, Kind, bool, bool)>> {
    let kind = prop_oneof![Just(Kind::button("b")), Just(Kind::checkbox("c", false)), Just(Kind::label("l")), Just(Kind::textbox(""))];
    proptest::collection::vec(
        ((0..480i32, 0..360i32, 20..80u32, 16..40u32), kind, prop::bool::weighted(0.8), prop::bool::weighted(0.85))
            .prop_map(|((x, y, w, h), k, e, v)| (Rect::new(x, y, w, h), k, e, v)),
        1..10,
    )
}

fn eligible(rig: &Rig, ids: &[WidgetId]) -> Vec<WidgetId> {
    ids.iter().copied().filter(|&id| {
        let w = rig.widget(id);
        w.common.focusable && w.common.enabled && w.common.visible
    }).collect()
}

/// Spatial oracle: among widgets strictly on the `dir` side of the focused
/// centre, the nearest along the axis, then the nearest across it, then the
/// earliest created.
fn arrow_oracle(rig: &Rig, cands: &[WidgetId], from: WidgetId, dir: Direction) -> Option<WidgetId> {
    let c = |id: WidgetId| {
        let r = rig.widget(id).region();
        (2 * r.x as i64 + r.w as i64, 2 * r.y as i64 + r.h as i64)
    };
    let (fx, fy) = c(from);
    let mut best: Option<((i64, i64, usize), WidgetId)> = None;
    for (i, &id) in cands.iter().enumerate() {
        if id == from {
            continue;
        }
        let (x, y) = c(id);
        let (dx, dy) = (x - fx, y - fy);
        let key = match dir {
            Direction::Right => (dx > 0).then(|| (dx, dy.abs(), i)),
            Direction::Left => (dx < 0).then(|| (-dx, dy.abs(), i)),
            Direction::Down => (dy > 0).then(|| (dy, dx.abs(), i)),
            Direction::Up => (dy < 0).then(|| (-dy, dx.abs(), i)),
        };
        if let Some(k) = key {
            if best.is_none_or(|(b, _)| k < b) {
                best = Some((k, id));
            }
        }
    }
    best.map(|(_, id)| id)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tab_cycles_eligible_widgets_in_creation_order(form in form_strategy(), n in 1..25usize, back in any::<bool>()) {
        let (mut rig, ids) = shell_with(&form);
        let ring = eligible(&rig, &ids);
        for step in 0..n {
            rig.send(InputKind::KeyDown { code: key::TAB, mods: if back { Modifiers::SHIFT } else { Modifiers::empty() } });
            let want = (!ring.is_empty()).then(|| if back { ring[ring.len() - 1 - step % ring.len()] } else { ring[step % ring.len()] });
            prop_assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), want);
        }
    }

    #[test]
    fn arrows_pick_the_spatial_neighbour(form in form_strategy(), start in any::<usize>(), dirs in proptest::collection::vec(0..4usize, 1..12)) {
        let (mut rig, ids) = shell_with(&form);
        let ring = eligible(&rig, &ids);
        prop_assume!(!ring.is_empty());
        let win = rig.win;
        let first = ring[start % ring.len()];
        let s = &mut rig.rt.shell;
        s.focus.set(&mut s.wm, &mut s.bus, Some((win, first)));
        let mut cur = first;
        for d in dirs {
            let dir = [Direction::Up, Direction::Down, Direction::Left, Direction::Right][d];
            let want = arrow_oracle(&rig, &ring, cur, dir).unwrap_or(cur);
            let s = &mut rig.rt.shell;
            s.focus.arrow(&mut s.wm, &mut s.bus, dir);
            cur = s.focus.current().unwrap().1;
            prop_assert_eq!(cur, want);
        }
    }
}

#[test]
fn arrow_keys_move_focus_unless_the_widget_takes_them() {
    let (mut rig, ids) = shell_with(&[
        (Rect::new(10, 10, 80, 24), Kind::button("a"), true, true),
        (Rect::new(120, 10, 80, 24), Kind::textbox("xy"), true, true),
        (Rect::new(240, 10, 80, 24), Kind::button("c"), true, true),
    ]);
    rig.tab();
    rig.key(key::RIGHT);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[1]));
    rig.key(key::RIGHT);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[1]), "the textbox consumes Right");
    rig.key(key::DOWN);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[1]), "no widget below");
}

#[test]
fn a_strong_veto_of_focus_loss_keeps_focus() {
    let (mut rig, ids) = shell_with(&[
        (Rect::new(10, 10, 80, 24), Kind::button("a"), true, true),
        (Rect::new(10, 50, 80, 24), Kind::button("b"), true, true),
    ]);
    rig.tab();
    let holder = rig.rt.shell.bus.register_with("holder", FOCUS_STRENGTH, Intercept(|_: &groundup::veto::Message| Action::Veto));
    rig.rt.shell.bus.subscribe(holder, TOPIC_LOST, 0).unwrap();
    rig.tab();
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[0]));
    rig.click(20, 60);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[0]));
    let s = &mut rig.rt.shell;
    assert_eq!(s.focus.set(&mut s.wm, &mut s.bus, Some((rig.win, ids[1]))), FocusOutcome::Vetoed);
}

#[test]
fn a_weak_veto_of_focus_loss_is_ignored() {
    let (mut rig, ids) = shell_with(&[
        (Rect::new(10, 10, 80, 24), Kind::button("a"), true, true),
        (Rect::new(10, 50, 80, 24), Kind::button("b"), true, true),
    ]);
    rig.tab();
    let weak = rig.rt.shell.bus.register_with("weak", FOCUS_STRENGTH - 1, Intercept(|_: &groundup::veto::Message| Action::Veto));
    rig.rt.shell.bus.subscribe(weak, TOPIC_LOST, 0).unwrap();
    rig.tab();
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[1]));
}

#[test]
fn focus_follows_clicks_and_survives_empty_client_presses() {
    let (mut rig, ids) = shell_with(&[
        (Rect::new(10, 10, 80, 24), Kind::button("a"), true, true),
        (Rect::new(10, 50, 80, 24), Kind::label("l"), true, true),
    ]);
    rig.click(20, 20);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[0]));
    rig.click(20, 60);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[0]), "labels take no focus");
    rig.click(400, 300);
    assert_eq!(rig.rt.shell.focus.current().map(|c| c.1), Some(ids[0]));
    rig.send(InputKind::MouseDown { button: MouseButton::Left, x: 630, y: 470 });
    assert_eq!(rig.rt.shell.focus.current(), None, "the desktop clears focus");
}

#[test]
fn minimizing_drops_focus_from_the_window() {
    let (mut rig, _) = shell_with(&[(Rect::new(10, 10, 80, 24), Kind::button("a"), true, true)]);
    rig.tab();
    assert!(rig.rt.shell.focus.current().is_some());
    let [_, _, min] = rig.rt.shell.wm.window(rig.win).unwrap().buttons();
    rig.send(InputKind::MouseDown { button: MouseButton::Left, x: min.x + 2, y: min.y + 2 });
    assert_eq!(rig.rt.shell.wm.window(rig.win).unwrap().state, WindowState::Minimized);
    assert_eq!(rig.rt.shell.focus.current(), None);
}
