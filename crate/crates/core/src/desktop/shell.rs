use crate::chemical::{ChemSystem, Electron, HandlerId};
use crate::focus::{Direction, Focus};
use crate::input::{key, InputKind, Modifiers, MouseButton};
use crate::kernel::{ColorMode, FrameBuffer, Point, Rect};
use crate::veto::{Bus, Message, Outcome};
use crate::widgets::menu::item_at;
use crate::widgets::{classify, ClassifyCtx, EventCode, Kind, MenuOutcome, MenuState, Notice, PressState, Theme, Widget, WidgetError, WidgetId, WidgetType};
use crate::wm::{DragKind, Hit, Part, WindowId, WindowManager, WindowState};

use super::{start_button, start_panels, task_entries, taskbar_buttons, taskbar_strip, Desktop, DesktopPainter, TaskEntry, CELL_H};

/// Strength of widget notices, handler dispatches and launch messages.
pub const NOTICE_STRENGTH: u8 = 20;
pub const TOPIC_LAUNCH: &str = "launch";

/// The built-in input stages, by circuit handler id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Open menus and widget popups capture the pointer.
    Capture = 1,
    /// Window chrome, the taskbar and desktop icons.
    Chrome = 2,
    /// Click focus, Tab traversal and arrow moves.
    Focus = 3,
    /// Classification and widget behavior.
    Widgets = 4,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Capture, Stage::Chrome, Stage::Focus, Stage::Widgets];

    pub fn handler(self) -> HandlerId {
        self as HandlerId
    }

    pub fn from_handler(h: HandlerId) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.handler() == h)
    }
}

/// A queued invocation of a user handler.
#[derive(Debug, Clone, PartialEq)]
pub struct Call {
    pub handler: HandlerId,
    pub topic: String,
    pub payload: ChemSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dispatch {
    Unbound,
    Vetoed,
    /// Handlers queued, in binding order.
    Handled(Vec<HandlerId>),
}

/// What a widget looks like; press memory that painting ignores is dropped.
fn visual(w: &Widget) -> Widget {
    let mut v = w.clone();
    let p = v.common.press;
    v.common.press = match v.kind {
        Kind::Button { .. } => PressState {
            hover: p.hover && p.pressed == Some(MouseButton::Left),
            ..PressState::default()
        },
        _ => PressState::default(),
    };
    v
}

/// The live scene.
pub struct Shell {
    pub wm: WindowManager,
    pub desktop: Desktop,
    pub focus: Focus,
    pub bus: Bus,
    bindings: ChemSystem,
    taskbar: bool,
    selected_icon: Option<u32>,
    last_icon_click: Option<(u32, u64)>,
    menu: Option<MenuState>,
    held: Vec<MouseButton>,
    mods: Modifiers,
    pointer: Point,
    tick: u64,
    event: Option<InputKind>,
    tasks_before: Vec<TaskEntry>,
    /// Task entries as last painted on the strip.
    tasks_painted: Vec<TaskEntry>,
    calls: Vec<Call>,
    launches: Vec<u64>,
    next_widget: u32,
    fb: FrameBuffer,
}

impl Shell {
    /// A scene with a desktop; `taskbar` adds the strip and start menu.
    pub fn new(width: u32, height: u32, mode: ColorMode, theme: &Theme, desktop: Desktop, taskbar: bool) -> Shell {
        let mut wm = WindowManager::new(width, height, mode, theme);
        if taskbar {
            let strip = taskbar_strip(wm.screen());
            let s = wm.screen();
            wm.set_work_area(Rect::new(s.x, s.y, s.w, s.h - strip.h));
        }
        let fb = wm.new_framebuffer();
        Shell {
            wm,
            desktop,
            focus: Focus::new(),
            bus: Bus::new(),
            bindings: ChemSystem::new(),
            taskbar,
            selected_icon: None,
            last_icon_click: None,
            menu: None,
            held: Vec::new(),
            mods: Modifiers::empty(),
            pointer: Point::new(0, 0),
            tick: 0,
            event: None,
            tasks_before: Vec::new(),
            tasks_painted: Vec::new(),
            calls: Vec::new(),
            launches: Vec::new(),
            next_widget: 1,
            fb,
        }
    }

    pub fn framebuffer(&self) -> &FrameBuffer {
        &self.fb
    }

    pub fn hash(&self) -> u64 {
        self.fb.snapshot_hash()
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// The input event being processed, if any.
    pub fn current_event(&self) -> Option<InputKind> {
        self.event
    }

    pub fn has_taskbar(&self) -> bool {
        self.taskbar
    }

    pub fn selected_icon(&self) -> Option<u32> {
        self.selected_icon
    }

    pub fn start_menu(&self) -> Option<&MenuState> {
        self.menu.as_ref()
    }

    pub fn held(&self) -> &[MouseButton] {
        &self.held
    }

    pub fn apply_theme(&mut self, theme: &Theme) {
        self.wm.apply_theme(theme);
    }

    pub fn open_window(&mut self, title: &str, frame: Rect) -> WindowId {
        let before = task_entries(&self.wm);
        let id = self.wm.create_window(title, frame);
        self.focus.revalidate(&mut self.wm, &mut self.bus);
        self.damage_taskbar_if(before);
        id
    }

    pub fn close_window(&mut self, id: WindowId) {
        let before = task_entries(&self.wm);
        if self.wm.close(id).is_ok() {
            self.focus.revalidate(&mut self.wm, &mut self.bus);
            self.damage_taskbar_if(before);
        }
    }

    fn damage_taskbar_if(&mut self, before: Vec<TaskEntry>) {
        if self.taskbar && task_entries(&self.wm) != before {
            self.wm.add_damage(taskbar_strip(self.wm.screen()));
        }
    }

    /// Adds a widget to a window with the next global id.
    pub fn add_widget(&mut self, win: WindowId, region: Rect, kind: Kind, parent: Option<(WidgetId, usize)>) -> Result<WidgetId, WidgetError> {
        let w = Widget::new(WidgetId(self.next_widget), region, kind)?;
        self.insert_widget(win, w, parent)
    }

    pub fn add_widget_props(
        &mut self,
        win: WindowId,
        ty: WidgetType,
        region: Rect,
        props: &std::collections::BTreeMap<String, Electron>,
        parent: Option<(WidgetId, usize)>,
    ) -> Result<WidgetId, WidgetError> {
        let w = Widget::from_props(WidgetId(self.next_widget), ty, region, props)?;
        self.insert_widget(win, w, parent)
    }

    fn insert_widget(&mut self, win: WindowId, w: Widget, parent: Option<(WidgetId, usize)>) -> Result<WidgetId, WidgetError> {
        let region = w.region();
        let form = &mut self.wm.window_mut(win).ok_or(WidgetError::BadGeometry(format!("no window {win}")))?.form;
        let id = form.add(w, parent)?;
        self.next_widget += 1;
        self.wm.damage_client(win, region);
        Ok(id)
    }

    /// Removes a widget and its children, damaging where they were.
    pub fn remove_widget(&mut self, wid: WidgetId) -> Option<Widget> {
        let win = self.window_of(wid)?;
        let form = &mut self.wm.window_mut(win)?.form;
        let mut gone: Vec<Rect> = form.iter().filter(|w| form.path(w.id).contains(&wid)).map(|w| w.region()).collect();
        let w = form.remove(wid)?;
        let o = w.region().origin();
        gone.extend(w.popup_rects().into_iter().map(|r| r.translate(o.x, o.y)));
        for r in gone {
            self.wm.damage_client(win, r);
        }
        self.focus.revalidate(&mut self.wm, &mut self.bus);
        Some(w)
    }

    /// Finds the window holding a widget.
    pub fn window_of(&self, wid: WidgetId) -> Option<WindowId> {
        self.wm.windows().find(|w| w.form.get(wid).is_some()).map(|w| w.id)
    }

    pub fn widget(&self, wid: WidgetId) -> Option<&Widget> {
        self.wm.windows().find_map(|w| w.form.get(wid))
    }

    /// Mutates a widget, damaging what changed on screen.
    pub fn with_widget<R>(&mut self, wid: WidgetId, f: impl FnOnce(&mut Widget) -> R) -> Option<R> {
        let win = self.window_of(wid)?;
        let w = self.wm.window_mut(win)?.form.get_mut(wid)?;
        let before = visual(w);
        let out = f(w);
        let after = visual(w);
        if before != after {
            let mut rects = Vec::new();
            for v in [&before, &after] {
                let o = v.region().origin();
                rects.push(v.region());
                rects.extend(v.popup_rects().into_iter().map(|r| r.translate(o.x, o.y)));
            }
            for r in rects {
                self.wm.damage_client(win, r);
            }
        }
        Some(out)
    }

    /// Binds a user handler to a widget's event code.
    pub fn bind(&mut self, wid: WidgetId, code: EventCode, handler: HandlerId) {
        self.bindings.bind_handler(&format!("{wid}:{}", code.number()), handler);
    }

    pub fn unbind(&mut self, wid: WidgetId, code: EventCode, handler: HandlerId) -> bool {
        self.bindings.unbind_handler(&format!("{wid}:{}", code.number()), handler)
    }

    pub fn bindings(&self) -> &ChemSystem {
        &self.bindings
    }

    /// Routes a code to its bound handlers through the bus (topic
    /// `<widget>:<code>`); interceptors may veto or rewrite the payload.
    pub fn dispatch(&mut self, wid: WidgetId, code: EventCode, payload: ChemSystem) -> Dispatch {
        let topic = format!("{wid}:{}", code.number());
        let handlers = self.bindings.handlers_for(&topic);
        if handlers.is_empty() {
            return Dispatch::Unbound;
        }
        let payload = match self.bus.send(Message::new(topic.clone(), payload.clone(), NOTICE_STRENGTH)) {
            Ok(r) => match r.outcome {
                Outcome::Vetoed { .. } => return Dispatch::Vetoed,
                Outcome::Delivered { payload, .. } => payload,
            },
            Err(_) => payload,
        };
        for &h in &handlers {
            self.calls.push(Call {
                handler: h,
                topic: topic.clone(),
                payload: payload.clone(),
            });
        }
        Dispatch::Handled(handlers)
    }

    /// Queues a call for a circuit handler that is not a built-in stage.
    pub fn queue_call(&mut self, call: Call) {
        self.calls.push(call);
    }

    pub fn take_calls(&mut self) -> Vec<Call> {
        std::mem::take(&mut self.calls)
    }

    pub fn take_launches(&mut self) -> Vec<u64> {
        std::mem::take(&mut self.launches)
    }

    /// Posts a widget notice on the bus (topic `<widget>:<name>`) and
    /// queues calls for handlers bound to it, unless vetoed.
    pub fn post_notice(&mut self, wid: WidgetId, n: Notice) {
        let topic = format!("{wid}:{}", n.name);
        let payload = ChemSystem::pack([("widget", Electron::Int(wid.0.into())), ("value", n.value)]);
        let payload = match self.bus.send(Message::new(topic.clone(), payload.clone(), NOTICE_STRENGTH)) {
            Ok(r) => match r.outcome {
                Outcome::Vetoed { .. } => return,
                Outcome::Delivered { payload, .. } => payload,
            },
            Err(_) => payload,
        };
        for h in self.bindings.handlers_for(&topic) {
            self.calls.push(Call {
                handler: h,
                topic: topic.clone(),
                payload: payload.clone(),
            });
        }
    }

    /// Binds a user handler to a widget notice such as `action` or `toggle`.
    pub fn bind_notice(&mut self, wid: WidgetId, name: &str, handler: HandlerId) {
        self.bindings.bind_handler(&format!("{wid}:{name}"), handler);
    }

    /// Posts a launch request; delivered ones are handed to the runtime.
    pub fn launch(&mut self, action: u64) {
        let payload = ChemSystem::pack([("action", Electron::Int(action as i64))]);
        if let Ok(r) = self.bus.send(Message::new(TOPIC_LAUNCH, payload, NOTICE_STRENGTH)) {
            if !r.is_vetoed() {
                self.launches.push(action);
            }
        }
    }

    fn strip(&self) -> Option<Rect> {
        self.taskbar.then(|| taskbar_strip(self.wm.screen()))
    }

    fn set_menu(&mut self, next: Option<MenuState>) {
        if next == self.menu {
            return;
        }
        let Some(strip) = self.strip() else { return };
        for s in [self.menu.as_ref(), next.as_ref()].into_iter().flatten() {
            for r in start_panels(&self.desktop.start_menu, s, strip).1 {
                self.wm.add_damage(r);
            }
        }
        self.wm.add_damage(start_button(strip));
        self.menu = next;
    }

    fn open_start_menu(&mut self) {
        self.close_widget_popups();
        self.set_menu(Some(MenuState::default()));
    }

    fn finish_menu(&mut self, s: MenuState, outcome: MenuOutcome) {
        match outcome {
            MenuOutcome::Open => self.set_menu(Some(s)),
            MenuOutcome::Closed => self.set_menu(None),
            MenuOutcome::Activated(a) => {
                self.set_menu(None);
                self.launch(a);
            }
        }
    }

    fn open_popup(&self) -> Option<(WindowId, WidgetId)> {
        self.wm.windows().filter(|w| w.visible()).find_map(|w| w.form.open_popup().map(|p| (w.id, p)))
    }

    fn close_widget_popups(&mut self) {
        while let Some((_, wid)) = self.open_popup() {
            self.with_widget(wid, |w| w.close_popup());
        }
    }

    fn select_icon(&mut self, id: Option<u32>) {
        if id == self.selected_icon {
            return;
        }
        for s in [self.selected_icon, id].into_iter().flatten() {
            if let Some(icon) = self.desktop.icons.iter().find(|i| i.id == s) {
                self.wm.add_damage(Desktop::cell(icon.slot));
            }
        }
        self.selected_icon = id;
    }

    /// Records the event about to run through the stages.
    pub fn begin_event(&mut self, tick: u64, ev: InputKind) {
        self.tick = tick;
        self.event = Some(ev);
        self.tasks_before = task_entries(&self.wm);
    }

    /// Updates pointer state and tidies focus after the stages ran.
    pub fn end_event(&mut self) {
        match self.event.take() {
            Some(InputKind::MouseDown { button, x, y }) => {
                if !self.held.contains(&button) {
                    self.held.push(button);
                }
                self.pointer = Point::new(x, y);
            }
            Some(InputKind::MouseUp { button, x, y }) => {
                self.held.retain(|&b| b != button);
                self.pointer = Point::new(x, y);
            }
            Some(InputKind::MouseMove { x, y }) => self.pointer = Point::new(x, y),
            Some(InputKind::KeyDown { mods, .. }) => self.mods = mods,
            _ => {}
        }
        self.focus.revalidate(&mut self.wm, &mut self.bus);
        let before = std::mem::take(&mut self.tasks_before);
        self.damage_taskbar_if(before);
        if self.wm.cursor().is_some() {
            self.wm.set_cursor(Some(self.pointer));
        }
    }

    /// Runs one built-in stage. A stage that handles the event marks the
    /// payload `consumed`, and later stages skip it.
    pub fn stage(&mut self, stage: Stage, payload: &mut ChemSystem) {
        if payload.arg("consumed").as_bool() == Some(true) {
            return;
        }
        let Some(ev) = self.event else { return };
        let consumed = match stage {
            Stage::Capture => self.stage_capture(ev),
            Stage::Chrome => self.stage_chrome(ev),
            Stage::Focus => self.stage_focus(ev),
            Stage::Widgets => {
                self.stage_widgets(ev);
                true
            }
        };
        if consumed {
            payload.set_arg("consumed", Electron::Bool(true));
            payload.set_arg("stage", Electron::Int(stage as i64));
        }
    }

    fn stage_capture(&mut self, ev: InputKind) -> bool {
        if let (Some(state), Some(strip)) = (self.menu.clone(), self.strip()) {
            let tree = self.desktop.start_menu.clone();
            let (panels, rects) = start_panels(&tree, &state, strip);
            let mut s = state;
            match ev {
                InputKind::KeyDown { code, .. } => {
                    let out = s.key(&tree, code, false);
                    self.finish_menu(s, out);
                }
                InputKind::KeyChar(_) | InputKind::MouseUp { .. } => {}
                InputKind::MouseMove { x, y } => {
                    if let Some((p, i)) = item_at(&rects, &tree, &panels, x, y) {
                        s.hover(panels[p].len(), i);
                        self.set_menu(Some(s));
                    }
                }
                InputKind::MouseDown { button, x, y } => match item_at(&rects, &tree, &panels, x, y) {
                    Some((p, i)) if button == MouseButton::Left => {
                        let out = s.click(&tree, panels[p].len(), i);
                        self.finish_menu(s, out);
                    }
                    Some(_) => {}
                    // outside presses dismiss and are not re-dispatched
                    None => self.set_menu(None),
                },
            }
            return true;
        }
        if let Some((win, wid)) = self.open_popup() {
            if !matches!(ev, InputKind::MouseDown { .. } | InputKind::MouseMove { .. }) {
                return false;
            }
            let client = self.wm.window(win).expect("open").client();
            let o = self.widget(wid).expect("open").region().origin();
            let local = ev.translated(-(client.x + o.x), -(client.y + o.y));
            let notices = self.with_widget(wid, |w| w.popup_input(&local)).unwrap_or_default();
            for n in notices {
                self.post_notice(wid, n);
            }
            return true;
        }
        false
    }

    fn taskbar_click(&mut self, win: WindowId) {
        let Some(w) = self.wm.window(win) else { return };
        if w.state == WindowState::Minimized {
            let _ = self.wm.restore(win);
            let _ = self.wm.raise(win);
        } else if self.wm.active() == Some(win) {
            let _ = self.wm.minimize(win);
        } else {
            let _ = self.wm.raise(win);
        }
    }

    fn stage_chrome(&mut self, ev: InputKind) -> bool {
        if self.wm.drag().is_some() {
            match ev {
                InputKind::MouseMove { x, y } => {
                    self.wm.drag_to(Point::new(x, y));
                    return true;
                }
                InputKind::MouseUp { button: MouseButton::Left, x, y } => {
                    self.wm.drag_to(Point::new(x, y));
                    self.wm.end_drag();
                    return true;
                }
                InputKind::KeyDown { code: key::ESCAPE, .. } => {
                    self.wm.cancel_drag();
                    return true;
                }
                _ => {}
            }
        }
        match ev {
            InputKind::KeyDown { code: key::F10, .. } if self.taskbar => {
                self.open_start_menu();
                true
            }
            InputKind::MouseDown { button, x, y } => {
                if let Some(strip) = self.strip().filter(|s| s.contains(x, y)) {
                    if button == MouseButton::Left {
                        if start_button(strip).contains(x, y) {
                            self.open_start_menu();
                        } else {
                            let ids: Vec<WindowId> = self.wm.windows().map(|w| w.id).collect();
                            if let Some((win, _)) = taskbar_buttons(strip, &ids).into_iter().find(|(_, r)| r.contains(x, y)) {
                                self.taskbar_click(win);
                            }
                        }
                    }
                    return true;
                }
                match self.wm.hit_test(x, y) {
                    Hit::Popup(..) | Hit::Window(_, Part::Client(_)) => false,
                    Hit::Window(win, part) => {
                        self.focus.click(&mut self.wm, &mut self.bus, x, y);
                        if button != MouseButton::Left {
                            return true;
                        }
                        let at = Point::new(x, y);
                        match part {
                            Part::TitleBar => {
                                let _ = self.wm.begin_drag(win, DragKind::Move, at);
                            }
                            Part::Border(e) => {
                                let _ = self.wm.begin_drag(win, DragKind::Resize(e), at);
                            }
                            Part::Close => self.close_window(win),
                            Part::Maximize => {
                                let maximized = self.wm.window(win).is_some_and(|w| w.state == WindowState::Maximized);
                                let _ = if maximized { self.wm.restore(win) } else { self.wm.maximize(win) };
                            }
                            Part::Minimize => {
                                let _ = self.wm.minimize(win);
                            }
                            Part::Client(_) => unreachable!("handled above"),
                        }
                        true
                    }
                    Hit::Desktop => {
                        self.focus.click(&mut self.wm, &mut self.bus, x, y);
                        if button == MouseButton::Left {
                            let hit = self.desktop.icon_at(x, y).filter(|_| self.wm.work_area().contains(x, y));
                            match hit {
                                Some(id) => {
                                    let double = matches!(self.last_icon_click, Some((i, t)) if i == id && self.tick.saturating_sub(t) <= crate::widgets::events::DOUBLE_CLICK_TICKS);
                                    self.select_icon(Some(id));
                                    if double {
                                        self.last_icon_click = None;
                                        let action = self.desktop.icons.iter().find(|i| i.id == id).expect("hit").action;
                                        self.launch(action);
                                    } else {
                                        self.last_icon_click = Some((id, self.tick));
                                    }
                                }
                                None => {
                                    self.select_icon(None);
                                    self.last_icon_click = None;
                                }
                            }
                        }
                        true
                    }
                }
            }
            _ => false,
        }
    }

    fn stage_focus(&mut self, ev: InputKind) -> bool {
        match ev {
            InputKind::MouseDown { x, y, .. } => {
                if matches!(self.wm.hit_test(x, y), Hit::Window(_, Part::Client(_))) {
                    self.focus.click(&mut self.wm, &mut self.bus, x, y);
                }
                false
            }
            InputKind::KeyDown { code: key::TAB, mods } => {
                self.focus.tab(&mut self.wm, &mut self.bus, mods.contains(Modifiers::SHIFT));
                true
            }
            InputKind::KeyDown { code, .. } if key::ARROWS.contains(&code) => {
                let Some((_, wid)) = self.focus.current() else { return false };
                if self.widget(wid).is_some_and(|w| w.common.accepted.contains(code)) {
                    return false;
                }
                let dir = match code {
                    key::UP => Direction::Up,
                    key::DOWN => Direction::Down,
                    key::LEFT => Direction::Left,
                    _ => Direction::Right,
                };
                self.focus.arrow(&mut self.wm, &mut self.bus, dir);
                true
            }
            _ => false,
        }
    }

    fn stage_widgets(&mut self, ev: InputKind) {
        let targets: Vec<(WindowId, WidgetId, bool)> = match ev.position() {
            None => self.focus.current().map(|(w, i)| (w, i, false)).into_iter().collect(),
            Some((x, y)) => {
                let hit = match self.wm.hit_test(x, y) {
                    Hit::Window(win, Part::Client(path)) => path.last().map(|&id| (win, id)),
                    _ => None,
                };
                let mut z: Vec<_> = self.wm.windows().filter(|w| w.visible()).map(|w| (w.z, w.id)).collect();
                z.sort();
                z.into_iter()
                    .flat_map(|(_, win)| {
                        let form = &self.wm.window(win).expect("listed").form;
                        form.iter().map(move |w| (win, w.id, hit == Some((win, w.id)))).collect::<Vec<_>>()
                    })
                    .collect()
            }
        };
        let focused = self.focus.current();
        for (win, wid, inside) in targets {
            let Some(window) = self.wm.window(win) else { continue };
            if window.form.get(wid).is_none() {
                continue;
            }
            let eligible = window.visible() && window.form.shown(wid) && window.form.get(wid).is_some_and(|w| w.common.enabled);
            let client = window.client();
            let widget = window.form.get(wid).expect("checked");
            let o = widget.region().origin();
            let local = ev.translated(-(client.x + o.x), -(client.y + o.y));
            let bound = !self.bindings.handlers_for(&format!("{wid}:{}", EventCode::KeyPress.number())).is_empty();
            let ctx = ClassifyCtx {
                tick: self.tick,
                inside,
                focused: focused == Some((win, wid)),
                eligible,
                held: &self.held,
                accepted: &widget.common.accepted,
                key_press_bound: bound,
            };
            let (codes, press) = classify(widget.common.press, &local, &ctx);
            let notices = self
                .with_widget(wid, |w| {
                    w.common.press = press;
                    w.react(&codes, &local)
                })
                .unwrap_or_default();
            for n in notices {
                self.post_notice(wid, n);
            }
            for code in codes {
                let mut fields = vec![("window", Electron::Int(win.0.into())), ("widget", Electron::Int(wid.0.into())), ("code", Electron::Int(code.number().into()))];
                match local {
                    InputKind::KeyDown { code: k, .. } => fields.push(("key", Electron::Int(k.into()))),
                    InputKind::KeyChar(c) => fields.push(("key", Electron::Int(u32::from(c).into()))),
                    other => {
                        let (x, y) = other.position().expect("mouse");
                        fields.push(("x", Electron::Int(x.into())));
                        fields.push(("y", Electron::Int(y.into())));
                    }
                }
                self.dispatch(wid, code, ChemSystem::pack(fields));
            }
        }
    }

    /// Rows of the icon grid for this scene's work area.
    pub fn icon_rows(&self) -> u32 {
        (self.wm.work_area().h / CELL_H).max(1)
    }

    /// Repaints damaged pixels; returns whether anything was painted.
    pub fn compose(&mut self) -> bool {
        let tasks = task_entries(&self.wm);
        if self.taskbar && tasks != self.tasks_painted {
            self.wm.add_damage(taskbar_strip(self.wm.screen()));
            self.tasks_painted = tasks;
        }
        let painter = DesktopPainter {
            desktop: &self.desktop,
            selected: self.selected_icon,
            strip: self.taskbar.then(|| taskbar_strip(self.wm.screen())),
            tasks: task_entries(&self.wm),
            menu: self.menu.as_ref(),
            start_down: false,
        };
        self.wm.compose(&mut self.fb, &painter)
    }

    /// Repaints the whole screen into a fresh framebuffer, leaving this
    /// scene's own framebuffer alone.
    pub fn render_full(&mut self) -> FrameBuffer {
        let mut fb = self.wm.new_framebuffer();
        let pending: Vec<Rect> = self.wm.damage().rects().to_vec();
        let painter = DesktopPainter {
            desktop: &self.desktop,
            selected: self.selected_icon,
            strip: self.taskbar.then(|| taskbar_strip(self.wm.screen())),
            tasks: task_entries(&self.wm),
            menu: self.menu.as_ref(),
            start_down: false,
        };
        self.wm.render_full(&mut fb, &painter);
        for r in pending {
            self.wm.add_damage(r);
        }
        fb
    }
}
