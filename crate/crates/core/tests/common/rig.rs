//! A one-window runtime for driving widgets with input, recording the
//! notices they post.

use std::cell::RefCell;
use std::rc::Rc;

use groundup::chemical::Electron;
use groundup::desktop::{Desktop, Shell};
use groundup::input::{key, InputKind, Modifiers, MouseButton, RawInputEvent};
use groundup::kernel::{ColorMode, Rect};
use groundup::runtime::Runtime;
use groundup::widgets::{Kind, Theme, Widget, WidgetId};
use groundup::wm::{frame_for_client, WindowId};

pub const ORIGIN: (i32, i32) = (20, 40);
pub const NOTICES: [&str; 8] = ["action", "toggle", "change", "select", "activate", "scroll", "page", "menu"];

pub struct Rig {
    pub rt: Runtime,
    pub win: WindowId,
    pub notices: Rc<RefCell<Vec<(String, Electron)>>>,
}

impl Rig {
    pub fn new() -> Rig {
        Rig::with_theme(&Theme::classic())
    }

    pub fn with_theme(theme: &Theme) -> Rig {
        let mut shell = Shell::new(640, 480, ColorMode::HiColor, theme, Desktop::default(), false);
        let win = shell.open_window("rig", frame_for_client(ORIGIN.0, ORIGIN.1, 560, 400));
        let mut rt = Runtime::new(shell);
        rt.pump();
        Rig {
            rt,
            win,
            notices: Rc::new(RefCell::new(Vec::new())),
        }
    }

    /// Adds a widget whose notices are recorded.
    pub fn add(&mut self, region: Rect, kind: Kind) -> WidgetId {
        let id = self.rt.shell.add_widget(self.win, region, kind, None).unwrap();
        for name in NOTICES {
            let log = self.notices.clone();
            let h = self.rt.register_handler(move |_, call| {
                let name = call.topic.split(':').nth(1).unwrap_or("").to_owned();
                log.borrow_mut().push((name, call.payload.arg("value").clone()));
            });
            self.rt.shell.bind_notice(id, name, h);
        }
        id
    }

    pub fn widget(&self, id: WidgetId) -> &Widget {
        self.rt.shell.widget(id).unwrap()
    }

    pub fn kind(&self, id: WidgetId) -> Kind {
        self.widget(id).kind.clone()
    }

    pub fn send(&mut self, kind: InputKind) {
        self.rt.post_event(RawInputEvent::new(0, kind));
        self.rt.pump();
    }

    fn screen(x: i32, y: i32) -> (i32, i32) {
        (ORIGIN.0 + x, ORIGIN.1 + y)
    }

    /// Moves, presses and releases the left button at client-local (x, y).
    pub fn click(&mut self, x: i32, y: i32) {
        let (x, y) = Rig::screen(x, y);
        self.send(InputKind::MouseMove { x, y });
        self.send(InputKind::MouseDown { button: MouseButton::Left, x, y });
        self.send(InputKind::MouseUp { button: MouseButton::Left, x, y });
    }

    pub fn move_to(&mut self, x: i32, y: i32) {
        let (x, y) = Rig::screen(x, y);
        self.send(InputKind::MouseMove { x, y });
    }

    pub fn press(&mut self, x: i32, y: i32) {
        let (x, y) = Rig::screen(x, y);
        self.send(InputKind::MouseDown { button: MouseButton::Left, x, y });
    }

    pub fn release(&mut self, x: i32, y: i32) {
        let (x, y) = Rig::screen(x, y);
        self.send(InputKind::MouseUp { button: MouseButton::Left, x, y });
    }

    pub fn key(&mut self, code: u32) {
        self.send(InputKind::KeyDown { code, mods: Modifiers::empty() });
    }

    pub fn keys(&mut self, codes: &[u32]) {
        for &c in codes {
            self.key(c);
        }
    }

    pub fn tab(&mut self) {
        self.key(key::TAB);
    }

    pub fn type_text(&mut self, s: &str) {
        for c in s.chars() {
            self.send(InputKind::KeyChar(c));
        }
    }

    pub fn taken_notices(&self) -> Vec<(String, Electron)> {
        std::mem::take(&mut *self.notices.borrow_mut())
    }
}
