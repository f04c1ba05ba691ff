//! Terminal display backend: the framebuffer drawn with half-block cells
//! in true colour, mouse and keys read through crossterm.

use std::io::{self, Write};
use std::sync::mpsc::Sender;
use std::time::{Duration, Instant};

use crossterm::event::{self, Event, KeyCode, KeyEvent, KeyEventKind, KeyModifiers, MouseButton as TermButton, MouseEvent, MouseEventKind};
use crossterm::style::{Color, Print, SetBackgroundColor, SetForegroundColor};
use crossterm::{cursor, execute, queue, terminal};
use groundup::demo::Demo;
use groundup::input::{key, InputKind, Modifiers, MouseButton, RawInputEvent, Script};
use groundup::kernel::FrameBuffer;

const TICK: Duration = Duration::from_micros(16_667);

/// Restores the terminal when dropped.
struct Screen;

impl Screen {
    fn enter() -> io::Result<Screen> {
        terminal::enable_raw_mode()?;
        execute!(io::stdout(), terminal::EnterAlternateScreen, event::EnableMouseCapture, cursor::Hide)?;
        Ok(Screen)
    }
}

impl Drop for Screen {
    fn drop(&mut self) {
        let _ = execute!(io::stdout(), cursor::Show, event::DisableMouseCapture, terminal::LeaveAlternateScreen);
        let _ = terminal::disable_raw_mode();
    }
}

/// Maps terminal cells onto framebuffer pixels.
#[derive(Clone, Copy)]
struct Scale {
    cols: u32,
    rows: u32,
    w: u32,
    h: u32,
}

impl Scale {
    fn pixel(&self, col: u16, row: u16) -> (i32, i32) {
        let x = (u32::from(col) * self.w + self.w / 2) / self.cols.max(1);
        let y = (u32::from(row) * self.h + self.h / 2) / self.rows.max(1);
        (x as i32, y as i32)
    }
}

fn button(b: TermButton) -> MouseButton {
    match b {
        TermButton::Left => MouseButton::Left,
        TermButton::Right => MouseButton::Right,
        TermButton::Middle => MouseButton::Middle,
    }
}

fn mods(m: KeyModifiers) -> Modifiers {
    let mut out = Modifiers::empty();
    out.set(Modifiers::SHIFT, m.contains(KeyModifiers::SHIFT));
    out.set(Modifiers::CTRL, m.contains(KeyModifiers::CONTROL));
    out.set(Modifiers::ALT, m.contains(KeyModifiers::ALT));
    out
}

fn key_event(k: KeyEvent) -> Option<InputKind> {
    let m = mods(k.modifiers);
    let code = match k.code {
        KeyCode::Char(c) if !m.intersects(Modifiers::CTRL | Modifiers::ALT) => return Some(InputKind::KeyChar(c)),
        KeyCode::Char(c) => c as u32,
        KeyCode::Backspace => key::BACKSPACE,
        KeyCode::Tab => key::TAB,
        KeyCode::BackTab => return Some(InputKind::KeyDown { code: key::TAB, mods: m | Modifiers::SHIFT }),
        KeyCode::Enter => key::ENTER,
        KeyCode::Esc => key::ESCAPE,
        KeyCode::Delete => key::DELETE,
        KeyCode::Up => key::UP,
        KeyCode::Down => key::DOWN,
        KeyCode::Left => key::LEFT,
        KeyCode::Right => key::RIGHT,
        KeyCode::Home => key::HOME,
        KeyCode::End => key::END,
        KeyCode::PageUp => key::PAGE_UP,
        KeyCode::PageDown => key::PAGE_DOWN,
        KeyCode::Insert => key::INSERT,
        KeyCode::F(n @ 1..=12) => key::F1 + u32::from(n) - 1,
        _ => return None,
    };
    Some(InputKind::KeyDown { code, mods: m })
}

fn mouse_event(m: MouseEvent, scale: Scale) -> Option<InputKind> {
    let (x, y) = scale.pixel(m.column, m.row);
    Some(match m.kind {
        MouseEventKind::Down(b) => InputKind::MouseDown { button: button(b), x, y },
        MouseEventKind::Up(b) => InputKind::MouseUp { button: button(b), x, y },
        MouseEventKind::Moved | MouseEventKind::Drag(_) => InputKind::MouseMove { x, y },
        _ => return None,
    })
}

/// Reads terminal events until one asks to quit; returns false then.
fn poll_input(tx: &Sender<RawInputEvent>, scale: Scale, until: Instant) -> io::Result<bool> {
    loop {
        let left = until.saturating_duration_since(Instant::now());
        if !event::poll(left)? {
            return Ok(true);
        }
        let kind = match event::read()? {
            Event::Key(k) if k.kind == KeyEventKind::Release => None,
            Event::Key(k) if k.modifiers.contains(KeyModifiers::CONTROL) && matches!(k.code, KeyCode::Char('q' | 'c')) => return Ok(false),
            Event::Key(k) => key_event(k),
            Event::Mouse(m) => mouse_event(m, scale),
            _ => None,
        };
        if let Some(kind) = kind {
            let _ = tx.send(RawInputEvent::new(0, kind));
        }
    }
}

fn draw(out: &mut impl Write, fb: &FrameBuffer, scale: Scale) -> io::Result<()> {
    let rgb = fb.to_rgb();
    let at = |x: u32, y: u32| {
        let i = 3 * (y.min(fb.height() - 1) * fb.width() + x.min(fb.width() - 1)) as usize;
        Color::Rgb { r: rgb[i], g: rgb[i + 1], b: rgb[i + 2] }
    };
    for row in 0..scale.rows {
        queue!(out, cursor::MoveTo(0, row as u16))?;
        for col in 0..scale.cols {
            let x = (col * scale.w + scale.w / 2) / scale.cols;
            let top = (2 * row * scale.h + scale.h / 2) / (2 * scale.rows);
            let bottom = ((2 * row + 1) * scale.h + scale.h / 2) / (2 * scale.rows);
            queue!(out, SetForegroundColor(at(x, top)), SetBackgroundColor(at(x, bottom)), Print('\u{2580}'))?;
        }
    }
    out.flush()
}

/// Runs the demo at 60 ticks a second, feeding `script` at its ticks and
/// terminal input as it arrives. Ctrl+Q or Ctrl+C quits.
pub fn interactive(mut demo: Demo, script: &Script) -> io::Result<()> {
    let _screen = Screen::enter()?;
    let rt = &mut demo.runtime;
    let tx = rt.handoff();
    let mut events = script.events.iter().peekable();
    let mut stdout = io::stdout();
    let mut next = Instant::now();
    loop {
        let (cols, rows) = terminal::size()?;
        let fb = rt.shell.framebuffer();
        let scale = Scale {
            cols: u32::from(cols).max(1),
            rows: u32::from(rows).max(1),
            w: fb.width(),
            h: fb.height(),
        };
        next += TICK;
        if !poll_input(&tx, scale, next)? {
            return Ok(());
        }
        let now = rt.clock().now();
        while let Some(ev) = events.next_if(|e| e.tick <= now) {
            rt.post_event(*ev);
        }
        let report = rt.pump();
        if report.recomposed || report.tick == 0 {
            draw(&mut stdout, rt.shell.framebuffer(), scale)?;
        }
        if Instant::now() > next + TICK {
            next = Instant::now();
        }
    }
}
