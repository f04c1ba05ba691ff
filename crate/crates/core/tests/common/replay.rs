//! Demo replay helpers and the committed golden hash lists.

use std::path::PathBuf;

use groundup::demo::{self, DemoOptions};
use groundup::input::{key, InputKind, Modifiers, MouseButton, RawInputEvent, Script};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The hash list of a headless run, one `frame <tick> <hash>` line per frame.
pub fn hash_lines(name: &str, opts: &DemoOptions, script: &Script) -> String {
    let mut d = demo::build(name, opts).expect("known demo");
    d.runtime
        .run_reports(script)
        .into_iter()
        .filter_map(|r| r.hash.map(|h| format!("frame {} {h:016x}\n", r.tick)))
        .collect()
}

pub fn tour_lines(name: &str) -> String {
    hash_lines(name, &DemoOptions::default(), &Script::parse(demo::tour(name).unwrap()).unwrap())
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.hashes"))
}

/// Compares against the committed golden; `UPDATE_GOLDENS=1` rewrites it.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some_and(|v| v == "1") {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == actual {
        Ok(())
    } else {
        let line = want.lines().zip(actual.lines()).position(|(a, b)| a != b).unwrap_or(want.lines().count().min(actual.lines().count()));
        Err(format!("{name}: hash list differs from golden at line {}", line + 1))
    }
}

const KEYS: [u32; 12] = [key::TAB, key::ENTER, key::ESCAPE, key::SPACE, key::BACKSPACE, key::UP, key::DOWN, key::LEFT, key::RIGHT, key::HOME, key::END, key::F10];

/// A random but well-formed input script over a `w`×`h` screen.
pub fn random_script(rng: &mut ChaCha8Rng, events: usize, w: u32, h: u32) -> Script {
    let mut tick = 0;
    let mut out = Vec::with_capacity(events);
    let (mut x, mut y) = (0, 0);
    for _ in 0..events {
        tick += rng.random_range(0..3u64);
        let kind = match rng.random_range(0..10) {
            0..=2 => {
                x = rng.random_range(-8..w as i32 + 8);
                y = rng.random_range(-8..h as i32 + 8);
                InputKind::MouseMove { x, y }
            }
            3 | 4 => InputKind::MouseDown { button: MouseButton::Left, x, y },
            5 => InputKind::MouseUp { button: MouseButton::Left, x, y },
            6 => InputKind::MouseDown { button: MouseButton::Right, x, y },
            7 => {
                let mods = Modifiers::from_bits_truncate(rng.random_range(0..8));
                InputKind::KeyDown { code: KEYS[rng.random_range(0..KEYS.len())], mods }
            }
            _ => InputKind::KeyChar(rng.random_range(b'a'..=b'z') as char),
        };
        out.push(RawInputEvent::new(tick, kind));
    }
    Script::new(out)
}
