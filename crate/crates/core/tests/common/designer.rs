//! Seeded form documents and editing sessions for the designer checks.

use std::collections::BTreeMap;

use groundup::chemical::Electron;
use groundup::designer::{self, Designer, DesignerMode, FormDocument, WidgetRecord, UNDO_LIMIT};
use groundup::desktop::{Desktop, Shell};
use groundup::kernel::{ColorMode, Rect};
use groundup::widgets::{Theme, WidgetId, WidgetType};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CHARS: &[char] = &['a', 'b', 'Z', '0', ' ', ':', '#', '=', ',', '\\', '"', 'é', '\n', '\t'];

pub fn random_text(rng: &mut ChaCha8Rng, max: usize) -> String {
    (0..rng.random_range(0..=max)).map(|_| CHARS[rng.random_range(0..CHARS.len())]).collect()
}

/// A value shaped like `old`.
pub fn random_like(rng: &mut ChaCha8Rng, old: &Electron) -> Electron {
    match old {
        Electron::Int(_) => Electron::Int(rng.random_range(-2..120)),
        Electron::Bool(_) => Electron::Bool(rng.random()),
        Electron::List(_) => Electron::List((0..rng.random_range(0..5)).map(|_| Electron::from(random_text(rng, 6).as_str())).collect()),
        Electron::Blob(b) => Electron::Blob((0..b.len()).map(|_| rng.random()).collect()),
        _ => Electron::from(random_text(rng, 12).as_str()),
    }
}

/// Randomizes properties one at a time, keeping only values the type
/// accepts, and returns them in the widget's own normal form.
fn random_props(rng: &mut ChaCha8Rng, ty: WidgetType, region: Rect) -> BTreeMap<String, Electron> {
    let mut rec = WidgetRecord::new(ty, region);
    let keys: Vec<String> = rec.props.keys().cloned().collect();
    for k in keys {
        if rng.random_bool(0.6) {
            let old = rec.props[&k].clone();
            rec.props.insert(k.clone(), random_like(rng, &old));
            if rec.build(WidgetId(1)).is_err() {
                rec.props.insert(k, old);
            }
        }
    }
    rec.build(WidgetId(1)).expect("kept values build").props()
}

fn slots(r: &WidgetRecord) -> usize {
    match r.ty {
        WidgetType::Frame => 1,
        WidgetType::Pages => r.props.get("tabs").and_then(Electron::as_list).map_or(0, <[Electron]>::len),
        _ => 0,
    }
}

/// A valid document with up to a dozen widgets of any type, some nested.
pub fn random_form(seed: u64) -> FormDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut doc = FormDocument::new(&random_text(&mut rng, 10), rng.random_range(200..=480), rng.random_range(160..=360));
    doc.theme = ["classic", "minimal"][rng.random_range(0..2)].to_owned();
    for _ in 0..rng.random_range(0..=12) {
        let ty = WidgetType::ALL[rng.random_range(0..WidgetType::ALL.len())];
        let containers: Vec<usize> = (0..doc.widgets.len()).filter(|&i| slots(&doc.widgets[i]) > 0).collect();
        let parent = (!containers.is_empty() && rng.random_bool(0.4)).then(|| {
            let p = containers[rng.random_range(0..containers.len())];
            (p, rng.random_range(0..slots(&doc.widgets[p])))
        });
        let b = parent.map_or(doc.bounds(), |(p, _)| doc.widgets[p].region);
        let (dw, dh) = ty.default_size();
        let w = if rng.random_bool(0.5) { dw } else { rng.random_range(4..=dw.max(8) + 40) }.min(b.w);
        let h = if rng.random_bool(0.5) { dh } else { rng.random_range(4..=dh.max(8) + 30) }.min(b.h);
        let x = b.x + rng.random_range(0..=(b.w - w) as i32);
        let y = b.y + rng.random_range(0..=(b.h - h) as i32);
        let region = Rect::new(x, y, w, h);
        let props = random_props(&mut rng, ty, region);
        doc.widgets.push(WidgetRecord { ty, region, props, parent });
    }
    doc.validate().expect("generated forms are valid");
    doc
}

/// Save then load through a file gives the same document.
pub fn save_load(seed: u64) -> Result<(), String> {
    let doc = random_form(seed);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("form.chem");
    doc.save(&path).map_err(|e| e.to_string())?;
    let back = FormDocument::load(&path).map_err(|e| format!("seed {seed}: {e}"))?;
    if back != doc {
        return Err(format!("seed {seed}: loaded document differs\n{doc:#?}\n{back:#?}"));
    }
    Ok(())
}

/// Instantiating a document and reading the window back gives it again.
pub fn instantiate_introspect(seed: u64) -> Result<(), String> {
    let doc = random_form(seed);
    let mut shell = Shell::new(640, 480, ColorMode::HiColor, &Theme::classic(), Desktop::default(), false);
    let win = designer::instantiate(&doc, &mut shell, 30, 40).map_err(|e| format!("seed {seed}: {e}"))?;
    let back = designer::introspect(&shell, win, &doc.theme).ok_or("window vanished")?;
    if back != doc {
        return Err(format!("seed {seed}: introspected document differs\n{doc:#?}\n{back:#?}"));
    }
    Ok(())
}

fn random_op(d: &mut Designer, rng: &mut ChaCha8Rng) -> &'static str {
    let doc = d.document().clone();
    let n = doc.widgets.len();
    let pick = |rng: &mut ChaCha8Rng| if n == 0 { 0 } else { rng.random_range(0..n + 1).min(n - 1) };
    let point = |rng: &mut ChaCha8Rng| (rng.random_range(-10..doc.width as i32 + 10), rng.random_range(-10..doc.height as i32 + 10));
    match rng.random_range(0..10) {
        0 | 1 => {
            let ty = WidgetType::ALL[rng.random_range(0..WidgetType::ALL.len())];
            let (x, y) = point(rng);
            let _ = d.place(ty, x, y);
            "place"
        }
        2 => {
            let _ = d.move_by(pick(rng), rng.random_range(-40..40), rng.random_range(-40..40));
            "move"
        }
        3 => {
            let _ = d.resize_by(pick(rng), rng.random_range(-40..40), rng.random_range(-40..40));
            "resize"
        }
        4 | 5 if n > 0 => {
            let i = pick(rng);
            let props = &doc.widgets[i].props;
            let keys: Vec<&String> = props.keys().collect();
            let k = keys[rng.random_range(0..keys.len())].clone();
            let v = random_like(rng, &props[&k]);
            let _ = d.set_property(i, &k, v);
            "property"
        }
        6 if n > 0 => {
            let _ = d.delete(pick(rng));
            "delete"
        }
        7 => {
            // a pointer drag, either over a widget or anywhere
            let (x, y) = match n {
                0 => point(rng),
                _ => {
                    let r = doc.widgets[pick(rng)].region;
                    if rng.random_bool(0.3) {
                        (r.right() as i32 - 2, r.bottom() as i32 - 2)
                    } else {
                        (r.x + r.w as i32 / 2, r.y + r.h as i32 / 2)
                    }
                }
            };
            if rng.random_bool(0.2) {
                d.set_mode(DesignerMode::Place(WidgetType::ALL[rng.random_range(0..WidgetType::ALL.len())]));
            }
            d.mouse_down(x, y);
            for _ in 0..rng.random_range(0..4) {
                let (mx, my) = point(rng);
                d.mouse_move(mx, my);
            }
            let (ux, uy) = point(rng);
            d.mouse_up(ux, uy);
            "drag"
        }
        _ => {
            d.undo();
            "undo"
        }
    }
}

/// Runs `steps` random edits, checking after each that replaying the log
/// over the base gives the document, that undo restores the previous
/// document exactly, and finally that undoing everything returns the base.
pub fn undo_session(seed: u64, steps: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = random_form(seed ^ 0x5eed);
    let mut d = Designer::new(start.clone());
    let mut history: Vec<FormDocument> = Vec::new();
    let mut recorded = 0usize;
    for step in 0..steps {
        let before = d.document().clone();
        let log_before: Vec<_> = d.log().cloned().collect();
        let op = random_op(&mut d, &mut rng);
        let log_after: Vec<_> = d.log().cloned().collect();
        let fail = |what: &str| Err(format!("seed {seed} step {step} ({op}): {what}"));
        if op == "undo" {
            if log_after.len() < log_before.len() {
                let want = history.pop().ok_or("undo with no history")?;
                if *d.document() != want {
                    return fail("undo did not restore the previous document");
                }
            } else if !history.is_empty() {
                return fail("undo refused with history left");
            }
        } else if log_after != log_before {
            recorded += 1;
            history.push(before);
            if history.len() > UNDO_LIMIT {
                history.remove(0);
            }
        } else if *d.document() != before {
            return fail("document changed without a command");
        }
        if history.len() != d.log().len() || d.log().len() > UNDO_LIMIT {
            return fail("log length out of step");
        }
        if d.replay() != *d.document() {
            return fail("replaying the log differs from the document");
        }
        if let Err(e) = d.document().validate() {
            return fail(&format!("document became invalid: {e}"));
        }
    }
    while d.undo() {
        let want = history.pop().ok_or("extra undo")?;
        if *d.document() != want {
            return Err(format!("seed {seed}: unwinding differs"));
        }
    }
    if d.document() != d.base() {
        return Err(format!("seed {seed}: fully undone document is not the base"));
    }
    if recorded <= UNDO_LIMIT && *d.document() != start {
        return Err(format!("seed {seed}: fully undone document is not the start"));
    }
    Ok(())
}
