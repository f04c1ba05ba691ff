//! Display-less replay: frame hashes to a writer, snapshots to disk.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use groundup::demo::Demo;
use groundup::input::Script;

/// Replays `script`, writing `frame <tick> <hash>` for every recomposed
/// frame. With `snapshots`, every tick divisible by the interval is also
/// written as `<demo>-<tick>.ppm` in the directory.
pub fn replay(mut demo: Demo, script: &Script, snapshots: Option<(u64, &Path)>, out: &mut impl Write) -> io::Result<()> {
    if let Some((_, dir)) = snapshots {
        std::fs::create_dir_all(dir)?;
    }
    let name = demo.name;
    let mut result: io::Result<()> = Ok(());
    demo.runtime.run_observed(script, |shell, report| {
        if result.is_err() {
            return;
        }
        result = (|| {
            if let Some(h) = report.hash {
                writeln!(out, "frame {} {h:016x}", report.tick)?;
            }
            if let Some((every, dir)) = snapshots {
                if report.tick % every == 0 {
                    let path = dir.join(format!("{name}-{:06}.ppm", report.tick));
                    let mut f = BufWriter::new(File::create(path)?);
                    shell.framebuffer().write_p6(&mut f)?;
                    f.flush()?;
                }
            }
            Ok(())
        })();
    });
    result?;
    out.flush()
}
