use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{BitmapFont, Color, KernelError, PixelFormat, Point, Rect, Rgb};

/// A row-major software framebuffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameBuffer {
    width: u32,
    height: u32,
    format: PixelFormat,
    pixels: Vec<u16>,
}

impl FrameBuffer {
    /// Creates a buffer cleared to color 0.
    pub fn new(width: u32, height: u32, format: PixelFormat) -> Result<Self, KernelError> {
        if width == 0 || height == 0 {
            return Err(KernelError::InvalidDimensions { width, height });
        }
        Ok(Self {
            width,
            height,
            format,
            pixels: vec![0; width as usize * height as usize],
        })
    }

    pub fn hicolor(width: u32, height: u32) -> Result<Self, KernelError> {
        Self::new(width, height, PixelFormat::HiColor)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn format(&self) -> &PixelFormat {
        &self.format
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn get(&self, x: i32, y: i32) -> Option<Color> {
        self.bounds()
            .contains(x, y)
            .then(|| Color(self.pixels[self.offset(x, y)]))
    }

    /// Sets a single pixel; out-of-bounds writes are ignored.
    pub fn set(&mut self, x: i32, y: i32, c: Color) -> Result<(), KernelError> {
        self.check(c)?;
        if self.bounds().contains(x, y) {
            let o = self.offset(x, y);
            self.pixels[o] = c.0;
        }
        Ok(())
    }

    pub fn check(&self, c: Color) -> Result<(), KernelError> {
        if self.format.is_valid(c) {
            Ok(())
        } else {
            Err(KernelError::InvalidColor {
                color: c,
                mode: self.format.mode(),
            })
        }
    }

    fn offset(&self, x: i32, y: i32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    /// Fills `r ∩ clip ∩ bounds` with `c`.
    pub fn fill_rect(&mut self, r: Rect, c: Color, clip: Rect) -> Result<(), KernelError> {
        self.check(c)?;
        let area = r.intersect(&clip).intersect(&self.bounds());
        if area.is_empty() {
            return Ok(());
        }
        let w = self.width as usize;
        for y in area.top()..area.bottom() {
            let start = y as usize * w + area.x as usize;
            self.pixels[start..start + area.w as usize].fill(c.0);
        }
        Ok(())
    }

    /// Draws a one-pixel outline just inside `r`.
    pub fn stroke_rect(&mut self, r: Rect, c: Color, clip: Rect) -> Result<(), KernelError> {
        if r.is_empty() {
            return self.check(c);
        }
        self.fill_rect(Rect::new(r.x, r.y, r.w, 1), c, clip)?;
        self.fill_rect(Rect::new(r.x, (r.bottom() - 1) as i32, r.w, 1), c, clip)?;
        self.fill_rect(Rect::new(r.x, r.y, 1, r.h), c, clip)?;
        self.fill_rect(Rect::new((r.right() - 1) as i32, r.y, 1, r.h), c, clip)
    }

    /// Copies `src` with its top-left at `at`, limited to `clip ∩ bounds`.
    pub fn blit(&mut self, src: &FrameBuffer, at: Point, clip: Rect) -> Result<(), KernelError> {
        if src.format != self.format {
            return Err(KernelError::FormatMismatch);
        }
        let dest = Rect::new(at.x, at.y, src.width, src.height)
            .intersect(&clip)
            .intersect(&self.bounds());
        if dest.is_empty() {
            return Ok(());
        }
        let (sx, sy) = ((dest.left() - at.x as i64) as usize, (dest.top() - at.y as i64) as usize);
        let len = dest.w as usize;
        for row in 0..dest.h as usize {
            let s = (sy + row) * src.width as usize + sx;
            let d = (dest.y as usize + row) * self.width as usize + dest.x as usize;
            self.pixels[d..d + len].copy_from_slice(&src.pixels[s..s + len]);
        }
        Ok(())
    }

    /// Copies the `from` region of this buffer to `at`, correct when source and
    /// destination overlap.
    pub fn copy_within(&mut self, from: Rect, at: Point, clip: Rect) {
        let from = from.intersect(&self.bounds());
        if from.is_empty() {
            return;
        }
        let dest = Rect::new(at.x, at.y, from.w, from.h)
            .intersect(&clip)
            .intersect(&self.bounds());
        if dest.is_empty() {
            return;
        }
        let sx = from.x as i64 + (dest.left() - at.x as i64);
        let sy = from.y as i64 + (dest.top() - at.y as i64);
        let w = self.width as usize;
        let len = dest.w as usize;
        let rows: Vec<usize> = (0..dest.h as usize).collect();
        // Walk rows away from the overlap so unread source rows are never clobbered.
        let order: Box<dyn Iterator<Item = &usize>> = if (dest.y as i64) > sy {
            Box::new(rows.iter().rev())
        } else {
            Box::new(rows.iter())
        };
        for &row in order {
            let s = (sy as usize + row) * w + sx as usize;
            let d = (dest.y as usize + row) * w + dest.x as usize;
            self.pixels.copy_within(s..s + len, d);
        }
    }

    /// Renders `s` left to right at fixed advance. `bg = None` leaves unset glyph
    /// pixels untouched.
    pub fn draw_text(
        &mut self,
        font: &BitmapFont,
        s: &str,
        at: Point,
        fg: Color,
        bg: Option<Color>,
        clip: Rect,
    ) -> Result<(), KernelError> {
        self.check(fg)?;
        if let Some(bg) = bg {
            self.check(bg)?;
        }
        let visible = clip.intersect(&self.bounds());
        let (gw, gh) = (font.glyph_width(), font.glyph_height());
        for (i, ch) in s.chars().enumerate() {
            let gx = at.x as i64 + i as i64 * gw as i64;
            if gx >= visible.right() {
                break;
            }
            let cell = Rect::from_edges(gx, at.y as i64, gx + gw as i64, at.y as i64 + gh as i64);
            let area = cell.intersect(&visible);
            if area.is_empty() {
                continue;
            }
            let rows = font.glyph(ch);
            for y in area.top()..area.bottom() {
                let mask = rows[(y - at.y as i64) as usize];
                for x in area.left()..area.right() {
                    let col = (x - gx) as u32;
                    let on = mask & (1 << (gw - 1 - col)) != 0;
                    let o = y as usize * self.width as usize + x as usize;
                    if on {
                        self.pixels[o] = fg.0;
                    } else if let Some(bg) = bg {
                        self.pixels[o] = bg.0;
                    }
                }
            }
        }
        Ok(())
    }

    /// 64-bit digest of dimensions, format (including palette) and pixels.
    pub fn snapshot_hash(&self) -> u64 {
        let mut h = Sha256::new();
        h.update(b"groundup-fb\x01");
        h.update(self.width.to_le_bytes());
        h.update(self.height.to_le_bytes());
        match &self.format {
            PixelFormat::HiColor => h.update([1u8]),
            PixelFormat::Indexed256(p) => {
                h.update([0u8]);
                for e in p.entries().iter() {
                    h.update([e.r, e.g, e.b]);
                }
            }
        }
        let mut buf = Vec::with_capacity(8192);
        for chunk in self.pixels.chunks(4096) {
            buf.clear();
            for &p in chunk {
                buf.extend_from_slice(&p.to_le_bytes());
            }
            h.update(&buf);
        }
        let digest = h.finalize();
        u64::from_be_bytes(digest[..8].try_into().expect("sha256 digest is 32 bytes"))
    }

    /// Palette-resolved RGB triples, row-major.
    pub fn to_rgb(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3);
        for &p in &self.pixels {
            let Rgb { r, g, b } = self.format.resolve(Color(p));
            out.extend_from_slice(&[r, g, b]);
        }
        out
    }

    /// Writes a binary P6 pixmap: `P6\n<w> <h>\n255\n` followed by RGB triples.
    pub fn write_p6<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.to_rgb())?;
        w.flush()
    }

    pub fn export_image(&self, path: impl AsRef<Path>) -> Result<(), KernelError> {
        let file = File::create(path)?;
        self.write_p6(BufWriter::new(file))?;
        Ok(())
    }
}

/// A decoded P6 image: width, height and RGB triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

/// Reads a binary P6 pixmap with maxval 255 (test fixtures and snapshot checks).
pub fn read_p6<R: Read>(mut r: R) -> Result<RgbImage, KernelError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let mut pos = 0usize;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(KernelError::BadImage("truncated header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    if fields[0] != "P6" {
        return Err(KernelError::BadImage(format!("magic {:?}", fields[0])));
    }
    let num = |s: &str| s.parse::<u32>().map_err(|_| KernelError::BadImage(format!("bad number {s:?}")));
    let (width, height, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if maxval != 255 {
        return Err(KernelError::BadImage(format!("maxval {maxval}")));
    }
    let need = width as usize * height as usize * 3;
    if bytes.len() < pos + need {
        return Err(KernelError::BadImage("short raster".into()));
    }
    Ok(RgbImage {
        width,
        height,
        data: bytes[pos..pos + need].to_vec(),
    })
}
