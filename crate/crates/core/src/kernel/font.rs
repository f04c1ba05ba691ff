//! Monospaced bitmap font covering printable ASCII.

use font8x8::legacy::BASIC_LEGACY;

const FIRST: u32 = 0x20;
const LAST: u32 = 0x7e;

/// A monospaced bitmap font. Each glyph row is a bitmask with the leftmost
/// pixel in bit `width - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitmapFont {
    glyph_width: u32,
    glyph_height: u32,
    /// `glyph_height` rows per glyph, glyphs for 0x20..=0x7e back to back.
    rows: Vec<u32>,
    replacement: Vec<u32>,
}

impl BitmapFont {
    /// Builds a font from raw row masks. `rows.len()` must be `95 * height`.
    pub fn from_rows(width: u32, height: u32, rows: Vec<u32>, replacement: Vec<u32>) -> Option<Self> {
        let glyphs = (LAST - FIRST + 1) as usize;
        if width == 0 || width > 32 || height == 0 {
            return None;
        }
        if rows.len() != glyphs * height as usize || replacement.len() != height as usize {
            return None;
        }
        Some(Self {
            glyph_width: width,
            glyph_height: height,
            rows,
            replacement,
        })
    }

    /// The built-in 8x16 font: the public-domain 8x8 basic Latin set with every row doubled.
    pub fn builtin() -> Self {
        let mut rows = Vec::with_capacity(95 * 16);
        for code in FIRST..=LAST {
            for &row in &BASIC_LEGACY[code as usize] {
                // font8x8 stores the leftmost pixel in bit 0.
                let mask = row.reverse_bits() as u32;
                rows.push(mask);
                rows.push(mask);
            }
        }
        let mut replacement = vec![0x81u32; 16];
        replacement[0] = 0;
        replacement[1] = 0xff;
        replacement[14] = 0xff;
        replacement[15] = 0;
        Self::from_rows(8, 16, rows, replacement).expect("builtin font tables are well-formed")
    }

    pub fn glyph_width(&self) -> u32 {
        self.glyph_width
    }

    pub fn glyph_height(&self) -> u32 {
        self.glyph_height
    }

    /// Row masks for `c`; characters outside printable ASCII map to the replacement glyph.
    pub fn glyph(&self, c: char) -> &[u32] {
        let code = c as u32;
        if (FIRST..=LAST).contains(&code) {
            let h = self.glyph_height as usize;
            let start = (code - FIRST) as usize * h;
            &self.rows[start..start + h]
        } else {
            &self.replacement
        }
    }

    pub fn is_set(&self, c: char, col: u32, row: u32) -> bool {
        if col >= self.glyph_width || row >= self.glyph_height {
            return false;
        }
        let mask = self.glyph(c)[row as usize];
        mask & (1 << (self.glyph_width - 1 - col)) != 0
    }

    pub fn text_width(&self, s: &str) -> u32 {
        s.chars().count() as u32 * self.glyph_width
    }
}

impl Default for BitmapFont {
    fn default() -> Self {
        Self::builtin()
    }
}
