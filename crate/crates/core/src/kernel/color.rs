use std::fmt;

/// An abstract color value, interpreted by the framebuffer's [`PixelFormat`]:
/// a palette index for `Indexed256`, a packed 5-6-5 word for `HiColor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Color(pub u16);

impl Color {
    /// Packs 8-bit channels into a 5-6-5 hicolor word.
    pub const fn rgb565(r: u8, g: u8, b: u8) -> Self {
        Color(((r as u16 >> 3) << 11) | ((g as u16 >> 2) << 5) | (b as u16 >> 3))
    }

    pub const fn index(i: u8) -> Self {
        Color(i as u16)
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#06x}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    /// Expands a 5-6-5 word to 8-bit channels, replicating high bits into the low ones.
    pub fn from_565(v: u16) -> Self {
        let r5 = ((v >> 11) & 0x1f) as u8;
        let g6 = ((v >> 5) & 0x3f) as u8;
        let b5 = (v & 0x1f) as u8;
        Rgb::new((r5 << 3) | (r5 >> 2), (g6 << 2) | (g6 >> 4), (b5 << 3) | (b5 >> 2))
    }

    fn distance(&self, other: &Rgb) -> u32 {
        let d = |a: u8, b: u8| (a as i32 - b as i32).pow(2) as u32;
        d(self.r, other.r) + d(self.g, other.g) + d(self.b, other.b)
    }
}

/// 256-entry RGB palette for indexed mode.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Palette(Box<[Rgb; 256]>);

impl fmt::Debug for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Palette").field("first", &self.0[0]).finish_non_exhaustive()
    }
}

impl Palette {
    pub fn new(entries: [Rgb; 256]) -> Self {
        Palette(Box::new(entries))
    }

    /// 16 EGA colors, a 6x6x6 color cube, then a 24-step gray ramp.
    pub fn standard() -> Self {
        const EGA: [(u8, u8, u8); 16] = [
            (0, 0, 0),
            (0, 0, 170),
            (0, 170, 0),
            (0, 170, 170),
            (170, 0, 0),
            (170, 0, 170),
            (170, 85, 0),
            (170, 170, 170),
            (85, 85, 85),
            (85, 85, 255),
            (85, 255, 85),
            (85, 255, 255),
            (255, 85, 85),
            (255, 85, 255),
            (255, 255, 85),
            (255, 255, 255),
        ];
        let mut entries = [Rgb::default(); 256];
        for (i, &(r, g, b)) in EGA.iter().enumerate() {
            entries[i] = Rgb::new(r, g, b);
        }
        let level = |n: usize| (n * 51) as u8;
        for i in 0..216 {
            entries[16 + i] = Rgb::new(level(i / 36), level((i / 6) % 6), level(i % 6));
        }
        for i in 0..24 {
            let v = (8 + i * 10) as u8;
            entries[232 + i] = Rgb::new(v, v, v);
        }
        Palette::new(entries)
    }

    pub fn get(&self, index: u8) -> Rgb {
        self.0[index as usize]
    }

    pub fn entries(&self) -> &[Rgb; 256] {
        &self.0
    }

    /// Index of the closest entry by squared RGB distance; lowest index wins ties.
    pub fn nearest(&self, rgb: Rgb) -> u8 {
        let mut best = 0usize;
        let mut best_d = u32::MAX;
        for (i, e) in self.0.iter().enumerate() {
            let d = e.distance(&rgb);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best as u8
    }
}

/// Display mode of a framebuffer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PixelFormat {
    Indexed256(Palette),
    HiColor,
}

impl PixelFormat {
    pub fn indexed_standard() -> Self {
        PixelFormat::Indexed256(Palette::standard())
    }

    pub fn mode(&self) -> ColorMode {
        match self {
            PixelFormat::Indexed256(_) => ColorMode::Indexed256,
            PixelFormat::HiColor => ColorMode::HiColor,
        }
    }

    pub fn is_valid(&self, c: Color) -> bool {
        match self {
            PixelFormat::Indexed256(_) => c.0 < 256,
            PixelFormat::HiColor => true,
        }
    }

    /// Resolves an abstract color to RGB. Callers validate first.
    pub fn resolve(&self, c: Color) -> Rgb {
        match self {
            PixelFormat::Indexed256(p) => p.get(c.0 as u8),
            PixelFormat::HiColor => Rgb::from_565(c.0),
        }
    }

    /// Best representation of `rgb` in this format.
    pub fn encode(&self, rgb: Rgb) -> Color {
        match self {
            PixelFormat::Indexed256(p) => Color::index(p.nearest(rgb)),
            PixelFormat::HiColor => Color::rgb565(rgb.r, rgb.g, rgb.b),
        }
    }
}

/// The mode half of a [`PixelFormat`], without palette data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorMode {
    Indexed256,
    HiColor,
}

impl ColorMode {
    pub fn name(self) -> &'static str {
        match self {
            ColorMode::Indexed256 => "indexed",
            ColorMode::HiColor => "hicolor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "indexed" | "indexed256" | "256" => Some(ColorMode::Indexed256),
            "hicolor" | "16" => Some(ColorMode::HiColor),
            _ => None,
        }
    }

    /// Standard format for this mode (the built-in palette for indexed).
    pub fn format(self) -> PixelFormat {
        match self {
            ColorMode::Indexed256 => PixelFormat::indexed_standard(),
            ColorMode::HiColor => PixelFormat::HiColor,
        }
    }
}
