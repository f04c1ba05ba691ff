//! Skins: a mapping from the twelve paint roles to colors in one color mode.
//!
//! Theme files use the chemical text format: an optional `theme` atom with
//! `name` and `mode` (`indexed` or `hicolor`) fields, and one `color` atom per
//! role with a `role` field and either an integer `value` (a color in the
//! theme's mode) or an `rgb` text field such as `#c0c0c0`.

use std::path::Path;

use thiserror::Error;

use crate::chemical::{ChemSystem, Electron, ParseError};
use crate::kernel::{Color, ColorMode, Rgb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Desktop,
    WindowFace,
    TitleActive,
    TitleInactive,
    BorderLight,
    BorderDark,
    ButtonFace,
    Text,
    TextDisabled,
    Highlight,
    Shadow,
    Selection,
}

impl Role {
    pub const ALL: [Role; 12] = [
        Role::Desktop,
        Role::WindowFace,
        Role::TitleActive,
        Role::TitleInactive,
        Role::BorderLight,
        Role::BorderDark,
        Role::ButtonFace,
        Role::Text,
        Role::TextDisabled,
        Role::Highlight,
        Role::Shadow,
        Role::Selection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Role::Desktop => "desktop",
            Role::WindowFace => "window-face",
            Role::TitleActive => "title-active",
            Role::TitleInactive => "title-inactive",
            Role::BorderLight => "border-light",
            Role::BorderDark => "border-dark",
            Role::ButtonFace => "button-face",
            Role::Text => "text",
            Role::TextDisabled => "text-disabled",
            Role::Highlight => "highlight",
            Role::Shadow => "shadow",
            Role::Selection => "selection",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Error)]
pub enum ThemeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("theme is missing role {0:?}")]
    MissingRole(&'static str),
    #[error("unknown role {0:?}")]
    UnknownRole(String),
    #[error("role {0:?} has no usable value")]
    BadValue(String),
    #[error("unknown color mode {0:?}")]
    BadMode(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theme {
    pub name: String,
    pub mode: ColorMode,
    colors: [Color; 12],
}

impl Theme {
    /// Builds a theme from RGB values in [`Role::ALL`] order, encoded for `mode`.
    pub fn from_rgb(name: &str, mode: ColorMode, rgb: [Rgb; 12]) -> Self {
        let format = mode.format();
        Theme {
            name: name.to_owned(),
            mode,
            colors: rgb.map(|c| format.encode(c)),
        }
    }

    pub fn color(&self, role: Role) -> Color {
        self.colors[role.index()]
    }

    pub fn rgb(&self, role: Role) -> Rgb {
        self.mode.format().resolve(self.color(role))
    }

    /// Replaces one role's color, given in RGB.
    pub fn with_rgb(mut self, role: Role, rgb: Rgb) -> Self {
        self.colors[role.index()] = self.mode.format().encode(rgb);
        self
    }

    /// The same theme re-encoded for another mode.
    pub fn converted(&self, mode: ColorMode) -> Theme {
        if mode == self.mode {
            return self.clone();
        }
        Theme::from_rgb(&self.name, mode, Role::ALL.map(|r| self.rgb(r)))
    }

    /// The default skin: grey faces, navy titles.
    pub fn classic() -> Theme {
        Theme::from_rgb(
            "classic",
            ColorMode::HiColor,
            [
                Rgb::new(0, 128, 128),
                Rgb::new(192, 192, 192),
                Rgb::new(0, 0, 128),
                Rgb::new(128, 128, 128),
                Rgb::new(255, 255, 255),
                Rgb::new(64, 64, 64),
                Rgb::new(200, 200, 200),
                Rgb::new(0, 0, 0),
                Rgb::new(128, 128, 128),
                Rgb::new(255, 255, 0),
                Rgb::new(128, 128, 128),
                Rgb::new(0, 0, 160),
            ],
        )
    }

    /// The classic skin encoded for the 256-color palette.
    pub fn indexed() -> Theme {
        let mut t = Theme::classic().converted(ColorMode::Indexed256);
        t.name = "indexed".into();
        t
    }

    /// The unskinned look: black, white and one grey.
    pub fn minimal() -> Theme {
        let (b, w, g) = (Rgb::new(0, 0, 0), Rgb::new(255, 255, 255), Rgb::new(160, 160, 160));
        Theme::from_rgb("minimal", ColorMode::HiColor, [w, w, b, g, b, b, w, b, g, b, b, g])
    }

    pub fn builtin(name: &str) -> Option<Theme> {
        match name {
            "classic" => Some(Theme::classic()),
            "indexed" => Some(Theme::indexed()),
            "minimal" => Some(Theme::minimal()),
            _ => None,
        }
    }

    /// Whether this theme draws bevels and other decoration.
    pub fn skinned(&self) -> bool {
        self.color(Role::BorderLight) != self.color(Role::BorderDark)
    }

    pub fn to_chemical(&self) -> ChemSystem {
        let mut sys = ChemSystem::new();
        sys.add_atom("theme", [("name", Electron::from(self.name.as_str())), ("mode", Electron::from(self.mode.name()))]);
        for role in Role::ALL {
            sys.add_atom("color", [("role", Electron::from(role.name())), ("value", Electron::Int(self.color(role).0.into()))]);
        }
        sys
    }

    pub fn from_chemical(sys: &ChemSystem) -> Result<Theme, ThemeError> {
        let mut name = "custom".to_owned();
        let mut mode = ColorMode::HiColor;
        if let Some(meta) = sys.atoms().find(|a| a.name() == "theme") {
            if let Some(n) = meta.get("name").as_text() {
                name = n.to_owned();
            }
            if let Some(m) = meta.get("mode").as_text() {
                mode = ColorMode::parse(m).ok_or_else(|| ThemeError::BadMode(m.to_owned()))?;
            }
        }
        let format = mode.format();
        let mut colors: [Option<Color>; 12] = [None; 12];
        for atom in sys.atoms().filter(|a| a.name() == "color") {
            let role_name = atom.get("role").as_text().unwrap_or_default();
            let role = Role::parse(role_name).ok_or_else(|| ThemeError::UnknownRole(role_name.to_owned()))?;
            let bad = || ThemeError::BadValue(role_name.to_owned());
            let color = if let Some(v) = atom.get("value").as_int() {
                let c = Color(u16::try_from(v).map_err(|_| bad())?);
                if !format.is_valid(c) {
                    return Err(bad());
                }
                c
            } else if let Some(hex) = atom.get("rgb").as_text() {
                format.encode(parse_hex(hex).ok_or_else(bad)?)
            } else {
                return Err(bad());
            };
            colors[role.index()] = Some(color);
        }
        let mut out = [Color(0); 12];
        for role in Role::ALL {
            out[role.index()] = colors[role.index()].ok_or(ThemeError::MissingRole(role.name()))?;
        }
        Ok(Theme { name, mode, colors: out })
    }

    pub fn parse(text: &str) -> Result<Theme, ThemeError> {
        Theme::from_chemical(&ChemSystem::deserialize(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Theme, ThemeError> {
        Theme::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ThemeError> {
        Ok(std::fs::write(path, self.to_chemical().serialize())?)
    }
}

fn parse_hex(s: &str) -> Option<Rgb> {
    let h = s.strip_prefix('#')?;
    if h.len() != 6 || !h.is_ascii() {
        return None;
    }
    let c = |i: usize| u8::from_str_radix(&h[i..i + 2], 16).ok();
    Some(Rgb::new(c(0)?, c(2)?, c(4)?))
}
