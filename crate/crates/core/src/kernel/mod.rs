//! The drawing kernel: a software framebuffer plus the handful of primitives
//! the surface layer paints with (fills, blits, bitmap text).
//!
//! Colors are abstract values validated against the buffer's [`PixelFormat`];
//! they are resolved to RGB only when a frame is exported or displayed.

mod color;
mod font;
mod framebuffer;
mod geometry;

pub use color::{Color, ColorMode, Palette, PixelFormat, Rgb};
pub use font::BitmapFont;
pub use framebuffer::{read_p6, FrameBuffer, RgbImage};
pub use geometry::{Point, Rect};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("color {color} is not valid in {} mode", .mode.name())]
    InvalidColor { color: Color, mode: ColorMode },
    #[error("source and destination pixel formats differ")]
    FormatMismatch,
    #[error("framebuffer dimensions must be positive, got {width}x{height}")]
    InvalidDimensions { width: u32, height: u32 },
    #[error("malformed P6 image: {0}")]
    BadImage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
