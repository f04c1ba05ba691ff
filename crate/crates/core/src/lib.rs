//! A GUI management system built from the framebuffer up.
//!
//! The crate splits into a drawing [`kernel`] and the surface layer above it:
//! the [`chemical`] multi-role store, the [`circuit`] event scheduler, the
//! [`veto`] message bus, the [`wm`] window manager, [`focus`], the
//! [`widgets`] set with skinning, the [`desktop`] shell, the form
//! [`designer`], and the deterministic [`runtime`] that pumps them all.

pub mod kernel;
pub mod chemical;
pub mod circuit;
pub mod veto;
pub mod input;
pub mod widgets;
pub mod wm;
pub mod focus;
pub mod desktop;
pub mod runtime;
pub mod designer;
pub mod demo;
