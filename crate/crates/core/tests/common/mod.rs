//! Independent oracles shared by the integration suites and the acceptance gate.
#![allow(dead_code)]

pub mod chem;
pub mod circuit;
pub mod classify;
pub mod designer;
pub mod replay;
pub mod rig;
pub mod scene;
pub mod widget_checks;
pub mod veto;
