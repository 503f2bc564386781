//! Scenes, sample grids, verification suites and exports built on
//! `rcgeom-core`.

pub mod builtins;
pub mod cli;
pub mod error;
pub mod export;
pub mod grid;
pub mod quadrature;
pub mod scene;
pub mod suites;

pub use error::{LabError, Result};
pub use scene::{load_scene, open_scene, Compiled, Scene};
