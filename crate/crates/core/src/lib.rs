//! Mod-p cohomology of finite groups: resolutions over group algebras,
//! restriction and transfer, cup products, and module invariants.

pub mod actions;
pub mod catalog;
pub mod cli;
pub mod cohmaps;
pub mod error;
pub mod fplinalg;
pub mod gmodules;
pub mod groups;
pub mod products;
pub mod resolutions;

pub use error::{Error, Result};
