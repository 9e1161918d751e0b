pub mod cli;
pub mod cst;
pub mod design;
pub mod equilibria;
pub mod error;
pub mod families;
pub mod game;
pub mod interval;
pub mod optimize;
pub mod oracle;
pub mod plausibility;
pub mod plot;
pub mod refinement;
pub mod report;
pub mod validation;

pub use error::{Error, Result};
