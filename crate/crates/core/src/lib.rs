pub mod algebra;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod holonomy;
pub mod jones;
pub mod kz;
pub mod wcalc;

pub use error::{Error, Result};
