pub mod closed_forms;
pub mod error;
pub mod fock;
pub mod lie;
pub mod linalg;
pub mod measure;
pub mod quadrature;
pub mod stone;

pub use error::{Error, Result};
pub mod report;
pub mod verify;
pub mod cli;
