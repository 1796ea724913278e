pub mod emptiness;
pub mod error;
pub mod format;
pub mod linalg;
pub mod morphisms;
pub mod normalform;
pub mod poly;
pub mod presentation;
pub mod stringbridge;
pub mod superlie;

pub use error::{Error, Result};
