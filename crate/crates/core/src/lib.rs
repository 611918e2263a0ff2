pub mod analytic;
pub mod certify;
pub mod combinat;
pub mod error;
pub mod families;
pub mod graph;
pub mod indpoly;
pub mod num;
pub mod report;
pub mod roots;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use rug;
