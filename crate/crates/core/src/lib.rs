pub mod cohomology;
pub mod diffcoh;
pub mod error;
pub mod exactalg;
pub mod gluing;
pub mod random;
pub mod report;
pub mod scene;
pub mod simplicial;

pub use error::{Error, Result};
