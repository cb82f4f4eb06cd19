pub mod error;
pub mod fv;
pub mod greens;
pub mod linalg;
pub mod oscillator;
pub mod par;
pub mod quadrature;
pub mod specfun;
pub mod susy;
pub mod verify;

pub use error::{KgoError, Result};
pub use par::Exec;
