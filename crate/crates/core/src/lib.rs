pub mod bundles_p1;
pub mod cli;
pub mod elliptic_cm;
pub mod error;
pub mod exactalg;
pub mod gaudin;
pub mod garnier;
pub mod integrate;
pub mod liedata;
pub mod opers;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
