//! Multiple Szegő curves and strong asymptotics of planar orthogonal
//! polynomials for the weight `e^{−N|z|²} ∏ |z − a_j|^{2c_j}`, together with
//! a brute-force oracle built from the moment matrix.

pub mod asym;
pub mod branches;
pub mod config;
pub mod dd;
pub mod error;
pub mod oracle;
pub mod specfun;
pub mod szego;

pub use config::{validate_config, Configuration, RawConfig};
pub use error::Error;
