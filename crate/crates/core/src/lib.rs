//! Frobenius tangency curves of surfaces in P^3 over finite fields.

pub mod algebra;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod frobsurface;
pub mod geometry;
pub mod jobfile;
pub mod localgeom;
pub mod orders;
pub mod par;
pub mod replay;
pub mod scan;

pub use config::Config;
pub use error::{Error, Result};
