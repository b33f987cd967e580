pub mod analysis;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod exactpoly;
pub mod explore;
pub mod realize;
pub mod reproduce;
pub mod transforms;

pub use error::{Error, Result};
