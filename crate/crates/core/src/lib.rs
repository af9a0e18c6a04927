//! Exact product-set and density computations in amenable groups.

pub mod budget;
pub mod cxmachine;
pub mod density;
pub mod error;
pub mod finitegrp;
pub mod groups;
pub mod ratio;
pub mod scenarios;
pub mod setspec;
pub mod structure;
pub mod sturmian;

pub use error::{Error, Result};
