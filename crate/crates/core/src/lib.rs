//! Thermodynamic bookkeeping for small autonomous quantum machines.
//!
//! Composite systems are evolved exactly under their joint unitary dynamics. Each
//! subsystem is assigned an entropy-matched effective temperature, which splits its
//! energy change into heat and work and yields entropy productions and Carnot-type
//! bounds that hold for arbitrary uncorrelated initial states.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod machines;
pub mod models;
pub mod quantum;
pub mod thermo;

pub use error::{Error, Result};
