//! IO, reporting, and command-line front end for the exact binary L1TV
//! shape-energy solver in [`l1tv_core`].

pub mod cli;
pub mod pnm;
pub mod report;
