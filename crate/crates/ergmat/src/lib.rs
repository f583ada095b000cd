//! File formats, thread-pool execution and the `ergmat` command line on top
//! of [`ergmat_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod io;
pub mod parallel;

pub use error::{Error, Result};
pub use parallel::{Exec, Rayon};
