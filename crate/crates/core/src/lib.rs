//! Robust positioning sequences and arrays.
//!
//! Every window of a robust positioning pattern is far, in Hamming or rank
//! distance, from every other window, so a noisy observation of a window
//! still pins down where it came from. This crate builds such patterns,
//! locates corrupted windows in them and checks their properties by brute
//! force.

pub mod arr2d;
pub mod bitmat;
pub mod cli;
pub mod error;
pub mod ff;
pub mod gabidulin;
pub mod gray;
pub mod marker;
pub mod oracle;
pub mod qary;
pub mod rank2d;
pub mod format;
pub mod redundancy;
pub mod rs;
pub mod search;
pub mod seq1d;

pub use error::{Error, Result};
