//! Design and analysis of rectangular microstrip patch antennas matched
//! through an interdigital capacitor.
//!
//! The crate covers the whole circuit-level flow:
//!
//! - [`substrate`]: microstrip closed forms and patch dimensioning
//! - [`radiation`]: two-slot radiation conductances, resonant resistance,
//!   directivity
//! - [`idc`]: interdigital capacitor element values and its two-port
//! - [`network`]: chain matrices, patch loads, S11 sweeps, bandwidth
//! - [`matching`]: automatic finger-count/finger-length synthesis and the
//!   reference feed designs
//! - [`compare`] and [`report`]: comparison tables and file output
//!
//! All quantities are SI (meters, hertz, ohms, farads) unless a field name
//! says otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod constants;
mod error;
pub mod golden;
pub mod idc;
pub mod matching;
pub mod network;
pub mod quad;
pub mod radiation;
pub mod report;
pub mod special;
pub mod substrate;

pub use error::{Error, Result};
pub use idc::{IdcGeometry, IdcLumped};
pub use matching::{MatchResult, MatchSpec};
pub use network::{Network, SweepResult, TwoPort};
pub use num_complex::Complex64;
pub use substrate::{MicrostripLine, PatchGeometry, Substrate};
