//! Deterministic image-method ray tracing for indoor millimeter-wave channels.
//!
//! The crate is organized bottom-up:
//!
//! * [`scene`] builds corridors and tunnels out of finite planar reflectors.
//! * [`tracer`] enumerates direct, single- and double-reflection paths.
//! * [`antenna`] evaluates the gain patterns of the three antenna systems.
//! * [`channel`] combines paths into received power, impulse responses,
//!   power delay profiles and receiver sweeps.
//! * [`scenario`] and [`export`] drive the whole pipeline from a TOML
//!   scenario and write CSV tables and plot scripts.

// `!(x >= lo)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod channel;
pub mod error;
pub mod export;
pub mod scenario;
pub mod scene;
pub mod tracer;

pub use error::{Error, Result};
