//! Everything around [`permstar_core`] that needs the standard library: the
//! text, CSV and JSON file formats, a wall clock for the optimizer's time
//! limit, the batch experiment harness, the reference values used for
//! regression checks, and the `permstar` command-line tool.

pub mod cli;
mod error;
pub mod format;
pub mod generator;
pub mod harness;
pub mod reference;
pub mod report;

use std::time::Instant;

pub use error::{Error, Result};
pub use generator::GeneratorSpec;
pub use permstar_core as core;

/// Seconds since construction, for [`permstar_core::optimizer::optimize`].
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(Instant::now())
    }
}

impl permstar_core::optimizer::Clock for WallClock {
    fn elapsed(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
