//! Coordinated multicell downlink beamforming with low-resolution DACs
//! under per-antenna power constraints.
//!
//! The antenna-power minimax design is solved through its virtual-uplink
//! dual: a fixed-point power iteration for the user powers, MMSE combiners,
//! precoder recovery, and projected subgradient ascent on the per-cell noise
//! covariances. A fixed-covariance baseline (total-power minimization) is
//! included for comparison, along with a seeded Monte Carlo experiment
//! runner.
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability; the `qcomp` binary drives batch experiments from a config
//! file.

pub mod dual;
pub mod error;
pub mod experiment;
mod linalg;
pub mod metrics;
pub mod netgen;
pub mod outer;
pub mod primal;
pub mod quant;
pub mod selftest;
pub mod types;

pub use dual::{DualState, InnerOptions};
pub use error::{Error, Result};
pub use metrics::{PaprScope, SolveReport};
pub use netgen::{ChannelSet, Geometry, NetworkConfig, SolverOptions, TargetSinr};
pub use outer::{OuterConfig, Solution, StepRule};
pub use primal::BeamformerSet;
pub use quant::{Bits, QuantModel};
