//! Sum capacity of discrete memoryless multiple access channels, global
//! optimization of Lipschitz-like functions, and nonlocal-game analytics.
//!
//! The crate is organised around a few value types:
//!
//! * [`Mac`]: a channel transition tensor `N(z | b1, ..., bN)`.
//! * [`Modulus`]: a continuity bound `β` driving every optimizer.
//! * [`SimplexGrid`]: the rational simplex grid with its equidistant ordering.
//! * [`NonlocalGame`]: questions, answers and a winning set.
//!
//! All entropies are computed in nats; [`Base`] converts for presentation.
//!
//! ```
//! use macap::{capacity, Mac, Stop};
//!
//! let mac = Mac::two_sender(2, 2, 2, vec![1.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5]).unwrap();
//! let report = capacity::sum_capacity_d2_binary(&mac, Stop::Precision(0.01)).unwrap();
//! assert!((report.value - 0.2231).abs() < 0.01);
//! ```

pub mod capacity;
pub mod cli;
pub mod entropy;
mod error;
pub mod game;
pub mod io;
pub mod mac;
mod modulus;
pub mod nosignalling;
pub mod optimize;

pub use capacity::{InnerSolveReport, SumCapacityReport};
pub use entropy::{Base, ProbabilityVector};
pub use error::{Error, Result};
pub use game::NonlocalGame;
pub use mac::{EffectiveChannel, Mac};
pub use modulus::{largest_step, Modulus};
pub use optimize::{OptimizationOutcome, SimplexCurve, SimplexGrid, Stop};

/// Default ceiling on estimated objective evaluations before a method refuses.
pub const DEFAULT_EVAL_CEILING: u128 = 10_000_000;
