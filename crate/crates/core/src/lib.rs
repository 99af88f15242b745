//! Function minimization over bit-string encodings with variable depth
//! (Kernighan-Lin) search, hill climbing, simulated annealing and a genetic
//! algorithm, plus the De Jong / Schaffer benchmark suite and a seeded
//! multi-trial harness.
//!
//! ```
//! use klsearch::{derive_stream, Algorithm, Benchmark, SearchParams};
//!
//! let mut rng = derive_stream(7, 0);
//! let result = Algorithm::Kls2
//!     .run(&Benchmark::F1, &mut rng, &SearchParams::default())
//!     .unwrap();
//! assert!(result.best_cost < 0.01);
//! ```

pub mod annealing;
pub mod encoding;
pub mod error;
pub mod genetic;
pub mod harness;
pub mod local_search;
pub mod objectives;
pub mod rng;
pub mod search;

pub use encoding::{binary_to_gray, gray_to_binary, BitVector, Coding, EncodingSpec, Move, Step};
pub use error::{Error, Result};
pub use objectives::{Benchmark, FnObjective, Objective};
pub use rng::{derive_stream, RngStream};
pub use search::{Algorithm, Genotype, SearchParams, SearchResult, StopReason};
