//! Community detection toolkit built around the SpeakEasy label-propagation
//! algorithm: history-buffered propagation that selects the most unexpectedly
//! popular label per node, replicated runs combined by consensus clustering,
//! multi-community node extraction from co-occurrence statistics, a metric
//! suite for comparing partitions and covers, a planted-community benchmark
//! generator, and a permutation test for community reorganization between
//! two cohorts of connectivity matrices.

pub mod benchgen;
pub mod consensus;
pub mod difftest;
mod error;
pub mod graph;
pub mod io;
pub mod labelprop;
pub mod metrics;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{Cover, Graph, Partition};
pub use labelprop::EngineParams;
