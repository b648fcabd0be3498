//! Covering subtrees on edge-weighted trees.
//!
//! The core is [`penalty_engine`], which computes for every node `v` of a
//! degree-three bitree the penalty `p'(v)` of customers left uncovered by a
//! facility at `v`, in `O(n log n)`. [`covering_dp`] turns three such passes
//! into an optimal indirect covering subtree; [`medianoid`] and
//! [`hardness`] build on the single-node case.

pub mod bitree;
pub mod cli;
pub mod covering_dp;
pub mod error;
pub mod hardness;
pub mod instance;
pub mod medianoid;
pub mod oracles;
pub mod penalty_engine;

pub use error::{Error, ParseError, Result};
