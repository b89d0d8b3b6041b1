//! Query engine for labelled graphs combining basic graph patterns with
//! connecting tree patterns: for m seed sets, find every minimal tree that
//! joins one node of each set.

pub mod eql;
pub mod graph;
pub mod bgp;
pub mod ctp;
pub mod synth;
pub mod engine;
