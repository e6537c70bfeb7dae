//! A shallow-transfer anusaaraka engine.
//!
//! Source text is analyzed word by word, grouped into local word groups,
//! mapped group by group onto target-language material, and rendered in a
//! dialect notation that keeps every piece of source information visible.
//! Human pre-editing and level-1 post-editing operate around that pipeline.

pub mod cli;
pub mod edit;
pub mod grouper;
pub mod lexicon;
pub mod morph;
pub mod pipeline;
pub mod render;
pub mod service;
pub mod transfer;
