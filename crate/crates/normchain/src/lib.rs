//! Output formats, the result cache and column scheduling for the
//! `normchain` command line tool. The mathematics lives in `normchain-core`.

pub mod cache;
pub mod columns;
pub mod record;
pub mod render;

pub use normchain_core as core;
