//! Batch front end for the `zecmac` library.
//!
//! Every command writes a `manifest.json` into its output directory, and
//! every CSV or JSON file it emits carries the manifest hash.

pub mod error;
pub mod info;
pub mod io;
pub mod manifest;
pub mod region;
pub mod simulate;

pub use error::CliError;
pub use manifest::RunManifest;
