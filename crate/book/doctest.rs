//! Doc-test shim: every chapter of the guide is attached to an empty module
//! so its code blocks compile and run under `cargo test`.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("src/model.md")]
pub mod model {}

#[doc = include_str!("src/density-of-states.md")]
pub mod density_of_states {}

#[doc = include_str!("src/dynamics.md")]
pub mod dynamics {}

#[doc = include_str!("src/spectra.md")]
pub mod spectra {}

#[doc = include_str!("src/cli.md")]
pub mod cli {}
