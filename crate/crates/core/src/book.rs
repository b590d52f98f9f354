//! The guide's chapters, compiled as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/arrangements.md")]
pub mod arrangements {}
#[doc = include_str!("../../../book/src/pk-cones.md")]
pub mod pk_cones {}
#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}
#[doc = include_str!("../../../book/src/valuations.md")]
pub mod valuations {}
#[doc = include_str!("../../../book/src/cp1.md")]
pub mod cp1 {}
#[doc = include_str!("../../../book/src/cone-lab.md")]
pub mod cone_lab {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
