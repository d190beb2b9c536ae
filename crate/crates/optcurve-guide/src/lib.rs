//! Compiles and runs every code example in the guide as a doc-test, so
//! the chapters under `book/src` cannot drift from the real API.
//!
//! Each module below is one chapter, included verbatim.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/elliptic.md")]
pub mod elliptic {}

#[doc = include_str!("../../../book/src/genus2.md")]
pub mod genus2 {}

#[doc = include_str!("../../../book/src/genus3.md")]
pub mod genus3 {}

#[doc = include_str!("../../../book/src/zeta.md")]
pub mod zeta {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
