//! Doctest harness for the guide under `book/`.
//!
//! mdbook does not run code listings against the real crate graph, so the
//! chapters are included here as module docs and `cargo test --doc` keeps
//! every listing compiling and passing. One module per chapter, so a failing
//! listing names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/permutations.md")]
pub mod permutations {}

#[doc = include_str!("../../../book/src/weingarten.md")]
pub mod weingarten {}

#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}

#[doc = include_str!("../../../book/src/sampling.md")]
pub mod sampling {}

#[doc = include_str!("../../../book/src/twirling.md")]
pub mod twirling {}

#[doc = include_str!("../../../book/src/diagonal-channels.md")]
pub mod diagonal_channels {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
