//! A numerical laboratory for random covariant quantum channels.
//!
//! `chanlab` samples random quantum channels from the Stinespring model
//! (Haar-distributed isometries), projects them onto five covariant families
//! by twirling, decides PPT / entanglement-breaking / realignment properties
//! through closed-form criteria, and validates all Monte Carlo statistics
//! against an exact Weingarten-calculus moment oracle.
//!
//! The crate is organized in layers:
//!
//! - [`perm`] — exact symmetric-group and set-partition combinatorics;
//! - [`weingarten`] — exact Weingarten tables and closed-form moment oracles;
//! - [`linalg`] — dense complex kernels (BLAS/LAPACK-backed);
//! - [`quantum`] — Choi matrices, partial transpose, positivity tests;
//! - [`sampling`] — reproducible Ginibre / Haar-isometry / Wishart sampling;
//! - [`twirl`] — parameter extraction and the five twirling operations;
//! - [`families`] — structured covariant channels and their entanglement
//!   criteria;
//! - [`experiments`] — the config-driven experiment runners behind the
//!   `chanlab` CLI.
//!
//! The `book/` directory of the repository contains a guide with worked
//! examples; its code listings run as doctests of the `chanlab-book` crate.
//!
//! # Quick start
//!
//! Sample a random channel, read off its covariant parameters, and compare
//! a Monte Carlo mean against the exact oracle:
//!
//! ```
//! use chanlab::sampling::{sample_haar_isometry, stinespring_channel, RngStream};
//! use chanlab::twirl::params_of_channel;
//! use chanlab::weingarten::{moment_lambda, rational_to_f64, LambdaIndex};
//!
//! let (d, s, n) = (6, 2, 400);
//! let mut acc = 0.0;
//! for i in 0..n {
//!     let mut rng = RngStream::new(1, i).rng();
//!     let iso = sample_haar_isometry(d, s, &mut rng)?;
//!     acc += params_of_channel(&stinespring_channel(&iso)?)?.lambda1;
//! }
//! let exact = rational_to_f64(&moment_lambda(LambdaIndex::Lambda1, 6, 2, 1)?);
//! assert_eq!(exact, 1.0);
//! assert!((acc / n as f64 - exact).abs() < 0.1);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod experiments;
pub mod families;
pub mod linalg;
pub mod perm;
pub mod quantum;
pub mod sampling;
pub mod twirl;
pub mod weingarten;
