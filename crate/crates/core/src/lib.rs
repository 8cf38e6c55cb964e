//! Exact computational algebra for Chevalley groups of types B2 and G2,
//! their twisted forms (the Suzuki and small Ree groups, realized as fixed
//! points of a pair of isogenies), mixed groups over pairs of fields
//! `ℓ^p ⊆ k ⊆ ℓ`, and the surrounding twisted/mixed ring machinery with
//! base change and twisted descent.
//!
//! All arithmetic is exact: finite fields, rational function fields, and
//! binary products of those, each with a canonical element encoding.
//! Everything is verified at desk scale by brute-force oracles: subgroup
//! closures, exhaustive fixed-point filters, and seeded property suites.
//!
//! With the default `parallel` feature, enumeration and verification
//! batches use rayon; disabling it leaves a sequential fallback with
//! identical results.

pub mod chevalley;
pub mod error;
pub mod fields;
pub mod maps;
pub mod matrix;
pub mod mixedgrp;
pub mod poly;
pub mod rootsystem;
pub mod suzree;
pub mod twistmix;

pub use error::{Error, Result};
