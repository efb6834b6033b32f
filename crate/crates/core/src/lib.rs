//! Preferential attachment multigraphs PA(m; n).
//!
//! The crate generates PA graphs, decides their automorphism groups, checks
//! their degree sequences against closed forms, computes their labeled
//! entropy exactly, by Monte Carlo and asymptotically, and provides the DAG
//! level machinery that brackets their structural entropy.
//!
//! ```
//! use pagraph::model::{generate, WeightMode};
//! use pagraph::symmetry::aut_order;
//!
//! let g = generate(3, 500, 7, WeightMode::SelfLoopDoubled).unwrap();
//! let aut = aut_order(&g.to_multigraph()).unwrap();
//! assert!(aut.log_order() >= 0.0);
//! ```

pub mod dag;
pub mod degree;
pub mod entropy;
mod error;
pub mod model;
pub mod rng;
pub mod stats;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/degrees.md")]
    mod degrees {}
    #[doc = include_str!("../../../book/src/symmetry.md")]
    mod symmetry {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/levels.md")]
    mod levels {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
