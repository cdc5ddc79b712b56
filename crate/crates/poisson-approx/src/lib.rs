//! Poisson approximation bounds for sums of Bernoulli random variables.

// `!(x > 0.0)` is the idiom here for rejecting NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod chen_stein;
pub mod divergences;
pub mod entropy_bounds;
mod error;
pub mod kl_bounds;
pub mod pmf;
pub mod related_bounds;
pub mod report;
pub mod special;
pub mod tv_lower_improved;

pub use error::{Error, Result};

// Guide chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/distances.md")]
    mod distances {}
    #[doc = include_str!("../../../book/src/chen-stein.md")]
    mod chen_stein {}
    #[doc = include_str!("../../../book/src/improved-lower-bound.md")]
    mod improved_lower_bound {}
    #[doc = include_str!("../../../book/src/relative-entropy.md")]
    mod relative_entropy {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/related-metrics.md")]
    mod related_metrics {}
    #[doc = include_str!("../../../book/src/applications.md")]
    mod applications {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
