//! Decision procedures for classes of regular languages built by left, right, mixed and unambiguous polynomial closure over finite bases.

pub mod bits;
pub mod config;
pub mod corpus;
pub mod covering;
pub mod equiv;
pub mod error;
pub mod lang;
pub mod logic;
pub mod membership;
pub mod monoid;
pub mod prevariety;
pub mod rating;
pub mod syntactic;
pub mod words;

pub use config::Config;
pub use error::{Error, Result};
