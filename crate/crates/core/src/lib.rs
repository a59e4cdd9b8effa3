//! Exact computations around fields with the property that no polynomial
//! of degree at least two has an infinite invariant subset: rational
//! periodic points with completeness certificates, radical towers with
//! total-ramification certificates and vanishing heights, backward orbits,
//! and the small permutation-group facts behind the symmetric-closure
//! arguments.

pub mod arith;
pub mod error;
pub mod groups;
pub mod limits;
pub mod dynamics;
pub mod par;
pub mod reduction;
pub mod tower;

pub use error::{Error, Result};
pub use limits::Limits;
