//! Finite-field sum-product, incidence, distance and Kakeya experiments over
//! prime fields `F_q`.

pub mod distance;
pub mod error;
pub mod field;
pub mod incidence;
pub mod kakeya;
pub mod linalg;
pub mod setops;
pub mod sumprod;

mod par;
pub mod subsets;
pub mod verify;

pub use error::{Error, Result};
pub use field::{is_prime, make_field, Elem, FSet, PrimeField};
