//! Exact sparse multivariate polynomial arithmetic.

mod display;
mod domain;
mod multipoly;
mod order;
mod ring;

pub use domain::{Coeff, CoeffDomain};
pub use multipoly::{ExpVec, MultiPoly};
pub use order::TermOrder;
pub use ring::PolyRing;

pub(crate) use multipoly::{merge_term, mul_terms_seq};
#[cfg(feature = "parallel")]
pub(crate) use multipoly::mul_terms_par;
pub(crate) use ring::is_identifier;
