//! Exact-arithmetic elimination toolkit: sparse resultants, sparse
//! discriminants, and hyperdeterminants of multidimensional matrices.
//!
//! Everything is computed over the integers, the rationals, or a prime field
//! GF(p); there is no floating point anywhere. All values are immutable and
//! safe to share between threads. With the `parallel` feature (default) the
//! data-parallel inner loops (polynomial products, operator evaluation,
//! matrix elimination, convolution) run on rayon; results are identical to
//! the sequential build because every combining step is exact and
//! associative.

mod error;
mod linalg;
mod par;
mod poly;

pub mod groebner;
pub mod multidim;
pub mod supports;
pub mod textio;

pub use error::{Error, Result, SupportValidationError};
pub use poly::{Coeff, CoeffDomain, ExpVec, MultiPoly, PolyRing, TermOrder};

/// Hot kernels exposed for the benchmark suite; not part of the public API.
#[doc(hidden)]
pub mod kernels {
    use crate::poly::MultiPoly;

    /// Sequential polynomial product (always available).
    pub fn mul_seq(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        assert_eq!(a.ring(), b.ring());
        let map = crate::poly::mul_terms_seq(a.ring().domain(), a.terms(), b.terms());
        MultiPoly::from_map(a.ring().clone(), map)
    }

    /// Parallel polynomial product (rayon).
    #[cfg(feature = "parallel")]
    pub fn mul_par(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        assert_eq!(a.ring(), b.ring());
        let map = crate::poly::mul_terms_par(a.ring().domain(), a.terms(), b.terms());
        MultiPoly::from_map(a.ring().clone(), map)
    }
}
