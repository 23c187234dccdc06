//! Switching between rayon and sequential execution.
//!
//! Every parallel kernel has a sequential twin; with the `parallel` feature
//! disabled the crate compiles without rayon and the twins are used directly.
//! All kernels combine results with exact, associative arithmetic, so output
//! is identical in both modes.

#[cfg(feature = "parallel")]
pub(crate) use rayon::prelude::*;

/// Term-product count above which multiplication switches to rayon.
pub(crate) const PAR_MUL_THRESHOLD: usize = 1 << 13;

/// Row count above which elimination updates rows in parallel.
pub(crate) const PAR_ROW_THRESHOLD: usize = 16;

macro_rules! if_parallel {
    ($par:expr, $seq:expr) => {{
        #[cfg(feature = "parallel")]
        {
            $par
        }
        #[cfg(not(feature = "parallel"))]
        {
            $seq
        }
    }};
}
pub(crate) use if_parallel;
