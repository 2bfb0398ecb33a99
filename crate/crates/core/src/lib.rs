// `!(x > 0.0)` is used on purpose so that NaN fails validation, and the
// dense kernels read more clearly with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod harness;
pub mod initdata;
pub mod interface;
pub mod matgeo;
pub mod profile1d;
pub mod quad;
pub mod solver;
