//! Numerical building blocks shared by the spectral, certification and
//! family modules.

pub mod golden;
pub mod quadrature;
pub mod sum;

pub use golden::{golden_section_max, golden_section_min, SearchResult};
pub use sum::{par_sum, par_sum_many, Accumulation, Accumulator, DoubleDouble, Neumaier};
