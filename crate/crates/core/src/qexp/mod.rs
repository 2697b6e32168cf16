//! Truncated adelic q-expansions and their graded multiplication.

mod context;
mod series;
mod weight;

pub use context::{ConvolutionEntry, SeriesContext};
pub use series::{rescaled_context, AdelicSeries, GeometricView};
pub use weight::{validate_ring_weight_compat, WeightVector};
