//! Normalized Laplacian spectral gaps of simple graphs.
//!
//! The crate computes `λ₁` and the random-walk relaxation time `1/λ₁`,
//! evaluates the classical and improved lower bounds on `λ₁` together with
//! test-function upper bounds, builds the double kite family and its
//! relatives, and searches small graphs exhaustively for the minimum gap.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | bitset graphs, metrics, bridges, graph6 and edge lists |
//! | [`constructions`] | double kites, joined regular pairs, classic families |
//! | [`spectral`] | `𝓛`, spectrum, harmonic eigenfunction, oracles |
//! | [`bounds`] | closed-form lower/upper bounds and harmonic splits |
//! | [`two_point`] | the two-valued extremal structure of the endpoint gap problem |
//! | [`search`] | exhaustive minimum gap, double kite sweeps, bound audits |

pub mod bounds;
pub mod canonical;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod search;
pub mod spectral;
pub mod two_point;

pub use error::{Error, Result};
pub use graph::{Graph, GraphMetrics};
pub use spectral::{spectral_gap, SpectralResult};
