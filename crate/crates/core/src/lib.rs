//! Patterns and tracks in 2-dimensional simplicial complexes.
//!
//! A pattern is stored as points on edges joined by chords inside
//! triangles.  The crate builds covers, normalises patterns, measures them in
//! ideal hyperbolic triangles, performs cut-and-paste, analyses complements
//! on truncated covers, searches for shortest patterns and compares axes.

pub mod axes;
pub mod cli;
pub mod complex;
pub mod coset;
pub mod cover;
pub mod ends;
pub mod error;
pub mod fixtures;
pub mod hypgeom;
pub mod intersect;
pub mod normalize;
pub mod pattern;
pub mod random;
pub mod render;
pub mod search;

pub use complex::{parse_complex, Complex2};
pub use error::{Error, Result};
pub use pattern::{parse_pattern, Pattern};
