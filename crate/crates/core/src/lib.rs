//! Directional visibility of self-similar sets.

pub mod dimension;
pub mod error;
pub mod geometry;
pub mod ifs;
pub mod visibility;

pub use error::{DimensionError, GeometryError, IfsError};
