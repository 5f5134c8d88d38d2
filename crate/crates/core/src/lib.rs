//! Knot diagrams built by reordering planar vector sets.

pub mod constructions;
pub mod error;
pub mod heights;
pub mod knot;
pub mod planar;
pub mod render;
pub mod triple;

pub use error::{Error, Result};
