pub mod cli;
pub mod colorability;
pub mod cycle_canvas;
pub mod error;
pub mod graph;
pub mod plane_graph;
pub mod prism_canvas;
pub mod store;
pub mod torus;
pub mod work;

pub use error::{Error, Result};
