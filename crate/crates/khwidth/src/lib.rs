//! Reduced Khovanov homology over F2, branch sets of Dehn fillings from quotient
//! tangles, and width-based obstructions to lens space and finite fillings.

pub mod corpus;
pub mod diagram;
pub mod error;
pub mod format;
pub mod goeritz;
pub mod khovanov;
pub mod obstruct;
pub mod slopes;
pub mod tangle;

pub use diagram::{braid_closure, BraidWord, Crossing, EdgeId, OrientedDiagram, PlanarDiagram};
pub use error::{Error, Result};
pub use khovanov::{reduced_kh, Backend, BigradedRanks, KhOptions, WidthProfile};
pub use tangle::{tau, ContinuedFraction, Slope, Tangle};
