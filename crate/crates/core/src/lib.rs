//! Thermodynamic formalism and orbit experiments for piecewise-affine
//! expanding Markov maps of the unit interval.

pub mod approx;
pub mod config;
pub mod csvout;
pub mod cycle_ratio;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod map;
pub mod multifractal;
pub mod orbit;
pub mod parallel;
pub mod rational;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
pub use map::{build_map, BranchSpec, Cylinder, MarkovMap, PartitionSpec, Symbol, Word};
pub use rational::Rational;
pub use thermo::{GibbsModel, Potential};
