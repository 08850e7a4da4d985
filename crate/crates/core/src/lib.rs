//! Treasure hunt in the plane with advice.
//!
//! An agent starts at a point `P` and must get within distance `r` of a
//! treasure at unknown distance `D`. An oracle that knows everything may hand
//! it `z` bits of advice beforehand. This crate builds the search trajectories
//! for the different knowledge settings, measures their exact cost, and checks
//! the measured costs against the theoretical bounds.

pub mod advice;
pub mod error;
pub mod geom;
pub mod harness;
pub mod sim;
pub mod strategies;
pub mod tiling;
pub mod traversal;

pub use advice::{decode_sector, encode_advice, AdviceString, SectorSpec};
pub use error::{HuntError, Result};
pub use geom::{Length, Point2, Polyline, Radians, Segment};
pub use sim::{run, RunOutcome};
pub use strategies::{MediumParams, StrategyKind};
pub use traversal::TrajectoryStream;
