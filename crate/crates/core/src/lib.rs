//! Exact algebra of piecewise-linear interval maps.
//!
//! The crate works with continuous piecewise-linear self-maps of `[0,1]`
//! whose breakpoints are exact rationals. On top of composition and
//! preimages it provides:
//!
//! * the tent map and its sawtooth commutators `ξ_t`, with two independent
//!   commutativity checks (exact composite equality and trajectory
//!   consistency);
//! * the four-quadrant trajectory lattice of a commuting pair, its line
//!   counts and coincident-kink index sets;
//! * PL conjugacies to the tent map, found from symbolic itineraries;
//! * parametrized families of commuting pairs and the completion of a
//!   unimodal map from its increasing leg;
//! * deterministic SVG rendering of the four-quadrant diagram.
//!
//! ```
//! use pldyn::{commute, PLMap};
//! let g: PLMap = "0,0; 3/8,3/4; 3/4,1; 7/8,3/4; 1,0".parse().unwrap();
//! let psi: PLMap = "0,0; 1/4,3/4; 1/2,1; 3/4,3/4; 5/6,0; 11/12,3/4; 1,1".parse().unwrap();
//! assert!(commute::commutes(&g, &psi).commutes);
//! ```

pub mod commute;
pub mod conjugacy;
pub mod families;
pub mod lattice;
pub mod plmap;
pub mod rational;
pub mod render;
pub mod text;

pub use plmap::{MapProfile, PLMap, PlMapError};
pub use rational::{r, Rational};
pub use text::{parse_plmap, ParseError};
