//! Combinatorial model of the minimal-genus Heegaard surfaces of a
//! high-distance `n`-bridge knot exterior.
//!
//! Every such surface comes from the bridge sphere by attaching `n` tubes
//! along stretches of the knot, and is described by its index: the set of
//! `n` punctures where tubes start. This crate builds the surface for each
//! index, classifies which side of it the knot lies on, moves between
//! surfaces by annulus compression, cuts surfaces into chunks, writes down
//! the associated tunnel systems and evaluates the stable-genus bounds.

pub mod bounds;
pub mod error;
pub mod interval;
pub mod moves;
pub mod oracle;
pub mod params;
pub mod surface;
pub mod tunnels;
pub mod verify;

pub use error::{Error, Result};
pub use params::{meridional_bookkeeping, ArcLabel, BridgeParams, PunctureLabel};
pub use surface::{
    canonical_pairing, enumerate_indices, Annulus, Chunk, IndexSet, Side, TubedSurface,
};
