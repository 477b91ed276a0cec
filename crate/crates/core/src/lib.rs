//! Davenport–Schinzel sequences and the zone of a parabola.
//!
//! The crate covers Hart–Sharir sequence generation, forbidden-pattern
//! checks, exact rational geometry on `y = x²`, the endpoint configurations
//! built from endpoint shuffles, randomized realization search with exact
//! certificates, and the zone tour of a chord arrangement.

pub mod configs;
pub mod geom;
pub mod hs;
pub mod patterns;
pub mod realizer;
pub mod seq;
pub mod svg;
pub mod zone;

pub use seq::{Alphabet, Block, ESeq, End, Seq, SeqError, Side, Sym};
