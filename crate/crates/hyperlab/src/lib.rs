//! Numerical laboratory for groups acting on Gromov hyperbolic spaces.
//!
//! Three bundled models — the Cayley tree of a free group (exact integer
//! geometry), the hyperbolic plane acted on by matrix generators, and word
//! metrics for alternative generating sets — support experiments on Gromov
//! products, Busemann cocycles, translation lengths, marked length spectra,
//! sparse spectrally rigid sets, and a coarse metric on the space of
//! hyperbolic structures.

pub mod boundary;
pub mod busemann;
pub mod error;
pub mod filling;
pub mod gromov;
pub mod harness;
pub mod interval;
pub mod matrix;
pub mod rigidsets;
pub mod spaces;
pub mod spectrum;
pub mod word;

pub use error::{Error, Result};
pub use interval::IntervalValue;
