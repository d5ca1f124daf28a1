//! Cayley graphs `Cay(R, xR*)` over finite commutative rings.
//!
//! The crate builds rings as explicit tables ([`ring`]), computes the
//! connection set `xR*` and the ideals around it ([`ideal`]), constructs the
//! graphs ([`cayley`]), evaluates their spectra and energies in closed form
//! and checks them against a numeric eigensolver ([`spectra`], [`eigen`]),
//! and decides the Ramanujan property three independent ways
//! ([`ramanujan`]). [`dsl`] parses ring and element expressions and
//! [`verify`] runs the cross-checking sweep behind the CLI.

pub mod cayley;
pub mod check;
pub mod dsl;
pub mod eigen;
pub mod error;
pub mod ideal;
pub mod ramanujan;
pub mod ring;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{Elem, ElementSubset, RingTable};
