//! Morphisms between primitive substitution subshifts.
//!
//! The crate models one-dimensional subshifts generated by primitive
//! substitutions and the sliding maps between them: classical block maps,
//! and the more general *dill maps* whose local rule may emit a word of any
//! length (including the empty word) per input window.  On top of those it
//! provides exact spectral analysis of substitution matrices, recognizers
//! that locate substitution cut positions from a bounded window, almost
//! inverses, conjugation trajectories with cycle detection, and exhaustive
//! enumeration of block maps between two subshifts up to shift.
//!
//! Everything is deterministic: iteration orders are fixed, floating point
//! appears only in diagnostic summaries, and all spectral decisions are made
//! in exact integer/rational arithmetic.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front end live in the companion `dill-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod conjugation;
pub mod dill;
pub mod enumeration;
pub mod error;
pub mod recognizer;
pub mod spectra;
pub mod substitution;
pub mod words;

pub use error::Error;
