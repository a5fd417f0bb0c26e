//! Physical-layer simulator for the Y-00 quantum stream cipher.
//!
//! A shared seed key drives a running key that picks, per symbol, one of `M`
//! basis pairs of a `2M`-level coherent-state constellation and a polarity
//! bit (overlap selection keying). Bob, holding the key, faces a binary
//! decision; Eve, without it, faces the full `2M`-ary discrimination problem
//! and identical bit-conditional density operators.
//!
//! - [`coherent`]: overlaps, Gram matrices, finite embeddings, quasi-Bell
//!   states and the lossy entangled-probe model.
//! - [`detection`]: Helstrom bounds, square-root measurement, minimax.
//! - [`cipher`]: keystream, constellation, encode/decode, key expansion.
//! - [`link`]: IMDD noise budget and on/off bit error.
//! - [`coding`]: keyed three-symbol repetition code.
//! - [`sim`]: scenario configs, Monte Carlo runner, sweeps, attack suite, CSV.

pub mod cipher;
pub mod coding;
pub mod coherent;
pub mod detection;
pub mod error;
pub mod link;
pub mod linalg;
pub mod sim;

pub use error::{Error, Result};
