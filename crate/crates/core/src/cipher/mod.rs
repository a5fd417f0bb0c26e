//! Y-00 cipher layer: running key, keyed constellation, and key expansion.

pub mod constellation;
pub mod keystream;
pub mod session;

pub use constellation::{
    alice_encode, basis_index_width, bit_from_level, bob_decode, eve_bit_mixtures,
    next_symbol_map, AssignmentMode, BasisAssignment, ConstellationKind, ConstellationSpec,
    FrameParams, SymbolFrame,
};
pub use keystream::{
    keystream_bits, maximal_taps, CounterHash, GeneratorKind, GeneratorSpec, KeystreamGenerator,
    Lfsr, SeedKey,
};
pub use session::{key_expansion_session, RoundRecord, SessionChannel, SessionReport, SessionSetup};
