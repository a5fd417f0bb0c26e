//! Keyed three-symbol repetition code over a basis' low/high levels.

use crate::cipher::KeystreamGenerator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Low,
    High,
}

impl Level {
    pub fn flip(self) -> Self {
        match self {
            Level::Low => Level::High,
            Level::High => Level::Low,
        }
    }

    pub fn from_high(high: bool) -> Self {
        if high {
            Level::High
        } else {
            Level::Low
        }
    }

    pub fn is_high(self) -> bool {
        self == Level::High
    }
}

pub type Pattern = [Level; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeId(usize);

impl CodeId {
    pub const COUNT: usize = 3;

    pub fn new(index: usize) -> Result<Self> {
        if index < Self::COUNT {
            Ok(CodeId(index))
        } else {
            Err(Error::param("code_id", format!("{index} >= {}", Self::COUNT)))
        }
    }

    pub fn index(self) -> usize {
        self.0
    }

    /// Keyed code choice: two key bits, rejecting the fourth value.
    pub fn select(gen: &mut KeystreamGenerator) -> Self {
        loop {
            let v = gen.take_uint(2) as usize;
            if v < Self::COUNT {
                return CodeId(v);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordTable {
    /// `(bit-0 pattern, bit-1 pattern)` per code.
    codes: [(Pattern, Pattern); CodeId::COUNT],
}

impl CodewordTable {
    pub fn pair(&self, code: CodeId) -> (Pattern, Pattern) {
        self.codes[code.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (CodeId, Pattern, Pattern)> + '_ {
        self.codes.iter().enumerate().map(|(i, &(z, o))| (CodeId(i), z, o))
    }
}

pub fn build_codeword_table() -> CodewordTable {
    use Level::{High as H, Low as L};
    CodewordTable { codes: [([L, L, H], [H, H, L]), ([L, H, L], [H, L, H]), ([H, L, L], [L, H, H])] }
}

pub fn hamming(a: &Pattern, b: &Pattern) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Polarity 1 swaps the roles of bit 0 and bit 1; the codeword set is shared.
pub fn encode_block(bit: bool, code: CodeId, polarity: bool) -> Pattern {
    let (zero, one) = build_codeword_table().pair(code);
    if bit ^ polarity {
        one
    } else {
        zero
    }
}

/// Nearest-codeword decoding; distance 3 corrects any single symbol error.
pub fn decode_block(received: &Pattern, code: CodeId, polarity: bool) -> bool {
    let (zero, _) = build_codeword_table().pair(code);
    let is_one_pattern = hamming(received, &zero) >= 2;
    is_one_pattern ^ polarity
}

/// Block error `3p² - 2p³` of majority decoding at symbol error `p`.
pub fn analytic_block_error(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} outside [0, 1]")));
    }
    Ok(3.0 * p * p - 2.0 * p * p * p)
}
