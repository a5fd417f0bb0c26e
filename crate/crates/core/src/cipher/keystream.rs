//! Running-key generators expanded from a shared seed key.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MIN_SEED_BITS: usize = 8;

/// Shared secret seed, stored MSB-first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedKey {
    bits: Vec<bool>,
}

impl SeedKey {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() < MIN_SEED_BITS {
            return Err(Error::Seed(format!(
                "seed has {} bits, need at least {MIN_SEED_BITS}",
                bits.len()
            )));
        }
        Ok(SeedKey { bits })
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        let digits = hex.trim().trim_start_matches("0x").trim_start_matches("0X");
        let mut bits = Vec::with_capacity(digits.len() * 4);
        for c in digits.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Seed(format!("invalid hex digit `{c}`")))?;
            bits.extend((0..4).rev().map(|k| (v >> k) & 1 == 1));
        }
        Self::new(bits)
    }

    /// Hex form; the bit length is padded up to a whole nibble.
    pub fn to_hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|c| {
                let v = c.iter().enumerate().fold(0u32, |acc, (k, &b)| acc | (b as u32) << (3 - k));
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|c| c.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (b as u8) << (7 - k)))
            .collect()
    }
}

/// Maximal-length Galois tap masks (right-shifting form) for common widths.
pub fn maximal_taps(width: u32) -> Option<u64> {
    Some(match width {
        8 => 0xB8,
        16 => 0xB400,
        24 => 0xE1_0000,
        32 => 0x8020_0003,
        64 => 0xD800_0000_0000_0000,
        _ => return None,
    })
}

/// Galois LFSR over at most 64 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    state: u64,
    taps: u64,
    width: u32,
}

impl Lfsr {
    /// Seed bits are folded by XOR into the register width.
    pub fn new(taps: u64, seed: &SeedKey) -> Result<Self> {
        if taps == 0 {
            return Err(Error::Seed("tap polynomial is zero".into()));
        }
        let width = 64 - taps.leading_zeros();
        let mut state = 0u64;
        for chunk in seed.bits().chunks(width as usize) {
            let word = chunk.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            state ^= word;
        }
        Self::from_state(taps, state)
    }

    pub fn from_state(taps: u64, state: u64) -> Result<Self> {
        let width = 64 - taps.leading_zeros();
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        let state = state & mask;
        if state == 0 {
            return Err(Error::Seed("all-zero LFSR state".into()));
        }
        Ok(Lfsr { state, taps, width })
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn next_bit(&mut self) -> bool {
        let out = self.state & 1 == 1;
        self.state >>= 1;
        if out {
            self.state ^= self.taps;
        }
        out
    }
}

/// SHA-256 of `seed || counter` in counter mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterHash {
    seed: Vec<u8>,
    counter: u64,
    block: [u8; 32],
    used: usize,
}

impl CounterHash {
    pub fn new(seed: &SeedKey) -> Self {
        CounterHash { seed: seed.to_bytes(), counter: 0, block: [0; 32], used: 256 }
    }

    pub fn next_bit(&mut self) -> bool {
        if self.used == 256 {
            let mut h = Sha256::new();
            h.update(&self.seed);
            h.update(self.counter.to_le_bytes());
            self.block.copy_from_slice(&h.finalize());
            self.counter += 1;
            self.used = 0;
        }
        let byte = self.block[self.used / 8];
        let bit = (byte >> (7 - self.used % 8)) & 1 == 1;
        self.used += 1;
        bit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Lfsr,
    CounterHash,
}

/// Generator choice as written in scenario configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub taps: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec { kind: GeneratorKind::Lfsr, taps: maximal_taps(64).unwrap() }
    }
}

impl GeneratorSpec {
    pub fn build(&self, seed: &SeedKey) -> Result<KeystreamGenerator> {
        Ok(match self.kind {
            GeneratorKind::Lfsr => KeystreamGenerator::Lfsr(Lfsr::new(self.taps, seed)?),
            GeneratorKind::CounterHash => KeystreamGenerator::CounterHash(CounterHash::new(seed)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeystreamGenerator {
    Lfsr(Lfsr),
    CounterHash(CounterHash),
}

impl KeystreamGenerator {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            KeystreamGenerator::Lfsr(_) => GeneratorKind::Lfsr,
            KeystreamGenerator::CounterHash(_) => GeneratorKind::CounterHash,
        }
    }

    pub fn next_bit(&mut self) -> bool {
        match self {
            KeystreamGenerator::Lfsr(g) => g.next_bit(),
            KeystreamGenerator::CounterHash(g) => g.next_bit(),
        }
    }

    pub fn bits(&mut self, count: usize) -> Vec<bool> {
        (0..count).map(|_| self.next_bit()).collect()
    }

    /// Next `width` bits read MSB first.
    pub fn take_uint(&mut self, width: u32) -> u64 {
        (0..width).fold(0u64, |acc, _| (acc << 1) | self.next_bit() as u64)
    }
}

/// Convenience wrapper: `count` bits from a fresh generator.
pub fn keystream_bits(gen: &mut KeystreamGenerator, count: usize) -> Vec<bool> {
    gen.bits(count)
}
