//! Symbol sources: file decoders and reference generators.
//!
//! A source yields symbol values as raw bytes, one byte per symbol. The
//! ascii decoder and the generators only ever produce in-range values; the
//! raw decoders pass file bytes through untouched, and out-of-range bytes
//! are caught where the symbols are counted.

mod decode;
mod generate;

use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::SourceError;

pub use decode::{decode_file, AsciiFileSource, RawFileSource};
pub use generate::{BernoulliSource, ChampernowneSource, PeriodicSource, SplitMix64};

/// A stream of symbols over a fixed alphabet.
///
/// `read_symbols` fills a caller buffer and returns how many symbols it
/// wrote; 0 means the stream has ended. Sources are positioned: reads
/// always continue where the last one stopped.
pub trait SymbolSource: Send {
    /// The alphabet the symbols are drawn from.
    fn alphabet(&self) -> Alphabet;

    /// Symbols remaining from the current position, when the source knows.
    /// Unbounded generators and decoders that skip bytes return `None`.
    fn known_len(&self) -> Option<u64> {
        None
    }

    /// Reads up to `buf.len()` symbols. `Ok(0)` if and only if the stream
    /// has ended (or `buf` is empty). A failed read leaves the position
    /// unchanged, so retrying reproduces the same error.
    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError>;

    /// A new independent source positioned at absolute symbol `offset`,
    /// for sources that can jump in better than linear time. `Ok(None)`
    /// means the source only supports sequential access.
    fn fork_at(&self, offset: u64) -> Result<Option<Box<dyn SymbolSource>>, SourceError> {
        let _ = offset;
        Ok(None)
    }
}

/// A finite symbol sequence held in memory, shared cheaply across forks.
pub struct MemorySource {
    alphabet: Alphabet,
    data: Arc<[u8]>,
    pos: usize,
}

impl MemorySource {
    pub fn new(alphabet: Alphabet, data: impl Into<Arc<[u8]>>) -> Self {
        MemorySource {
            alphabet,
            data: data.into(),
            pos: 0,
        }
    }
}

impl SymbolSource for MemorySource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn known_len(&self) -> Option<u64> {
        Some((self.data.len() - self.pos) as u64)
    }

    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError> {
        let take = buf.len().min(self.data.len() - self.pos);
        buf[..take].copy_from_slice(&self.data[self.pos..self.pos + take]);
        self.pos += take;
        Ok(take)
    }

    fn fork_at(&self, offset: u64) -> Result<Option<Box<dyn SymbolSource>>, SourceError> {
        let pos = (offset as usize).min(self.data.len());
        Ok(Some(Box::new(MemorySource {
            alphabet: self.alphabet,
            data: Arc::clone(&self.data),
            pos,
        })))
    }
}

/// How file bytes map to symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeMode {
    /// Each byte is the symbol value itself.
    RawByte,
    /// Bytes are ascii digits: `0`-`9` then `a`-`z` (case-insensitive),
    /// covering alphabets up to base 36.
    AsciiDigit,
}

/// Decoder settings for [`decode_file`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    pub mode: DecodeMode,
    /// Bytes the ascii decoder silently skips; ignored in raw mode.
    pub skip: Vec<u8>,
}

impl DecoderConfig {
    pub fn raw() -> Self {
        DecoderConfig {
            mode: DecodeMode::RawByte,
            skip: Vec::new(),
        }
    }

    /// Ascii digits with whitespace (space, tab, CR, LF) skipped.
    pub fn ascii() -> Self {
        DecoderConfig {
            mode: DecodeMode::AsciiDigit,
            skip: vec![b' ', b'\t', b'\r', b'\n'],
        }
    }
}

/// Largest base the ascii digit encoding covers.
pub const ASCII_DIGIT_LIMIT: u32 = 36;

/// The ascii digit for a symbol value, lowercase for values 10 and up.
pub fn ascii_digit(value: u8) -> Option<u8> {
    match value {
        0..=9 => Some(b'0' + value),
        10..=35 => Some(b'a' + (value - 10)),
        _ => None,
    }
}

/// Encodes symbols for writing, per the decode mode they round-trip with.
pub fn encode_symbols(
    alphabet: Alphabet,
    symbols: &[u8],
    mode: DecodeMode,
) -> Result<Vec<u8>, SourceError> {
    match mode {
        DecodeMode::RawByte => Ok(symbols.to_vec()),
        DecodeMode::AsciiDigit => {
            if alphabet.size() > ASCII_DIGIT_LIMIT {
                return Err(SourceError::UnsupportedAlphabet {
                    m: alphabet.size(),
                    limit: ASCII_DIGIT_LIMIT,
                    what: "ascii digit encoding",
                });
            }
            symbols
                .iter()
                .map(|&v| {
                    ascii_digit(v).ok_or(SourceError::Decode {
                        offset: 0,
                        byte: v,
                        m: alphabet.size(),
                        mode: "ascii",
                    })
                })
                .collect()
        }
    }
}

/// Drains up to `limit` symbols from a source into a vector. Test helper
/// and small-input convenience; streaming callers should read chunkwise.
pub fn take_symbols(
    source: &mut dyn SymbolSource,
    limit: usize,
) -> Result<Vec<u8>, SourceError> {
    let mut out = Vec::with_capacity(limit.min(1 << 20));
    let mut buf = [0u8; 8192];
    while out.len() < limit {
        let want = buf.len().min(limit - out.len());
        let got = source.read_symbols(&mut buf[..want])?;
        if got == 0 {
            break;
        }
        out.extend_from_slice(&buf[..got]);
    }
    Ok(out)
}
