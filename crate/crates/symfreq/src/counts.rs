use num::BigRational;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::MeasureError;
use crate::measure::EmpiricalMeasure;

/// Per-symbol occurrence counts over a prefix of length `n`.
///
/// Immutable after construction. The invariant `sum(counts) == n` holds for
/// every value of this type; incremental counting lives in
/// [`crate::engine::StreamCounter`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    alphabet: Alphabet,
    counts: Vec<u64>,
    n: u64,
}

impl CountVector {
    /// The all-zero count vector (empty prefix).
    pub fn zero(alphabet: Alphabet) -> Self {
        CountVector {
            alphabet,
            counts: vec![0; alphabet.len()],
            n: 0,
        }
    }

    /// Counts symbol occurrences in the first `n` symbols of `seq`.
    pub fn count_prefix(
        alphabet: Alphabet,
        seq: &[u8],
        n: usize,
    ) -> Result<Self, MeasureError> {
        if n > seq.len() {
            return Err(MeasureError::PrefixOutOfRange {
                n: n as u64,
                len: seq.len() as u64,
            });
        }
        let prefix = &seq[..n];
        let hist = byte_histogram(prefix);
        if let Some(at) = first_invalid(prefix, &hist, alphabet.size()) {
            return Err(MeasureError::InvalidSymbol {
                value: prefix[at] as u32,
                m: alphabet.size(),
            });
        }
        let mut counts = vec![0u64; alphabet.len()];
        let used = alphabet.len().min(BINS);
        counts[..used].copy_from_slice(&hist[..used]);
        Ok(CountVector {
            alphabet,
            counts,
            n: n as u64,
        })
    }

    /// Builds a count vector directly from per-symbol counts; `n` is their sum.
    pub fn from_counts(alphabet: Alphabet, counts: Vec<u64>) -> Result<Self, MeasureError> {
        if counts.len() != alphabet.len() {
            return Err(MeasureError::InvalidMeasure {
                reason: format!(
                    "expected {} counts for a base-{} alphabet, got {}",
                    alphabet.size(),
                    alphabet.size(),
                    counts.len()
                ),
            });
        }
        let mut n: u64 = 0;
        for &c in &counts {
            n = n.checked_add(c).ok_or(MeasureError::Overflow)?;
        }
        Ok(CountVector {
            alphabet,
            counts,
            n,
        })
    }

    pub(crate) fn from_raw_parts(alphabet: Alphabet, counts: Vec<u64>, n: u64) -> Self {
        debug_assert_eq!(counts.iter().sum::<u64>(), n);
        CountVector {
            alphabet,
            counts,
            n,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Prefix length consumed.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Occurrences of one symbol.
    pub fn count(&self, symbol: Symbol) -> Result<u64, MeasureError> {
        self.check_symbol(symbol)?;
        Ok(self.counts[symbol.index()])
    }

    /// The symbol frequency `counts[i] / n` as an exact rational in [0, 1].
    ///
    /// Undefined at the empty prefix: `n == 0` is an error, not 0.
    pub fn frequency(&self, symbol: Symbol) -> Result<BigRational, MeasureError> {
        self.check_symbol(symbol)?;
        if self.n == 0 {
            return Err(MeasureError::UndefinedFrequency);
        }
        Ok(BigRational::new(
            self.counts[symbol.index()].into(),
            self.n.into(),
        ))
    }

    /// The empirical measure `(counts[0]/n, ..., counts[m-1]/n)`.
    pub fn empirical_measure(&self) -> Result<EmpiricalMeasure, MeasureError> {
        EmpiricalMeasure::from_counts(self)
    }

    fn check_symbol(&self, symbol: Symbol) -> Result<(), MeasureError> {
        if symbol.alphabet() != self.alphabet {
            return Err(MeasureError::InvalidSymbol {
                value: symbol.value(),
                m: self.alphabet.size(),
            });
        }
        Ok(())
    }
}

pub(crate) const BINS: usize = 256;

/// Histogram of every byte value in `chunk`.
///
/// Four interleaved sub-histograms avoid the store-forwarding stall that a
/// single table hits on runs of equal bytes.
pub(crate) fn byte_histogram(chunk: &[u8]) -> [u64; BINS] {
    let mut hist = [0u64; BINS];
    // u32 lanes cannot overflow within a window of this size.
    for window in chunk.chunks(1 << 30) {
        let mut h0 = [0u32; BINS];
        let mut h1 = [0u32; BINS];
        let mut h2 = [0u32; BINS];
        let mut h3 = [0u32; BINS];
        let mut quads = window.chunks_exact(4);
        for quad in &mut quads {
            h0[quad[0] as usize] += 1;
            h1[quad[1] as usize] += 1;
            h2[quad[2] as usize] += 1;
            h3[quad[3] as usize] += 1;
        }
        for &b in quads.remainder() {
            h0[b as usize] += 1;
        }
        for i in 0..BINS {
            hist[i] += h0[i] as u64 + h1[i] as u64 + h2[i] as u64 + h3[i] as u64;
        }
    }
    hist
}

/// Index of the first byte in `chunk` that is not a valid base-`m` symbol.
///
/// `hist` must be the histogram of `chunk`; the bin check makes the common
/// all-valid case free and the rescan only runs on the error path.
pub(crate) fn first_invalid(chunk: &[u8], hist: &[u64; BINS], m: u32) -> Option<usize> {
    if m as usize >= BINS {
        return None;
    }
    let bad: u64 = hist[m as usize..].iter().sum();
    if bad == 0 {
        return None;
    }
    chunk.iter().position(|&b| b as u32 >= m)
}
