use crate::error::MeasureError;

/// The m-ary alphabet {0, 1, ..., m-1} for a fixed integer m >= 2.
///
/// Valid symbols are exactly the integers 0..m. Count and measure types
/// work for any m; the byte-oriented stream layer (sources and engine)
/// additionally requires m <= 256 so symbols fit in a byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    m: u32,
}

impl Alphabet {
    /// Smallest permitted alphabet size.
    pub const MIN_SIZE: u32 = 2;

    /// Largest alphabet size representable by the byte stream layer.
    pub const MAX_BYTE_SIZE: u32 = 256;

    pub fn new(m: u32) -> Result<Self, MeasureError> {
        if m < Self::MIN_SIZE {
            return Err(MeasureError::InvalidAlphabet { m });
        }
        Ok(Alphabet { m })
    }

    /// Number of symbols in the alphabet.
    pub fn size(&self) -> u32 {
        self.m
    }

    pub(crate) fn len(&self) -> usize {
        self.m as usize
    }

    pub fn contains(&self, value: u32) -> bool {
        value < self.m
    }

    /// Validates `value` and ties it to this alphabet.
    pub fn symbol(&self, value: u32) -> Result<Symbol, MeasureError> {
        if !self.contains(value) {
            return Err(MeasureError::InvalidSymbol { value, m: self.m });
        }
        Ok(Symbol {
            alphabet: *self,
            value,
        })
    }

    /// All symbols of the alphabet in increasing order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        let a = *self;
        (0..self.m).map(move |value| Symbol { alphabet: a, value })
    }

    /// Whether symbols of this alphabet can be carried in a byte stream.
    pub fn fits_in_byte(&self) -> bool {
        self.m <= Self::MAX_BYTE_SIZE
    }
}

/// A single validated symbol, tied to the alphabet that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    alphabet: Alphabet,
    value: u32,
}

impl Symbol {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub(crate) fn index(&self) -> usize {
        self.value as usize
    }
}
