use crate::alphabet::Alphabet;
use crate::error::SourceError;
use crate::measure::EmpiricalMeasure;
use crate::sources::SymbolSource;

/// Largest base whose symbols fit in the one-byte stream representation.
const BYTE_LIMIT: u32 = 256;

fn check_byte_alphabet(alphabet: Alphabet, what: &'static str) -> Result<(), SourceError> {
    if alphabet.fits_in_byte() {
        Ok(())
    } else {
        Err(SourceError::UnsupportedAlphabet {
            m: alphabet.size(),
            limit: BYTE_LIMIT,
            what,
        })
    }
}

/// The splitmix64 generator: one 64-bit output per step.
///
/// Chosen over a heavier generator because the whole state is the stream
/// position, so a generator seeded at output k is `seed + k * GAMMA`; that
/// constant-time jump is what lets stochastic sources fork for parallel
/// runs while staying bit-identical to a sequential pass.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// The generator whose next output is output number `k` (0-based) of
    /// the stream seeded with `seed`.
    pub fn from_seed_at(seed: u64, k: u64) -> Self {
        SplitMix64 {
            state: seed.wrapping_add(GAMMA.wrapping_mul(k)),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Endless repetition of a fixed pattern of symbols.
pub struct PeriodicSource {
    alphabet: Alphabet,
    pattern: Vec<u8>,
    pos: usize,
}

impl PeriodicSource {
    pub fn new(alphabet: Alphabet, pattern: &[u8]) -> Result<Self, SourceError> {
        if pattern.is_empty() {
            return Err(SourceError::EmptyPattern);
        }
        for &b in pattern {
            if !alphabet.contains(b as u32) {
                return Err(crate::error::MeasureError::InvalidSymbol {
                    value: b as u32,
                    m: alphabet.size(),
                }
                .into());
            }
        }
        Ok(PeriodicSource {
            alphabet,
            pattern: pattern.to_vec(),
            pos: 0,
        })
    }
}

impl SymbolSource for PeriodicSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError> {
        for slot in buf.iter_mut() {
            *slot = self.pattern[self.pos];
            self.pos += 1;
            if self.pos == self.pattern.len() {
                self.pos = 0;
            }
        }
        Ok(buf.len())
    }

    fn fork_at(&self, offset: u64) -> Result<Option<Box<dyn SymbolSource>>, SourceError> {
        Ok(Some(Box::new(PeriodicSource {
            alphabet: self.alphabet,
            pattern: self.pattern.clone(),
            pos: (offset % self.pattern.len() as u64) as usize,
        })))
    }
}

/// The base-m digit stream 1, 2, 3, ... with each integer written in its
/// minimal base-m form and the representations concatenated.
pub struct ChampernowneSource {
    alphabet: Alphabet,
    /// Digits of the integer currently being emitted, most significant first.
    digits: Vec<u8>,
    digit_pos: usize,
}

impl ChampernowneSource {
    pub fn new(alphabet: Alphabet) -> Result<Self, SourceError> {
        check_byte_alphabet(alphabet, "the concatenated-integers generator")?;
        Ok(ChampernowneSource {
            alphabet,
            digits: vec![1],
            digit_pos: 0,
        })
    }

    /// Steps `digits` to the next integer in place.
    fn advance(digits: &mut Vec<u8>, m: u32) {
        for d in digits.iter_mut().rev() {
            if (*d as u32) + 1 < m {
                *d += 1;
                return;
            }
            *d = 0;
        }
        digits.insert(0, 1);
    }

    /// The integer whose representation covers stream position `offset`,
    /// with the digit index inside it. Walks digit-length blocks: there
    /// are m^(d-1) * (m-1) integers of d digits, spanning d times that
    /// many stream positions.
    fn locate(m: u32, offset: u64) -> (u64, usize) {
        let m = m as u128;
        let mut remaining = offset as u128;
        let mut d: u128 = 1;
        let mut first: u128 = 1;
        loop {
            let block = first * (m - 1) * d;
            if remaining < block {
                let index = remaining / d;
                return ((first + index) as u64, (remaining % d) as usize);
            }
            remaining -= block;
            first *= m;
            d += 1;
        }
    }

    fn digits_of(mut j: u64, m: u32) -> Vec<u8> {
        let m = m as u64;
        let mut v = Vec::new();
        while j > 0 {
            v.push((j % m) as u8);
            j /= m;
        }
        v.reverse();
        v
    }
}

impl SymbolSource for ChampernowneSource {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError> {
        let m = self.alphabet.size();
        for slot in buf.iter_mut() {
            if self.digit_pos == self.digits.len() {
                Self::advance(&mut self.digits, m);
                self.digit_pos = 0;
            }
            *slot = self.digits[self.digit_pos];
            self.digit_pos += 1;
        }
        Ok(buf.len())
    }

    fn fork_at(&self, offset: u64) -> Result<Option<Box<dyn SymbolSource>>, SourceError> {
        let m = self.alphabet.size();
        let (j, digit_pos) = Self::locate(m, offset);
        Ok(Some(Box::new(ChampernowneSource {
            alphabet: self.alphabet,
            digits: Self::digits_of(j, m),
            digit_pos,
        })))
    }
}

/// Independent draws from a fixed rational distribution over the alphabet.
pub struct BernoulliSource {
    measure: EmpiricalMeasure,
    seed: u64,
    rng: SplitMix64,
    /// `thresholds[i]` is `floor(cum_i * 2^64 / denom)`; a draw u maps to
    /// the first i with u < thresholds[i]. The last entry is exactly 2^64,
    /// so every u lands. Component probabilities are off by less than
    /// 2^-63 each, and exact when the denominator divides 2^64.
    thresholds: Vec<u128>,
}

impl BernoulliSource {
    pub fn new(measure: EmpiricalMeasure, seed: u64) -> Result<Self, SourceError> {
        check_byte_alphabet(measure.alphabet(), "the independent-draws generator")?;
        let denom = measure.denominator() as u128;
        let mut cum: u128 = 0;
        let thresholds = measure
            .numerators()
            .iter()
            .map(|&num| {
                cum += num as u128;
                (cum << 64) / denom
            })
            .collect();
        Ok(BernoulliSource {
            measure,
            seed,
            rng: SplitMix64::new(seed),
            thresholds,
        })
    }

    /// The distribution the draws follow.
    pub fn measure(&self) -> &EmpiricalMeasure {
        &self.measure
    }
}

impl SymbolSource for BernoulliSource {
    fn alphabet(&self) -> Alphabet {
        self.measure.alphabet()
    }

    fn read_symbols(&mut self, buf: &mut [u8]) -> Result<usize, SourceError> {
        for slot in buf.iter_mut() {
            let u = self.rng.next_u64() as u128;
            *slot = self.thresholds.partition_point(|&t| t <= u) as u8;
        }
        Ok(buf.len())
    }

    fn fork_at(&self, offset: u64) -> Result<Option<Box<dyn SymbolSource>>, SourceError> {
        Ok(Some(Box::new(BernoulliSource {
            measure: self.measure.clone(),
            seed: self.seed,
            rng: SplitMix64::from_seed_at(self.seed, offset),
            thresholds: self.thresholds.clone(),
        })))
    }
}

#[cfg(test)]
mod tests {
    use num::BigRational;

    use super::*;
    use crate::sources::take_symbols;

    fn alpha(m: u32) -> Alphabet {
        Alphabet::new(m).unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn splitmix64_reference_outputs() {
        // Reference vector for seed 1234567 from the published generator.
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
        assert_eq!(rng.next_u64(), 4593380528125082431);
        assert_eq!(rng.next_u64(), 16408922859458223821);

        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 16294208416658607535);
        assert_eq!(rng.next_u64(), 7960286522194355700);
    }

    #[test]
    fn splitmix64_jump_matches_stepping() {
        let mut stepped = SplitMix64::new(42);
        for _ in 0..1000 {
            stepped.next_u64();
        }
        let mut jumped = SplitMix64::from_seed_at(42, 1000);
        assert_eq!(jumped.next_u64(), stepped.next_u64());
        assert_eq!(SplitMix64::from_seed_at(42, 0).next_u64(), SplitMix64::new(42).next_u64());
    }

    #[test]
    fn periodic_repeats_its_pattern() {
        let mut src = PeriodicSource::new(alpha(3), &[0, 1, 2, 2]).unwrap();
        assert_eq!(
            take_symbols(&mut src, 10).unwrap(),
            vec![0, 1, 2, 2, 0, 1, 2, 2, 0, 1]
        );
    }

    #[test]
    fn periodic_fork_reduces_modulo_period() {
        let src = PeriodicSource::new(alpha(2), &[0, 1, 1]).unwrap();
        let mut fork = src.fork_at(1_000_000_007).unwrap().unwrap();
        // 1_000_000_007 = 3 * 333_333_335 + 2
        assert_eq!(take_symbols(fork.as_mut(), 4).unwrap(), vec![1, 0, 1, 1]);
    }

    #[test]
    fn periodic_rejects_bad_patterns() {
        assert!(matches!(
            PeriodicSource::new(alpha(2), &[]),
            Err(SourceError::EmptyPattern)
        ));
        assert!(PeriodicSource::new(alpha(2), &[0, 2]).is_err());
    }

    #[test]
    fn champernowne_binary_prefix() {
        // 1, 10, 11, 100, 101, ... concatenated.
        let mut src = ChampernowneSource::new(alpha(2)).unwrap();
        assert_eq!(
            take_symbols(&mut src, 15).unwrap(),
            vec![1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 1]
        );
    }

    #[test]
    fn champernowne_decimal_prefix() {
        let mut src = ChampernowneSource::new(alpha(10)).unwrap();
        assert_eq!(
            take_symbols(&mut src, 11).unwrap(),
            vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0]
        );
    }

    #[test]
    fn champernowne_fork_matches_sequential() {
        for m in [2u32, 3, 10, 255] {
            let mut seq = ChampernowneSource::new(alpha(m)).unwrap();
            let reference = take_symbols(&mut seq, 3000).unwrap();
            let base = ChampernowneSource::new(alpha(m)).unwrap();
            for offset in [0u64, 1, 2, 14, 15, 100, 999, 2500] {
                let mut fork = base.fork_at(offset).unwrap().unwrap();
                let got = take_symbols(fork.as_mut(), 40).unwrap();
                assert_eq!(
                    got,
                    reference[offset as usize..offset as usize + 40],
                    "base {m} offset {offset}"
                );
            }
        }
    }

    #[test]
    fn champernowne_locate_block_boundaries() {
        // Base 10: positions 0..9 are the one-digit integers, position 9
        // starts "10".
        assert_eq!(ChampernowneSource::locate(10, 0), (1, 0));
        assert_eq!(ChampernowneSource::locate(10, 8), (9, 0));
        assert_eq!(ChampernowneSource::locate(10, 9), (10, 0));
        assert_eq!(ChampernowneSource::locate(10, 10), (10, 1));
        // Base 2: "1 10 11 100" puts position 7 on the third digit of 100.
        assert_eq!(ChampernowneSource::locate(2, 6), (4, 1));
        assert_eq!(ChampernowneSource::locate(2, 7), (4, 2));
    }

    #[test]
    fn bernoulli_thresholds_are_exact_scaled_cumulatives() {
        let measure = EmpiricalMeasure::from_rationals(
            alpha(3),
            &[ratio(1, 5), ratio(3, 10), ratio(1, 2)],
        )
        .unwrap();
        let src = BernoulliSource::new(measure, 0).unwrap();
        assert_eq!(
            src.thresholds,
            vec![
                (2u128 << 64) / 10,
                (5u128 << 64) / 10,
                1u128 << 64,
            ]
        );
        assert_eq!(src.thresholds[1], 9223372036854775808);
    }

    #[test]
    fn bernoulli_draws_are_deterministic_per_seed() {
        let uniform = EmpiricalMeasure::uniform(alpha(2));
        let mut a = BernoulliSource::new(uniform.clone(), 7).unwrap();
        let mut b = BernoulliSource::new(uniform.clone(), 7).unwrap();
        assert_eq!(take_symbols(&mut a, 64).unwrap(), take_symbols(&mut b, 64).unwrap());
        let mut c = BernoulliSource::new(uniform, 8).unwrap();
        assert_ne!(take_symbols(&mut a, 64).unwrap(), take_symbols(&mut c, 64).unwrap());
    }

    #[test]
    fn bernoulli_fork_matches_sequential() {
        let measure = EmpiricalMeasure::from_rationals(
            alpha(3),
            &[ratio(1, 5), ratio(3, 10), ratio(1, 2)],
        )
        .unwrap();
        let mut seq = BernoulliSource::new(measure.clone(), 42).unwrap();
        let reference = take_symbols(&mut seq, 500).unwrap();
        let base = BernoulliSource::new(measure, 42).unwrap();
        for offset in [0u64, 1, 63, 250, 499] {
            let mut fork = base.fork_at(offset).unwrap().unwrap();
            let got = take_symbols(fork.as_mut(), 1).unwrap();
            assert_eq!(got[0], reference[offset as usize], "offset {offset}");
        }
    }

    #[test]
    fn bernoulli_point_mass_is_constant() {
        let point =
            EmpiricalMeasure::from_rationals(alpha(2), &[ratio(1, 1), ratio(0, 1)]).unwrap();
        let mut src = BernoulliSource::new(point, 9).unwrap();
        assert_eq!(take_symbols(&mut src, 100).unwrap(), vec![0; 100]);
    }

    #[test]
    fn generators_cap_the_alphabet_at_byte_range() {
        assert!(ChampernowneSource::new(alpha(256)).is_ok());
        assert!(matches!(
            ChampernowneSource::new(alpha(257)),
            Err(SourceError::UnsupportedAlphabet { m: 257, limit: 256, .. })
        ));
    }
}
