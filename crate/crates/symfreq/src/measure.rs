use num::integer::Integer;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

use crate::alphabet::{Alphabet, Symbol};
use crate::counts::CountVector;
use crate::error::MeasureError;

/// Which distance between two measures to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMetric {
    /// Half the L1 distance, `(1/2) * sum_i |p_i - q_i|`.
    TotalVariation,
    /// The L-infinity distance, `max_i |p_i - q_i|`.
    SupDeviation,
}

/// A probability vector over an alphabet, with exactly rational components.
///
/// Components share one denominator and are stored unreduced, so a measure
/// built from counts keeps the raw counts and the prefix length verbatim.
/// `sum(numerators) == denominator >= 1` holds for every value; equality
/// compares component values, not representations.
#[derive(Clone, Debug)]
pub struct EmpiricalMeasure {
    alphabet: Alphabet,
    numerators: Vec<u64>,
    denominator: u64,
}

impl EmpiricalMeasure {
    /// The measure `(counts[0]/n, ..., counts[m-1]/n)` of a counted prefix.
    ///
    /// Undefined at the empty prefix: `n == 0` is an error.
    pub fn from_counts(counts: &CountVector) -> Result<Self, MeasureError> {
        if counts.n() == 0 {
            return Err(MeasureError::UndefinedFrequency);
        }
        Ok(EmpiricalMeasure {
            alphabet: counts.alphabet(),
            numerators: counts.counts().to_vec(),
            denominator: counts.n(),
        })
    }

    /// The uniform measure `(1/m, ..., 1/m)`.
    pub fn uniform(alphabet: Alphabet) -> Self {
        EmpiricalMeasure {
            alphabet,
            numerators: vec![1; alphabet.len()],
            denominator: alphabet.size() as u64,
        }
    }

    /// Builds a measure from arbitrary rational components.
    ///
    /// The components must be non-negative and sum to exactly 1. Fails with
    /// `Overflow` if their common denominator does not fit in a `u64`.
    pub fn from_rationals(
        alphabet: Alphabet,
        components: &[BigRational],
    ) -> Result<Self, MeasureError> {
        if components.len() != alphabet.len() {
            return Err(MeasureError::InvalidMeasure {
                reason: format!(
                    "expected {} components for a base-{} alphabet, got {}",
                    alphabet.size(),
                    alphabet.size(),
                    components.len()
                ),
            });
        }
        if let Some(neg) = components.iter().find(|r| r.is_negative()) {
            return Err(MeasureError::InvalidMeasure {
                reason: format!("component {} is negative", neg),
            });
        }
        let total: BigRational = components.iter().sum();
        if total != BigRational::from_integer(1.into()) {
            return Err(MeasureError::InvalidMeasure {
                reason: format!("components sum to {}, not 1", total),
            });
        }
        let mut denom = BigInt::from(1u32);
        for r in components {
            denom = denom.lcm(r.denom());
        }
        let denominator = denom.to_u64().ok_or(MeasureError::Overflow)?;
        let numerators = components
            .iter()
            .map(|r| {
                // Exact: denom is a multiple of every component denominator.
                let scaled = r.numer() * &denom / r.denom();
                scaled.to_u64().ok_or(MeasureError::Overflow)
            })
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(EmpiricalMeasure {
            alphabet,
            numerators,
            denominator,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Raw component numerators, one per symbol, in symbol order.
    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    /// Shared component denominator; the prefix length for counted measures.
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// One component as an exact rational in [0, 1].
    pub fn component(&self, symbol: Symbol) -> Result<BigRational, MeasureError> {
        if symbol.alphabet() != self.alphabet {
            return Err(MeasureError::InvalidSymbol {
                value: symbol.value(),
                m: self.alphabet.size(),
            });
        }
        Ok(self.rational(symbol.index()))
    }

    /// All components in symbol order, each reduced to lowest terms.
    pub fn components(&self) -> Vec<BigRational> {
        (0..self.numerators.len()).map(|i| self.rational(i)).collect()
    }

    fn rational(&self, index: usize) -> BigRational {
        BigRational::new(self.numerators[index].into(), self.denominator.into())
    }

    /// Exact distance between two measures over the same alphabet.
    pub fn distance(
        &self,
        other: &EmpiricalMeasure,
        metric: DistanceMetric,
    ) -> Result<BigRational, MeasureError> {
        if self.alphabet != other.alphabet {
            return Err(MeasureError::IncompatibleMeasure {
                left: self.alphabet.size(),
                right: other.alphabet.size(),
            });
        }
        let mut acc = BigRational::zero();
        for i in 0..self.numerators.len() {
            let gap = (self.rational(i) - other.rational(i)).abs();
            match metric {
                DistanceMetric::TotalVariation => acc += gap,
                DistanceMetric::SupDeviation => acc = acc.max(gap),
            }
        }
        match metric {
            DistanceMetric::TotalVariation => Ok(acc / BigRational::from_integer(2.into())),
            DistanceMetric::SupDeviation => Ok(acc),
        }
    }

    /// Shannon entropy in base m, so the uniform measure reads exactly 1
    /// whatever the alphabet. Values lie in [0, 1].
    pub fn entropy(&self) -> f64 {
        self.entropy_in_base(self.alphabet.size())
    }

    /// Shannon entropy `-sum_i p_i log_base(p_i)` with the 0 log 0 = 0
    /// convention. Uses libm so the result is bit-identical across
    /// platforms.
    pub fn entropy_in_base(&self, base: u32) -> f64 {
        assert!(base >= 2, "entropy base must be >= 2");
        let m = self.alphabet.size();
        // The base-m maximum is attained exactly at the uniform measure;
        // detect it rationally rather than hoping float summation lands
        // on 1.0.
        let is_uniform = self
            .numerators
            .iter()
            .all(|&num| num as u128 * m as u128 == self.denominator as u128);
        if base == m && is_uniform {
            return 1.0;
        }
        let denom = self.denominator as f64;
        let mut nats = 0.0;
        for &num in &self.numerators {
            if num == 0 {
                continue;
            }
            let p = num as f64 / denom;
            nats -= p * libm::log(p);
        }
        let value = nats / libm::log(base as f64);
        // In base m the value is in [0, 1] by definition; keep float
        // noise from leaking past the bound.
        if base == m {
            value.clamp(0.0, 1.0)
        } else {
            value.max(0.0)
        }
    }
}

impl PartialEq for EmpiricalMeasure {
    fn eq(&self, other: &Self) -> bool {
        // Cross-multiplied component comparison; products of two u64 values
        // cannot overflow a u128.
        self.alphabet == other.alphabet
            && self
                .numerators
                .iter()
                .zip(&other.numerators)
                .all(|(&a, &b)| {
                    a as u128 * other.denominator as u128
                        == b as u128 * self.denominator as u128
                })
    }
}

impl Eq for EmpiricalMeasure {}
