//! Parsing of the `name:args` generator mini-syntax used by `--gen` and
//! the `gen` subcommand.

use num::BigRational;

use symfreq::sources::{BernoulliSource, ChampernowneSource, PeriodicSource, SymbolSource};
use symfreq::{Alphabet, EmpiricalMeasure};

use crate::CliError;

/// A parsed generator description, before an alphabet is fixed.
pub(crate) enum GeneratorSpec {
    Periodic(Vec<u8>),
    Bernoulli(Vec<BigRational>),
    Champernowne,
}

pub(crate) fn parse_generator(text: &str) -> Result<GeneratorSpec, CliError> {
    let (name, args) = match text.split_once(':') {
        Some((name, args)) => (name, Some(args)),
        None => (text, None),
    };
    match (name, args) {
        ("periodic", Some(pattern)) => {
            let digits = pattern
                .chars()
                .map(|c| c.to_digit(36).map(|d| d as u8))
                .collect::<Option<Vec<u8>>>()
                .ok_or_else(|| {
                    usage(format!(
                        "invalid pattern {pattern:?}: periodic symbols are base-36 digits (0-9, a-z)"
                    ))
                })?;
            Ok(GeneratorSpec::Periodic(digits))
        }
        ("bernoulli", Some(list)) => {
            let components = list
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GeneratorSpec::Bernoulli(components))
        }
        ("champernowne", None) => Ok(GeneratorSpec::Champernowne),
        ("champernowne", Some(_)) => Err(usage(
            "champernowne takes no arguments; choose the base with --base".into(),
        )),
        ("periodic", None) => Err(usage(
            "periodic needs a pattern, e.g. periodic:0110".into(),
        )),
        ("bernoulli", None) => Err(usage(
            "bernoulli needs component probabilities, e.g. bernoulli:1/3,1/3,1/3".into(),
        )),
        _ => Err(usage(format!(
            "unknown generator {name:?}: expected periodic:PATTERN, bernoulli:P0,...,Pm-1, or champernowne"
        ))),
    }
}

/// Parses an exact rational written as "p/q" or a bare integer.
pub(crate) fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    text.trim()
        .parse()
        .map_err(|_| usage(format!("invalid rational {text:?}: expected an integer or p/q")))
}

impl GeneratorSpec {
    /// The base implied by the arguments alone: a periodic pattern needs
    /// every digit in range, a Bernoulli list has one component per symbol.
    fn implied_base(&self) -> Option<u32> {
        match self {
            GeneratorSpec::Periodic(digits) => {
                let top = digits.iter().copied().max().unwrap_or(0) as u32;
                Some((top + 1).max(Alphabet::MIN_SIZE))
            }
            GeneratorSpec::Bernoulli(components) => Some(components.len() as u32),
            GeneratorSpec::Champernowne => None,
        }
    }
}

/// Builds the generator named by `text`, resolving the alphabet from
/// `--base` or from the arguments themselves.
pub(crate) fn open_generator(
    text: &str,
    base: Option<u32>,
    seed: u64,
) -> Result<(Box<dyn SymbolSource>, Alphabet), CliError> {
    let spec = parse_generator(text)?;
    let m = match (base, spec.implied_base()) {
        (Some(m), Some(implied)) if matches!(spec, GeneratorSpec::Bernoulli(_)) && m != implied => {
            return Err(usage(format!(
                "--base {m} contradicts the bernoulli argument, which has {implied} components"
            )));
        }
        (Some(m), _) => m,
        (None, Some(implied)) => implied,
        (None, None) => return Err(usage("champernowne needs --base".into())),
    };
    let alphabet = Alphabet::new(m)?;
    let source: Box<dyn SymbolSource> = match spec {
        GeneratorSpec::Periodic(pattern) => Box::new(PeriodicSource::new(alphabet, &pattern)?),
        GeneratorSpec::Bernoulli(components) => {
            let measure = EmpiricalMeasure::from_rationals(alphabet, &components)?;
            Box::new(BernoulliSource::new(measure, seed)?)
        }
        GeneratorSpec::Champernowne => Box::new(ChampernowneSource::new(alphabet)?),
    };
    Ok((source, alphabet))
}

fn usage(message: String) -> CliError {
    CliError::Usage(message)
}

#[cfg(test)]
mod tests {
    use super::*;

    use symfreq::sources::take_symbols;

    #[test]
    fn periodic_infers_base_from_largest_digit() {
        let (mut source, alphabet) = open_generator("periodic:0120", None, 0).unwrap();
        assert_eq!(alphabet.size(), 3);
        assert_eq!(take_symbols(source.as_mut(), 6).unwrap(), [0, 1, 2, 0, 0, 1]);
    }

    #[test]
    fn periodic_honors_an_explicit_wider_base() {
        let (_, alphabet) = open_generator("periodic:01", Some(5), 0).unwrap();
        assert_eq!(alphabet.size(), 5);
    }

    #[test]
    fn periodic_accepts_letter_digits() {
        let (_, alphabet) = open_generator("periodic:0a", None, 0).unwrap();
        assert_eq!(alphabet.size(), 11);
    }

    #[test]
    fn all_zero_pattern_still_spans_a_binary_alphabet() {
        let (_, alphabet) = open_generator("periodic:000", None, 0).unwrap();
        assert_eq!(alphabet.size(), 2);
    }

    #[test]
    fn bernoulli_infers_base_from_component_count() {
        let (_, alphabet) = open_generator("bernoulli:1/5,3/10,1/2", None, 7).unwrap();
        assert_eq!(alphabet.size(), 3);
    }

    #[test]
    fn bernoulli_rejects_a_contradicting_base() {
        let err = open_generator("bernoulli:1/2,1/2", Some(3), 0)
            .map(|_| ())
            .unwrap_err();
        assert!(err.to_string().contains("2 components"));
    }

    #[test]
    fn bernoulli_rejects_components_not_summing_to_one() {
        let err = open_generator("bernoulli:1/2,1/3", None, 0)
            .map(|_| ())
            .unwrap_err();
        assert!(err.to_string().contains("sum"));
    }

    #[test]
    fn champernowne_requires_a_base() {
        let err = open_generator("champernowne", None, 0).map(|_| ()).unwrap_err();
        assert!(err.to_string().contains("--base"));
    }

    #[test]
    fn unknown_generator_names_are_rejected() {
        let err = open_generator("sturmian:01", None, 0).map(|_| ()).unwrap_err();
        assert!(err.to_string().contains("unknown generator"));
    }

    #[test]
    fn rational_parsing_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("0").unwrap(), BigRational::new(0.into(), 1.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }
}
