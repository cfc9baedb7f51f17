//! Machine-readable serialization: one JSON object per result (JSON Lines
//! for traces) or CSV with a fixed, documented column order.

use std::io::Write;

use num::BigRational;
use serde::Serialize;

use symfreq::fmt::{format_rational, format_significant};
use symfreq::{ConvergenceReport, CountVector, EmpiricalMeasure};

use crate::CliError;

/// Significant digits for floating-point CSV columns. JSON carries floats
/// as numbers in shortest round-trip form instead.
const CSV_FLOAT_DIGITS: usize = 12;

#[derive(Serialize)]
struct CountRecord<'a> {
    m: u32,
    n: u64,
    counts: &'a [u64],
    measure: Vec<String>,
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    n: u64,
    m: u32,
    numerators: &'a [u64],
    denominator: u64,
    tv_to_target: String,
    sup_dev_to_target: String,
    entropy: f64,
}

#[derive(Serialize)]
struct CompareSide<'a> {
    counts: &'a [u64],
    measure: Vec<String>,
}

#[derive(Serialize)]
struct CompareRecord<'a> {
    m: u32,
    n: u64,
    left: CompareSide<'a>,
    right: CompareSide<'a>,
    total_variation: String,
    sup_deviation: String,
}

fn component_strings(measure: &EmpiricalMeasure) -> Vec<String> {
    measure.components().iter().map(format_rational).collect()
}

pub(crate) fn write_count_json(
    out: &mut dyn Write,
    counts: &CountVector,
    measure: &EmpiricalMeasure,
) -> Result<(), CliError> {
    let record = CountRecord {
        m: counts.alphabet().size(),
        n: counts.n(),
        counts: counts.counts(),
        measure: component_strings(measure),
    };
    serde_json::to_writer(&mut *out, &record)?;
    writeln!(out)?;
    Ok(())
}

pub(crate) fn write_count_csv(
    out: &mut dyn Write,
    counts: &CountVector,
    measure: &EmpiricalMeasure,
) -> Result<(), CliError> {
    let m = counts.alphabet().size();
    let mut header = String::from("m,n");
    for i in 0..m {
        header.push_str(&format!(",count_{i}"));
    }
    for i in 0..m {
        header.push_str(&format!(",pi_{i}"));
    }
    writeln!(out, "{header}")?;
    let mut row = format!("{m},{}", counts.n());
    for count in counts.counts() {
        row.push(',');
        row.push_str(&count.to_string());
    }
    for component in measure.components() {
        row.push(',');
        row.push_str(&format_rational(&component));
    }
    writeln!(out, "{row}")?;
    Ok(())
}

pub(crate) fn write_trace_json(
    out: &mut dyn Write,
    report: &ConvergenceReport,
) -> Result<(), CliError> {
    let m = report.alphabet().size();
    for row in report.rows() {
        let record = TraceRecord {
            n: row.n(),
            m,
            numerators: row.measure().numerators(),
            denominator: row.measure().denominator(),
            tv_to_target: format_rational(row.tv_to_target()),
            sup_dev_to_target: format_rational(row.sup_dev_to_target()),
            entropy: row.entropy(),
        };
        serde_json::to_writer(&mut *out, &record)?;
        writeln!(out)?;
    }
    Ok(())
}

pub(crate) fn write_trace_csv(
    out: &mut dyn Write,
    report: &ConvergenceReport,
) -> Result<(), CliError> {
    let m = report.alphabet().size();
    let mut header = String::from("n,m");
    for i in 0..m {
        header.push_str(&format!(",num_{i}"));
    }
    header.push_str(",denominator,tv_to_target,sup_dev_to_target,entropy");
    writeln!(out, "{header}")?;
    for row in report.rows() {
        let mut line = format!("{},{m}", row.n());
        for numerator in row.measure().numerators() {
            line.push(',');
            line.push_str(&numerator.to_string());
        }
        line.push(',');
        line.push_str(&row.measure().denominator().to_string());
        line.push(',');
        line.push_str(&format_rational(row.tv_to_target()));
        line.push(',');
        line.push_str(&format_rational(row.sup_dev_to_target()));
        line.push(',');
        line.push_str(&format_significant(row.entropy(), CSV_FLOAT_DIGITS));
        writeln!(out, "{line}")?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn write_compare_json(
    out: &mut dyn Write,
    left: &CountVector,
    right: &CountVector,
    left_measure: &EmpiricalMeasure,
    right_measure: &EmpiricalMeasure,
    total_variation: &BigRational,
    sup_deviation: &BigRational,
) -> Result<(), CliError> {
    let record = CompareRecord {
        m: left.alphabet().size(),
        n: left.n(),
        left: CompareSide {
            counts: left.counts(),
            measure: component_strings(left_measure),
        },
        right: CompareSide {
            counts: right.counts(),
            measure: component_strings(right_measure),
        },
        total_variation: format_rational(total_variation),
        sup_deviation: format_rational(sup_deviation),
    };
    serde_json::to_writer(&mut *out, &record)?;
    writeln!(out)?;
    Ok(())
}
