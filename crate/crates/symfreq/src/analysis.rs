use num::{BigRational, Signed};

use crate::alphabet::Alphabet;
use crate::engine::CheckpointSeries;
use crate::error::AnalysisError;
use crate::measure::{DistanceMetric, EmpiricalMeasure};

/// One checkpoint of a convergence report: the measure at prefix length n
/// and its exact distances to the report's target.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    n: u64,
    measure: EmpiricalMeasure,
    tv_to_target: BigRational,
    sup_dev_to_target: BigRational,
    entropy: f64,
}

impl ReportRow {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn measure(&self) -> &EmpiricalMeasure {
        &self.measure
    }

    pub fn tv_to_target(&self) -> &BigRational {
        &self.tv_to_target
    }

    pub fn sup_dev_to_target(&self) -> &BigRational {
        &self.sup_dev_to_target
    }

    /// Base-m entropy of the row's measure.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }
}

/// Digest of a report's last row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportSummary {
    pub final_n: u64,
    pub final_sup_deviation: BigRational,
    /// Symbol carrying the most mass in the final measure; ties go to the
    /// smallest symbol value, so an exactly uniform measure reports 0.
    pub argmax_symbol: u32,
}

/// Deviation and entropy trajectories of a checkpointed run against a
/// fixed target measure.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    alphabet: Alphabet,
    target: EmpiricalMeasure,
    rows: Vec<ReportRow>,
    summary: ReportSummary,
}

impl ConvergenceReport {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn target(&self) -> &EmpiricalMeasure {
        &self.target
    }

    /// Rows in strictly increasing n, one per checkpoint.
    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn summary(&self) -> &ReportSummary {
        &self.summary
    }
}

/// Builds the convergence report of a checkpointed run against `target`.
pub fn build_report(
    series: &CheckpointSeries,
    target: &EmpiricalMeasure,
) -> Result<ConvergenceReport, AnalysisError> {
    if series.is_empty() {
        return Err(AnalysisError::EmptySeries);
    }
    let alphabet = series.alphabet();
    if target.alphabet() != alphabet {
        return Err(AnalysisError::IncompatibleMeasure {
            left: alphabet.size(),
            right: target.alphabet().size(),
        });
    }
    let rows = series
        .records()
        .iter()
        .map(|record| {
            let measure = record.measure();
            let tv_to_target = measure.distance(target, DistanceMetric::TotalVariation)?;
            let sup_dev_to_target = measure.distance(target, DistanceMetric::SupDeviation)?;
            let entropy = measure.entropy();
            Ok(ReportRow {
                n: record.n(),
                measure,
                tv_to_target,
                sup_dev_to_target,
                entropy,
            })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;

    let last = rows.last().expect("series is nonempty");
    let summary = ReportSummary {
        final_n: last.n,
        final_sup_deviation: last.sup_dev_to_target.clone(),
        argmax_symbol: argmax_symbol(last.measure()),
    };
    Ok(ConvergenceReport {
        alphabet,
        target: target.clone(),
        rows,
        summary,
    })
}

/// Largest-mass symbol, smallest value first on ties. Components share a
/// denominator, so comparing numerators compares the components.
fn argmax_symbol(measure: &EmpiricalMeasure) -> u32 {
    let mut best = 0usize;
    for (i, &num) in measure.numerators().iter().enumerate() {
        if num > measure.numerators()[best] {
            best = i;
        }
    }
    best as u32
}

/// The verdict outcome of [`verdict_simple_normality`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ConvergedWithinEpsilon,
    NotConverged,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::ConvergedWithinEpsilon => "converged-within-epsilon",
            Verdict::NotConverged => "not-converged",
        })
    }
}

/// One row of verdict evidence: the checkpoint's exact sup-deviation from
/// the uniform measure and whether it clears epsilon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub n: u64,
    pub sup_dev_from_uniform: BigRational,
    pub within_epsilon: bool,
}

/// The outcome of the finite-prefix uniformity check, with the rows it
/// was judged on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityVerdict {
    pub outcome: Verdict,
    pub epsilon: BigRational,
    pub window: usize,
    /// The last `window` report rows, in increasing n.
    pub evidence: Vec<EvidenceRow>,
}

/// Checks whether the last `window` checkpoints all sit within `epsilon`
/// of the uniform measure in sup-deviation.
///
/// This is a finite-prefix heuristic, nothing more: it inspects finitely
/// many prefixes of one sequence and proves no limit property. Deviations
/// are measured from uniform regardless of the report's target, since
/// equidistribution is what the check is about. A window of several
/// checkpoints (default 3 in the CLI-facing docs) avoids declaring
/// convergence on one lucky prefix.
pub fn verdict_simple_normality(
    report: &ConvergenceReport,
    epsilon: &BigRational,
    window: usize,
) -> Result<NormalityVerdict, AnalysisError> {
    if window == 0 {
        return Err(AnalysisError::InvalidWindow);
    }
    if !epsilon.is_positive() {
        return Err(AnalysisError::InvalidEpsilon);
    }
    let rows = report.rows();
    if rows.len() < window {
        return Err(AnalysisError::InsufficientRows {
            rows: rows.len(),
            window,
        });
    }
    let uniform = EmpiricalMeasure::uniform(report.alphabet());
    let evidence: Vec<EvidenceRow> = rows[rows.len() - window..]
        .iter()
        .map(|row| {
            let sup_dev_from_uniform = row
                .measure()
                .distance(&uniform, DistanceMetric::SupDeviation)
                .expect("report rows share the report alphabet");
            let within_epsilon = sup_dev_from_uniform <= *epsilon;
            EvidenceRow {
                n: row.n(),
                sup_dev_from_uniform,
                within_epsilon,
            }
        })
        .collect();
    let outcome = if evidence.iter().all(|e| e.within_epsilon) {
        Verdict::ConvergedWithinEpsilon
    } else {
        Verdict::NotConverged
    };
    Ok(NormalityVerdict {
        outcome,
        epsilon: epsilon.clone(),
        window,
        evidence,
    })
}
