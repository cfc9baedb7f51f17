use crate::alphabet::Alphabet;
use crate::counts::{byte_histogram, first_invalid, CountVector, BINS};
use crate::error::EngineError;
use crate::measure::EmpiricalMeasure;
use crate::sources::SymbolSource;

/// An incremental symbol counter. Feeding chunks of a stream in order
/// gives the same counts as counting the concatenation in one piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamCounter {
    alphabet: Alphabet,
    counts: Vec<u64>,
    n: u64,
}

impl StreamCounter {
    pub fn new(alphabet: Alphabet) -> Self {
        StreamCounter {
            alphabet,
            counts: vec![0; alphabet.len()],
            n: 0,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Symbols consumed so far.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Counts one chunk of symbol bytes into the counter.
    ///
    /// All-or-nothing: an out-of-range byte rejects the whole chunk and
    /// leaves the counter unchanged, with the offending absolute stream
    /// offset in the error.
    pub fn feed(&mut self, chunk: &[u8]) -> Result<(), EngineError> {
        let hist = byte_histogram(chunk);
        if let Some(at) = first_invalid(chunk, &hist, self.alphabet.size()) {
            return Err(EngineError::InvalidSymbol {
                value: chunk[at],
                offset: self.n + at as u64,
            });
        }
        let n = self
            .n
            .checked_add(chunk.len() as u64)
            .ok_or(EngineError::Overflow)?;
        // Per-symbol counts are bounded by n, which just passed the check.
        let used = self.counts.len().min(BINS);
        for (count, &h) in self.counts[..used].iter_mut().zip(&hist[..used]) {
            *count += h;
        }
        self.n = n;
        Ok(())
    }

    /// Combines two counters over the same alphabet. The operation is
    /// commutative and associative with the fresh counter as identity, so
    /// segment counts can be folded in any grouping.
    pub fn merge(&self, other: &StreamCounter) -> Result<StreamCounter, EngineError> {
        if self.alphabet != other.alphabet {
            return Err(EngineError::IncompatibleCounter {
                left: self.alphabet.size(),
                right: other.alphabet.size(),
            });
        }
        let n = self
            .n
            .checked_add(other.n)
            .ok_or(EngineError::Overflow)?;
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(StreamCounter {
            alphabet: self.alphabet,
            counts,
            n,
        })
    }

    /// The counts seen so far, as an immutable vector.
    pub fn snapshot(&self) -> CountVector {
        CountVector::from_raw_parts(self.alphabet, self.counts.clone(), self.n)
    }
}

/// The prefix lengths at which a checkpointed run records its counts.
/// Always nonempty, strictly increasing, and free of n=0 (the measure is
/// undefined there).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointSchedule {
    points: Vec<u64>,
}

impl CheckpointSchedule {
    /// A schedule from explicit prefix lengths, sorted and deduplicated.
    pub fn from_points(points: &[u64]) -> Result<Self, EngineError> {
        if points.is_empty() {
            return Err(EngineError::InvalidSchedule {
                reason: "schedule has no checkpoints".to_string(),
            });
        }
        if points.contains(&0) {
            return Err(EngineError::InvalidSchedule {
                reason: "checkpoint n=0 is not allowed: the measure is undefined there"
                    .to_string(),
            });
        }
        let mut points = points.to_vec();
        points.sort_unstable();
        points.dedup();
        Ok(CheckpointSchedule { points })
    }

    /// The geometric schedule round(ratio^k) for k = 0, 1, 2, ... clipped
    /// to `max_n`, with repeats from rounding collapsed.
    pub fn geometric(ratio: f64, max_n: u64) -> Result<Self, EngineError> {
        if ratio <= 1.0 || !ratio.is_finite() {
            return Err(EngineError::InvalidSchedule {
                reason: format!("geometric ratio must be a finite number > 1 (got {ratio})"),
            });
        }
        if max_n == 0 {
            return Err(EngineError::InvalidSchedule {
                reason: "geometric schedule needs max_n >= 1".to_string(),
            });
        }
        let mut points = Vec::new();
        let mut x = 1.0f64;
        loop {
            let rounded = x.round();
            if rounded > max_n as f64 {
                break;
            }
            let point = rounded as u64;
            if points.last() != Some(&point) {
                points.push(point);
            }
            x *= ratio;
        }
        Ok(CheckpointSchedule { points })
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    /// The last checkpoint; a run consumes exactly this many symbols.
    pub fn max(&self) -> u64 {
        *self.points.last().expect("schedule is nonempty")
    }
}

/// Cumulative counts recorded at one checkpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointRecord {
    counts: CountVector,
}

impl CheckpointRecord {
    /// The checkpoint's prefix length (always >= 1).
    pub fn n(&self) -> u64 {
        self.counts.n()
    }

    pub fn counts(&self) -> &CountVector {
        &self.counts
    }

    pub fn measure(&self) -> EmpiricalMeasure {
        self.counts
            .empirical_measure()
            .expect("checkpoints exclude n=0")
    }
}

/// The records of one checkpointed run, in checkpoint order: one record
/// per schedule point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointSeries {
    alphabet: Alphabet,
    schedule: CheckpointSchedule,
    records: Vec<CheckpointRecord>,
}

impl CheckpointSeries {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn schedule(&self) -> &CheckpointSchedule {
        &self.schedule
    }

    pub fn records(&self) -> &[CheckpointRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<CheckpointRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Tuning for checkpointed and whole-stream counting runs. Neither knob
/// changes any output: results and errors are bit-identical across all
/// parallelism and chunk size settings.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Worker count for sources that can fork; clamped to [1, 256] and to
    /// the number of symbols. Sequential sources ignore it.
    pub parallelism: usize,
    /// Read-buffer size in symbols; at least 1.
    pub chunk_size: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            parallelism: 1,
            chunk_size: 1 << 20,
        }
    }
}

const MAX_WORKERS: usize = 256;

/// Consumes exactly `schedule.max()` symbols from the source, recording
/// cumulative counts at every scheduled prefix length.
///
/// Fails without a partial series if the stream ends early or contains an
/// out-of-range byte; the error names the first offending stream offset
/// regardless of chunking or parallelism.
pub fn run_checkpointed(
    source: &mut dyn SymbolSource,
    schedule: &CheckpointSchedule,
    config: &EngineConfig,
) -> Result<CheckpointSeries, EngineError> {
    let alphabet = source.alphabet();
    let total = schedule.max();
    let workers = effective_workers(config, total);
    if workers > 1 {
        if let Some(series) = run_parallel(source, schedule, config, workers)? {
            return Ok(series);
        }
    }
    let chunk_size = config.chunk_size.max(1);
    let (_, snapshots) = count_segment(source, 0, total, schedule.points(), chunk_size)?;
    Ok(CheckpointSeries {
        alphabet,
        schedule: schedule.clone(),
        records: snapshots
            .into_iter()
            .map(|counts| CheckpointRecord { counts })
            .collect(),
    })
}

/// Counts a stream into a single count vector.
///
/// With `prefix = Some(n)` exactly n symbols are consumed (erroring if the
/// stream is shorter). With `prefix = None` the source's own length is
/// used, or, for sources of unknown length, symbols are counted until the
/// stream ends; an endless generator then never returns.
pub fn count_stream(
    source: &mut dyn SymbolSource,
    prefix: Option<u64>,
    config: &EngineConfig,
) -> Result<CountVector, EngineError> {
    let limit = prefix.or_else(|| source.known_len());
    match limit {
        Some(0) => Ok(CountVector::zero(source.alphabet())),
        Some(n) => {
            let schedule = CheckpointSchedule::from_points(&[n])?;
            let series = run_checkpointed(source, &schedule, config)?;
            let record = series.records.into_iter().next().expect("one checkpoint");
            Ok(record.counts)
        }
        None => {
            let mut counter = StreamCounter::new(source.alphabet());
            let mut buf = vec![0u8; config.chunk_size.max(1)];
            loop {
                let got = source.read_symbols(&mut buf)?;
                if got == 0 {
                    return Ok(counter.snapshot());
                }
                counter.feed(&buf[..got])?;
            }
        }
    }
}

fn effective_workers(config: &EngineConfig, total: u64) -> usize {
    let cap = total.min(MAX_WORKERS as u64) as usize;
    config.parallelism.clamp(1, cap.max(1))
}

/// Counts one contiguous segment of the stream, snapshotting at each of
/// the given global checkpoint positions (all in `(base, base + len]`).
/// Offsets in errors are global: local positions shifted by `base`.
fn count_segment(
    source: &mut dyn SymbolSource,
    base: u64,
    len: u64,
    points: &[u64],
    chunk_size: usize,
) -> Result<(StreamCounter, Vec<CountVector>), EngineError> {
    let mut counter = StreamCounter::new(source.alphabet());
    let mut snapshots = Vec::with_capacity(points.len());
    let mut next = 0;
    let mut buf = vec![0u8; chunk_size];
    while counter.n() < len {
        let want = (len - counter.n()).min(buf.len() as u64) as usize;
        let got = source.read_symbols(&mut buf[..want])?;
        if got == 0 {
            return Err(EngineError::InsufficientInput {
                available: base + counter.n(),
                // May point past this segment; the parallel caller recomputes
                // it against the full schedule.
                first_unreachable: points.get(next).copied().unwrap_or(base + len),
            });
        }
        let mut off = 0;
        while off < got {
            let until_next = match points.get(next) {
                Some(&p) => p - base - counter.n(),
                None => u64::MAX,
            };
            let take = ((got - off) as u64).min(until_next) as usize;
            counter
                .feed(&buf[off..off + take])
                .map_err(|e| e.offset_by(base))?;
            off += take;
            if points.get(next) == Some(&(base + counter.n())) {
                snapshots.push(counter.snapshot());
                next += 1;
            }
        }
    }
    Ok((counter, snapshots))
}

/// The parallel path: forks the source at segment boundaries, counts the
/// segments on worker threads, and rebuilds cumulative checkpoint counts
/// by prefix-summing segment totals. `Ok(None)` means the source cannot
/// fork and the caller should count sequentially.
fn run_parallel(
    source: &mut dyn SymbolSource,
    schedule: &CheckpointSchedule,
    config: &EngineConfig,
    workers: usize,
) -> Result<Option<CheckpointSeries>, EngineError> {
    let alphabet = source.alphabet();
    let points = schedule.points();
    let total = schedule.max();
    let bounds: Vec<u64> = (0..=workers)
        .map(|k| (total as u128 * k as u128 / workers as u128) as u64)
        .collect();

    let mut forks = Vec::with_capacity(workers);
    for &start in &bounds[..workers] {
        match source.fork_at(start)? {
            Some(fork) => forks.push(fork),
            None => return Ok(None),
        }
    }

    let chunk_size = config.chunk_size.max(1);
    let results: Vec<Result<(StreamCounter, Vec<CountVector>), EngineError>> =
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            for (k, mut fork) in forks.into_iter().enumerate() {
                let base = bounds[k];
                let len = bounds[k + 1] - base;
                let lo = points.partition_point(|&p| p <= base);
                let hi = points.partition_point(|&p| p <= base + len);
                let segment_points = &points[lo..hi];
                handles.push(scope.spawn(move || {
                    count_segment(fork.as_mut(), base, len, segment_points, chunk_size)
                }));
            }
            handles
                .into_iter()
                .map(|handle| handle.join().expect("segment worker panicked"))
                .collect()
        });

    if results.iter().any(|r| r.is_err()) {
        // The error a sequential run would hit first: smallest offset wins,
        // segment order breaks ties for offset-free errors.
        let (_, err) = results
            .into_iter()
            .enumerate()
            .filter_map(|(k, r)| {
                r.err().map(|e| ((e.offset().unwrap_or(bounds[k]), k), e))
            })
            .min_by_key(|(key, _)| *key)
            .expect("at least one worker failed");
        return Err(recompute_unreachable(err, points));
    }

    let mut prefix = StreamCounter::new(alphabet);
    let mut records = Vec::with_capacity(points.len());
    for result in results {
        let (segment_total, snapshots) = result.expect("worker errors handled above");
        for snap in snapshots {
            records.push(CheckpointRecord {
                counts: combine_counts(&prefix, &snap)?,
            });
        }
        prefix = prefix.merge(&segment_total)?;
    }
    debug_assert_eq!(records.len(), points.len());
    Ok(Some(CheckpointSeries {
        alphabet,
        schedule: schedule.clone(),
        records,
    }))
}

/// Counts at a checkpoint inside a segment: everything before the segment
/// plus the segment's own snapshot.
fn combine_counts(prefix: &StreamCounter, snap: &CountVector) -> Result<CountVector, EngineError> {
    let n = prefix
        .n()
        .checked_add(snap.n())
        .ok_or(EngineError::Overflow)?;
    let counts = prefix
        .counts()
        .iter()
        .zip(snap.counts())
        .map(|(&a, &b)| a + b)
        .collect();
    Ok(CountVector::from_raw_parts(prefix.alphabet(), counts, n))
}

/// Replaces a worker-local unreachable checkpoint with the first one the
/// whole schedule cannot reach.
fn recompute_unreachable(err: EngineError, points: &[u64]) -> EngineError {
    if let EngineError::InsufficientInput { available, .. } = err {
        let idx = points.partition_point(|&p| p <= available);
        if idx < points.len() {
            return EngineError::InsufficientInput {
                available,
                first_unreachable: points[idx],
            };
        }
    }
    err
}
