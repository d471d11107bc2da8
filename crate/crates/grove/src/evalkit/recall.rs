//! Recall against injected ground truth.

use std::collections::BTreeMap;
use std::path::Path;

use super::{CloneType, GroundTruthEntry, MatcherConfig, SegmentRef};
use crate::detect::ClonePair;
use crate::error::{Error, Result};

/// A pair read back from a report CSV.
#[derive(Debug, Clone)]
pub struct ReportedPair {
    pub file_a: String,
    pub start_a: u32,
    pub end_a: u32,
    pub file_b: String,
    pub start_b: u32,
    pub end_b: u32,
    pub granularity: u32,
    pub similarity: f64,
}

/// Parses a clone report produced by [`crate::report::write_report`].
pub fn load_report(path: &Path) -> Result<Vec<ReportedPair>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 && line == crate::report::REPORT_HEADER {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::Config(format!(
                "{}: line {} has {} fields, expected 10",
                path.display(),
                i + 1,
                fields.len()
            )));
        }
        let num = |s: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::Config(format!("{}: bad number {s:?}", path.display())))
        };
        let join = |dir: &str, file: &str| {
            if dir == "." {
                file.to_string()
            } else {
                format!("{dir}/{file}")
            }
        };
        pairs.push(ReportedPair {
            file_a: join(fields[0], fields[1]),
            start_a: num(fields[2])?,
            end_a: num(fields[3])?,
            file_b: join(fields[4], fields[5]),
            start_b: num(fields[6])?,
            end_b: num(fields[7])?,
            granularity: num(fields[8])?,
            similarity: fields[9].parse().map_err(|_| {
                Error::Config(format!("{}: bad similarity {:?}", path.display(), fields[9]))
            })?,
        });
    }
    Ok(pairs)
}

impl From<&ClonePair> for ReportedPair {
    fn from(pair: &ClonePair) -> Self {
        ReportedPair {
            file_a: pair.a.file.to_string(),
            start_a: pair.a.start_line,
            end_a: pair.a.end_line,
            file_b: pair.b.file.to_string(),
            start_b: pair.b.start_line,
            end_b: pair.b.end_line,
            granularity: pair.granularity,
            similarity: pair.similarity,
        }
    }
}

/// Fraction of the ground-truth segment's lines covered by the reported
/// segment, when the files match at all.
fn coverage(rep_file: &str, rep_start: u32, rep_end: u32, gt: &SegmentRef) -> f64 {
    if Path::new(rep_file) != gt.file {
        return 0.0;
    }
    let lo = rep_start.max(gt.start_line);
    let hi = rep_end.min(gt.end_line);
    if lo > hi {
        return 0.0;
    }
    f64::from(hi - lo + 1) / f64::from(gt.end_line - gt.start_line + 1)
}

/// True when the reported pair covers the ground-truth pair in either
/// orientation. Symmetric in the ground-truth segments by construction.
pub fn pair_matches(pair: &ReportedPair, entry: &GroundTruthEntry, cfg: &MatcherConfig) -> bool {
    let straight = coverage(&pair.file_a, pair.start_a, pair.end_a, &entry.original)
        >= cfg.overlap_ratio
        && coverage(&pair.file_b, pair.start_b, pair.end_b, &entry.mutant) >= cfg.overlap_ratio;
    let crossed = coverage(&pair.file_a, pair.start_a, pair.end_a, &entry.mutant)
        >= cfg.overlap_ratio
        && coverage(&pair.file_b, pair.start_b, pair.end_b, &entry.original) >= cfg.overlap_ratio;
    straight || crossed
}

/// Recall per clone type.
#[derive(Debug, Clone, Default)]
pub struct RecallReport {
    rows: BTreeMap<CloneType, (usize, usize)>,
}

impl RecallReport {
    pub fn matched(&self, t: CloneType) -> usize {
        self.rows.get(&t).map_or(0, |r| r.0)
    }

    pub fn total(&self, t: CloneType) -> usize {
        self.rows.get(&t).map_or(0, |r| r.1)
    }

    /// Matched over total for one type; 0 when nothing of that type was
    /// scored.
    pub fn recall(&self, t: CloneType) -> f64 {
        let (matched, total) = self.rows.get(&t).copied().unwrap_or((0, 0));
        if total == 0 {
            0.0
        } else {
            matched as f64 / total as f64
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (CloneType, usize, usize)> + '_ {
        self.rows.iter().map(|(t, (m, n))| (*t, *m, *n))
    }
}

impl std::fmt::Display for RecallReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (t, matched, total) in self.rows() {
            writeln!(f, "{t}: {matched}/{total} = {:.3}", self.recall(t))?;
        }
        Ok(())
    }
}

/// Scores a report against ground truth. Entries below the matcher minimums
/// (lines on either side, or tokens when known) are excluded from the
/// denominators.
pub fn compute_recall(
    report: &[ReportedPair],
    ground_truth: &[GroundTruthEntry],
    cfg: &MatcherConfig,
) -> RecallReport {
    let mut rows: BTreeMap<CloneType, (usize, usize)> = BTreeMap::new();
    for entry in ground_truth {
        let lines_orig = entry.original.end_line - entry.original.start_line + 1;
        let lines_mut = entry.mutant.end_line - entry.mutant.start_line + 1;
        if lines_orig < cfg.min_lines || lines_mut < cfg.min_lines {
            continue;
        }
        if entry.original_tokens < cfg.min_tokens || entry.mutant_tokens < cfg.min_tokens {
            continue;
        }
        let row = rows.entry(entry.clone_type).or_insert((0, 0));
        row.1 += 1;
        if report.iter().any(|p| pair_matches(p, entry, cfg)) {
            row.0 += 1;
        }
    }
    RecallReport { rows }
}

/// Writes ground truth as CSV: `file_a,start_a,end_a,file_b,start_b,end_b,type`.
pub fn write_ground_truth(entries: &[GroundTruthEntry], path: &Path) -> Result<usize> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.original.file.display(),
            e.original.start_line,
            e.original.end_line,
            e.mutant.file.display(),
            e.mutant.start_line,
            e.mutant.end_line,
            e.clone_type
        ));
    }
    std::fs::write(path, &out).map_err(|e| Error::file(path, e))?;
    Ok(out.len())
}

/// Reads a ground-truth CSV back. Token counts are not serialized, so the
/// token minimum cannot be applied to entries loaded this way.
pub fn read_ground_truth(path: &Path) -> Result<Vec<GroundTruthEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Config(format!(
                "{}: line {} has {} fields, expected 7",
                path.display(),
                i + 1,
                fields.len()
            )));
        }
        let num = |s: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::Config(format!("{}: bad number {s:?}", path.display())))
        };
        out.push(GroundTruthEntry {
            original: SegmentRef {
                file: fields[0].into(),
                start_line: num(fields[1])?,
                end_line: num(fields[2])?,
            },
            mutant: SegmentRef {
                file: fields[3].into(),
                start_line: num(fields[4])?,
                end_line: num(fields[5])?,
            },
            clone_type: CloneType::parse(fields[6]).ok_or_else(|| {
                Error::Config(format!("{}: unknown clone type {:?}", path.display(), fields[6]))
            })?,
            expected_similarity: f64::NAN,
            original_tokens: u32::MAX,
            mutant_tokens: u32::MAX,
        });
    }
    Ok(out)
}
