//! Report and statistics serialization.
//!
//! The clone report is CSV with one pair per line:
//!
//! ```text
//! dir_a,file_a,start_a,end_a,dir_b,file_b,start_b,end_b,granularity,similarity
//! ```
//!
//! Similarity is printed with four decimal places. Fields are written raw,
//! so paths containing commas or newlines are not representable; keep corpus
//! paths plain. Output is byte-stable for a given pair list.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::bags::TokenBag;
use crate::detect::ClonePair;
use crate::error::{Error, Result};

pub const REPORT_HEADER: &str =
    "dir_a,file_a,start_a,end_a,dir_b,file_b,start_b,end_b,granularity,similarity";

fn split_dir_file(path: &str) -> (&str, &str) {
    match path.rsplit_once('/') {
        Some((dir, file)) => (if dir.is_empty() { "/" } else { dir }, file),
        None => (".", path),
    }
}

/// Renders the canonical report body.
pub fn format_report(pairs: &[ClonePair], header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(REPORT_HEADER);
        out.push('\n');
    }
    for pair in pairs {
        let (dir_a, file_a) = split_dir_file(&pair.a.file);
        let (dir_b, file_b) = split_dir_file(&pair.b.file);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{:.4}\n",
            dir_a,
            file_a,
            pair.a.start_line,
            pair.a.end_line,
            dir_b,
            file_b,
            pair.b.start_line,
            pair.b.end_line,
            pair.granularity,
            pair.similarity
        ));
    }
    out
}

/// Writes the report, returning the number of bytes written.
pub fn write_report(pairs: &[ClonePair], path: &Path, header: bool) -> Result<usize> {
    let body = format_report(pairs, header);
    std::fs::write(path, &body).map_err(|e| Error::file(path, e))?;
    Ok(body.len())
}

/// Per-granularity counts: bags generated and bags participating in at least
/// one reported pair. Enough to redraw distribution curves per granularity.
pub fn granularity_distribution(
    bags: &[TokenBag],
    pairs: &[ClonePair],
) -> BTreeMap<u32, (u64, u64)> {
    let mut rows: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    for bag in bags {
        rows.entry(bag.segment.granularity).or_insert((0, 0)).0 += 1;
    }
    let mut cloned: BTreeSet<&crate::bags::CodeSegment> = BTreeSet::new();
    for pair in pairs {
        cloned.insert(&pair.a);
        cloned.insert(&pair.b);
    }
    for seg in cloned {
        rows.entry(seg.granularity).or_insert((0, 0)).1 += 1;
    }
    rows
}

pub fn format_granularity_stats(bags: &[TokenBag], pairs: &[ClonePair]) -> String {
    let mut out = String::from("granularity,bags,cloned_bags\n");
    for (g, (bags, cloned)) in granularity_distribution(bags, pairs) {
        out.push_str(&format!("{g},{bags},{cloned}\n"));
    }
    out
}

/// Writes the granularity statistics CSV.
pub fn write_granularity_stats(
    bags: &[TokenBag],
    pairs: &[ClonePair],
    path: &Path,
) -> Result<usize> {
    let body = format_granularity_stats(bags, pairs);
    std::fs::write(path, &body).map_err(|e| Error::file(path, e))?;
    Ok(body.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::tests::bag;
    use crate::detect::{detect_all, DetectorConfig};

    fn demo_pairs() -> Vec<ClonePair> {
        let bags = vec![
            bag("src/a/One.java", (1, 40), 0, &[("t", 60)]),
            bag("src/b/Two.java", (1, 40), 0, &[("t", 60)]),
        ];
        detect_all(&bags, &DetectorConfig::default())
    }

    #[test]
    fn empty_pair_set_writes_an_empty_file() {
        assert_eq!(format_report(&[], false), "");
        assert_eq!(
            format_report(&[], true),
            format!("{REPORT_HEADER}\n")
        );
    }

    #[test]
    fn one_pair_is_one_line_with_fields_in_order() {
        let pairs = demo_pairs();
        let body = format_report(&pairs, false);
        assert_eq!(
            body,
            "src/a,One.java,1,40,src/b,Two.java,1,40,0,1.0000\n"
        );
    }

    #[test]
    fn similarity_is_fixed_to_four_decimals() {
        let bags = vec![
            bag("A", (1, 12), 0, &[("a", 1), ("b", 1), ("c", 1)]),
            bag("B", (1, 12), 0, &[("a", 1), ("b", 1), ("x", 1)]),
        ];
        let cfg = DetectorConfig {
            theta: 0.5,
            min_tokens: 1,
            ..DetectorConfig::default()
        };
        let pairs = detect_all(&bags, &cfg);
        let body = format_report(&pairs, false);
        assert!(body.ends_with(",0,0.6667\n"), "{body}");
    }

    #[test]
    fn rendering_twice_is_byte_identical() {
        let pairs = demo_pairs();
        assert_eq!(format_report(&pairs, true), format_report(&pairs, true));
    }

    #[test]
    fn stats_count_bags_and_cloned_bags_per_granularity() {
        let bags = vec![
            bag("A", (1, 40), 0, &[("t", 60)]),
            bag("B", (1, 40), 0, &[("t", 60)]),
            bag("A", (3, 9), 1, &[("u", 55)]),
        ];
        let pairs = detect_all(&bags, &DetectorConfig::default());
        let stats = format_granularity_stats(&bags, &pairs);
        assert_eq!(stats, "granularity,bags,cloned_bags\n0,2,2\n1,1,0\n");
    }
}
