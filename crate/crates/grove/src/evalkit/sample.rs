//! Precision sampling: a reproducible uniform draw of reported pairs,
//! written with source excerpts for human judgment.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::detect::ClonePair;
use crate::error::{Error, Result};

fn excerpt(file: &str, start: u32, end: u32) -> String {
    match std::fs::read_to_string(file) {
        Ok(text) => text
            .lines()
            .enumerate()
            .filter(|(i, _)| {
                let line = *i as u32 + 1;
                line >= start && line <= end
            })
            .map(|(i, l)| format!("{:>5} | {l}\n", i + 1))
            .collect(),
        Err(_) => format!("      | <source unavailable: {file}>\n"),
    }
}

/// Draws `n` distinct pairs uniformly without replacement (partial
/// Fisher-Yates over the index space, so the same seed always selects the
/// same pairs) and writes one excerpt block per pair.
pub fn sample_for_precision(
    pairs: &[ClonePair],
    n: usize,
    seed: u64,
    out: &Path,
) -> Result<usize> {
    if n > pairs.len() {
        return Err(Error::SampleSize {
            requested: n,
            population: pairs.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indexes: Vec<usize> = (0..pairs.len()).collect();
    for i in 0..n {
        let j = rng.random_range(i..indexes.len());
        indexes.swap(i, j);
    }
    let mut selected: Vec<usize> = indexes[..n].to_vec();
    selected.sort_unstable();

    let mut body = String::new();
    for (ordinal, idx) in selected.iter().enumerate() {
        let pair = &pairs[*idx];
        writeln!(
            body,
            "# pair {}/{n}  granularity={}  similarity={:.4}",
            ordinal + 1,
            pair.granularity,
            pair.similarity
        )
        .expect("string write");
        writeln!(
            body,
            "--- a: {}:{}-{}",
            pair.a.file, pair.a.start_line, pair.a.end_line
        )
        .expect("string write");
        body.push_str(&excerpt(&pair.a.file, pair.a.start_line, pair.a.end_line));
        writeln!(
            body,
            "--- b: {}:{}-{}",
            pair.b.file, pair.b.start_line, pair.b.end_line
        )
        .expect("string write");
        body.push_str(&excerpt(&pair.b.file, pair.b.start_line, pair.b.end_line));
        body.push('\n');
    }

    std::fs::write(out, &body).map_err(|e| Error::file(out, e))?;
    Ok(n)
}
