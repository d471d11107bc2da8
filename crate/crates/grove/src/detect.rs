//! Clone detection over token bags.
//!
//! Two bags are clones when the ratio of their multiset intersection to the
//! larger bag reaches the threshold. Detection only ever compares bags with
//! the same granularity value; partitions are independent and run in
//! parallel. Candidate pairs come from an inverted index with prefix
//! filtering in the SourcererCC style, then every candidate is verified
//! exactly, so the result set equals the brute-force all-pairs scan.
//! Containment-nested pairs are reported only at the smallest granularity.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::bags::{CodeSegment, TokenBag};

/// Detection parameters. Defaults: threshold 0.7, minimum bag size 50.
#[derive(Debug, Clone)]
pub struct DetectorConfig {
    /// Similarity threshold in (0, 1]; inclusive.
    pub theta: f64,
    /// Bags below this size never enter detection.
    pub min_tokens: u32,
    /// Restrict detection to granularities within `[lo, hi]`.
    pub granularity_range: Option<(u32, u32)>,
    /// Worker threads for partition-level parallelism; 0 = all cores.
    pub workers: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            theta: 0.7,
            min_tokens: 50,
            granularity_range: None,
            workers: 0,
        }
    }
}

/// A reported clone: two segments at one granularity with their similarity.
#[derive(Debug, Clone, PartialEq)]
pub struct ClonePair {
    pub a: CodeSegment,
    pub b: CodeSegment,
    pub similarity: f64,
    pub granularity: u32,
}

impl ClonePair {
    /// Builds the canonical form: segments ordered by (file, lines).
    fn canonical(x: CodeSegment, y: CodeSegment, similarity: f64, granularity: u32) -> Self {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        ClonePair {
            a,
            b,
            similarity,
            granularity,
        }
    }

    fn sort_key(&self) -> impl Ord + '_ {
        (&self.a, &self.b)
    }
}

/// Overlap similarity: `|x ∩ y| / max(|x|, |y|)`, the intersection being the
/// multiset minimum per distinct token text. Symmetric, in [0, 1].
pub fn similarity(x: &TokenBag, y: &TokenBag) -> f64 {
    assert!(x.total > 0 && y.total > 0, "similarity needs non-empty bags");
    let shared = x.intersection(y);
    shared as f64 / f64::from(x.total.max(y.total))
}

/// Inverted index over a same-granularity partition: token text to the bags
/// containing it. Any pair sharing at least one token is enumerable, so the
/// candidate set is always a superset of the true clone pairs.
pub struct InvertedIndex {
    postings: HashMap<Arc<str>, Vec<u32>>,
    bags: usize,
}

/// Builds the full inverted index for one partition.
pub fn build_index(bags: &[TokenBag]) -> InvertedIndex {
    let mut postings: HashMap<Arc<str>, Vec<u32>> = HashMap::new();
    for (pos, bag) in bags.iter().enumerate() {
        for (text, _) in bag.counts() {
            postings.entry(text.clone()).or_default().push(pos as u32);
        }
    }
    InvertedIndex {
        postings,
        bags: bags.len(),
    }
}

impl InvertedIndex {
    pub fn postings(&self, token: &str) -> &[u32] {
        self.postings.get(token).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of bags the index was built over.
    pub fn len(&self) -> usize {
        self.bags
    }

    pub fn is_empty(&self) -> bool {
        self.bags == 0
    }

    /// Every unordered bag pair sharing at least one token, each exactly
    /// once, in ascending order.
    pub fn candidate_pairs(&self) -> Vec<(u32, u32)> {
        let mut pairs = Vec::new();
        for list in self.postings.values() {
            for (i, &x) in list.iter().enumerate() {
                for &y in &list[i + 1..] {
                    pairs.push((x.min(y), x.max(y)));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

/// Work representation for one partition: token texts interned to dense ids,
/// each bag's counts ordered by ascending document frequency so prefixes hit
/// rare tokens first.
struct CompactBag {
    pos: u32,
    total: u32,
    /// (token id, count), ordered by the partition-global token order.
    items: Vec<(u32, u32)>,
    /// Number of leading `items` entries (token instances, counts included)
    /// that form the prefix.
    prefix_items: usize,
}

/// Smallest integer overlap `o` such that `o / total >= theta` under the
/// same floating-point comparison verification uses.
fn required_overlap(total: u32, theta: f64) -> u32 {
    let mut t = (theta * f64::from(total)).ceil() as u32;
    t = t.clamp(1, total);
    while t > 1 && f64::from(t - 1) / f64::from(total) >= theta {
        t -= 1;
    }
    while f64::from(t) / f64::from(total) < theta && t < total {
        t += 1;
    }
    t
}

/// Exact clone pairs among bags of one granularity. The candidate stage may
/// prune however it likes; the result always equals the all-pairs scan.
pub fn detect_partition(bags: &[TokenBag], cfg: &DetectorConfig) -> Vec<ClonePair> {
    if bags.len() < 2 {
        return Vec::new();
    }
    let granularity = bags[0].segment.granularity;
    assert!(
        bags.iter().all(|b| b.segment.granularity == granularity),
        "detect_partition requires a single granularity"
    );
    assert!(
        bags.iter().all(|b| b.total >= cfg.min_tokens.max(1)),
        "bags below min_tokens must be filtered before detection"
    );

    // Intern token texts to dense ids, then order every bag's tokens by
    // (document frequency, id): rare tokens first.
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let mut df: Vec<u32> = Vec::new();
    let mut compact: Vec<CompactBag> = Vec::with_capacity(bags.len());
    for (pos, bag) in bags.iter().enumerate() {
        let mut items = Vec::with_capacity(bag.counts().len());
        for (text, count) in bag.counts() {
            let next = ids.len() as u32;
            let id = *ids.entry(text.as_ref()).or_insert(next);
            if id as usize == df.len() {
                df.push(0);
            }
            df[id as usize] += 1;
            items.push((id, *count));
        }
        compact.push(CompactBag {
            pos: pos as u32,
            total: bag.total,
            items,
            prefix_items: 0,
        });
    }
    let rank: Vec<(u32, u32)> = df.iter().enumerate().map(|(id, &d)| (d, id as u32)).collect();
    for bag in &mut compact {
        bag.items
            .sort_unstable_by_key(|&(id, _)| rank[id as usize]);
        // A pair needs `required` shared instances; any qualifying partner
        // must therefore match inside the first `total - required + 1`
        // instances. Count how many (token, count) entries that covers.
        let required = required_overlap(bag.total, cfg.theta);
        let prefix_instances = bag.total - required + 1;
        let mut seen = 0u32;
        let mut entries = 0usize;
        for &(_, count) in &bag.items {
            if seen >= prefix_instances {
                break;
            }
            seen += count;
            entries += 1;
        }
        bag.prefix_items = entries;
    }

    // Index-and-probe: each bag queries the prefixes of earlier bags, then
    // adds its own prefix to the index.
    let mut postings: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut last_probe = vec![u32::MAX; bags.len()];
    let mut pairs = Vec::new();
    for bag in &compact {
        let mut candidates: Vec<u32> = Vec::new();
        for &(id, _) in &bag.items[..bag.prefix_items] {
            if let Some(list) = postings.get(&id) {
                for &other in list {
                    if last_probe[other as usize] != bag.pos {
                        last_probe[other as usize] = bag.pos;
                        candidates.push(other);
                    }
                }
            }
        }
        for other_pos in candidates {
            let other = &compact[other_pos as usize];
            let (small, large) = if bag.total <= other.total {
                (bag.total, other.total)
            } else {
                (other.total, bag.total)
            };
            // The intersection can never exceed the smaller bag.
            if f64::from(small) / f64::from(large) < cfg.theta {
                continue;
            }
            let x = &bags[bag.pos as usize];
            let y = &bags[other.pos as usize];
            let sim = similarity(x, y);
            if sim >= cfg.theta && x.segment != y.segment {
                pairs.push(ClonePair::canonical(
                    x.segment.clone(),
                    y.segment.clone(),
                    sim,
                    granularity,
                ));
            }
        }
        for &(id, _) in &bag.items[..bag.prefix_items] {
            postings.entry(id).or_default().push(bag.pos);
        }
    }

    pairs.sort_by(|p, q| p.sort_key().cmp(&q.sort_key()));
    pairs.dedup_by(|p, q| p == q);
    pairs
}

/// Full detection: drop undersized bags, partition by granularity, detect
/// each partition, then suppress containment-nested pairs so only the
/// smallest granularity of each clone survives.
pub fn detect_all(bags: &[TokenBag], cfg: &DetectorConfig) -> Vec<ClonePair> {
    let admitted: Vec<&TokenBag> = bags
        .iter()
        .filter(|b| b.total >= cfg.min_tokens.max(1))
        .filter(|b| match cfg.granularity_range {
            Some((lo, hi)) => (lo..=hi).contains(&b.segment.granularity),
            None => true,
        })
        .collect();

    let mut partitions: std::collections::BTreeMap<u32, Vec<TokenBag>> =
        std::collections::BTreeMap::new();
    for bag in admitted {
        partitions
            .entry(bag.segment.granularity)
            .or_default()
            .push(bag.clone());
    }

    let mut per_granularity: Vec<(u32, Vec<ClonePair>)> = partitions
        .into_par_iter()
        .map(|(g, bags)| (g, detect_partition(&bags, cfg)))
        .collect();
    per_granularity.sort_by_key(|(g, _)| *g);

    let pairs: Vec<ClonePair> = per_granularity
        .into_iter()
        .flat_map(|(_, pairs)| pairs)
        .collect();
    filter_overlaps(pairs)
}

fn contains(outer: &CodeSegment, inner: &CodeSegment) -> bool {
    outer.file == inner.file
        && outer.start_line <= inner.start_line
        && inner.end_line <= outer.end_line
}

/// Keeps a pair only when no kept pair of strictly smaller granularity
/// line-contains both of its segments (in either orientation). Output is in
/// canonical order.
pub fn filter_overlaps(mut pairs: Vec<ClonePair>) -> Vec<ClonePair> {
    pairs.sort_by(|p, q| {
        (p.granularity, p.sort_key()).cmp(&(q.granularity, q.sort_key()))
    });

    // Suppression only flows from smaller to larger granularities, and only
    // within the same unordered file pair.
    let mut kept: Vec<ClonePair> = Vec::new();
    let mut by_files: HashMap<(Arc<str>, Arc<str>), Vec<usize>> = HashMap::new();
    for pair in pairs {
        let key = (pair.a.file.clone(), pair.b.file.clone());
        let suppressed = by_files.get(&key).is_some_and(|candidates| {
            candidates.iter().any(|&k| {
                let p = &kept[k];
                p.granularity < pair.granularity
                    && ((contains(&p.a, &pair.a) && contains(&p.b, &pair.b))
                        || (contains(&p.a, &pair.b) && contains(&p.b, &pair.a)))
            })
        });
        if !suppressed {
            by_files.entry(key).or_default().push(kept.len());
            kept.push(pair);
        }
    }

    kept.sort_by(|p, q| {
        p.sort_key()
            .cmp(&q.sort_key())
            .then(p.granularity.cmp(&q.granularity))
    });
    kept
}
