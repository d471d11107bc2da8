//! Shared helpers for integration tests: fixture paths, a deterministic
//! synthetic Java corpus generator, and random tree/bag builders.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grove::bags::{CodeSegment, TokenBag};
use grove::tree::{NodeId, NodeSpec, SourceFileTree, Token, TokenCategory};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn java_keywords() -> PathBuf {
    fixture("keywords/java.txt")
}

// ---------------------------------------------------------------- synthetic
// Java corpus

/// Method body templates; `$` marks identifiers that get a per-instance
/// suffix, `%1`..`%3` are literal slots. Every identifier is suffixed so two
/// instances of one template share only keywords, types and literals.
const TEMPLATES: &[&str] = &[
    "    static int $acc(int[] $values) {
        int $total = 0;
        int $spread = %1;
        for (int $i = 0; $i < $values.length; $i++) {
            int $shifted = $values[$i] * %2 + $spread;
            if ($shifted > $total) {
                $total += $shifted;
            } else {
                $total -= $shifted % %3;
            }
            $spread = $shifted - $total;
        }
        if ($spread < 0) {
            $spread = 0 - $spread;
        }
        return $total + $spread;
    }",
    "    static int $search(int[] $sorted, int $needle) {
        int $lo = 0;
        int $hi = $sorted.length - 1;
        int $probes = 0;
        while ($lo <= $hi) {
            int $mid = ($lo + $hi) / 2;
            $probes = $probes + 1;
            if ($sorted[$mid] == $needle) {
                return $mid + $probes * 0;
            } else if ($sorted[$mid] < $needle) {
                $lo = $mid + 1;
            } else {
                $hi = $mid - 1;
            }
        }
        if ($probes > %1) {
            return 0 - $probes;
        }
        return -%2;
    }",
    "    static void $order(int[] $items) {
        int $swaps = 0;
        for (int $i = 0; $i < $items.length; $i++) {
            for (int $j = $i + 1; $j < $items.length; $j++) {
                if ($items[$j] < $items[$i]) {
                    int $held = $items[$i];
                    $items[$i] = $items[$j];
                    $items[$j] = $held;
                    $swaps = $swaps + 1;
                }
            }
        }
        if ($swaps > $items.length * %1) {
            $items[0] = $swaps % %2;
        }
    }",
    "    static String $render(int $width, int $height) {
        StringBuilder $canvas = new StringBuilder();
        int $cells = 0;
        for (int $row = 0; $row < $height; $row++) {
            for (int $col = 0; $col < $width; $col++) {
                $canvas.append(($row + $col) % %1 == 0 ? \"%2\" : \"%3\");
                $cells = $cells + 1;
            }
            $canvas.append('\\n');
        }
        if ($cells > $width * $height) {
            $canvas.append($cells);
        }
        return $canvas.toString();
    }",
    "    static int $fold(int[] $input, int $seed) {
        int $state = $seed;
        int $rounds = 0;
        for (int $k = 0; $k < $input.length; $k++) {
            $state = $state * %1 + $input[$k];
            $state = $state ^ ($state >> %2);
            $state = $state & %3;
            $rounds = $rounds + 1;
        }
        if ($rounds != $input.length) {
            $state = $state + $rounds;
        }
        return $state;
    }",
    "    static double $mean(double[] $samples) {
        double $sum = 0.0;
        int $kept = 0;
        int $dropped = 0;
        for (int $n = 0; $n < $samples.length; $n++) {
            if ($samples[$n] > %1.0) {
                $sum += $samples[$n];
                $kept++;
            } else {
                $dropped++;
            }
        }
        if ($kept == 0) {
            return 0.0 + $dropped * 0.0;
        }
        return $sum / $kept;
    }",
    "    static int $clamp(int $value, int $floor, int $ceiling) {
        int $width = $ceiling - $floor;
        int $slack = $width / %1;
        if ($value < $floor) {
            return $floor - $slack + $slack;
        }
        if ($value > $ceiling) {
            return $ceiling + $slack - $slack;
        }
        if ($width < %2) {
            return $floor + $width / %3;
        }
        return $value;
    }",
    "    static long $weigh(long[] $loads) {
        long $heaviest = Long.MIN_VALUE;
        long $lightest = Long.MAX_VALUE;
        long $carried = 0;
        for (int $p = 0; $p < $loads.length; $p++) {
            long $load = $loads[$p] + %1;
            $carried = $carried + $load;
            if ($load > $heaviest) {
                $heaviest = $load;
            }
            if ($load < $lightest) {
                $lightest = $load;
            }
        }
        if ($carried < $lightest) {
            return $carried;
        }
        return $heaviest - $lightest;
    }",
];

fn instantiate(template: &str, instance: u32, rng: &mut ChaCha8Rng) -> String {
    let mut body = String::with_capacity(template.len() + 64);
    let mut chars = template.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '$' => {
                // Copy the identifier and append the instance suffix.
                while let Some(&n) = chars.peek() {
                    if n.is_ascii_alphanumeric() {
                        body.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                body.push_str(&format!("v{instance}"));
            }
            '%' => {
                // `%` followed by a digit is a literal slot; otherwise it is
                // Java's modulo operator.
                if chars.peek().is_some_and(|n| n.is_ascii_digit()) {
                    chars.next();
                    body.push_str(&rng.random_range(2..97u32).to_string());
                } else {
                    body.push(c);
                }
            }
            other => body.push(other),
        }
    }
    body
}

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub files: usize,
    pub methods_per_file: usize,
    /// Probability that a method is an exact copy of an earlier one.
    pub clone_probability: f64,
    pub seed: u64,
}

pub struct CorpusStats {
    pub files: usize,
    pub lines: usize,
}

/// Writes a deterministic, parseable Java corpus and returns its size.
pub fn synth_java_corpus(dir: &Path, spec: &CorpusSpec) -> CorpusStats {
    std::fs::create_dir_all(dir).expect("create corpus dir");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut instance = 0u32;
    let mut emitted_methods: Vec<String> = Vec::new();
    let mut lines = 0usize;

    for file_idx in 0..spec.files {
        let mut out = String::new();
        out.push_str("import java.util.List;\n");
        out.push_str("import java.util.ArrayList;\n\n");
        out.push_str(&format!("public class File{file_idx} {{\n"));
        for _ in 0..spec.methods_per_file {
            let method = if !emitted_methods.is_empty()
                && rng.random_bool(spec.clone_probability)
            {
                emitted_methods
                    .choose(&mut rng)
                    .expect("non-empty pool")
                    .clone()
            } else {
                instance += 1;
                let template = TEMPLATES[rng.random_range(0..TEMPLATES.len())];
                let method = instantiate(template, instance, &mut rng);
                emitted_methods.push(method.clone());
                method
            };
            out.push_str(&method);
            out.push_str("\n\n");
        }
        out.push_str("}\n");
        lines += out.lines().count();
        std::fs::write(dir.join(format!("File{file_idx}.java")), out).expect("write corpus file");
    }
    CorpusStats {
        files: spec.files,
        lines,
    }
}

// ------------------------------------------------------------- random bags

pub fn random_bag(
    rng: &mut ChaCha8Rng,
    file: &str,
    granularity: u32,
    size: u32,
    alphabet: u32,
) -> TokenBag {
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..size {
        let token = format!("t{:02}", rng.random_range(0..alphabet));
        *counts.entry(token).or_insert(0u32) += 1;
    }
    let start = rng.random_range(1..5000u32);
    TokenBag::new(
        CodeSegment {
            file: Arc::from(file),
            start_line: start,
            end_line: start + rng.random_range(0..200u32),
            granularity,
        },
        NodeId(rng.random_range(0..100_000)),
        counts.into_iter().map(|(t, c)| (Arc::from(t.as_str()), c)).collect(),
    )
}

// ------------------------------------------------------------ random trees

/// Builds a random fully-covering parse tree over a random token table:
/// every internal node's children tile its span exactly, so a recursive walk
/// is an independent oracle for span-based accounting.
pub fn random_tree(rng: &mut ChaCha8Rng, max_tokens: u32) -> SourceFileTree {
    let n_tokens = rng.random_range(0..=max_tokens);
    let tokens: Vec<Token> = (0..n_tokens)
        .map(|i| {
            let category = match rng.random_range(0..10u32) {
                0..=2 => TokenCategory::Keyword,
                3..=6 => TokenCategory::Identifier,
                7 => TokenCategory::Literal,
                _ => TokenCategory::Other,
            };
            Token {
                index: i,
                line: i / 3 + 1,
                column: i % 3 + 1,
                text: format!("w{i}"),
                category,
            }
        })
        .collect();

    let mut specs: Vec<NodeSpec> = Vec::new();
    specs.push(NodeSpec::internal("root", 0, n_tokens, vec![]));
    // Work queue of internal nodes to populate.
    let mut queue: Vec<usize> = vec![0];
    while let Some(parent) = queue.pop() {
        let (first, last) = (specs[parent].first, specs[parent].last);
        let len = last - first;
        if len == 0 {
            continue;
        }
        // Split the span into child pieces.
        let mut cursor = first;
        let mut children = Vec::new();
        while cursor < last {
            let remaining = last - cursor;
            let piece = rng.random_range(1..=remaining.min(6));
            let idx = specs.len();
            if piece == 1 && rng.random_bool(0.6) {
                specs.push(NodeSpec::terminal(cursor));
            } else {
                let rule = format!("r{}", rng.random_range(0..8u32));
                specs.push(NodeSpec {
                    rule,
                    first: cursor,
                    last: cursor + piece,
                    children: vec![],
                });
                // Nest a single-child chain sometimes to exercise merging.
                queue.push(idx);
            }
            children.push(NodeId(idx as u32));
            cursor += piece;
        }
        specs[parent].children = children;
    }

    SourceFileTree::new("rand.src", tokens, specs, NodeId(0)).expect("random tree is valid")
}
