//! Round-trip and validation properties of the PT-IR codec.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    /// emit → ingest → emit is byte-identical and reproduces the tree.
    #[test]
    fn round_trip_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = common::random_tree(&mut rng, 60);
        let doc = grove::ptir::emit(&tree);
        let back = grove::ptir::ingest(&doc).expect("emitted documents ingest");
        prop_assert_eq!(&back, &tree);
        prop_assert_eq!(grove::ptir::emit(&back), doc);
    }

    /// Node sizes recomputed at ingest equal a brute-force traversal count.
    #[test]
    fn sizes_match_bruteforce_traversal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = common::random_tree(&mut rng, 60);
        for node in tree.nodes() {
            let brute = tree
                .span_tokens(node)
                .iter()
                .filter(|t| t.category.bag_eligible())
                .count() as u32;
            prop_assert_eq!(node.size, brute);
        }
    }
}

#[test]
fn committed_fixture_documents_ingest_cleanly() {
    for name in ["Matrix", "Grid", "MatrixNotes", "ListOps"] {
        let doc = std::fs::read(common::fixture(&format!("ptir/{name}.ptir"))).unwrap();
        let tree = grove::ptir::ingest_bytes(&doc).unwrap();
        assert!(tree.tokens().len() > 10, "{name} has a real token table");
        assert_eq!(grove::ptir::emit(&tree).as_bytes(), doc.as_slice());
    }
}
