#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_gof::netgen::{format_edge_list, parse_edge_list, EdgeListOptions, Indexing};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // A node header allocates every declared node up front.
    let huge_header = text.lines().any(|l| {
        l.trim()
            .strip_prefix("# nodes:")
            .and_then(|c| c.trim().parse::<u64>().ok())
            .is_some_and(|c| c > 1 << 20)
    });
    if huge_header {
        return;
    }
    for indexing in [Indexing::Zero, Indexing::One] {
        for ignore_self_loops in [false, true] {
            let opts = EdgeListOptions {
                indexing,
                ignore_self_loops,
            };
            if let Ok(list) = parse_edge_list(text, opts) {
                // Cap the size so the round trip stays cheap.
                if list.graph.n() <= 10_000 {
                    let again = parse_edge_list(&format_edge_list(&list.graph), EdgeListOptions::default())
                        .expect("formatted edge list parses");
                    assert_eq!(again.graph, list.graph);
                }
            }
        }
    }
});
