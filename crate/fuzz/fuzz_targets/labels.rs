#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_gof::netgen::{labels_to_membership, parse_labels, LabelFile};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = parse_labels(text) {
        let tokens: Vec<&str> = match &file {
            LabelFile::Positional(labels) => labels.iter().map(String::as_str).collect(),
            LabelFile::Keyed(pairs) => pairs.iter().map(|(_, l)| l.as_str()).collect(),
        };
        let m = labels_to_membership(&tokens).expect("parsed labels map to a membership");
        assert_eq!(m.n(), tokens.len());
        assert!(m.is_proper());
    }
});
