#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_gof::harness::ExperimentSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = ExperimentSpec::from_json(text) {
        let _ = spec.validate();
        let again = serde_json::to_string(&spec).expect("spec serializes");
        let back = ExperimentSpec::from_json(&again).expect("serialized spec parses");
        assert_eq!(back, spec);
    }
});
