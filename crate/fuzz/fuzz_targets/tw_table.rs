#![no_main]

use libfuzzer_sys::fuzz_target;
use sbm_gof::gof::Tw1Distribution;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(dist) = Tw1Distribution::parse(text) {
        for p in [1e-6, 0.01, 0.5, 0.975, 1.0 - 1e-6] {
            if let Ok(q) = dist.quantile(p) {
                assert!(q.is_finite());
            }
        }
        let c = dist.cdf(0.0);
        assert!((0.0..=1.0).contains(&c));
    }
});
