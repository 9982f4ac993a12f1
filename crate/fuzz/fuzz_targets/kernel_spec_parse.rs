#![no_main]

use libfuzzer_sys::fuzz_target;
use tvsam::operators::make_kernel;
use tvsam::KernelSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<KernelSpec>() else {
        return;
    };
    let round: KernelSpec = spec.to_string().parse().expect("display output parses");
    assert_eq!(round, spec);
    // keep sampling bounded; huge sizes are valid but slow
    let small = match spec {
        KernelSpec::Gaussian { size, .. } | KernelSpec::Average { size } => size <= 101,
        KernelSpec::Motion { len, .. } => len <= 101.0,
        KernelSpec::Delta => true,
    };
    if small {
        let k = spec.sample().expect("parsed specs are valid");
        let total: f64 = k.values.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        let _ = make_kernel(&spec, (128, 128));
    }
});
