#![no_main]

use libfuzzer_sys::fuzz_target;

use denumerant::input::parse_coefficients;
use denumerant::EquationSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(coefficients) = parse_coefficients(text) {
        assert!(!coefficients.is_empty());
        assert!(coefficients.iter().all(|&a| a > 0));
        let spec = EquationSpec::new(coefficients, None).expect("parsed coefficients form a spec");
        for (&a, d) in spec.coefficients().iter().zip(spec.radices()) {
            assert_eq!(&(d * a), spec.modulus());
        }
    }
});
