#![no_main]

use libfuzzer_sys::fuzz_target;
use tvsam::imaging::netpbm::{decode, encode, parse_header};

fuzz_target!(|data: &[u8]| {
    let header = parse_header(data);
    match decode(data) {
        Ok(image) => {
            let h = header.expect("decodable input has a valid header");
            assert_eq!(
                (image.height(), image.width(), image.channels()),
                (h.height, h.width, h.channels)
            );
            assert!(image.data().iter().all(|v| (0.0..=1.0).contains(v)));
            // re-encoding at the same depth reproduces the samples
            let bytes = encode(&image, h.maxval as u16).unwrap();
            let again = decode(&bytes).unwrap();
            assert_eq!(again.data().len(), image.data().len());
        }
        Err(_) => {}
    }
});
