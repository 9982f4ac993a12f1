//! Binary NetPBM (P5 grayscale, P6 color) with 8- or 16-bit samples.

use std::path::Path;

use thiserror::Error;

use crate::operators::Image;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NetpbmError {
    #[error("unsupported magic number {0:?}, expected P5 or P6")]
    BadMagic(String),
    #[error("malformed header: {0}")]
    Header(&'static str),
    #[error("maxval {0} outside 1..=65535")]
    MaxVal(u32),
    #[error("image size {width}x{height} is invalid")]
    Size { width: usize, height: usize },
    #[error("truncated payload: need {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("cannot encode a {0}-channel image")]
    Channels(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Header fields of a binary NetPBM file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub channels: usize,
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    /// Byte offset of the first sample.
    pub data_offset: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, NetpbmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u32))
                .ok_or(NetpbmError::Header(what))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(NetpbmError::Header(what));
        }
        Ok(value)
    }
}

pub fn parse_header(bytes: &[u8]) -> Result<Header, NetpbmError> {
    if bytes.len() < 2 {
        return Err(NetpbmError::Header("missing magic number"));
    }
    let channels = match &bytes[..2] {
        b"P5" => 1,
        b"P6" => 3,
        other => {
            return Err(NetpbmError::BadMagic(
                String::from_utf8_lossy(other).into_owned(),
            ))
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    match cur.bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(NetpbmError::Header("no separator after magic number")),
    }
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(NetpbmError::Size { width, height });
    }
    if maxval == 0 || maxval > 65535 {
        return Err(NetpbmError::MaxVal(maxval));
    }
    match cur.bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(NetpbmError::Header("no single whitespace before raster")),
    }
    Ok(Header {
        channels,
        width,
        height,
        maxval,
        data_offset: cur.pos,
    })
}

/// Decodes a P5/P6 byte stream; samples are divided by maxval.
pub fn decode(bytes: &[u8]) -> Result<Image, NetpbmError> {
    let h = parse_header(bytes)?;
    let bytes_per_sample = if h.maxval > 255 { 2 } else { 1 };
    let size_err = NetpbmError::Size {
        width: h.width,
        height: h.height,
    };
    let samples = h
        .width
        .checked_mul(h.height)
        .and_then(|n| n.checked_mul(h.channels))
        .ok_or(size_err.clone())?;
    let expected = samples.checked_mul(bytes_per_sample).ok_or(size_err)?;
    let payload = &bytes[h.data_offset..];
    if payload.len() < expected {
        return Err(NetpbmError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let maxval = h.maxval as f64;
    let plane = h.width * h.height;
    let mut data = vec![0.0; samples];
    for (s, chunk) in payload[..expected]
        .chunks_exact(bytes_per_sample)
        .enumerate()
    {
        let raw = if bytes_per_sample == 2 {
            u16::from_be_bytes([chunk[0], chunk[1]]) as f64
        } else {
            chunk[0] as f64
        };
        // file order: row-major, channels interleaved
        let c = s % h.channels;
        let pix = s / h.channels;
        let (row, col) = (pix / h.width, pix % h.width);
        data[c * plane + col * h.height + row] = raw / maxval;
    }
    Ok(Image::new(h.height, h.width, h.channels, data).expect("dimensions checked"))
}

/// Encodes a 1- or 3-channel image, clamping to [0,1] and rounding to `maxval`.
pub fn encode(image: &Image, maxval: u16) -> Result<Vec<u8>, NetpbmError> {
    if maxval == 0 {
        return Err(NetpbmError::MaxVal(0));
    }
    let magic = match image.channels() {
        1 => "P5",
        3 => "P6",
        c => return Err(NetpbmError::Channels(c)),
    };
    let mut out = format!("{magic}\n{} {}\n{maxval}\n", image.width(), image.height()).into_bytes();
    let wide = maxval > 255;
    let m = maxval as f64;
    for row in 0..image.height() {
        for col in 0..image.width() {
            for c in 0..image.channels() {
                let v = image.get(row, col, c);
                let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
                let q = (v * m).round() as u16;
                if wide {
                    out.extend_from_slice(&q.to_be_bytes());
                } else {
                    out.push(q as u8);
                }
            }
        }
    }
    Ok(out)
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Image, NetpbmError> {
    let bytes = std::fs::read(path).map_err(|e| NetpbmError::Io(e.to_string()))?;
    decode(&bytes)
}

pub fn save_image(image: &Image, path: impl AsRef<Path>, maxval: u16) -> Result<(), NetpbmError> {
    let bytes = encode(image, maxval)?;
    std::fs::write(path, bytes).map_err(|e| NetpbmError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_bit_full_scale() {
        let img = decode(b"P5\n1 1\n255\n\xff").unwrap();
        assert_eq!(img.data(), &[1.0]);
    }

    #[test]
    fn comments_and_layout() {
        // 3 wide, 2 tall: rows [0 1 2] / [3 4 5]
        let mut bytes = b"P5 # comment\n3 # w\n2\n5\n".to_vec();
        bytes.extend_from_slice(&[0, 1, 2, 3, 4, 5]);
        let img = decode(&bytes).unwrap();
        assert_eq!((img.height(), img.width()), (2, 3));
        assert_eq!(img.get(0, 2, 0), 2.0 / 5.0);
        assert_eq!(img.get(1, 0, 0), 3.0 / 5.0);
        // column-major storage
        assert_eq!(img.data()[1], 3.0 / 5.0);
    }

    #[test]
    fn sixteen_bit_big_endian_color() {
        let mut bytes = b"P6\n1 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0xff, 0xff, 0x00, 0x00, 0x80, 0x00]);
        let img = decode(&bytes).unwrap();
        assert_eq!(img.channels(), 3);
        assert_eq!(img.get(0, 0, 0), 1.0);
        assert_eq!(img.get(0, 0, 1), 0.0);
        assert!((img.get(0, 0, 2) - 32768.0 / 65535.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            decode(b"P3\n1 1\n255\n0"),
            Err(NetpbmError::BadMagic(_))
        ));
        assert!(matches!(
            decode(b"P5\n1 1\n0\n\0"),
            Err(NetpbmError::MaxVal(0))
        ));
        assert!(matches!(
            decode(b"P5\n1 1\n70000\n\0"),
            Err(NetpbmError::MaxVal(70000))
        ));
        assert!(matches!(
            decode(b"P5\n0 1\n255\n"),
            Err(NetpbmError::Size { .. })
        ));
        assert!(matches!(
            decode(b"P5\n2 2\n255\n\0\0"),
            Err(NetpbmError::Truncated {
                expected: 4,
                found: 2
            })
        ));
        assert!(matches!(
            decode(b"P5\nx 2\n255\n"),
            Err(NetpbmError::Header(_))
        ));
        assert!(matches!(decode(b"P5"), Err(NetpbmError::Header(_))));
        assert!(matches!(
            decode(b"P5\n99999999999 2\n255\n"),
            Err(NetpbmError::Header(_))
        ));
    }

    #[test]
    fn huge_declared_size_is_rejected_without_allocating() {
        let err = decode(b"P6\n4000000000 4000000000\n65535\n\0").unwrap_err();
        assert!(matches!(
            err,
            NetpbmError::Size { .. } | NetpbmError::Truncated { .. }
        ));
    }

    #[test]
    fn sixteen_bit_round_trip_error_bound() {
        let img = Image::filled(4, 5, 1, 0.5).unwrap();
        let back = decode(&encode(&img, 65535).unwrap()).unwrap();
        for (a, b) in img.data().iter().zip(back.data()) {
            assert!((a - b).abs() <= 1.0 / 131070.0);
        }
    }

    #[test]
    fn encode_clamps() {
        let img = Image::new(1, 3, 1, vec![-0.5, 2.0, f64::NAN]).unwrap();
        let bytes = encode(&img, 255).unwrap();
        assert_eq!(&bytes[bytes.len() - 3..], &[0, 255, 0]);
        assert!(encode(&Image::filled(1, 1, 2, 0.0).unwrap(), 255).is_err());
    }
}
