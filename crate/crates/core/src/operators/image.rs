use crate::error::{Result, TvError};

/// A real-valued image stored channel-planar, column-major inside each plane.
///
/// Pixel `(row, col)` of channel `c` lives at `c·h·w + col·h + row`, so the
/// horizontal neighbour of linear index `i` is `i + h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(TvError::InvalidParameter(format!(
                "image dimensions must be positive, got {height}x{width}x{channels}"
            )));
        }
        let expected = height
            .checked_mul(width)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| TvError::InvalidParameter("image dimensions overflow".into()))?;
        crate::error::check_len("image data", expected, data.len())?;
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, channels: usize, value: f64) -> Result<Self> {
        let n = height * width * channels;
        Self::new(height, width, channels, vec![value; n])
    }

    /// Builds an image from a closure evaluated at `(row, col, channel)`.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width * channels);
        for c in 0..channels {
            for col in 0..width {
                for row in 0..height {
                    data.push(f(row, col, c));
                }
            }
        }
        Self::new(height, width, channels, data)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixels(&self) -> usize {
        self.height * self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize, channel: usize) -> f64 {
        self.data[self.index(row, col, channel)]
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize, channel: usize) -> usize {
        channel * self.height * self.width + col * self.height + row
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let n = self.pixels();
        &self.data[c * n..(c + 1) * n]
    }

    /// Same shape, new pixel data.
    pub fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::new(self.height, self.width, self.channels, data)
    }

    /// Centered crop to at most `max_h`×`max_w`.
    pub fn center_crop(&self, max_h: usize, max_w: usize) -> Self {
        let h = self.height.min(max_h);
        let w = self.width.min(max_w);
        let r0 = (self.height - h) / 2;
        let c0 = (self.width - w) / 2;
        Self::from_fn(h, w, self.channels, |r, c, ch| self.get(r0 + r, c0 + c, ch))
            .expect("crop of a valid image is valid")
    }
}
