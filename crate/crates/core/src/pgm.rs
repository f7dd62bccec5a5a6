//! Netpbm gray maps: plain (`P2`) and raw (`P5`, 8 or 16 bit big-endian).

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    Plain,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    /// Row-major.
    pub pixels: Vec<u16>,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Image(msg.into())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(format!("expected {what} at byte {start}")))
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, max_value: u16, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(err("image must be nonempty"));
        }
        if max_value == 0 {
            return Err(err("max value must be positive"));
        }
        if pixels.len() != width * height {
            return Err(err(format!("{} pixels for a {width}x{height} image", pixels.len())));
        }
        if let Some(p) = pixels.iter().find(|&&p| p > max_value) {
            return Err(err(format!("pixel {p} exceeds max value {max_value}")));
        }
        Ok(GrayImage { width, height, max_value, pixels })
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    /// The `w x h` window with top-left corner `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<GrayImage> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(err("crop window outside image"));
        }
        let pixels = (y0..y0 + h).flat_map(|y| (x0..x0 + w).map(move |x| (x, y))).map(|(x, y)| self.get(x, y)).collect();
        GrayImage::new(w, h, self.max_value, pixels)
    }

    pub fn parse(bytes: &[u8]) -> Result<GrayImage> {
        let format = match bytes.get(..2) {
            Some(b"P2") => PgmFormat::Plain,
            Some(b"P5") => PgmFormat::Raw,
            _ => return Err(err("not a P2 or P5 gray map")),
        };
        let mut h = Header { bytes, pos: 2 };
        let width = h.number("width")?;
        let height = h.number("height")?;
        let max = h.number("max value")?;
        if max == 0 || max > u16::MAX as usize {
            return Err(err(format!("max value {max} out of range")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| err("image dimensions overflow"))?;
        let pixels = match format {
            PgmFormat::Plain => (0..count)
                .map(|_| {
                    let v = h.number("pixel")?;
                    u16::try_from(v).map_err(|_| err(format!("pixel {v} out of range")))
                })
                .collect::<Result<Vec<_>>>()?,
            PgmFormat::Raw => {
                if !bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
                    return Err(err("missing separator before raster"));
                }
                let data = &bytes[h.pos + 1..];
                let wide = max > 255;
                let need = count * if wide { 2 } else { 1 };
                if data.len() < need {
                    return Err(err(format!("raster has {} bytes, need {need}", data.len())));
                }
                if wide {
                    data[..need].chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
                } else {
                    data[..need].iter().map(|&b| b as u16).collect()
                }
            }
        };
        GrayImage::new(width, height, max as u16, pixels)
    }

    pub fn to_bytes(&self, format: PgmFormat) -> Vec<u8> {
        match format {
            PgmFormat::Plain => {
                let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.max_value);
                for row in self.pixels.chunks(self.width) {
                    let line: Vec<String> = row.iter().map(u16::to_string).collect();
                    out.push_str(&line.join(" "));
                    out.push('\n');
                }
                out.into_bytes()
            }
            PgmFormat::Raw => {
                let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.max_value).into_bytes();
                if self.max_value > 255 {
                    out.extend(self.pixels.iter().flat_map(|p| p.to_be_bytes()));
                } else {
                    out.extend(self.pixels.iter().map(|&p| p as u8));
                }
                out
            }
        }
    }

    pub fn read_file(path: &Path) -> Result<GrayImage> {
        let bytes = std::fs::read(path).map_err(|e| err(format!("{}: {e}", path.display())))?;
        GrayImage::parse(&bytes)
    }

    pub fn write_file(&self, path: &Path, format: PgmFormat) -> Result<()> {
        std::fs::write(path, self.to_bytes(format))?;
        Ok(())
    }
}
