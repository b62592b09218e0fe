//! Binary greymap (P5) images with 8-bit samples.

/// Decoded image: `height x width` row-major samples with their maxval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Greymap {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub data: Vec<u8>,
}

impl Greymap {
    /// Samples scaled to `[0, 1]` by `maxval`.
    pub fn to_unit(&self) -> Vec<f64> {
        let m = self.maxval as f64;
        self.data.iter().map(|&v| v as f64 / m).collect()
    }

    /// Quantise `[0, 1]` values to maxval 255.
    pub fn from_unit(width: usize, height: usize, values: &[f64]) -> Self {
        let data = values
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect();
        Self {
            width,
            height,
            maxval: 255,
            data,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, String> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("expected {what} in header"))
    }
}

/// Parse a P5 image. Errors are plain descriptions; callers attach the path.
pub fn decode(bytes: &[u8]) -> Result<Greymap, String> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err("not a binary PGM (missing P5 magic)".into());
    }
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(format!("empty image {width}x{height}"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(format!("maxval {maxval} unsupported (need 1..=255)"));
    }
    match bytes.get(cur.pos) {
        Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err("missing whitespace after maxval".into()),
    }
    let need = width * height;
    let data = &bytes[cur.pos..];
    if data.len() < need {
        return Err(format!("raster has {} bytes, need {need}", data.len()));
    }
    let data = data[..need].to_vec();
    if let Some(v) = data.iter().find(|&&v| v as usize > maxval) {
        return Err(format!("sample {v} exceeds maxval {maxval}"));
    }
    Ok(Greymap {
        width,
        height,
        maxval: maxval as u16,
        data,
    })
}

pub fn encode(img: &Greymap) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    out.extend_from_slice(&img.data);
    out
}
