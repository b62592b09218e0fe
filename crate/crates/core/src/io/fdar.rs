//! FDAR residual tensors: magic `FDAR`, version `u32 = 1`, then `u32`
//! n_frames, H, W, C and the little-endian `f32` payload in frame-major,
//! row-major, channel-last order. All integers are little-endian.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::reconstruct::ResidualTensor;

pub const MAGIC: [u8; 4] = *b"FDAR";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;

pub fn encode_residuals(t: &ResidualTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * t.data.len());
    out.extend_from_slice(&MAGIC);
    for v in [VERSION, t.n_frames as u32, t.height as u32, t.width as u32, t.channels as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in &t.data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4-byte slice"))
}

pub fn decode_residuals(bytes: &[u8]) -> Result<ResidualTensor> {
    if bytes.len() < 4 {
        return Err(Error::TruncatedFile {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("4-byte slice");
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedFile {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    let version = u32_at(bytes, 4);
    if version != VERSION {
        return Err(Error::VersionMismatch(version));
    }
    let dims: Vec<usize> = (0..4).map(|k| u32_at(bytes, 8 + 4 * k) as usize).collect();
    let count = dims.iter().map(|&d| d as u64).product::<u64>();
    let expected = HEADER_LEN as u64 + 4 * count;
    if (bytes.len() as u64) < expected {
        return Err(Error::TruncatedFile {
            expected,
            found: bytes.len() as u64,
        });
    }
    if (bytes.len() as u64) > expected {
        return Err(Error::InvalidParameter(format!(
            "FDAR payload has {} trailing bytes",
            bytes.len() as u64 - expected
        )));
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect();
    ResidualTensor::new(dims[0], dims[1], dims[2], dims[3], data)
}

pub fn write_residuals(path: &Path, t: &ResidualTensor) -> Result<()> {
    fs::write(path, encode_residuals(t)).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn read_residuals(path: &Path) -> Result<ResidualTensor> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    decode_residuals(&bytes).map_err(|e| match e {
        Error::InvalidParameter(reason) => Error::CorruptFile {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    })
}
