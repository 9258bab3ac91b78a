//! Binary PGM (P5) and PBM (P4) mask serialization.
//!
//! Canonical output: `P5\n<w> <h>\n255\n` with 0 = background and 255 =
//! foreground, or `P4\n<w> <h>\n` with bit 1 = foreground (rows padded to
//! whole bytes, most significant bit first). Readers accept comments and
//! any P5 value >= 128 as foreground, so files written by this tool
//! round-trip byte-identically.

use anyhow::{bail, Context, Result};
use l1tv_core::{BinaryMask, GridGeom, Rational};
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmFormat {
    Pgm,
    Pbm,
}

impl PnmFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("pbm") => PnmFormat::Pbm,
            _ => PnmFormat::Pgm,
        }
    }
}

pub fn encode_pgm(mask: &BinaryMask) -> Vec<u8> {
    let (w, h) = (mask.geom().width(), mask.geom().height());
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.reserve((w as usize) * (h as usize));
    for y in 0..h {
        for x in 0..w {
            out.push(if mask.get(x, y) { 255 } else { 0 });
        }
    }
    out
}

pub fn encode_pbm(mask: &BinaryMask) -> Vec<u8> {
    let (w, h) = (mask.geom().width(), mask.geom().height());
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = (w as usize).div_ceil(8);
    for y in 0..h {
        let mut row = vec![0u8; row_bytes];
        for x in 0..w {
            if mask.get(x, y) {
                row[(x as usize) / 8] |= 0x80 >> (x % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}

struct Tokenizer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokenizer<'a> {
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

    fn next_uint(&mut self) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            bail!("expected an integer in PNM header");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos])?;
        Ok(s.parse()?)
    }

    /// Consumes exactly one whitespace byte separating header and raster.
    fn expect_single_space(&mut self) -> Result<()> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Ok(())
        } else {
            bail!("missing whitespace before PNM raster")
        }
    }
}

/// Decodes P5 or P4 bytes into `(width, height, row-major foreground bits)`.
pub fn decode(bytes: &[u8]) -> Result<(u32, u32, Vec<bool>)> {
    if bytes.len() < 2 {
        bail!("not a PNM file");
    }
    let magic = &bytes[..2];
    let mut tk = Tokenizer { bytes, pos: 2 };
    match magic {
        b"P5" => {
            let w = tk.next_uint()?;
            let h = tk.next_uint()?;
            let maxval = tk.next_uint()?;
            if maxval == 0 || maxval > 255 {
                bail!("unsupported PGM maxval {maxval} (one byte per sample required)");
            }
            tk.expect_single_space()?;
            let need = (w as usize) * (h as usize);
            let raster = &bytes[tk.pos..];
            if raster.len() < need {
                bail!("PGM raster truncated: {} of {need} bytes", raster.len());
            }
            Ok((w, h, raster[..need].iter().map(|&v| v >= 128).collect()))
        }
        b"P4" => {
            let w = tk.next_uint()?;
            let h = tk.next_uint()?;
            tk.expect_single_space()?;
            let row_bytes = (w as usize).div_ceil(8);
            let need = row_bytes * (h as usize);
            let raster = &bytes[tk.pos..];
            if raster.len() < need {
                bail!("PBM raster truncated: {} of {need} bytes", raster.len());
            }
            let mut bits = Vec::with_capacity((w as usize) * (h as usize));
            for y in 0..h as usize {
                let row = &raster[y * row_bytes..(y + 1) * row_bytes];
                for x in 0..w as usize {
                    bits.push(row[x / 8] & (0x80 >> (x % 8)) != 0);
                }
            }
            Ok((w, h, bits))
        }
        _ => bail!(
            "unsupported PNM magic {:?} (P5 and P4 only)",
            String::from_utf8_lossy(magic)
        ),
    }
}

pub fn read_mask(path: &Path, spacing: Rational) -> Result<BinaryMask> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let (w, h, bits) = decode(&bytes).with_context(|| format!("decoding {}", path.display()))?;
    let geom = GridGeom::with_spacing(w, h, spacing)?;
    Ok(BinaryMask::from_fn(geom, |x, y| bits[(y * w + x) as usize]))
}

/// Write-temp-rename so partially written files never appear at the target
/// path.
pub fn write_bytes_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn write_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    let bytes = match PnmFormat::from_path(path) {
        PnmFormat::Pgm => encode_pgm(mask),
        PnmFormat::Pbm => encode_pbm(mask),
    };
    write_bytes_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_mask(w: u32, h: u32) -> BinaryMask {
        let g = GridGeom::new(w, h).unwrap();
        BinaryMask::from_fn(g, |x, y| (x * 7 + y * 3) % 4 == 0)
    }

    #[test]
    fn pgm_roundtrip_is_byte_identical() {
        let m = sample_mask(13, 9);
        let bytes = encode_pgm(&m);
        let (w, h, bits) = decode(&bytes).unwrap();
        assert_eq!((w, h), (13, 9));
        let g = GridGeom::new(w, h).unwrap();
        let back = BinaryMask::from_fn(g, |x, y| bits[(y * w + x) as usize]);
        assert_eq!(back, m);
        assert_eq!(encode_pgm(&back), bytes);
    }

    #[test]
    fn pbm_roundtrip_is_byte_identical() {
        // Width not divisible by 8 exercises row padding.
        let m = sample_mask(13, 5);
        let bytes = encode_pbm(&m);
        let (w, h, bits) = decode(&bytes).unwrap();
        assert_eq!((w, h), (13, 5));
        let g = GridGeom::new(w, h).unwrap();
        let back = BinaryMask::from_fn(g, |x, y| bits[(y * w + x) as usize]);
        assert_eq!(back, m);
        assert_eq!(encode_pbm(&back), bytes);
    }

    #[test]
    fn pgm_threshold_at_128_and_comments() {
        let bytes = b"P5\n# a comment\n2 2\n255\n"
            .iter()
            .copied()
            .chain([0u8, 127, 128, 255])
            .collect::<Vec<_>>();
        let (_, _, bits) = decode(&bytes).unwrap();
        assert_eq!(bits, vec![false, false, true, true]);
    }

    #[test]
    fn rejects_two_byte_pgm_and_truncation() {
        assert!(decode(b"P5\n2 2\n65535\n\0\0\0\0\0\0\0\0").is_err());
        assert!(decode(b"P5\n4 4\n255\n\0\0").is_err());
        assert!(decode(b"P6\n1 1\n255\n\0\0\0").is_err());
    }
}
