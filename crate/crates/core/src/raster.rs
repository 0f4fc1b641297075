//! Raster ingestion and emission: PGM (P2/P5, maxval <= 255) and plain-text
//! '0'/'1' grids.
//!
//! Footprint maps conventionally render buildings dark, so the default
//! polarity maps gray values below the threshold to built form. Pass
//! [`Polarity::LightIsBuilt`] to flip that.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Default binarisation threshold for grayscale input.
pub const DEFAULT_THRESHOLD: u8 = 128;

/// Which side of the threshold counts as built form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarity {
    /// value < threshold => built (dark-on-light footprint maps).
    #[default]
    DarkIsBuilt,
    /// value >= threshold => built.
    LightIsBuilt,
}

/// On-disk grid encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    /// Binary PGM (P5), built = 0, open = 255.
    PgmBinary,
    /// ASCII PGM (P2), built = 0, open = 255.
    PgmAscii,
    /// Rows of '0'/'1' characters, LF line endings.
    Text,
}

/// Load a grid from a PGM (P2/P5) or plain-text file, binarising grayscale
/// values at `threshold` with the default dark-is-built polarity.
pub fn load_raster(path: impl AsRef<Path>, threshold: u8) -> Result<Grid> {
    load_raster_with(path, threshold, Polarity::DarkIsBuilt)
}

/// Load a grid with an explicit polarity.
pub fn load_raster_with(path: impl AsRef<Path>, threshold: u8, polarity: Polarity) -> Result<Grid> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_raster(&bytes, threshold, polarity)
}

/// Decode raster bytes; format is detected from the magic number
/// ("P2"/"P5" for PGM, anything else is treated as a text grid).
pub fn decode_raster(bytes: &[u8], threshold: u8, polarity: Polarity) -> Result<Grid> {
    if bytes.is_empty() {
        return Err(Error::EmptyInput);
    }
    match bytes.get(..2) {
        Some(b"P2") | Some(b"P5") => decode_pgm(bytes, threshold, polarity),
        _ => {
            parse_text_grid(std::str::from_utf8(bytes).map_err(|_| {
                Error::MalformedHeader("input is neither PGM nor UTF-8 text".into())
            })?)
        }
    }
}

/// Write a grid to disk in the given format.
pub fn save_raster(grid: &Grid, path: impl AsRef<Path>, format: RasterFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_raster(grid, format);
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Encode a grid as raster bytes. Built cells emit gray 0, open cells 255,
/// so a round trip through `decode_raster` at the default threshold and
/// polarity reproduces the grid exactly.
pub fn encode_raster(grid: &Grid, format: RasterFormat) -> Vec<u8> {
    match format {
        RasterFormat::PgmBinary => {
            let mut out = format!("P5\n{} {}\n255\n", grid.width(), grid.height()).into_bytes();
            out.extend(grid.cells().iter().map(|&c| if c == 1 { 0u8 } else { 255 }));
            out
        }
        RasterFormat::PgmAscii => {
            let mut out = format!("P2\n{} {}\n255\n", grid.width(), grid.height());
            for y in 0..grid.height() {
                let row: Vec<&str> = (0..grid.width())
                    .map(|x| if grid.get(x, y) == 1 { "0" } else { "255" })
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
        RasterFormat::Text => {
            let mut out = String::with_capacity((grid.width() + 1) * grid.height());
            for y in 0..grid.height() {
                for x in 0..grid.width() {
                    out.push(if grid.get(x, y) == 1 { '1' } else { '0' });
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// Parse a plain-text grid: one row of '0'/'1' per line. Characters map
/// directly to cell values regardless of threshold or polarity.
pub fn parse_text_grid(text: &str) -> Result<Grid> {
    let mut width = 0usize;
    let mut height = 0usize;
    let mut cells = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let mut row_len = 0usize;
        for ch in line.chars() {
            match ch {
                '0' => cells.push(0),
                '1' => cells.push(1),
                _ => {
                    return Err(Error::InvalidCell {
                        line: i + 1,
                        found: ch,
                    })
                }
            }
            row_len += 1;
        }
        if height == 0 {
            width = row_len;
        } else if row_len != width {
            return Err(Error::InconsistentRow {
                line: i + 1,
                expected: width,
                got: row_len,
            });
        }
        height += 1;
    }
    if width == 0 || height == 0 {
        return Err(Error::EmptyInput);
    }
    Grid::from_cells(width, height, cells)
}

fn decode_pgm(bytes: &[u8], threshold: u8, polarity: Polarity) -> Result<Grid> {
    let binary = bytes[1] == b'5';
    let mut pos = 2usize;

    let width = read_header_int(bytes, &mut pos)? as usize;
    let height = read_header_int(bytes, &mut pos)? as usize;
    let maxval = read_header_int(bytes, &mut pos)?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(Error::EmptyInput);
    }
    let n = width * height;

    let built = |v: u8| -> u8 {
        let dark = v < threshold;
        let is_built = match polarity {
            Polarity::DarkIsBuilt => dark,
            Polarity::LightIsBuilt => !dark,
        };
        is_built as u8
    };

    let cells: Vec<u8> = if binary {
        // Exactly one whitespace byte separates the header from pixel data.
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(Error::MalformedHeader(
                "missing whitespace after maxval".into(),
            ));
        }
        pos += 1;
        let data = &bytes[pos..];
        if data.len() < n {
            return Err(Error::TruncatedData {
                expected: n,
                got: data.len(),
            });
        }
        data[..n].iter().map(|&v| built(v)).collect()
    } else {
        let mut cells = Vec::with_capacity(n);
        for _ in 0..n {
            let v = read_header_int(bytes, &mut pos)?;
            if v > maxval {
                return Err(Error::MalformedHeader(format!(
                    "pixel value {v} exceeds maxval {maxval}"
                )));
            }
            cells.push(built(v as u8));
        }
        cells
    };

    Grid::from_cells(width, height, cells)
}

/// Read the next ASCII integer from a PGM header, skipping whitespace and
/// '#' comments.
fn read_header_int(bytes: &[u8], pos: &mut usize) -> Result<u32> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::MalformedHeader(format!(
            "expected integer at byte {start}"
        )));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .unwrap()
        .parse::<u32>()
        .map_err(|e| Error::MalformedHeader(format!("bad integer: {e}")))
}
