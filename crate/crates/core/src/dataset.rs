//! Morphospace assembly: labelled point collections, band classification,
//! k-means clustering, and the canonical CSV exchange format.
//!
//! CSV schema: `label,category,De,iPe,I,population,source`, floating values
//! with nine significant digits, UTF-8, LF line endings. Emitting a parsed
//! dataset reproduces the file byte for byte.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::metrics::MorphoPoint;
use crate::rng::Rng;

pub const CSV_HEADER: &str = "label,category,De,iPe,I,population,source";

/// One point plus its provenance (input file path or generator digest).
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub point: MorphoPoint,
    pub source: String,
}

/// Ordered collection of morphospace points with unique labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MorphoDataset {
    entries: Vec<DatasetEntry>,
}

impl MorphoDataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, point: MorphoPoint, source: impl Into<String>) -> Result<()> {
        if self.entries.iter().any(|e| e.point.label == point.label) {
            return Err(Error::DuplicateLabel(point.label));
        }
        self.entries.push(DatasetEntry {
            point,
            source: source.into(),
        });
        Ok(())
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn points(&self) -> impl Iterator<Item = &MorphoPoint> {
        self.entries.iter().map(|e| &e.point)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.entries.iter().any(|e| e.point.label == label)
    }

    /// Serialise to the canonical CSV text.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let p = &e.point;
            out.push_str(&csv_field(&p.label));
            out.push(',');
            out.push_str(&csv_field(p.category.as_deref().unwrap_or("")));
            out.push(',');
            out.push_str(&format_sig9(p.density));
            out.push(',');
            out.push_str(&format_sig9(p.permeability));
            out.push(',');
            out.push_str(&format_sig9(p.information));
            out.push(',');
            if let Some(pop) = p.population {
                out.push_str(&pop.to_string());
            }
            out.push(',');
            out.push_str(&csv_field(&e.source));
            out.push('\n');
        }
        out
    }

    /// Write the canonical CSV to a file.
    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Parse the canonical CSV text.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, head)) if head.trim_end_matches('\r') == CSV_HEADER => {}
            Some((_, head)) => {
                return Err(Error::CsvParse {
                    line: 1,
                    reason: format!("bad header {head:?}"),
                })
            }
            None => {
                return Err(Error::CsvParse {
                    line: 1,
                    reason: "empty file".into(),
                })
            }
        }

        let mut ds = MorphoDataset::new();
        for (i, line) in lines {
            let line_no = i + 1;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let fields = split_csv_line(line, line_no)?;
            if fields.len() != 7 {
                return Err(Error::CsvParse {
                    line: line_no,
                    reason: format!("expected 7 fields, got {}", fields.len()),
                });
            }
            let parse_coord = |s: &str, name: &str| -> Result<f64> {
                let v = s.parse::<f64>().map_err(|_| Error::CsvParse {
                    line: line_no,
                    reason: format!("bad {name} value {s:?}"),
                })?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::CsvParse {
                        line: line_no,
                        reason: format!("{name} value {s} outside [0, 1]"),
                    });
                }
                Ok(v)
            };
            let population = if fields[5].is_empty() {
                None
            } else {
                Some(fields[5].parse::<u64>().map_err(|_| Error::CsvParse {
                    line: line_no,
                    reason: format!("bad population {:?}", fields[5]),
                })?)
            };
            let point = MorphoPoint {
                label: fields[0].clone(),
                category: if fields[1].is_empty() {
                    None
                } else {
                    Some(fields[1].clone())
                },
                density: parse_coord(&fields[2], "De")?,
                permeability: parse_coord(&fields[3], "iPe")?,
                information: parse_coord(&fields[4], "I")?,
                population,
            };
            ds.push(point, fields[6].clone())
                .map_err(|e| Error::CsvParse {
                    line: line_no,
                    reason: e.to_string(),
                })?;
        }
        Ok(ds)
    }

    /// Load the canonical CSV from a file.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text)
    }
}

/// Format with nine significant digits, stable under reparse-and-reformat.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    let first = format!("{:.*}", sig9_precision(x), x);
    // Rounding can carry the value across a power of ten (0.9999999996
    // formats as "1.000000000"); reformat once at the new magnitude.
    let reparsed: f64 = first.parse().unwrap();
    let p = sig9_precision(reparsed);
    if p == sig9_precision(x) {
        first
    } else {
        format!("{:.*}", p, reparsed)
    }
}

fn sig9_precision(x: f64) -> usize {
    let exp = x.abs().log10().floor() as i32;
    (8 - exp).max(0) as usize
}

/// Quote a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn split_csv_line(line: &str, line_no: usize) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    loop {
        match chars.next() {
            None => {
                if quoted {
                    return Err(Error::CsvParse {
                        line: line_no,
                        reason: "unterminated quoted field".into(),
                    });
                }
                fields.push(field);
                return Ok(fields);
            }
            Some('"') if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            Some('"') if field.is_empty() => quoted = true,
            Some(',') if !quoted => {
                fields.push(std::mem::take(&mut field));
            }
            Some(c) => field.push(c),
        }
    }
}

// ---------------------------------------------------------------------------
// Band classification
// ---------------------------------------------------------------------------

/// An axis-aligned box in the morphospace cube.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct BandSpec {
    pub name: String,
    #[serde(alias = "De")]
    pub de: [f64; 2],
    #[serde(alias = "iPe")]
    pub ipe: [f64; 2],
    #[serde(alias = "I")]
    pub i: [f64; 2],
}

impl BandSpec {
    pub fn contains(&self, point: &MorphoPoint) -> bool {
        in_range(self.de, point.density)
            && in_range(self.ipe, point.permeability)
            && in_range(self.i, point.information)
    }

    fn validate(&self) -> Result<()> {
        for (axis, range) in [("de", self.de), ("ipe", self.ipe), ("i", self.i)] {
            if !(0.0..=1.0).contains(&range[0])
                || !(0.0..=1.0).contains(&range[1])
                || range[0] > range[1]
            {
                return Err(Error::InvalidBand {
                    name: self.name.clone(),
                    reason: format!("{axis} range [{}, {}] malformed", range[0], range[1]),
                });
            }
        }
        Ok(())
    }

    fn overlaps(&self, other: &BandSpec) -> bool {
        ranges_overlap(self.de, other.de)
            && ranges_overlap(self.ipe, other.ipe)
            && ranges_overlap(self.i, other.i)
    }
}

#[inline]
fn in_range(range: [f64; 2], v: f64) -> bool {
    v >= range[0] && v <= range[1]
}

#[inline]
fn ranges_overlap(a: [f64; 2], b: [f64; 2]) -> bool {
    a[0] <= b[1] && b[0] <= a[1]
}

/// The empirical regions of the morphospace cube: contemporary cities
/// cluster in the midrange urban band; non-urban settlements sit at very
/// low density and high permeability.
pub fn default_bands() -> Vec<BandSpec> {
    vec![
        BandSpec {
            name: "urban-band".into(),
            de: [0.35, 0.6],
            ipe: [0.25, 0.75],
            i: [0.2, 0.4],
        },
        BandSpec {
            name: "non-urban".into(),
            de: [0.0, 0.2],
            ipe: [0.75, 1.0],
            i: [0.0, 1.0],
        },
    ]
}

/// Name of the first band containing the point, else "unoccupied".
pub fn classify<'a>(point: &MorphoPoint, bands: &'a [BandSpec]) -> &'a str {
    bands
        .iter()
        .find(|b| b.contains(point))
        .map(|b| b.name.as_str())
        .unwrap_or("unoccupied")
}

/// A validated band table plus the band pairs that overlap. Overlaps are
/// legal (classification resolves them by first match) but callers may want
/// to warn about them.
#[derive(Debug, Clone)]
pub struct BandTable {
    pub bands: Vec<BandSpec>,
    pub overlaps: Vec<(String, String)>,
}

/// Parse a band table from JSON, validating every interval.
pub fn load_bands(text: &str) -> Result<BandTable> {
    let bands: Vec<BandSpec> =
        serde_json::from_str(text).map_err(|e| Error::BandParse(e.to_string()))?;
    for b in &bands {
        b.validate()?;
    }
    let mut overlaps = Vec::new();
    for (i, a) in bands.iter().enumerate() {
        for b in bands.iter().skip(i + 1) {
            if a.overlaps(b) {
                overlaps.push((a.name.clone(), b.name.clone()));
            }
        }
    }
    Ok(BandTable { bands, overlaps })
}

// ---------------------------------------------------------------------------
// Clustering
// ---------------------------------------------------------------------------

/// Seeded k-means on the (De, iPe, I) coordinates with k-means++ style
/// initialisation, an iteration cap of 100, and movement tolerance 1e-9.
/// Returns one cluster index per point, deterministic per seed.
pub fn cluster(ds: &MorphoDataset, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = ds.len();
    if k == 0 || k > n {
        return Err(Error::BadClusterCount { k, points: n });
    }
    let pts: Vec<[f64; 3]> = ds
        .points()
        .map(|p| [p.density, p.permeability, p.information])
        .collect();

    let mut rng = Rng::seed_from_u64(seed);
    let mut centers: Vec<[f64; 3]> = Vec::with_capacity(k);
    centers.push(pts[rng.next_index(n)]);
    let mut dist_sq: Vec<f64> = pts.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = dist_sq.iter().sum();
        let next = if total > 0.0 {
            // Sample proportionally to squared distance from nearest center.
            let mut target = rng.next_f64() * total;
            let mut chosen = n - 1;
            for (i, &d) in dist_sq.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // All points coincide with existing centers; pick uniformly.
            rng.next_index(n)
        };
        centers.push(pts[next]);
        for (i, p) in pts.iter().enumerate() {
            let d = sq_dist(p, &centers[centers.len() - 1]);
            if d < dist_sq[i] {
                dist_sq[i] = d;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for _ in 0..100 {
        for (i, p) in pts.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = sq_dist(p, center);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            assignment[i] = best;
        }

        let mut sums = vec![[0.0f64; 3]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in pts.iter().enumerate() {
            let c = assignment[i];
            counts[c] += 1;
            for a in 0..3 {
                sums[c][a] += p[a];
            }
        }
        let mut moved_sq = 0.0f64;
        for c in 0..k {
            if counts[c] == 0 {
                continue; // keep an emptied center where it was
            }
            let new_center = [
                sums[c][0] / counts[c] as f64,
                sums[c][1] / counts[c] as f64,
                sums[c][2] / counts[c] as f64,
            ];
            moved_sq = moved_sq.max(sq_dist(&new_center, &centers[c]));
            centers[c] = new_center;
        }
        if moved_sq.sqrt() <= 1e-9 {
            break;
        }
    }
    Ok(assignment)
}

#[inline]
fn sq_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}
