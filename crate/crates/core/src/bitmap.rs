//! Portable bitmaps (PBM) of table bit patterns.
//!
//! * Row bits: one raster line per row `a` in the range; row `a` shows
//!   `a * 1, ..., a * 2^n`, each written as `n + 1` bits, most significant
//!   first.
//! * Period grid: one column per row `a` in the range and one raster line
//!   per `log2 p` in `0..=n`; pixel `(a - lo, log2 p_a)` is set.
//!
//! Pixels are 1 = black. Output depends only on the spec.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::table::CompressedTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitmapKind {
    RowBits,
    PeriodGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbmFormat {
    /// `P1`, ASCII.
    Plain,
    /// `P4`, packed bits.
    Raw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitmapSpec {
    pub kind: BitmapKind,
    /// Rows `a` of `A'_n` to draw.
    pub rows: RangeInclusive<u64>,
    pub format: PbmFormat,
}

/// A black-and-white raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Raster {
    pub fn new(width: usize, height: usize) -> Self {
        Raster {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize) {
        self.bits[y * self.width + x] = true;
    }

    fn line(&self, y: usize) -> &[bool] {
        &self.bits[y * self.width..(y + 1) * self.width]
    }

    pub fn to_pbm(&self, format: PbmFormat) -> Vec<u8> {
        match format {
            PbmFormat::Plain => {
                let mut s = format!("P1\n{} {}\n", self.width, self.height);
                for y in 0..self.height {
                    // 35 pixels per text line keeps lines under 70 characters.
                    for chunk in self.line(y).chunks(35) {
                        let cells: Vec<&str> = chunk.iter().map(|&b| if b { "1" } else { "0" }).collect();
                        let _ = writeln!(s, "{}", cells.join(" "));
                    }
                }
                s.into_bytes()
            }
            PbmFormat::Raw => {
                let mut out = format!("P4\n{} {}\n", self.width, self.height).into_bytes();
                for y in 0..self.height {
                    for chunk in self.line(y).chunks(8) {
                        let byte = chunk
                            .iter()
                            .enumerate()
                            .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)));
                        out.push(byte);
                    }
                }
                out
            }
        }
    }
}

pub fn render(t: &CompressedTable, spec: &BitmapSpec) -> Result<Raster> {
    let level = t.level();
    let (lo, hi) = (*spec.rows.start(), *spec.rows.end());
    if lo > hi {
        return Err(Error::Precondition(format!("empty row range {lo}..={hi}")));
    }
    level.check_prime(lo)?;
    level.check_prime(hi)?;
    let count = (hi - lo + 1) as usize;
    let n = level.get() as usize;
    match spec.kind {
        BitmapKind::RowBits => {
            let top = level.size() as usize;
            let bits = n + 1;
            let mut r = Raster::new(top * bits, count);
            for (y, a) in (lo..=hi).enumerate() {
                for b in 1..=top {
                    let v = t.get(a, b as u64);
                    for k in 0..bits {
                        if (v >> (bits - 1 - k)) & 1 == 1 {
                            r.set((b - 1) * bits + k, y);
                        }
                    }
                }
            }
            Ok(r)
        }
        BitmapKind::PeriodGrid => {
            let mut r = Raster::new(count, n + 1);
            for (x, a) in (lo..=hi).enumerate() {
                r.set(x, t.period_log(a) as usize);
            }
            Ok(r)
        }
    }
}

pub fn render_pbm(t: &CompressedTable, spec: &BitmapSpec) -> Result<Vec<u8>> {
    Ok(render(t, spec)?.to_pbm(spec.format))
}
