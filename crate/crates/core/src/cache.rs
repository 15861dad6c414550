//! Row-cache files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "LAVR1"            5 bytes
//! n                  1 byte
//! count = 2^n        8 bytes
//! count times:       p_a (8 bytes), then p_a values of a * 1 .. a * p_a
//! ```
//!
//! Rows appear in order `a = 1, ..., 2^n`. Nothing read from a file is
//! trusted: the decoded rows must form the unique table satisfying the
//! defining recursion.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::error::Error;
use crate::level::{Level, MAX_LEVEL};
use crate::table::CompressedTable;

pub const MAGIC: &[u8; 5] = b"LAVR1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("not a row cache (bad magic)")]
    BadMagic,
    #[error("cache truncated at byte {0}")]
    Truncated(usize),
    #[error("{0} unexpected bytes after the last row")]
    TrailingBytes(usize),
    #[error("invalid cache contents: {0}")]
    Invalid(#[from] Error),
}

pub fn encode(t: &CompressedTable) -> Vec<u8> {
    let level = t.level();
    let top = level.size();
    let mut out = Vec::with_capacity(14 + 8 * (top as usize + t.stored_entries() as usize + top as usize));
    out.extend_from_slice(MAGIC);
    out.push(level.get() as u8);
    out.extend_from_slice(&top.to_le_bytes());
    for a in 1..=top {
        let row = t.row(a);
        out.extend_from_slice(&(row.len() as u64).to_le_bytes());
        for v in row {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], CacheError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or(CacheError::Truncated(self.buf.len()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        let b = self.take(8)?;
        Ok(u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }

    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }
}

pub fn decode(bytes: &[u8]) -> Result<CompressedTable, CacheError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(MAGIC.len()).map_err(|_| CacheError::BadMagic)? != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let n = r.take(1)?[0] as u32;
    if n > MAX_LEVEL {
        return Err(Error::LevelOutOfRange(n).into());
    }
    let level = Level::new(n)?;
    let top = level.size();
    let count = r.u64()?;
    if count != top {
        return Err(Error::Precondition(format!("level {n} needs {top} rows, header says {count}")).into());
    }
    // Each row costs at least 16 bytes; refuse headers the file cannot back.
    if (r.remaining() as u64) / 16 < top {
        return Err(CacheError::Truncated(bytes.len()));
    }
    let mut rows = Vec::with_capacity(top as usize);
    for a in 1..=top {
        let p = r.u64()?;
        if !p.is_power_of_two() || p > top {
            return Err(Error::NonPowerOfTwoPeriod { level: n, row: a, period: p }.into());
        }
        let raw = r.take(8 * p as usize)?;
        rows.push(
            raw.chunks_exact(8)
                .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect(),
        );
    }
    if r.remaining() > 0 {
        return Err(CacheError::TrailingBytes(r.remaining()));
    }
    Ok(CompressedTable::from_rows(level, rows)?)
}

pub fn write(path: &Path, t: &CompressedTable) -> Result<(), CacheError> {
    fs::write(path, encode(t))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<CompressedTable, CacheError> {
    decode(&fs::read(path)?)
}
