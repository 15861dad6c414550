//! Period-compressed storage of `A'_n`.
//!
//! Row `a` is built from the rows of elements above it: the sequence
//! `a * 1, a * 2, ...` starts at `a + 1`, each term is the previous one
//! multiplied on the right by `a + 1`, and it climbs strictly until it hits
//! `2^n`, after which it repeats. Only that one period is stored. The row of
//! `2^n` is the identity and is kept implicit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::level::Level;
use crate::struct_iso::{corollary_split, Split};

pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Fill rows admitting a block decomposition from the smaller row.
    pub accel: bool,
    /// Recompute accelerated rows naively and fail on any difference.
    pub cross_check: bool,
    /// Upper bound on table memory, in bytes.
    pub memory_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            accel: false,
            cross_check: false,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Work counters for one build. A "lookup" is one evaluation of `*` against
/// an already built row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub rows: u64,
    pub fast_rows: u64,
    pub lookups: u64,
    /// Lookups spent reading source rows for accelerated rows.
    pub fast_lookups: u64,
    /// Lookups the naive fill would have spent on the accelerated rows.
    pub fast_rows_naive_cost: u64,
    pub stored_entries: u64,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedTable {
    level: Level,
    start: Vec<u64>,
    period_log: Vec<u8>,
    data: Vec<u64>,
}

const ROW_OVERHEAD: u64 = 9;

impl CompressedTable {
    pub fn build(level: Level) -> Result<Self> {
        Self::build_with(level, &BuildOptions::default()).map(|(t, _)| t)
    }

    pub fn build_with(level: Level, opts: &BuildOptions) -> Result<(Self, BuildStats)> {
        let top = level.size();
        let overhead = (top + 1) * ROW_OVERHEAD;
        if overhead > opts.memory_budget {
            return Err(Error::MemoryBudget {
                level: level.get(),
                budget: opts.memory_budget,
            });
        }
        let mut t = CompressedTable {
            level,
            start: vec![0; top as usize + 1],
            period_log: vec![0; top as usize + 1],
            data: Vec::new(),
        };
        t.period_log[top as usize] = level.get() as u8;
        let mut stats = BuildStats {
            rows: top,
            ..BuildStats::default()
        };
        let mut scratch = Vec::new();
        for a in (1..top).rev() {
            let begin = t.data.len();
            let split = if opts.accel {
                corollary_split(top - a - 1, |e| Ok(t.period_log[(top - e) as usize] as u32))?
            } else {
                None
            };
            match split {
                Some(split) => {
                    t.push_fast_row(split, &mut stats);
                    stats.fast_rows += 1;
                    if opts.cross_check {
                        scratch.clear();
                        t.naive_row_into(a, &mut scratch, &mut 0);
                        if scratch[..] != t.data[begin..] {
                            return Err(Error::AccelMismatch {
                                level: level.get(),
                                row: a,
                            });
                        }
                    }
                }
                None => {
                    let mut lookups = 0;
                    let mut row = std::mem::take(&mut scratch);
                    row.clear();
                    t.naive_row_into(a, &mut row, &mut lookups);
                    t.data.extend_from_slice(&row);
                    scratch = row;
                    stats.lookups += lookups;
                }
            }
            let period = (t.data.len() - begin) as u64;
            if !period.is_power_of_two() {
                return Err(Error::NonPowerOfTwoPeriod {
                    level: level.get(),
                    row: a,
                    period,
                });
            }
            t.start[a as usize] = begin as u64;
            t.period_log[a as usize] = period.trailing_zeros() as u8;
            if overhead + 8 * t.data.len() as u64 > opts.memory_budget {
                return Err(Error::MemoryBudget {
                    level: level.get(),
                    budget: opts.memory_budget,
                });
            }
        }
        t.data.shrink_to_fit();
        stats.stored_entries = t.data.len() as u64;
        stats.bytes = t.bytes();
        Ok((t, stats))
    }

    /// Appends one period of row `a` by repeated right multiplication by `a + 1`.
    fn naive_row_into(&self, a: u64, out: &mut Vec<u64>, lookups: &mut u64) {
        let top = self.level.size();
        let mut v = a + 1;
        loop {
            out.push(v);
            if v == top {
                break;
            }
            v = self.get(v, a + 1);
            *lookups += 1;
        }
    }

    /// Writes the row of `x + 2^s (2^n - 1) + 1` (backward form) from the row
    /// of `x + 1`: entry `2^n i + i'` is `(x + 1) \ i + 2^s i'`.
    fn push_fast_row(&mut self, split: Split, stats: &mut BuildStats) {
        let top = self.level.size();
        let source = top - (split.x + 1);
        let p = 1u64 << split.l;
        let block = 1u64 << split.n;
        let full = p * block;
        // small[i] is the forward name of (x + 1) \ i.
        let base = self.start[source as usize] as usize;
        let small: Vec<u64> = (0..p).map(|i| self.data[base + (p - 1 - i) as usize]).collect();
        stats.fast_lookups += p;
        stats.fast_rows_naive_cost += full - 1;
        self.data.reserve(full as usize);
        for ib in (0..full).rev() {
            let i = ib >> split.n;
            let offset = (ib & (block - 1)) << split.shift;
            self.data.push(small[i as usize] - offset);
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// `a *_n b` without range checks beyond debug assertions.
    #[inline]
    pub fn get(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a >= 1 && a <= self.level.size());
        debug_assert!(b >= 1 && b <= self.level.size());
        if a == self.level.size() {
            return b;
        }
        let mask = (1u64 << self.period_log[a as usize]) - 1;
        self.data[(self.start[a as usize] + ((b - 1) & mask)) as usize]
    }

    pub fn star_prime(&self, a: u64, b: u64) -> Result<u64> {
        self.level.check_prime(a)?;
        self.level.check_prime(b)?;
        Ok(self.get(a, b))
    }

    /// The 0-based operation of `A_n`.
    #[inline]
    pub fn star_zero(&self, a: u64, b: u64) -> u64 {
        let l = self.level;
        l.to_zero(self.get(l.to_prime(a), l.to_prime(b)))
    }

    /// `a o b = (a * (b + 1)) - 1`, all modulo `2^n`.
    #[inline]
    pub fn compose_zero(&self, a: u64, b: u64) -> u64 {
        let mask = self.level.mask();
        self.star_zero(a, (b + 1) & mask).wrapping_sub(1) & mask
    }

    /// `x \ y` in `B_n` through the isomorphism `v -> 2^n - v`.
    #[inline]
    pub fn bs(&self, x: u64, y: u64) -> u64 {
        let top = self.level.size();
        debug_assert!(x < top && y < top);
        top - self.get(top - x, top - y)
    }

    #[inline]
    pub fn period(&self, a: u64) -> u64 {
        1u64 << self.period_log[a as usize]
    }

    #[inline]
    pub fn period_log(&self, a: u64) -> u32 {
        self.period_log[a as usize] as u32
    }

    /// One stored period `a * 1, ..., a * p_a` (allocates for the implicit
    /// identity row of `2^n`).
    pub fn row(&self, a: u64) -> Vec<u64> {
        if a == self.level.size() {
            return (1..=a).collect();
        }
        self.stored_row(a).to_vec()
    }

    /// Stored period of a row below the top.
    pub fn stored_row(&self, a: u64) -> &[u64] {
        assert!(a >= 1 && a < self.level.size(), "row {a} is not stored");
        let s = self.start[a as usize] as usize;
        &self.data[s..s + self.period(a) as usize]
    }

    /// Backward row `x \ 0, ..., x \ (p - 1)` for `1 <= x < 2^n`.
    pub fn backward_row(&self, x: u64) -> Vec<u64> {
        let top = self.level.size();
        let a = top - x;
        let p = self.period(a);
        (0..p).map(|i| top - self.get(a, if i == 0 { p } else { p - i })).collect()
    }

    pub fn bytes(&self) -> u64 {
        (self.start.len() as u64) * ROW_OVERHEAD + 8 * self.data.len() as u64
    }

    pub fn stored_entries(&self) -> u64 {
        self.data.len() as u64
    }

    /// Assembles a table from explicit periods (one per row, `a = 1..=2^n`),
    /// rejecting anything that is not the unique table satisfying the
    /// defining recursion.
    pub fn from_rows(level: Level, rows: Vec<Vec<u64>>) -> Result<Self> {
        let top = level.size();
        if rows.len() as u64 != top {
            return Err(Error::Precondition(format!(
                "expected {top} rows, found {}",
                rows.len()
            )));
        }
        let identity = rows.last().expect("at least one row");
        if identity.len() as u64 != top || identity.iter().zip(1..).any(|(&v, b)| v != b) {
            return Err(Error::Precondition(format!(
                "row {top} must be the identity"
            )));
        }
        let mut t = CompressedTable {
            level,
            start: vec![0; top as usize + 1],
            period_log: vec![0; top as usize + 1],
            data: Vec::new(),
        };
        t.period_log[top as usize] = level.get() as u8;
        for a in (1..top).rev() {
            let row = &rows[a as usize - 1];
            let p = row.len() as u64;
            if !p.is_power_of_two() || p > top {
                return Err(Error::NonPowerOfTwoPeriod {
                    level: level.get(),
                    row: a,
                    period: p,
                });
            }
            if row[0] != a + 1
                || *row.last().expect("nonempty") != top
                || row.windows(2).any(|w| w[0] >= w[1])
            {
                return Err(Error::Precondition(format!(
                    "row {a} is not strictly increasing from {} to {top}",
                    a + 1
                )));
            }
            // Every stored step must follow from rows already accepted.
            for w in row.windows(2) {
                if t.get(w[0], a + 1) != w[1] {
                    return Err(Error::Precondition(format!(
                        "row {a} violates a * (b + 1) = (a * b) * (a + 1)"
                    )));
                }
            }
            t.start[a as usize] = t.data.len() as u64;
            t.period_log[a as usize] = p.trailing_zeros() as u8;
            t.data.extend_from_slice(row);
        }
        Ok(t)
    }
}
