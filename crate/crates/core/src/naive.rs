//! Memoized evaluation straight from the defining recursions.
//!
//! These never use periodicity, so they double as the reference against
//! which the compressed tables and the structure-theorem shortcuts are
//! checked. Every evaluation step is charged against a work budget;
//! exhausting it is an error rather than an unbounded loop.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::level::Level;

pub const DEFAULT_WORK_BUDGET: u64 = 1 << 22;

/// `A'_n` evaluated from `2^n * b = b`, `a * 1 = a + 1`,
/// `a * (b + 1) = (a * b) * (a + 1)`.
#[derive(Debug)]
pub struct NaiveForward {
    level: Level,
    memo: HashMap<(u64, u64), u64>,
    budget: u64,
    spent: u64,
}

impl NaiveForward {
    pub fn new(level: Level) -> Self {
        Self::with_budget(level, DEFAULT_WORK_BUDGET)
    }

    pub fn with_budget(level: Level, budget: u64) -> Self {
        NaiveForward {
            level,
            memo: HashMap::new(),
            budget,
            spent: 0,
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// Steps charged so far.
    pub fn spent(&self) -> u64 {
        self.spent
    }

    fn known(&self, a: u64, b: u64) -> Option<u64> {
        if a == self.level.size() {
            Some(b)
        } else if b == 1 {
            Some(a + 1)
        } else {
            self.memo.get(&(a, b)).copied()
        }
    }

    pub fn star_prime(&mut self, a: u64, b: u64) -> Result<u64> {
        self.level.check_prime(a)?;
        self.level.check_prime(b)?;
        if let Some(v) = self.known(a, b) {
            return Ok(v);
        }
        let mut stack = vec![(a, b)];
        while let Some(&(a, b)) = stack.last() {
            if self.known(a, b).is_some() {
                stack.pop();
                continue;
            }
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            let Some(prev) = self.known(a, b - 1) else {
                stack.push((a, b - 1));
                continue;
            };
            match self.known(prev, a + 1) {
                Some(v) => {
                    self.memo.insert((a, b), v);
                    stack.pop();
                }
                None => stack.push((prev, a + 1)),
            }
        }
        Ok(self.known(a, b).expect("evaluated above"))
    }
}

/// `B_n` evaluated from `0 \ y = y`, `x \ (2^n - 1) = x - 1`,
/// `x \ (y - 1) = (x \ y) \ (x - 1)`.
#[derive(Debug)]
pub struct NaiveBackward {
    level: Level,
    memo: HashMap<(u64, u64), u64>,
    budget: u64,
    spent: u64,
}

impl NaiveBackward {
    pub fn new(level: Level) -> Self {
        Self::with_budget(level, DEFAULT_WORK_BUDGET)
    }

    pub fn with_budget(level: Level, budget: u64) -> Self {
        NaiveBackward {
            level,
            memo: HashMap::new(),
            budget,
            spent: 0,
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    fn known(&self, x: u64, y: u64) -> Option<u64> {
        if x == 0 {
            Some(y)
        } else if y == self.level.mask() {
            Some(x - 1)
        } else {
            self.memo.get(&(x, y)).copied()
        }
    }

    pub fn bs(&mut self, x: u64, y: u64) -> Result<u64> {
        self.level.check_zero(x)?;
        self.level.check_zero(y)?;
        if let Some(v) = self.known(x, y) {
            return Ok(v);
        }
        let mut stack = vec![(x, y)];
        while let Some(&(x, y)) = stack.last() {
            if self.known(x, y).is_some() {
                stack.pop();
                continue;
            }
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            let Some(next) = self.known(x, y + 1) else {
                stack.push((x, y + 1));
                continue;
            };
            match self.known(next, x - 1) {
                Some(v) => {
                    self.memo.insert((x, y), v);
                    stack.pop();
                }
                None => stack.push((next, x - 1)),
            }
        }
        Ok(self.known(x, y).expect("evaluated above"))
    }

    /// Least `l > 0` with `x \ l = 0`, scanning the row directly.
    pub fn period(&mut self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::ZeroPeriod);
        }
        let mut l = 1;
        while self.bs(x, l & self.level.mask())? != 0 {
            l += 1;
        }
        Ok(l)
    }
}

/// Highest level [`DenseBackward`] accepts (`2^(2n)` cells of 2 bytes).
pub const DENSE_MAX_LEVEL: u32 = 13;

/// All of `B_n` in one array, filled bottom-up from the backward recursion:
/// row `x` only reads rows below `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseBackward {
    level: Level,
    cells: Vec<u16>,
}

impl DenseBackward {
    pub fn build(level: Level) -> Result<Self> {
        if level.get() > DENSE_MAX_LEVEL {
            return Err(Error::Precondition(format!(
                "dense backward tables stop at level {DENSE_MAX_LEVEL}"
            )));
        }
        let size = level.size() as usize;
        let mut cells = vec![0u16; size * size];
        for y in 0..size {
            cells[y] = y as u16;
        }
        for x in 1..size {
            let row = x * size;
            cells[row + size - 1] = (x - 1) as u16;
            for y in (1..size).rev() {
                let u = cells[row + y] as usize;
                cells[row + y - 1] = cells[u * size + x - 1];
            }
        }
        Ok(DenseBackward { level, cells })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// `x \ y`; both arguments must be below `2^n`.
    #[inline]
    pub fn bs(&self, x: u64, y: u64) -> u64 {
        self.cells[((x << self.level.get()) | y) as usize] as u64
    }

    /// Least `l > 0` with `x \ l = 0` (`2^n` for `x = 0`).
    pub fn period(&self, x: u64) -> u64 {
        let top = self.level.size();
        (1..top).find(|&l| self.bs(x, l) == 0).unwrap_or(top)
    }

    /// One period of the row of `x`.
    pub fn row(&self, x: u64) -> Vec<u64> {
        (0..self.period(x)).map(|i| self.bs(x, i)).collect()
    }
}
