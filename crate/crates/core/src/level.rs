use std::fmt;

use crate::error::{Error, Result};

/// Largest supported level; elements of `A'_62` still fit a `u64`.
pub const MAX_LEVEL: u32 = 62;

/// The level `n` of an algebra with `2^n` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u8);

impl Level {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_LEVEL {
            return Err(Error::LevelOutOfRange(n));
        }
        Ok(Level(n as u8))
    }

    /// The least level whose backward algebra contains `x`.
    pub fn containing(x: u64) -> Result<Self> {
        Level::new(u64::BITS - x.leading_zeros())
    }

    pub const fn get(self) -> u32 {
        self.0 as u32
    }

    /// `2^n`, the top element of `A'_n`.
    pub const fn size(self) -> u64 {
        1u64 << self.0
    }

    pub const fn mask(self) -> u64 {
        self.size() - 1
    }

    pub fn next(self) -> Result<Self> {
        Level::new(self.get() + 1)
    }

    /// Checks `1 <= a <= 2^n`.
    pub fn check_prime(self, a: u64) -> Result<u64> {
        if a == 0 || a > self.size() {
            return Err(Error::ElementOutOfRange {
                value: a,
                level: self.get(),
            });
        }
        Ok(a)
    }

    /// Checks `0 <= a < 2^n`.
    pub fn check_zero(self, a: u64) -> Result<u64> {
        if a > self.mask() {
            return Err(Error::ElementOutOfRange {
                value: a,
                level: self.get(),
            });
        }
        Ok(a)
    }

    /// 0-based name of a 1-based element (`2^n` is renamed `0`).
    pub const fn to_zero(self, a: u64) -> u64 {
        a & self.mask()
    }

    /// 1-based name of a 0-based element.
    pub const fn to_prime(self, a: u64) -> u64 {
        if a == 0 {
            self.size()
        } else {
            a
        }
    }

    pub fn iter_to(self, last: Level) -> impl Iterator<Item = Level> {
        (self.get()..=last.get()).map(|n| Level(n as u8))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u32> for Level {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Level::new(n)
    }
}

/// `x mod+ 2^n`: the representative of `x` in `1..=2^n`.
pub fn mod_plus(x: u64, level: Level) -> u64 {
    level.to_prime(x & level.mask())
}
