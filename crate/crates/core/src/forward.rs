//! The forward algebras `A'_n` (elements `1..=2^n`), `A_n` (elements
//! `0..2^n`, with `2^n` renamed `0`) and the composition of `P_n`.
//!
//! One kernel works in 1-based form; the 0-based entry points are thin
//! renamings around it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::level::{mod_plus, Level};
use crate::naive::NaiveForward;
use crate::registry::{has_shared_table, shared_table};
use crate::table::{BuildOptions, BuildStats, CompressedTable};

/// Evaluator for one level: the shared table when the level is small enough,
/// otherwise memoized naive recursion under its work budget.
pub(crate) enum Kernel {
    Table(Arc<CompressedTable>),
    Naive(NaiveForward),
}

impl Kernel {
    pub(crate) fn for_level(level: Level) -> Result<Self> {
        if has_shared_table(level) {
            Ok(Kernel::Table(shared_table(level)?))
        } else {
            Ok(Kernel::Naive(NaiveForward::new(level)))
        }
    }

    pub(crate) fn level(&self) -> Level {
        match self {
            Kernel::Table(t) => t.level(),
            Kernel::Naive(n) => n.level(),
        }
    }

    pub(crate) fn star_prime(&mut self, a: u64, b: u64) -> Result<u64> {
        match self {
            Kernel::Table(t) => Ok(t.get(a, b)),
            Kernel::Naive(n) => n.star_prime(a, b),
        }
    }

    pub(crate) fn star_zero(&mut self, a: u64, b: u64) -> Result<u64> {
        let l = self.level();
        self.star_prime(l.to_prime(a), l.to_prime(b)).map(|v| l.to_zero(v))
    }

    pub(crate) fn bs(&mut self, x: u64, y: u64) -> Result<u64> {
        let top = self.level().size();
        self.star_prime(top - x, top - y).map(|v| top - v)
    }

    pub(crate) fn period(&mut self, a: u64) -> Result<u64> {
        match self {
            Kernel::Table(t) => Ok(t.period(a)),
            Kernel::Naive(n) => {
                let top = n.level().size();
                let mut p = 1;
                while n.star_prime(a, p)? != top {
                    p += 1;
                }
                Ok(p)
            }
        }
    }
}

/// `a *_n b` in `A'_n`.
pub fn star_prime(level: Level, a: u64, b: u64) -> Result<u64> {
    level.check_prime(a)?;
    level.check_prime(b)?;
    Kernel::for_level(level)?.star_prime(a, b)
}

/// `a *_n b` in `A_n`; `a * 0 = 0` and `0 * a = a`.
pub fn star(level: Level, a: u64, b: u64) -> Result<u64> {
    level.check_zero(a)?;
    level.check_zero(b)?;
    star_prime(level, level.to_prime(a), level.to_prime(b)).map(|v| level.to_zero(v))
}

/// `a o_n b = (a *_n (b + 1)) - 1` modulo `2^n`.
pub fn compose(level: Level, a: u64, b: u64) -> Result<u64> {
    level.check_zero(a)?;
    level.check_zero(b)?;
    let mask = level.mask();
    let v = star(level, a, (b + 1) & mask)?;
    Ok(v.wrapping_sub(1) & mask)
}

/// Least `p` with `a *_n p = 2^n`.
pub fn period_length(level: Level, a: u64) -> Result<u64> {
    level.check_prime(a)?;
    Kernel::for_level(level)?.period(a)
}

pub fn build_table(level: Level, accel: bool) -> Result<CompressedTable> {
    let opts = BuildOptions {
        accel,
        ..BuildOptions::default()
    };
    CompressedTable::build_with(level, &opts).map(|(t, _)| t)
}

pub fn build_table_with(level: Level, opts: &BuildOptions) -> Result<(CompressedTable, BuildStats)> {
    CompressedTable::build_with(level, opts)
}

/// `a mod+ 2^n` for `a` in `A'_N`.
pub fn reduce_mod(from: Level, to: Level, a: u64) -> Result<u64> {
    if to > from {
        return Err(Error::ReductionUpward {
            from: from.get(),
            to: to.get(),
        });
    }
    from.check_prime(a)?;
    Ok(mod_plus(a, to))
}

/// `a + 2^n`, the embedding of `A'_n` into `A'_{n+1}`.
pub fn lift_shift(level: Level, a: u64) -> Result<u64> {
    level.check_prime(a)?;
    level.next()?;
    Ok(a + level.size())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lvl(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn star_prime_examples() {
        assert_eq!(star_prime(lvl(2), 4, 3).unwrap(), 3);
        assert_eq!(star_prime(lvl(2), 1, 1).unwrap(), 2);
        assert_eq!(star_prime(lvl(2), 1, 2).unwrap(), 4);
        assert_eq!(star_prime(lvl(2), 2, 3).unwrap(), 3);
        assert!(star_prime(lvl(2), 5, 1).is_err());
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(lvl(3), 5, 0).unwrap(), 0);
        assert_eq!(star(lvl(3), 0, 5).unwrap(), 5);
        assert_eq!(star(lvl(2), 1, 2).unwrap(), 0);
    }

    #[test]
    fn compose_examples() {
        for b in 0..4 {
            assert_eq!(compose(lvl(2), 0, b).unwrap(), b);
        }
        assert_eq!(compose(lvl(2), 1, 1).unwrap(), 3);
        assert_eq!(compose(lvl(2), 3, 0).unwrap(), 3);
    }

    #[test]
    fn period_examples() {
        assert_eq!(period_length(lvl(2), 4).unwrap(), 4);
        assert_eq!(period_length(lvl(2), 3).unwrap(), 1);
        assert_eq!(period_length(lvl(2), 1).unwrap(), 2);
    }

    #[test]
    fn reduce_and_lift() {
        assert_eq!(reduce_mod(lvl(3), lvl(2), 8).unwrap(), 4);
        assert_eq!(reduce_mod(lvl(3), lvl(2), 5).unwrap(), 1);
        assert!(reduce_mod(lvl(2), lvl(3), 1).is_err());
        let lhs = reduce_mod(lvl(3), lvl(2), star_prime(lvl(3), 5, 6).unwrap()).unwrap();
        assert_eq!(lhs, star_prime(lvl(2), 1, 2).unwrap());
        assert_eq!(lhs, 4);

        assert_eq!(lift_shift(lvl(2), 4).unwrap(), 8);
        assert_eq!(lift_shift(lvl(2), 1).unwrap(), 5);
        let lifted = lift_shift(lvl(2), star_prime(lvl(2), 1, 1).unwrap()).unwrap();
        assert_eq!(lifted, 6);
        assert_eq!(star_prime(lvl(3), 5, 5).unwrap(), 6);
    }

    #[test]
    fn naive_mode_above_shared_limit() {
        let l = lvl(40);
        assert_eq!(star_prime(l, l.size() - 1, 7).unwrap(), l.size());
        assert_eq!(star_prime(l, 5, 1).unwrap(), 6);
        assert!(matches!(star_prime(l, 1, 3), Err(Error::BudgetExceeded(_))));
    }
}
