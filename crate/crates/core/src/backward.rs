//! The backward algebras `B_n` and their union `B_inf`.
//!
//! `B_n` lives on `0..2^n` and is the image of `A'_n` under `v -> 2^n - v`.
//! Since `B_n` is literally a subalgebra of `B_N` for `N >= n`, the operation
//! `\` needs no level subscript; evaluation picks the least level containing
//! the left argument and reduces the right argument modulo `2^n`, which is
//! harmless because every row of `B_n` has a period dividing `2^n`.

use serde::Serialize;

use crate::error::{Error, HypothesisError, Result};
use crate::forward::Kernel;
use crate::level::Level;

/// `x \ y` in `B_inf`.
pub fn bs(x: u64, y: u64) -> Result<u64> {
    if x == 0 {
        return Ok(y);
    }
    let level = Level::containing(x)?;
    Kernel::for_level(level)?.bs(x, y & level.mask())
}

/// `x \_n y` computed at an explicit ambient level.
pub fn bs_at(level: Level, x: u64, y: u64) -> Result<u64> {
    level.check_zero(x)?;
    level.check_zero(y)?;
    Kernel::for_level(level)?.bs(x, y)
}

/// `x \ x \ ... \ x` with `r` copies of `x`, associated to the left
/// (`r = 1` gives `x`). Evaluated as `(x + 1) \ (K - r)` for `K` the period
/// of `x + 1`.
pub fn bs_iter(x: u64, r: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::Precondition("iteration count must be positive".into()));
    }
    let k = b_period(x + 1)?;
    let idx = (k - r % k) % k;
    bs(x + 1, idx)
}

/// Period of the row `x \ 0, x \ 1, ...`: the least `l > 0` with `x \ l = 0`.
pub fn b_period(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::ZeroPeriod);
    }
    let level = Level::containing(x)?;
    Kernel::for_level(level)?.period(level.size() - x)
}

/// One period `x \ 0, ..., x \ (p - 1)` of a nonzero row.
pub fn b_row(x: u64) -> Result<Vec<u64>> {
    if x == 0 {
        return Err(Error::ZeroPeriod);
    }
    let level = Level::containing(x)?;
    let mut k = Kernel::for_level(level)?;
    let p = k.period(level.size() - x)?;
    (0..p).map(|i| k.bs(x, i)).collect()
}

/// The subalgebra `<x>` of `B_inf` generated by `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subalgebra {
    generator: u64,
    elements: Vec<u64>,
}

impl Subalgebra {
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Members in ascending order.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, y: u64) -> bool {
        self.elements.binary_search(&y).is_ok()
    }

    /// Position of `y` in the period of `x + 1`, i.e. the `i` with `(x + 1) \ i = y`.
    pub fn index_of(&self, y: u64) -> Option<usize> {
        self.elements.binary_search(&y).ok()
    }
}

/// `<x> = {(x + 1) \ i : 0 <= i < period(x + 1)}`; the period is strictly
/// increasing from `0` to `x`, so it comes out sorted.
pub fn subalg(x: u64) -> Result<Subalgebra> {
    let elements = b_row(x + 1)?;
    debug_assert_eq!(elements.last(), Some(&x));
    Ok(Subalgebra {
        generator: x,
        elements,
    })
}

/// Deposits the low bits of `v` into the 1-bit positions of `mask`, lowest first.
pub fn scatter_bits(mask: u64, mut v: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let bit = m & m.wrapping_neg();
        if v & 1 == 1 {
            out |= bit;
        }
        v >>= 1;
        m ^= bit;
    }
    out
}

/// The template isomorphism `B_r -> <x>` for `x` with `|<x>| = 2^r`,
/// `r = popcount(x)`.
pub fn template_embed(x: u64, v: u64) -> Result<u64> {
    let r = x.count_ones();
    if r < 64 && v >> r != 0 {
        return Err(Error::Precondition(format!(
            "{v} is not an element of B_{r}"
        )));
    }
    let size = subalg(x)?.len() as u64;
    if size != 1u64 << r {
        return Err(HypothesisError::BoundNotAttained {
            x,
            size,
            popcount: r,
        }
        .into());
    }
    Ok(scatter_bits(x, v))
}
