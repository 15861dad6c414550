//! Block structure of rows in `B_inf`.
//!
//! Write `a = x + 2^(mn) y` with `n` a power of two, `y < 2^n`,
//! `2^((m+1)n) | x`, and let `2^l` be the period of `x + 1` with `l <= n`.
//! Then `<a>` is isomorphic to `<2^(l+n) - 2^n + y>`, and if
//! `(2^(l+n) - 2^n + y + 1) \ i = 2^n w + y'` with `y' < 2^n` then
//! `(a + 1) \ i = (x + 1) \ w + 2^(mn) y'`. In the full-digit case
//! `y = 2^n - 1` the row of `a + 1` has period `2^(l+n)` and is assembled
//! blockwise: `(a + 1) \ (2^n i + i') = (x + 1) \ i + 2^(mn) i'`.
//!
//! Each lemma below takes its hypotheses as arguments, rejects them with a
//! [`HypothesisError`] naming the failed clause, and returns the value the
//! lemma predicts. Comparing that value with a direct evaluation is the check.

use serde::Serialize;

use crate::backward::{b_period, b_row, bs, subalg};
use crate::error::{HypothesisError, Result};
use crate::level::MAX_LEVEL;

/// Validated hypotheses of the block theorem. `l` is always derived from `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Thm41Params {
    x: u64,
    y: u64,
    m: u32,
    n: u32,
    l: u32,
    a: u64,
}

impl Thm41Params {
    pub fn x(&self) -> u64 {
        self.x
    }
    pub fn y(&self) -> u64 {
        self.y
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// `log2` of the period of `x + 1`.
    pub fn l(&self) -> u32 {
        self.l
    }
    /// The composite element `x + 2^(mn) y`.
    pub fn a(&self) -> u64 {
        self.a
    }
    /// `mn`, the bit position of the digit `y`.
    pub fn shift(&self) -> u32 {
        self.m * self.n
    }
    /// `2^(l+n) - 2^n + y`, whose subalgebra is isomorphic to `<a>`.
    pub fn reference_generator(&self) -> u64 {
        (1u64 << (self.l + self.n)) - (1u64 << self.n) + self.y
    }
}

fn require_power_of_two(name: &'static str, n: u32) -> Result<()> {
    if !n.is_power_of_two() {
        return Err(HypothesisError::NotPowerOfTwo {
            name,
            value: n as u64,
        }
        .into());
    }
    Ok(())
}

fn require_divisible(name: &'static str, value: u64, shift: u64) -> Result<()> {
    let ok = if shift >= 64 {
        value == 0
    } else {
        value & ((1u64 << shift) - 1) == 0
    };
    if !ok {
        return Err(HypothesisError::NotDivisible {
            name,
            value,
            shift: shift.min(u32::MAX as u64) as u32,
        }
        .into());
    }
    Ok(())
}

/// `x + 2^shift * digit`, rejecting anything outside the supported elements.
fn place(x: u64, shift: u64, digit: u64) -> Result<u64> {
    let v = if digit == 0 {
        Some(x)
    } else if shift >= 64 {
        None
    } else {
        digit
            .checked_shl(shift as u32)
            .filter(|v| v >> shift == digit)
            .and_then(|v| v.checked_add(x))
    };
    match v {
        Some(v) if v < (1u64 << MAX_LEVEL) - 1 => Ok(v),
        _ => Err(HypothesisError::Overflow.into()),
    }
}

fn period_log(e: u64) -> Result<u32> {
    Ok(b_period(e)?.trailing_zeros())
}

fn require_period_at_most(element: u64, bound: u32) -> Result<u32> {
    let log = period_log(element)?;
    if log > bound {
        return Err(HypothesisError::PeriodTooLong {
            element,
            log,
            bound,
        }
        .into());
    }
    Ok(log)
}

pub fn validate_params(x: u64, y: u64, m: u32, n: u32) -> Result<Thm41Params> {
    require_power_of_two("n", n)?;
    if n >= 64 || y >> n != 0 {
        return Err(HypothesisError::DigitTooLarge { y, n }.into());
    }
    let shift = m as u64 * n as u64;
    require_divisible("x", x, shift + n as u64)?;
    let a = place(x, shift, y)?;
    let l = require_period_at_most(x + 1, n)?;
    Ok(Thm41Params { x, y, m, n, l, a })
}

/// `(a + 1) \ i`, computed through the reference algebra.
pub fn thm41_image(p: &Thm41Params, i: u64) -> Result<u64> {
    let v = bs(p.reference_generator() + 1, i)?;
    let w = v >> p.n;
    let digit = v & ((1u64 << p.n) - 1);
    Ok(bs(p.x + 1, w)? + (digit << p.shift()))
}

/// One period of the row of `a + 1` in the full-digit case, assembled from
/// the row of `x + 1`; its length is `2^(l+n)`.
pub fn cor42_fast_row(p: &Thm41Params) -> Result<Vec<u64>> {
    let block = 1u64 << p.n;
    if p.y != block - 1 {
        return Err(HypothesisError::NotFullDigit { y: p.y, n: p.n }.into());
    }
    let source = b_row(p.x + 1)?;
    let mut row = Vec::with_capacity(source.len() << p.n);
    for &s in &source {
        row.extend((0..block).map(|i2| s + (i2 << p.shift())));
    }
    Ok(row)
}

/// A full-digit decomposition `a = x + 2^(mn) (2^n - 1)` found by
/// [`corollary_split`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Split {
    pub x: u64,
    pub m: u32,
    pub n: u32,
    pub l: u32,
    /// `mn`
    pub shift: u32,
}

/// Finds the full-digit decomposition of `a` with the largest block width
/// `n`. The digit must be the lowest run of 1 bits of `a` (or a low part of
/// it) starting at a multiple of `n`. `period_log(e)` must return `log2` of
/// the period of `e`, which is only asked for `e <= a`.
pub fn corollary_split(
    a: u64,
    mut period_log: impl FnMut(u64) -> Result<u32>,
) -> Result<Option<Split>> {
    if a == 0 {
        return Ok(None);
    }
    let s = a.trailing_zeros();
    let run = (a >> s).trailing_ones();
    let mut n = 1u32 << (31 - run.leading_zeros());
    while n >= 1 {
        if s % n == 0 {
            let x = a - (((1u64 << n) - 1) << s);
            let l = period_log(x + 1)?;
            if l <= n {
                return Ok(Some(Split {
                    x,
                    m: s / n,
                    n,
                    l,
                    shift: s,
                }));
            }
        }
        n /= 2;
    }
    Ok(None)
}

/// `2^(s'-s)`, the maximal period of `2^s' - 2^s + 1`, is attained whenever
/// `s' - s` is at most a power of two dividing `2s`.
pub fn lemma43_max_period(s: u32, s2: u32) -> Result<bool> {
    if s > s2 {
        return Err(HypothesisError::Unordered { s, s2 }.into());
    }
    if s2 >= MAX_LEVEL {
        return Err(HypothesisError::Overflow.into());
    }
    let span = s2 - s;
    if s > 0 {
        let double = 2 * s as u64;
        if span as u64 > 1u64 << double.trailing_zeros() {
            return Err(HypothesisError::SpanTooLarge { span, double }.into());
        }
    }
    let e = (1u64 << s2) - (1u64 << s) + 1;
    Ok(b_period(e)? == 1u64 << span)
}

/// Predicted `(x + 2^s) \ (2^s i + i')`, namely `(x + 1) \ i + i'`.
pub fn lemma44_shift(x: u64, s: u32, i: u64, i2: u64) -> Result<u64> {
    if s >= MAX_LEVEL {
        return Err(HypothesisError::Overflow.into());
    }
    require_divisible("x", x, s as u64)?;
    if i2 >> s != 0 {
        return Err(HypothesisError::IndexTooLarge { index: i2, bound: s }.into());
    }
    place(x, s as u64, 1)?;
    if s == 0 {
        // every power of two divides 0
        period_log(x + 1)?;
    } else {
        require_period_at_most(x + 1, 1u32 << s.trailing_zeros())?;
    }
    Ok(bs(x + 1, i)? + i2)
}

/// For `a = 2^n x + y` with `x < 2^n` and `y < 2^n - 1`: does the period of
/// `a + 1` divide `2^n`?
pub fn lemma45_period_bound(a: u64, n: u32) -> Result<bool> {
    require_power_of_two("n", n)?;
    if 2 * n >= MAX_LEVEL {
        return Err(HypothesisError::Overflow.into());
    }
    let mask = (1u64 << n) - 1;
    if a >> (2 * n) != 0 || a & mask >= mask {
        return Err(HypothesisError::NoDecomposition { a, n }.into());
    }
    Ok(bs(a + 1, 1u64 << n)? == 0)
}

/// The same conclusion for a block-theorem bundle whose digit is not full.
pub fn lemma46_period_bound(p: &Thm41Params) -> Result<bool> {
    if p.y >= (1u64 << p.n) - 1 {
        return Err(HypothesisError::FullDigit { y: p.y, n: p.n }.into());
    }
    Ok(bs(p.a + 1, 1u64 << p.n)? == 0)
}

/// Predicted `(x' + 2^(mn) y') \ (x + 2^(mn) (2^n - 1))`, namely
/// `x' + 2^(mn) (y' - 1)`.
pub fn lemma47_step(x2: u64, y2: u64, x: u64, m: u32, n: u32) -> Result<u64> {
    require_power_of_two("n", n)?;
    if y2 == 0 {
        return Err(HypothesisError::Zero { name: "y'" }.into());
    }
    if n >= 64 || y2 >> n != 0 {
        return Err(HypothesisError::DigitTooLarge { y: y2, n }.into());
    }
    let shift = m as u64 * n as u64;
    require_divisible("x'", x2, shift + n as u64)?;
    require_divisible("x", x, shift + n as u64)?;
    place(x2, shift, y2)?;
    place(x, shift, (1u64 << n) - 1)?;
    require_period_at_most(x2 + 1, n)?;
    place(x2, shift, y2 - 1)
}

/// Predicted `x' \ (x + 2^(mn) (2^n - 1))`, namely `(x' \ x) + 2^(mn) (2^n - 1)`.
pub fn lemma48_step(x2: u64, x: u64, m: u32, n: u32) -> Result<u64> {
    require_power_of_two("n", n)?;
    if n >= 64 {
        return Err(HypothesisError::Overflow.into());
    }
    let shift = m as u64 * n as u64;
    require_divisible("x", x, shift + n as u64)?;
    let full = (1u64 << n) - 1;
    place(x, shift, full)?;
    require_period_at_most(x + 1, n)?;
    if !subalg(x)?.contains(x2) {
        return Err(HypothesisError::NotInSubalgebra {
            element: x2,
            generator: x,
        }
        .into());
    }
    place(bs(x2, x)?, shift, full)
}

/// `x \ y`, peeling off full-digit blocks of `x - 1` while they exist and
/// finishing with a table (or naive) evaluation of the residual row.
pub fn accelerated_bs(x: u64, y: u64) -> Result<u64> {
    let (v, _) = accelerated_bs_traced(x, y)?;
    Ok(v)
}

/// As [`accelerated_bs`], also returning how many blocks were peeled.
pub fn accelerated_bs_traced(mut x: u64, mut y: u64) -> Result<(u64, u32)> {
    let mut acc = 0u64;
    let mut steps = 0;
    while x > 1 {
        let Some(split) = corollary_split(x - 1, period_log)? else {
            break;
        };
        let reduced = y & ((1u64 << (split.l + split.n)) - 1);
        acc += (reduced & ((1u64 << split.n) - 1)) << split.shift;
        y = reduced >> split.n;
        x = split.x + 1;
        steps += 1;
    }
    Ok((acc + bs(x, y)?, steps))
}
