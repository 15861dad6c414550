//! Critical points in finite-algebra form.
//!
//! An element `k` of the free one-generator algebra is known here only
//! through its residues `k mod 2^n` for `n` up to a working cap. The
//! primitive notions are
//!
//! * `crit k >= gamma_n`  iff `k mod 2^n = 0`;
//! * `k(gamma_m) >= gamma_n` iff the period of `k mod 2^n` in `A_n` is at
//!   most `2^m` (equivalently `(k j_(2^m)) mod 2^n = 0`);
//! * `k ≡ k'` at `gamma_n` iff `k mod 2^n = k' mod 2^n`.
//!
//! Derived "largest n" answers are [`GammaIndex`] values; when the property
//! still holds at the cap the answer is [`GammaIndex::AboveCap`], which says
//! nothing about levels beyond the cap.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::Kernel;
use crate::level::Level;

/// Residues `k mod 2^n` for `n = 0..=cap`, compatible under reduction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueVector {
    residues: Vec<u64>,
}

/// Index of a formal critical point, or a marker that the answer lies
/// beyond the working cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GammaIndex {
    At(u32),
    AboveCap,
}

impl GammaIndex {
    /// What a correct cap-bounded computation reports when the true index is
    /// `expected`.
    pub fn capped(expected: u32, cap: u32) -> Self {
        if expected < cap {
            GammaIndex::At(expected)
        } else {
            GammaIndex::AboveCap
        }
    }

    pub fn index(self) -> Option<u32> {
        match self {
            GammaIndex::At(n) => Some(n),
            GammaIndex::AboveCap => None,
        }
    }
}

impl fmt::Display for GammaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaIndex::At(n) => write!(f, "{n}"),
            GammaIndex::AboveCap => f.write_str("ABOVE_CAP"),
        }
    }
}

impl ResidueVector {
    /// Validates `residues[n] < 2^n` and `residues[n] = residues[n+1] mod 2^n`.
    pub fn new(residues: Vec<u64>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::Precondition("residue vector needs level 0".into()));
        }
        Level::new(residues.len() as u32 - 1)?;
        for (n, &r) in residues.iter().enumerate() {
            let level = Level::new(n as u32)?;
            level.check_zero(r)?;
            if n + 1 < residues.len() && residues[n + 1] & level.mask() != r {
                return Err(Error::IncompatibleResidues { level: n as u32 });
            }
        }
        Ok(ResidueVector { residues })
    }

    /// The residues of any `k` with `k mod 2^cap = value`.
    pub fn from_top(cap: Level, value: u64) -> Result<Self> {
        cap.check_zero(value)?;
        let residues = (0..=cap.get()).map(|n| value & ((1u64 << n) - 1)).collect();
        Ok(ResidueVector { residues })
    }

    /// Residues computed level by level, then checked for compatibility.
    pub fn from_levels(cap: Level, f: impl FnMut(Level) -> Result<u64>) -> Result<Self> {
        let residues = Level::new(0)?.iter_to(cap).map(f).collect::<Result<Vec<_>>>()?;
        Self::new(residues)
    }

    pub fn cap(&self) -> u32 {
        self.residues.len() as u32 - 1
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn at(&self, n: u32) -> Result<u64> {
        self.residues
            .get(n as usize)
            .copied()
            .ok_or(Error::CapExceeded { level: n, cap: self.cap() })
    }

    pub fn top(&self) -> u64 {
        *self.residues.last().expect("nonempty")
    }

    /// Restriction to a lower cap.
    pub fn truncate(&self, cap: u32) -> Result<Self> {
        self.at(cap)?;
        Ok(ResidueVector {
            residues: self.residues[..=cap as usize].to_vec(),
        })
    }

    fn combine(&self, other: &Self, compose: bool) -> Result<Self> {
        let cap = self.cap().min(other.cap());
        Self::from_levels(Level::new(cap)?, |level| {
            let n = level.get() as usize;
            let mut k = Kernel::for_level(level)?;
            let (a, b) = (self.residues[n], other.residues[n]);
            if compose {
                let b1 = (b + 1) & level.mask();
                Ok(k.star_zero(a, b1)?.wrapping_sub(1) & level.mask())
            } else {
                k.star_zero(a, b)
            }
        })
    }

    /// Residues of `k(i)`, up to the smaller of the two caps.
    pub fn apply(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    /// Residues of `k o i`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }
}

pub fn crit_ge(k: &ResidueVector, n: u32) -> Result<bool> {
    Ok(k.at(n)? == 0)
}

/// Largest `n <= cap` with `k mod 2^n = 0`.
pub fn crit_index(k: &ResidueVector) -> GammaIndex {
    if k.top() == 0 {
        return GammaIndex::AboveCap;
    }
    let n = k.residues.iter().rposition(|&r| r == 0).expect("level 0 is zero");
    GammaIndex::At(n as u32)
}

/// `log2` of the period of the 0-based element `v` of `A_n`.
fn period_log_zero(level: Level, v: u64) -> Result<u32> {
    let p = Kernel::for_level(level)?.period(level.to_prime(v))?;
    Ok(p.trailing_zeros())
}

/// `k(gamma_m) >= gamma_n`: the period of `k mod 2^n` is at most `2^m`.
pub fn gamma_image_ge(k: &ResidueVector, m: u32, n: u32) -> Result<bool> {
    let v = k.at(n)?;
    Ok(period_log_zero(Level::new(n)?, v)? <= m)
}

/// `k(gamma_m) >= gamma_n` through the product form `(k j_(2^m)) mod 2^n = 0`.
pub fn gamma_image_ge_via_product(k: &ResidueVector, m: u32, n: u32) -> Result<bool> {
    let v = k.at(n)?;
    let level = Level::new(n)?;
    let jm = if m >= 64 { 0 } else { (1u64 << m) & level.mask() };
    Ok(Kernel::for_level(level)?.star_zero(v, jm)? == 0)
}

/// Largest `n <= cap` with `k(gamma_m) >= gamma_n`.
pub fn gamma_image(k: &ResidueVector, m: u32) -> Result<GammaIndex> {
    // The property is downward closed in n, so scan up to the first failure.
    for n in 1..=k.cap() {
        if !gamma_image_ge(k, m, n)? {
            return Ok(GammaIndex::At(n - 1));
        }
    }
    Ok(GammaIndex::AboveCap)
}

/// Position of the rightmost 0 bit of `k mod 2^cap`, which locates
/// `k(gamma_0)`.
pub fn gamma0_from_bits(k: &ResidueVector) -> GammaIndex {
    let pos = k.top().trailing_ones();
    if pos >= k.cap() {
        GammaIndex::AboveCap
    } else {
        GammaIndex::At(pos)
    }
}

/// Given `k(gamma_m) = gamma_n` with `n < cap`, checks that bit `n` of
/// `k mod 2^N` is 0 for every `N` in `(n, cap]`.
pub fn zero_bit_check(k: &ResidueVector, m: u32, n: u32) -> Result<bool> {
    if n >= k.cap() {
        return Err(Error::CapExceeded { level: n + 1, cap: k.cap() });
    }
    let image = gamma_image(k, m)?;
    if image != GammaIndex::At(n) {
        return Err(Error::Precondition(format!(
            "k(gamma_{m}) is {image}, not gamma_{n}"
        )));
    }
    Ok((n + 1..=k.cap()).all(|big| (k.residues[big as usize] >> n) & 1 == 0))
}

/// `k ≡ k'` at `gamma_n`.
pub fn lequiv(k: &ResidueVector, k2: &ResidueVector, n: u32) -> Result<bool> {
    Ok(k.at(n)? == k2.at(n)?)
}
