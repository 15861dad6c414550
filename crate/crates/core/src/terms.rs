//! Terms in one generator over `*` and `o`, their evaluation in the finite
//! algebras, and the residue-level computations built on them.
//!
//! Concrete syntax: `j` is the generator, `*` is application, `o` is
//! composition. Both operators share one precedence and associate to the
//! left, so `j*j*j` is `(j*j)*j`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::crit::{crit_ge, crit_index, gamma_image, gamma_image_ge, lequiv, GammaIndex, ResidueVector};
use crate::error::{Error, Result};
use crate::forward::Kernel;
use crate::level::Level;

/// Largest number of nodes [`eval_term`] will visit.
pub const DEFAULT_TERM_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LdTerm {
    Gen,
    Apply(Box<LdTerm>, Box<LdTerm>),
    Compose(Box<LdTerm>, Box<LdTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl LdTerm {
    pub fn gen() -> Self {
        LdTerm::Gen
    }

    pub fn apply(self, rhs: LdTerm) -> Self {
        LdTerm::Apply(Box::new(self), Box::new(rhs))
    }

    pub fn compose(self, rhs: LdTerm) -> Self {
        LdTerm::Compose(Box::new(self), Box::new(rhs))
    }

    /// `j_m = j j ... j` (m copies, left-associated). `m = 0` is rejected.
    pub fn left_power(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("j_0 is not a term".into()));
        }
        let mut t = LdTerm::Gen;
        for _ in 1..m {
            t = t.apply(LdTerm::Gen);
        }
        Ok(t)
    }

    /// `j^(0) = j`, `j^(m+1) = j(j^(m))`: `m + 1` generators nested to the right.
    pub fn tower(m: u64) -> Self {
        let mut t = LdTerm::Gen;
        for _ in 0..m {
            t = LdTerm::Gen.apply(t);
        }
        t
    }

    /// Number of generator occurrences.
    pub fn size(&self) -> usize {
        match self {
            LdTerm::Gen => 1,
            LdTerm::Apply(a, b) | LdTerm::Compose(a, b) => a.size() + b.size(),
        }
    }

    pub fn node_count(&self) -> usize {
        2 * self.size() - 1
    }

    pub fn has_compose(&self) -> bool {
        match self {
            LdTerm::Gen => false,
            LdTerm::Apply(a, b) => a.has_compose() || b.has_compose(),
            LdTerm::Compose(..) => true,
        }
    }

    pub fn parse(src: &str) -> std::result::Result<Self, ParseError> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let t = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(t)
    }

    /// Every `*`-only term with exactly `leaves` generators.
    pub fn enumerate(leaves: usize) -> Vec<LdTerm> {
        let mut by_size: Vec<Vec<LdTerm>> = vec![Vec::new(), vec![LdTerm::Gen]];
        for s in 2..=leaves {
            let mut out = Vec::new();
            for l in 1..s {
                for a in &by_size[l] {
                    for b in &by_size[s - l] {
                        out.push(a.clone().apply(b.clone()));
                    }
                }
            }
            by_size.push(out);
        }
        by_size.into_iter().nth(leaves).unwrap_or_default()
    }
}

impl fmt::Display for LdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LdTerm::Gen => f.write_str("j"),
            LdTerm::Apply(a, b) | LdTerm::Compose(a, b) => {
                let op = if matches!(self, LdTerm::Apply(..)) { '*' } else { 'o' };
                write!(f, "{a}{op}")?;
                match **b {
                    LdTerm::Gen => write!(f, "{b}"),
                    _ => write!(f, "({b})"),
                }
            }
        }
    }
}

impl std::str::FromStr for LdTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        LdTerm::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> std::result::Result<LdTerm, ParseError> {
        let mut lhs = self.atom()?;
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = lhs.apply(self.atom()?);
                }
                Some(b'o') => {
                    self.pos += 1;
                    lhs = lhs.compose(self.atom()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn atom(&mut self) -> std::result::Result<LdTerm, ParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'j') => {
                self.pos += 1;
                Ok(LdTerm::Gen)
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.expr()?;
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(_) => Err(self.error("expected 'j' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Value of `t` in `A_n` (or `P_n` when `t` contains `o`), with `j`
/// interpreted as 1.
pub fn eval_term(t: &LdTerm, level: Level) -> Result<u64> {
    eval_with(t, &mut Kernel::for_level(level)?, DEFAULT_TERM_BUDGET)
}

fn eval_with(t: &LdTerm, k: &mut Kernel, budget: u64) -> Result<u64> {
    enum Step<'a> {
        Visit(&'a LdTerm),
        Combine(bool),
    }
    let level = k.level();
    let mask = level.mask();
    let one = 1 & mask;
    let mut work = vec![Step::Visit(t)];
    let mut values: Vec<u64> = Vec::new();
    let mut visited = 0u64;
    while let Some(step) = work.pop() {
        match step {
            Step::Visit(node) => {
                visited += 1;
                if visited > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                match node {
                    LdTerm::Gen => values.push(one),
                    LdTerm::Apply(a, b) | LdTerm::Compose(a, b) => {
                        work.push(Step::Combine(matches!(node, LdTerm::Compose(..))));
                        work.push(Step::Visit(b));
                        work.push(Step::Visit(a));
                    }
                }
            }
            Step::Combine(is_compose) => {
                let b = values.pop().expect("right operand");
                let a = values.pop().expect("left operand");
                let v = if is_compose {
                    k.star_zero(a, (b + 1) & mask)?.wrapping_sub(1) & mask
                } else {
                    k.star_zero(a, b)?
                };
                values.push(v);
            }
        }
    }
    Ok(values.pop().expect("result"))
}

/// `t mod 2^n` for `n = 0..=cap`.
pub fn residues(t: &LdTerm, cap: Level) -> Result<ResidueVector> {
    ResidueVector::from_levels(cap, |level| eval_term(t, level))
}

/// Residues of `j_m`, by the closed form `j_m mod 2^n = m mod 2^n`.
pub fn j_sub(m: u64, cap: Level) -> Result<ResidueVector> {
    if m == 0 {
        return Err(Error::Precondition("j_0 is not a term".into()));
    }
    ResidueVector::from_top(cap, m & cap.mask())
}

/// Residues of `j^(m)`, by iterating `v -> 1 * v` at every level.
pub fn j_sup(m: u64, cap: Level) -> Result<ResidueVector> {
    ResidueVector::from_levels(cap, |level| {
        let mut k = Kernel::for_level(level)?;
        let one = 1 & level.mask();
        let mut v = one;
        for _ in 0..m {
            v = k.star_zero(one, v)?;
        }
        Ok(v)
    })
}

/// Index of `crit j^(n)`, capped.
pub fn f_of(n: u64, cap: Level) -> Result<GammaIndex> {
    Ok(crit_index(&j_sup(n, cap)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    /// Least level at which the term is nonzero.
    Found(u32),
    /// The term is zero at every level up to and including the cap.
    NotFound(u32),
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found(n) => write!(f, "{n}"),
            SearchOutcome::NotFound(cap) => write!(f, "NOT_FOUND up to {cap}"),
        }
    }
}

/// Least `n <= cap` with `t mod 2^n != 0`.
pub fn search_nonzero(t: &LdTerm, cap: Level) -> Result<SearchOutcome> {
    for level in Level::new(0)?.iter_to(cap) {
        if eval_term(t, level)? != 0 {
            return Ok(SearchOutcome::Found(level.get()));
        }
    }
    Ok(SearchOutcome::NotFound(cap.get()))
}

/// The term `j * j_16`.
pub fn one_star_sixteen() -> LdTerm {
    LdTerm::Gen.apply(LdTerm::left_power(16).expect("16 > 0"))
}

/// Chain rule for critical points of products: with `K_i = k e_0 ... e_i`
/// (left-associated) and `E = e_0 e_1 ... e_n`, whenever `crit k >= gamma_r`
/// and `K_i(gamma_r) >= gamma_m` for all `i < n`, checks that `K_n ≡ k(E)`
/// at `gamma_m`. Every `r, m <= cap` is tried; returns the first failing
/// `(r, m)`, or `None`.
pub fn lemma28_check(
    k: &ResidueVector,
    es: &[ResidueVector],
    cap: u32,
) -> Result<Option<(u32, u32)>> {
    let Some((first, rest)) = es.split_first() else {
        return Err(Error::Precondition("need at least one factor".into()));
    };
    let mut chain = vec![k.apply(first)?];
    let mut e = first.clone();
    for f in rest {
        chain.push(chain.last().expect("nonempty").apply(f)?);
        e = e.apply(f)?;
    }
    let kn = chain.pop().expect("nonempty");
    let ke = k.apply(&e)?;
    for r in 0..=cap {
        if !crit_ge(k, r)? {
            break;
        }
        for m in 0..=cap {
            let mut premise = true;
            for ki in &chain {
                if !gamma_image_ge(ki, r, m)? {
                    premise = false;
                    break;
                }
            }
            if premise && !lequiv(&kn, &ke, m)? {
                return Ok(Some((r, m)));
            }
        }
    }
    Ok(None)
}

/// One equality between a computed and an expected capped index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexCheck {
    pub what: String,
    pub got: GammaIndex,
    pub expected: GammaIndex,
}

impl IndexCheck {
    fn new(what: String, got: GammaIndex, expected: u32, cap: u32) -> Self {
        IndexCheck {
            what,
            got,
            expected: GammaIndex::capped(expected, cap),
        }
    }

    pub fn ok(&self) -> bool {
        self.got == self.expected
    }
}

/// Outcome of the check on iterated critical points at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IteratedCritReport {
    pub n: u32,
    pub cap: u32,
    /// Witness terms whose critical point and images land on `2^n - 2^(m+1)`,
    /// `2^n - 2^m`, `2^n`.
    pub witnesses: Vec<IndexCheck>,
    /// Number of `k` with `crit k < gamma_(2^n)` at level `2^(n+1)`.
    pub sweep_checked: u64,
    /// First residue violating `k(gamma_(2^n)) >= gamma_(2^(n+1))`.
    pub sweep_failure: Option<u64>,
    /// Residues at level `2^(n+1) + 1` checked for the strict image, or 0
    /// when the cap does not reach that level.
    pub strict_checked: u64,
    pub strict_failure: Option<u64>,
    /// Images under `j_(2^(2^n) - 1)`.
    pub attained: Vec<IndexCheck>,
}

impl IteratedCritReport {
    pub fn passed(&self) -> bool {
        self.sweep_failure.is_none()
            && self.strict_failure.is_none()
            && self.witnesses.iter().all(IndexCheck::ok)
            && self.attained.iter().all(IndexCheck::ok)
    }
}

fn witness(n: u32, m: u32, cap: Level) -> Result<ResidueVector> {
    let head = j_sub((1u64 << (1u32 << (n - 1))) - 1, cap)?;
    if m + 1 == n {
        Ok(head)
    } else {
        head.apply(&witness(n - 1, m, cap)?)
    }
}

fn push_image_checks(
    out: &mut Vec<IndexCheck>,
    name: &str,
    k: &ResidueVector,
    points: &[(Option<u32>, u32)],
) -> Result<()> {
    let cap = k.cap();
    for &(m, expected) in points {
        let (what, got) = match m {
            None => (format!("crit {name}"), crit_index(k)),
            Some(m) => (format!("{name}(gamma_{m})"), gamma_image(k, m)?),
        };
        out.push(IndexCheck::new(what, got, expected, cap));
    }
    Ok(())
}

/// Checks, for one `n` with `2^(n+1) <= cap`, that critical points of
/// `A_n`-sized gaps behave as follows: every `k` with `crit k < gamma_(2^n)`
/// sends `gamma_(2^n)` to at least `gamma_(2^(n+1))`, strictly above it when
/// `k mod 2^(2^(n+1)) > 2^(2^n)`; the bound is attained by
/// `j_(2^(2^n) - 1)`; and for `m < n` there are terms with critical point
/// `gamma_(2^n - 2^(m+1))` whose images climb to `gamma_(2^n)`.
pub fn theorem31_check(n: u32, cap: Level) -> Result<IteratedCritReport> {
    let c = cap.get();
    if n >= 5 || (2u32 << n) > c {
        return Err(Error::CapExceeded {
            level: if n >= 5 { u32::MAX } else { 2 << n },
            cap: c,
        });
    }
    let small = 1u32 << n;
    let big = 2u32 << n;

    let mut witnesses = Vec::new();
    for m in 0..n {
        let w = witness(n, m, cap)?;
        let (lo, mid) = (small - (2 << m), small - (1 << m));
        push_image_checks(
            &mut witnesses,
            &format!("w({n},{m})"),
            &w,
            &[(None, lo), (Some(lo), mid), (Some(mid), small)],
        )?;
    }

    let big_level = Level::new(big)?;
    let mut kernel = Kernel::for_level(big_level)?;
    let small_mask = (1u64 << small) - 1;
    let mut sweep_checked = 0;
    let mut sweep_failure = None;
    for v in 0..big_level.size() {
        if v & small_mask == 0 {
            continue;
        }
        sweep_checked += 1;
        let p = kernel.period(big_level.to_prime(v))?;
        if p.trailing_zeros() > small {
            sweep_failure = Some(v);
            break;
        }
    }

    let mut strict_checked = 0;
    let mut strict_failure = None;
    if big < c {
        let up = big_level.next()?;
        let mut kernel = Kernel::for_level(up)?;
        for w in 0..up.size() {
            let v = w & big_level.mask();
            if v & small_mask == 0 || v <= 1u64 << small {
                continue;
            }
            strict_checked += 1;
            if kernel.period(up.to_prime(w))?.trailing_zeros() > small {
                strict_failure = Some(w);
                break;
            }
        }
    }

    let k = j_sub((1u64 << small) - 1, cap)?;
    let mut points = vec![(None, 0)];
    points.extend((0..=small).map(|r| (Some(r), small + r)));
    let mut attained = Vec::new();
    push_image_checks(&mut attained, &format!("j_{}", (1u64 << small) - 1), &k, &points)?;

    Ok(IteratedCritReport {
        n,
        cap: c,
        witnesses,
        sweep_checked,
        sweep_failure,
        strict_checked,
        strict_failure,
        attained,
    })
}
