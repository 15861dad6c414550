//! Exhaustive and property sweeps over the algebras, run by name.
//!
//! Every suite takes one integer bound (its meaning is listed with the
//! suite), checks every instance inside it, and reports how many instances
//! were checked together with the first counterexample in a fixed order.
//! Independent oracles are used where one exists: a dense backward table
//! filled from the backward recursion, and memoized naive evaluation.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::backward::{bs_at, scatter_bits, subalg, template_embed};
use crate::bitmap::{render_pbm, BitmapKind, BitmapSpec, PbmFormat};
use crate::cache;
use crate::crit::{
    crit_ge, crit_index, gamma0_from_bits, gamma_image, gamma_image_ge, gamma_image_ge_via_product, lequiv,
    zero_bit_check, GammaIndex, ResidueVector,
};
use crate::error::{Error, Result};
use crate::forward::build_table;
use crate::level::{mod_plus, Level};
use crate::naive::{DenseBackward, NaiveForward};
use crate::registry::shared_table;
use crate::struct_iso::{
    accelerated_bs_traced, cor42_fast_row, lemma43_max_period, lemma44_shift, lemma45_period_bound,
    lemma46_period_bound, lemma47_step, lemma48_step, thm41_image, validate_params, Thm41Params,
};
use crate::table::{BuildOptions, CompressedTable};
use crate::terms::{eval_term, f_of, j_sub, lemma28_check, residues, theorem31_check, LdTerm};

/// Machine-readable outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub bound: u32,
    pub checked: u64,
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub stats: BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// A named sweep.
#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub bound_meaning: &'static str,
    pub default_bound: u32,
    pub max_bound: u32,
    run: fn(u32) -> Result<Tally>,
}

/// Running count of checks and the first failure.
#[derive(Clone, Debug, Default)]
struct Tally {
    checked: u64,
    counterexample: Option<String>,
    stats: BTreeMap<String, u64>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn stat(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_string()).or_default() += by;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
        self
    }
}

/// Runs `f` on every item in parallel and merges in item order, so the
/// reported counterexample does not depend on scheduling.
fn sweep<T: Send>(items: Vec<T>, f: impl Fn(T) -> Result<Tally> + Sync + Send) -> Result<Tally> {
    let parts: Vec<Result<Tally>> = items.into_par_iter().map(f).collect();
    parts.into_iter().try_fold(Tally::default(), |acc, t| Ok(acc.merge(t?)))
}

fn lvl(n: u32) -> Result<Level> {
    Level::new(n)
}

fn dense(n: u32) -> Result<DenseBackward> {
    DenseBackward::build(lvl(n)?)
}

pub const SUITES: &[Suite] = &[
    Suite { name: "left-distributivity", bound_meaning: "level n", default_bound: 6, max_bound: 10, run: left_distributivity },
    Suite { name: "laws11", bound_meaning: "level n", default_bound: 7, max_bound: 8, run: laws11 },
    Suite { name: "periods-pow2", bound_meaning: "levels up to n", default_bound: 16, max_bound: 20, run: periods_pow2 },
    Suite { name: "prop25b", bound_meaning: "levels up to n", default_bound: 8, max_bound: 12, run: wraparound_recursion },
    Suite { name: "mod-hom", bound_meaning: "levels up to N", default_bound: 10, max_bound: 12, run: mod_hom },
    Suite { name: "shift-hom", bound_meaning: "levels up to n", default_bound: 10, max_bound: 12, run: shift_hom },
    Suite { name: "period-doubling", bound_meaning: "levels up to n", default_bound: 14, max_bound: 19, run: period_doubling },
    Suite { name: "reversal", bound_meaning: "levels up to n", default_bound: 10, max_bound: 13, run: reversal },
    Suite { name: "level-independence", bound_meaning: "ambient levels up to n (x, y < 2^10)", default_bound: 14, max_bound: 20, run: level_independence },
    Suite { name: "subalg-props", bound_meaning: "x < 2^n", default_bound: 10, max_bound: 13, run: subalg_props },
    Suite { name: "bit-containment", bound_meaning: "x < 2^n", default_bound: 12, max_bound: 13, run: bit_containment },
    Suite { name: "template", bound_meaning: "x < 2^n", default_bound: 12, max_bound: 12, run: template },
    Suite { name: "prop23", bound_meaning: "cap", default_bound: 8, max_bound: 10, run: prop23 },
    Suite { name: "prop24", bound_meaning: "cap", default_bound: 8, max_bound: 10, run: prop24 },
    Suite { name: "gamma-defs", bound_meaning: "levels up to n", default_bound: 10, max_bound: 14, run: gamma_defs },
    Suite { name: "prop25d-consequence", bound_meaning: "levels up to n", default_bound: 10, max_bound: 14, run: top_bit_consequence },
    Suite { name: "lemma28", bound_meaning: "cap", default_bound: 8, max_bound: 10, run: lemma28 },
    Suite { name: "lemma29", bound_meaning: "cap (terms of size <= 6)", default_bound: 10, max_bound: 12, run: lemma29 },
    Suite { name: "thm21", bound_meaning: "cap (m <= 2^cap)", default_bound: 10, max_bound: 14, run: thm21 },
    Suite { name: "jsub", bound_meaning: "cap (m <= 2^cap)", default_bound: 10, max_bound: 10, run: jsub },
    Suite { name: "wehrung", bound_meaning: "levels up to n", default_bound: 12, max_bound: 16, run: wehrung },
    Suite { name: "thm31", bound_meaning: "cap", default_bound: 8, max_bound: 16, run: thm31 },
    Suite { name: "f-stability", bound_meaning: "largest cap", default_bound: 12, max_bound: 16, run: f_stability },
    Suite { name: "thm41", bound_meaning: "N (bundles inside B_N)", default_bound: 12, max_bound: 12, run: thm41 },
    Suite { name: "cor42", bound_meaning: "N (bundles inside B_N)", default_bound: 12, max_bound: 13, run: cor42 },
    Suite { name: "lemma43", bound_meaning: "N", default_bound: 10, max_bound: 13, run: lemma43 },
    Suite { name: "lemma44", bound_meaning: "N", default_bound: 10, max_bound: 12, run: lemma44 },
    Suite { name: "lemma45", bound_meaning: "N", default_bound: 10, max_bound: 13, run: lemma45 },
    Suite { name: "lemma46", bound_meaning: "N", default_bound: 10, max_bound: 12, run: lemma46 },
    Suite { name: "lemma47", bound_meaning: "N", default_bound: 10, max_bound: 12, run: lemma47 },
    Suite { name: "lemma48", bound_meaning: "N", default_bound: 10, max_bound: 12, run: lemma48 },
    Suite { name: "accel-grid", bound_meaning: "x, y < 2^n", default_bound: 12, max_bound: 13, run: accel_grid },
    Suite { name: "build-accel", bound_meaning: "levels up to n", default_bound: 12, max_bound: 16, run: build_accel },
    Suite { name: "cache-roundtrip", bound_meaning: "levels up to n", default_bound: 12, max_bound: 16, run: cache_roundtrip },
    Suite { name: "cache-fuzz", bound_meaning: "levels up to n", default_bound: 12, max_bound: 14, run: cache_fuzz },
    Suite { name: "bitmap-determinism", bound_meaning: "levels up to n", default_bound: 8, max_bound: 10, run: bitmap_determinism },
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs a suite on a pool of `jobs` worker threads (0 = one per CPU).
pub fn run_suite(name: &str, bound: Option<u32>, jobs: usize) -> Result<SuiteReport> {
    let suite = find_suite(name).ok_or_else(|| Error::Precondition(format!("unknown suite {name:?}")))?;
    let bound = bound.unwrap_or(suite.default_bound);
    if bound > suite.max_bound {
        return Err(Error::Precondition(format!(
            "suite {name} accepts bounds up to {}",
            suite.max_bound
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    let tally = pool.install(|| (suite.run)(bound))?;
    Ok(SuiteReport {
        suite: name.to_string(),
        bound,
        checked: tally.checked,
        counterexample: tally.counterexample,
        stats: tally.stats,
    })
}

// ---- forward algebras ------------------------------------------------------

fn left_distributivity(n: u32) -> Result<Tally> {
    let t = shared_table(lvl(n)?)?;
    let top = t.level().size();
    sweep((1..=top).collect(), |a| {
        let mut tally = Tally::default();
        for b in 1..=top {
            let ab = t.get(a, b);
            for c in 1..=top {
                let lhs = t.get(a, t.get(b, c));
                let rhs = t.get(ab, t.get(a, c));
                tally.check(lhs == rhs, || format!("a={a} b={b} c={c}: {lhs} != {rhs}"));
            }
        }
        Ok(tally)
    })
}

/// The four laws of the two-operation algebra, in `A_n` form.
fn laws11(n: u32) -> Result<Tally> {
    let t = shared_table(lvl(n)?)?;
    let size = t.level().size();
    sweep((0..size).collect(), |a| {
        let mut tally = Tally::default();
        let (st, co) = (|x, y| t.star_zero(x, y), |x, y| t.compose_zero(x, y));
        for b in 0..size {
            tally.check(co(a, b) == co(st(a, b), a), || format!("a o b = ab o a at a={a} b={b}"));
            for c in 0..size {
                let ok = co(co(a, b), c) == co(a, co(b, c))
                    && st(co(a, b), c) == st(a, st(b, c))
                    && st(a, co(b, c)) == co(st(a, b), st(a, c));
                tally.check(ok, || format!("a={a} b={b} c={c}"));
            }
        }
        Ok(tally)
    })
}

/// Rows are powers of two long, strictly increasing, end at `2^n`, exceed
/// their row index, and follow the recursion step by step.
fn periods_pow2(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let t = shared_table(lvl(n)?)?;
        let top = t.level().size();
        for a in 1..top {
            let row = t.stored_row(a);
            let p = row.len() as u64;
            let ok = p.is_power_of_two()
                && row[0] == a + 1
                && row.last() == Some(&top)
                && row.windows(2).all(|w| w[0] < w[1] && t.get(w[0], a + 1) == w[1]);
            tally.check(ok, || format!("n={n} row {a} (period {p})"));
        }
        tally.check(t.get(top, top) == top, || format!("n={n} top row"));
    }
    Ok(tally)
}

/// The defining recursion holds modulo `2^n` when `a` or `b` is `2^n`.
fn wraparound_recursion(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let level = lvl(n)?;
        let t = shared_table(level)?;
        let top = level.size();
        let w = |x| mod_plus(x, level);
        for a in 1..=top {
            for b in 1..=top {
                if a != top && b != top {
                    continue;
                }
                let ok = t.get(a, 1) == w(a + 1) && t.get(a, w(b + 1)) == t.get(t.get(a, b), w(a + 1));
                tally.check(ok, || format!("n={n} a={a} b={b}"));
            }
        }
    }
    Ok(tally)
}

fn mod_hom(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for big in 0..=bound {
        let t = shared_table(lvl(big)?)?;
        let top = t.level().size();
        let part = sweep((1..=top).collect(), |a| {
            let mut tally = Tally::default();
            for n in 0..big {
                let level = lvl(n)?;
                let s = shared_table(level)?;
                for b in 1..=top {
                    let lhs = mod_plus(t.get(a, b), level);
                    let rhs = s.get(mod_plus(a, level), mod_plus(b, level));
                    tally.check(lhs == rhs, || format!("N={big} n={n} a={a} b={b}"));
                }
            }
            Ok(tally)
        })?;
        tally = tally.merge(part);
    }
    Ok(tally)
}

fn shift_hom(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let (t, up) = (shared_table(lvl(n)?)?, shared_table(lvl(n + 1)?)?);
        let top = t.level().size();
        for a in 1..=top {
            for b in 1..=top {
                let ok = t.get(a, b) + top == up.get(a + top, b + top);
                tally.check(ok, || format!("n={n} a={a} b={b}"));
            }
        }
    }
    Ok(tally)
}

fn period_doubling(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let (t, up) = (shared_table(lvl(n)?)?, shared_table(lvl(n + 1)?)?);
        let top = t.level().size();
        for a in 1..top {
            let p = t.period(a);
            let (same, lifted) = (up.period(a), up.period(a + top));
            tally.check(lifted == p && (same == p || same == 2 * p), || {
                format!("n={n} a={a}: p={p}, at n+1: {same}, shifted {lifted}")
            });
        }
        tally.check(up.period(top) == top, || format!("n={n}: period of 2^n"));
    }
    Ok(tally)
}

// ---- backward algebras -----------------------------------------------------

/// `2^n - a * b = (2^n - a) \ (2^n - b)`, against the dense backward table.
fn reversal(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let t = shared_table(lvl(n)?)?;
        let d = dense(n)?;
        let top = t.level().size();
        for a in 1..=top {
            for b in 1..=top {
                let ok = top - t.get(a, b) == d.bs(top - a, top - b);
                tally.check(ok, || format!("n={n} a={a} b={b}"));
            }
        }
    }
    Ok(tally)
}

fn level_independence(bound: u32) -> Result<Tally> {
    let d = dense(10)?;
    sweep((0..1u64 << 10).collect(), |x| {
        let mut tally = Tally::default();
        for y in 0..1u64 << 10 {
            let want = d.bs(x, y);
            for n in 10..=bound {
                let got = bs_at(lvl(n)?, x, y)?;
                tally.check(got == want, || format!("x={x} y={y} at level {n}: {got} != {want}"));
            }
        }
        Ok(tally)
    })
}

/// Strict nesting of generated subalgebras and compatibility with reduction.
fn subalg_props(bound: u32) -> Result<Tally> {
    let d = dense(bound)?;
    let mut subs: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut tally = Tally::default();
    for x in 0..1u64 << bound {
        let s = subalg(x)?;
        if x + 1 < d.level().size() {
            tally.check(d.row(x + 1) == s.elements(), || format!("<{x}> differs from the dense row of {}", x + 1));
        }
        subs.insert(x, s.elements().to_vec());
    }
    for x in 0..1u64 << bound {
        let sx: HashSet<u64> = subs[&x].iter().copied().collect();
        for &y in &subs[&x] {
            if y == x {
                continue;
            }
            let sy = &subs[&y];
            let ok = sy.len() < sx.len() && sy.iter().all(|v| sx.contains(v));
            tally.check(ok, || format!("<{y}> is not strictly inside <{x}>"));
        }
        for n in 0..=bound {
            let mask = (1u64 << n) - 1;
            let image: HashSet<u64> = subs[&x].iter().map(|v| v & mask).collect();
            let target: HashSet<u64> = subs[&(x & mask)].iter().copied().collect();
            tally.check(image == target, || format!("<{x}> mod 2^{n} != <{}>", x & mask));
        }
    }
    Ok(tally)
}

fn bit_containment(bound: u32) -> Result<Tally> {
    let d = dense(bound + 1)?;
    sweep((0..1u64 << bound).collect(), |x| {
        let mut tally = Tally::default();
        let row = d.row(x + 1);
        tally.check(row.last() == Some(&x), || format!("row of {} does not end at {x}", x + 1));
        for &y in &row {
            tally.check(y & !x == 0, || format!("{y} in <{x}> has a bit outside {x}"));
        }
        Ok(tally)
    })
}

/// Where `|<x>| = 2^popcount(x)`, scattering bits into the 1-positions of
/// `x` is an isomorphism `B_r -> <x>`.
fn template(bound: u32) -> Result<Tally> {
    let d = dense(bound + 1)?;
    let small: Vec<DenseBackward> = (0..=bound).map(dense).collect::<Result<_>>()?;
    sweep((0..1u64 << bound).collect(), |x| {
        let mut tally = Tally::default();
        let r = x.count_ones();
        let row = d.row(x + 1);
        if row.len() as u64 != 1u64 << r {
            tally.check(template_embed(x, 0).is_err(), || format!("template_embed accepted {x}"));
            return Ok(tally);
        }
        tally.stat("attained", 1);
        let emb: Vec<u64> = (0..1u64 << r).map(|v| scatter_bits(x, v)).collect();
        tally.check(template_embed(x, (1 << r) - 1)? == x, || format!("template_embed({x}, top)"));
        let mut sorted = emb.clone();
        sorted.sort_unstable();
        tally.check(sorted == row, || format!("template image of {x} is not <{x}>"));
        let b = &small[r as usize];
        for u in 0..1u64 << r {
            for v in 0..1u64 << r {
                let ok = emb[b.bs(u, v) as usize] == d.bs(emb[u as usize], emb[v as usize]);
                tally.check(ok, || format!("x={x}: u={u} v={v}"));
            }
        }
        Ok(tally)
    })
}

// ---- critical points -------------------------------------------------------

/// Distinct residue vectors of `*`-only terms with at most `leaves` generators.
fn term_residues(leaves: usize, cap: u32) -> Result<Vec<ResidueVector>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in 1..=leaves {
        for t in LdTerm::enumerate(s) {
            let r = residues(&t, lvl(cap)?)?;
            if seen.insert(r.clone()) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

fn prop23(cap: u32) -> Result<Tally> {
    let set = term_residues(7, cap)?;
    let products: Vec<Vec<ResidueVector>> = set
        .iter()
        .map(|k| set.iter().map(|i| k.apply(i)).collect())
        .collect::<Result<_>>()?;
    let mut tally = Tally::default();
    tally.stat("residue vectors", set.len() as u64);
    let ge = gamma_image_ge;
    for (ki, k) in set.iter().enumerate() {
        for n in 0..=cap {
            for m in 0..=cap {
                if n < cap && m < cap {
                    let ok = !ge(k, n, m)? || ge(k, n + 1, m + 1)?;
                    tally.check(ok, || format!("image step for k={:?} n={n} m={m}", k.residues()));
                }
                if m < cap && n == m {
                    let ok = crit_ge(k, m + 1)? == !ge(k, m, m + 1)?;
                    tally.check(ok, || format!("crit test for k={:?} m={m}", k.residues()));
                }
                for (ii, i) in set.iter().enumerate() {
                    let prod = &products[ki][ii];
                    if crit_ge(i, n)? && ge(k, n, m)? {
                        tally.check(crit_ge(prod, m)?, || format!("crit of product, n={n} m={m}"));
                    }
                    if n < cap && m < cap && !crit_ge(i, n + 1)? && !ge(k, n, m + 1)? {
                        tally.check(!crit_ge(prod, m + 1)?, || format!("crit of product bound, n={n} m={m}"));
                    }
                }
            }
        }
    }
    Ok(tally)
}

fn prop24(cap: u32) -> Result<Tally> {
    let set = term_residues(7, cap)?;
    let apply: Vec<Vec<ResidueVector>> = set
        .iter()
        .map(|k| set.iter().map(|i| k.apply(i)).collect())
        .collect::<Result<_>>()?;
    let compose: Vec<Vec<ResidueVector>> = set
        .iter()
        .map(|k| set.iter().map(|i| k.compose(i)).collect())
        .collect::<Result<_>>()?;
    let len = set.len();
    let mut tally = Tally::default();
    tally.stat("residue vectors", len as u64);
    for n in 0..=cap {
        for k in 0..len {
            tally.check(lequiv(&set[k], &set[k], n)?, || "reflexivity".into());
            for k2 in 0..len {
                let eq = lequiv(&set[k], &set[k2], n)?;
                tally.check(eq == lequiv(&set[k2], &set[k], n)?, || "symmetry".into());
                for i in 0..len {
                    if crit_ge(&set[i], n)? && k2 == 0 {
                        tally.check(lequiv(&set[k], &apply[i][k], n)?, || format!("ik at n={n}"));
                    }
                    if !eq {
                        continue;
                    }
                    let ok = lequiv(&apply[k][i], &apply[k2][i], n)?
                        && lequiv(&compose[k][i], &compose[k2][i], n)?
                        && lequiv(&compose[i][k], &compose[i][k2], n)?;
                    tally.check(ok, || format!("congruence at n={n}"));
                    for m in 0..=cap {
                        if i == 0 {
                            let same = gamma_image_ge(&set[k], m, n)? == gamma_image_ge(&set[k2], m, n)?;
                            tally.check(same, || format!("images at n={n} m={m}"));
                        }
                        if gamma_image_ge(&set[i], n, m)? {
                            tally.check(lequiv(&apply[i][k], &apply[i][k2], m)?, || format!("ik at n={n} m={m}"));
                        }
                    }
                }
            }
        }
    }
    Ok(tally)
}

/// Both definitions of `k(gamma_m) >= gamma_n` agree, and the rightmost 0
/// bit locates `k(gamma_0)`.
fn gamma_defs(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        for v in 0..1u64 << n {
            let k = ResidueVector::from_top(lvl(n)?, v)?;
            for m in 0..=n + 1 {
                let ok = gamma_image_ge(&k, m, n)? == gamma_image_ge_via_product(&k, m, n)?;
                tally.check(ok, || format!("n={n} v={v} m={m}"));
            }
        }
    }
    let top = ResidueVector::from_top;
    for v in 0..1u64 << bound {
        let k = top(lvl(bound)?, v)?;
        let (bits, image) = (gamma0_from_bits(&k), gamma_image(&k, 0)?);
        if bits != GammaIndex::AboveCap && image != GammaIndex::AboveCap {
            tally.check(bits == image, || format!("v={v}: bits {bits}, image {image}"));
        }
    }
    Ok(tally)
}

/// If `k mod 2^(n+1) >= 2^n` then no `k(gamma_m)` equals `gamma_n`.
fn top_bit_consequence(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..bound {
        for v in 1u64 << n..2u64 << n {
            let k = ResidueVector::from_top(lvl(n + 1)?, v)?;
            for m in 0..=n + 1 {
                let hit = gamma_image_ge(&k, m, n)? && !gamma_image_ge(&k, m, n + 1)?;
                tally.check(!hit, || format!("v={v} sends gamma_{m} to gamma_{n}"));
            }
        }
    }
    Ok(tally)
}

fn lemma28(cap: u32) -> Result<Tally> {
    let set = term_residues(4, cap)?;
    // every sequence e_0, ..., e_i of length 1 to 3
    let mut sequences: Vec<Vec<ResidueVector>> = Vec::new();
    let mut layer: Vec<Vec<ResidueVector>> = vec![Vec::new()];
    for _ in 0..3 {
        layer = layer
            .iter()
            .flat_map(|s| set.iter().map(move |e| [s.as_slice(), std::slice::from_ref(e)].concat()))
            .collect();
        sequences.extend(layer.iter().cloned());
    }
    let mut tally = Tally::default();
    for k in &set {
        for es in &sequences {
            let failure = lemma28_check(k, es, cap)?;
            tally.check(failure.is_none(), || format!("k={:?} failing (r, m) = {failure:?}", k.residues()));
        }
    }
    Ok(tally)
}

/// Zero bit at every attained image, for terms with at most 6 generators.
fn lemma29(cap: u32) -> Result<Tally> {
    let terms: Vec<LdTerm> = (1..=6).flat_map(LdTerm::enumerate).collect();
    let mut tally = Tally::default();
    tally.stat("terms", terms.len() as u64);
    for t in &terms {
        let k = residues(t, lvl(cap)?)?;
        for m in 0..=cap {
            if let GammaIndex::At(n) = gamma_image(&k, m)? {
                tally.check(zero_bit_check(&k, m, n)?, || format!("{t}: gamma_{m} -> gamma_{n}"));
            }
        }
    }
    Ok(tally)
}

fn thm21(cap: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for m in 1..=1u64 << cap {
        let got = crit_index(&j_sub(m, lvl(cap)?)?);
        let want = GammaIndex::capped(m.trailing_zeros(), cap);
        tally.check(got == want, || format!("crit j_{m} = {got}, expected {want}"));
    }
    Ok(tally)
}

fn jsub(cap: u32) -> Result<Tally> {
    sweep((1..=1u64 << cap).collect(), |m| {
        let mut tally = Tally::default();
        let t = LdTerm::left_power(m)?;
        let ok = residues(&t, lvl(cap)?)? == j_sub(m, lvl(cap)?)?;
        tally.check(ok, || format!("j_{m}"));
        Ok(tally)
    })
}

/// `2^n + 1` generators multiplied from the left give the generator back.
fn wehrung(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let level = lvl(n)?;
        let t = LdTerm::left_power(level.size() + 1)?;
        let v = eval_term(&t, level)?;
        tally.check(v == 1 & level.mask(), || format!("n={n}: {v}"));
    }
    Ok(tally)
}

fn thm31(cap: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in (0..5).take_while(|&n| 2u32 << n <= cap) {
        let r = theorem31_check(n, lvl(cap)?)?;
        tally.stat("sweep residues", r.sweep_checked);
        tally.stat("strict residues", r.strict_checked);
        for c in r.witnesses.iter().chain(&r.attained) {
            tally.check(c.ok(), || format!("n={n}: {} = {}, expected {}", c.what, c.got, c.expected));
        }
        tally.check(r.sweep_failure.is_none(), || format!("n={n}: sweep fails at {:?}", r.sweep_failure));
        tally.check(r.strict_failure.is_none(), || format!("n={n}: strict sweep fails at {:?}", r.strict_failure));
    }
    Ok(tally)
}

fn f_stability(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=4u64 {
        let mut settled: Option<GammaIndex> = None;
        for cap in 1..=bound {
            let f = f_of(n, lvl(cap)?)?;
            if let Some(prev) = settled {
                tally.check(f == prev, || format!("F({n}) changed from {prev} to {f} at cap {cap}"));
            } else if f != GammaIndex::AboveCap {
                settled = Some(f);
            } else {
                tally.checked += 1;
            }
        }
    }
    Ok(tally)
}

// ---- block structure -------------------------------------------------------

/// Every valid bundle `(x, y, m, n)` with `a + 1 < 2^big`.
fn bundles(big: u32) -> Result<Vec<Thm41Params>> {
    let mut out = Vec::new();
    let limit = 1u64 << big;
    let mut n = 1u32;
    while n <= big {
        let mut m = 0;
        while (m + 1) * n <= big {
            let step = 1u64 << ((m + 1) * n);
            for x in (0..limit).step_by(step as usize) {
                for y in 0..1u64 << n {
                    let a = x + (y << (m * n));
                    if a + 1 >= limit {
                        continue;
                    }
                    if let Ok(p) = validate_params(x, y, m, n) {
                        out.push(p);
                    }
                }
            }
            m += 1;
        }
        n *= 2;
    }
    Ok(out)
}

/// Pointwise formula over one period, and the induced map
/// `<reference> -> <a>` compared as full operation tables.
fn thm41(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    sweep(bundles(big)?, |p| {
        let mut tally = Tally::default();
        tally.stat("bundles", 1);
        let row = d.row(p.a() + 1);
        for (i, &want) in row.iter().enumerate() {
            let got = thm41_image(&p, i as u64)?;
            tally.check(got == want, || format!("{p:?} i={i}: {got} != {want}"));
        }
        let reference = d.row(p.reference_generator() + 1);
        tally.check(reference.len() == row.len(), || format!("{p:?}: periods differ"));
        if reference.len() != row.len() {
            return Ok(tally);
        }
        let index: HashMap<u64, usize> = reference.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (i, &u) in reference.iter().enumerate() {
            for (j, &v) in reference.iter().enumerate() {
                let ok = match index.get(&d.bs(u, v)) {
                    Some(&k) => row[k] == d.bs(row[i], row[j]),
                    None => false,
                };
                tally.check(ok, || format!("{p:?}: map fails at ({u}, {v})"));
            }
        }
        Ok(tally)
    })
}

fn cor42(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let full: Vec<_> = bundles(big)?.into_iter().filter(|p| p.y() == (1u64 << p.n()) - 1).collect();
    sweep(full, |p| {
        let mut tally = Tally::default();
        let row = d.row(p.a() + 1);
        tally.check(row.len() as u64 == 1u64 << (p.l() + p.n()), || format!("{p:?}: period {}", row.len()));
        tally.check(cor42_fast_row(&p)? == row, || format!("{p:?}: assembled row differs"));
        Ok(tally)
    })
}

fn lemma43(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let mut tally = Tally::default();
    for s in 0..big {
        for s2 in s..big {
            let Ok(claim) = lemma43_max_period(s, s2) else { continue };
            let e = (1u64 << s2) - (1u64 << s) + 1;
            let ok = claim && d.period(e) == 1u64 << (s2 - s);
            tally.check(ok, || format!("s={s} s'={s2}: period of {e} is {}", d.period(e)));
        }
    }
    Ok(tally)
}

fn lemma44(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let mask = d.level().mask();
    sweep((0..big).collect(), |s| {
        let mut tally = Tally::default();
        for x in (0..1u64 << big).step_by(1 << s) {
            if x + (1 << s) >= 1u64 << big {
                continue;
            }
            if lemma44_shift(x, s, 0, 0).is_err() {
                continue;
            }
            for i in 0..d.period(x + 1) {
                for i2 in 0..1u64 << s {
                    let want = lemma44_shift(x, s, i, i2)?;
                    let got = d.bs(x + (1 << s), ((i << s) + i2) & mask);
                    tally.check(got == want, || format!("x={x} s={s} i={i} i'={i2}"));
                }
            }
        }
        Ok(tally)
    })
}

fn lemma45(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let mut tally = Tally::default();
    for n in [1u32, 2, 4, 8] {
        for a in 0..(1u64 << big) - 1 {
            let Ok(claim) = lemma45_period_bound(a, n) else { continue };
            let direct = (1u64 << n) % d.period(a + 1) == 0;
            tally.check(claim && direct, || format!("a={a} n={n}"));
        }
    }
    Ok(tally)
}

fn lemma46(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let mut tally = Tally::default();
    for p in bundles(big)? {
        let Ok(claim) = lemma46_period_bound(&p) else { continue };
        let direct = (1u64 << p.n()) % d.period(p.a() + 1) == 0;
        tally.check(claim && direct, || format!("{p:?}"));
    }
    Ok(tally)
}

fn lemma47(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let limit = 1u64 << big;
    let mut cases = Vec::new();
    let mut n = 1u32;
    while n <= big {
        let mut m = 0;
        while (m + 1) * n <= big {
            cases.push((m, n));
            m += 1;
        }
        n *= 2;
    }
    sweep(cases, |(m, n)| {
        let mut tally = Tally::default();
        let step = 1usize << ((m + 1) * n);
        let full = (1u64 << n) - 1;
        for x in (0..limit).step_by(step) {
            let rhs = x + (full << (m * n));
            for x2 in (0..limit).step_by(step) {
                for y2 in 1..=full {
                    let lhs = x2 + (y2 << (m * n));
                    let Ok(want) = lemma47_step(x2, y2, x, m, n) else { continue };
                    let got = d.bs(lhs, rhs);
                    tally.check(got == want, || format!("x'={x2} y'={y2} x={x} m={m} n={n}"));
                }
            }
        }
        Ok(tally)
    })
}

fn lemma48(big: u32) -> Result<Tally> {
    let d = dense(big)?;
    let limit = 1u64 << big;
    let mut cases = Vec::new();
    let mut n = 1u32;
    while n <= big {
        let mut m = 0;
        while (m + 1) * n <= big {
            cases.push((m, n));
            m += 1;
        }
        n *= 2;
    }
    sweep(cases, |(m, n)| {
        let mut tally = Tally::default();
        let full = (1u64 << n) - 1;
        for x in (0..limit).step_by(1usize << ((m + 1) * n)) {
            let target = x + (full << (m * n));
            if target >= limit {
                continue;
            }
            for x2 in d.row((x + 1) & d.level().mask()) {
                let Ok(want) = lemma48_step(x2, x, m, n) else { continue };
                let got = d.bs(x2, target);
                tally.check(got == want, || format!("x'={x2} x={x} m={m} n={n}"));
            }
        }
        Ok(tally)
    })
}

fn accel_grid(bound: u32) -> Result<Tally> {
    let d = dense(bound)?;
    sweep((0..1u64 << bound).collect(), |x| {
        let mut tally = Tally::default();
        for y in 0..1u64 << bound {
            let (got, peeled) = accelerated_bs_traced(x, y)?;
            if peeled > 0 {
                tally.stat("pairs using blocks", 1);
            }
            tally.check(got == d.bs(x, y), || format!("x={x} y={y}"));
        }
        Ok(tally)
    })
}

// ---- builds and files ------------------------------------------------------

fn build_accel(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let level = lvl(n)?;
        let plain = build_table(level, false)?;
        let opts = BuildOptions { accel: true, cross_check: true, ..BuildOptions::default() };
        let (fast, stats) = CompressedTable::build_with(level, &opts)?;
        tally.stat("fast rows", stats.fast_rows);
        tally.check(fast == plain, || format!("n={n}"));
        if n <= 8 {
            let mut naive = NaiveForward::new(level);
            for a in 1..=level.size() {
                for b in 1..=level.size() {
                    let ok = naive.star_prime(a, b)? == plain.get(a, b);
                    tally.check(ok, || format!("n={n} a={a} b={b} against naive recursion"));
                }
            }
        }
    }
    Ok(tally)
}

fn cache_roundtrip(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let t = shared_table(lvl(n)?)?;
        let bytes = cache::encode(&t);
        let back = cache::decode(&bytes);
        let ok = matches!(&back, Ok(b) if *b == *t && cache::encode(b) == bytes);
        tally.check(ok, || format!("n={n}: {:?}", back.err()));
    }
    Ok(tally)
}

/// Single-bit flips anywhere in a cache file must be rejected: the header
/// exhaustively, the rest by seeded sampling. A decoded file is the unique
/// table satisfying the recursion, so no flip can survive validation.
fn cache_fuzz(bound: u32) -> Result<Tally> {
    sweep((0..=bound).collect(), |n| {
        let mut tally = Tally::default();
        let bytes = cache::encode(&*shared_table(lvl(n)?)?);
        let mut rng = StdRng::seed_from_u64(0x4c41_5652 + n as u64);
        let mut positions: Vec<usize> = (0..14.min(bytes.len())).collect();
        let body = bytes.len() - 14;
        if body <= 512 {
            positions.extend(14..bytes.len());
        } else {
            positions.extend((0..512).map(|_| 14 + rng.gen_range(0..body)));
        }
        for pos in positions {
            for bit in 0..8 {
                let mut bad = bytes.clone();
                bad[pos] ^= 1 << bit;
                tally.check(cache::decode(&bad).is_err(), || format!("n={n}: flip of bit {bit} at byte {pos} accepted"));
            }
        }
        Ok(tally)
    })
}

fn bitmap_determinism(bound: u32) -> Result<Tally> {
    let mut tally = Tally::default();
    for n in 0..=bound {
        let t = shared_table(lvl(n)?)?;
        for kind in [BitmapKind::RowBits, BitmapKind::PeriodGrid] {
            for format in [PbmFormat::Plain, PbmFormat::Raw] {
                let spec = BitmapSpec { kind, rows: 1..=t.level().size(), format };
                let first = render_pbm(&t, &spec)?;
                let again = render_pbm(&build_table(lvl(n)?, false)?, &spec)?;
                tally.check(first == again, || format!("n={n} {kind:?} {format:?}"));
            }
        }
    }
    Ok(tally)
}
