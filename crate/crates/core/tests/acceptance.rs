//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Time limits are wall-clock on a single worker.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{largest_zero_level, tower, two_adic, Backward, Forward};
use laver_core::backward::bs_at;
use laver_core::cache;
use laver_core::crit::{crit_index, gamma_image};
use laver_core::forward::star_prime;
use laver_core::struct_iso::accelerated_bs;
use laver_core::table::DEFAULT_MEMORY_BUDGET;
use laver_core::terms::{f_of, j_sub, theorem31_check};
use laver_core::verify::{run_suite, SuiteReport};
use laver_core::{BuildOptions, CompressedTable, GammaIndex, Level};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn lvl(n: u32) -> Level {
    Level::new(n).unwrap()
}

/// Runs suites in order, failing on the first error or counterexample.
fn suites(runs: &[(&str, u32)]) -> Result<Vec<SuiteReport>, String> {
    runs.iter()
        .map(|&(name, bound)| {
            let r = run_suite(name, Some(bound), 1).map_err(|e| format!("{name}: {e}"))?;
            match &r.counterexample {
                None => Ok(r),
                Some(c) => Err(format!("{name} bound {bound}: {c}")),
            }
        })
        .collect()
}

fn checked(reports: &[SuiteReport]) -> u64 {
    reports.iter().map(|r| r.checked).sum()
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{detail}, {took:.1?}"))
    } else {
        Err(format!("{detail}, but took {took:.1?} (limit {limit:?})"))
    }
}

fn left_distributivity() -> Outcome {
    let start = Instant::now();
    let runs: Vec<_> = (0..=8).map(|n| ("left-distributivity", n)).collect();
    let r = suites(&runs)?;
    let expected: u64 = (0..=8).map(|n| 1u64 << (3 * n)).sum();
    if checked(&r) != expected {
        return Err(format!("checked {} triples, expected {expected}", checked(&r)));
    }
    within(Duration::from_secs(30), start, format!("{expected} triples"))
}

fn two_operation_laws() -> Outcome {
    let start = Instant::now();
    let runs: Vec<_> = (0..=7).map(|n| ("laws11", n)).collect();
    let r = suites(&runs)?;
    within(Duration::from_secs(60), start, format!("{} instances", checked(&r)))
}

fn forward_structure() -> Outcome {
    let start = Instant::now();
    let r = suites(&[
        ("periods-pow2", 16),
        ("prop25b", 8),
        ("mod-hom", 10),
        ("shift-hom", 10),
        ("period-doubling", 14),
    ])?;
    within(Duration::from_secs(300), start, format!("{} instances", checked(&r)))
}

/// Against the brute-force tables in both directions.
fn reversal() -> Outcome {
    let mut count = 0u64;
    for n in 0..=10 {
        let (f, b) = (Forward::new(n), Backward::new(n));
        let top = 1u64 << n;
        for a in 1..=top {
            for c in 1..=top {
                let v = f.star(a, c);
                let lib = star_prime(lvl(n), a, c).map_err(|e| e.to_string())?;
                let back = bs_at(lvl(n), top - a, top - c).map_err(|e| e.to_string())?;
                if top - v != b.bs(top - a, top - c) || lib != v || back != top - v {
                    return Err(format!("n={n} a={a} b={c}"));
                }
                count += 1;
            }
        }
    }
    let r = suites(&[("reversal", 10)])?;
    Ok(format!("{count} pairs against both oracles, {} against the library suite", r[0].checked))
}

fn crit_of_left_powers() -> Outcome {
    let cap = 10;
    let tables: Vec<Forward> = (0..=cap).map(Forward::new).collect();
    for m in 1..=1024u64 {
        let got = crit_index(&j_sub(m, lvl(cap)).map_err(|e| e.to_string())?);
        // crit j_m from multiplying out j_m in every A_n
        let oracle = match largest_zero_level(cap, |n| common::left_power(&tables[n as usize], m)) {
            Some(n) => GammaIndex::At(n),
            None => GammaIndex::AboveCap,
        };
        let nu = two_adic(m);
        let want = if nu < cap { GammaIndex::At(nu) } else { GammaIndex::AboveCap };
        if got != want || oracle != want {
            return Err(format!("m={m}: got {got}, oracle {oracle}, valuation {nu}"));
        }
    }
    Ok("m = 1..1024 at cap 10 (m = 1024 reaches the cap and reports ABOVE_CAP)".into())
}

fn iterated_crit() -> Outcome {
    let mut detail = Vec::new();
    for n in 0..=2u32 {
        let cap = (2 << n) + 1;
        let r = theorem31_check(n, lvl(cap)).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(format!("n={n}: {r:?}"));
        }
        let m = (1u64 << (1 << n)) - 1;
        let k = j_sub(m, lvl(cap)).map_err(|e| e.to_string())?;
        let small = 1u32 << n;
        let triple = (
            crit_index(&k),
            gamma_image(&k, 0).map_err(|e| e.to_string())?,
            gamma_image(&k, small).map_err(|e| e.to_string())?,
        );
        let want = (GammaIndex::At(0), GammaIndex::At(small), GammaIndex::At(2 * small));
        if triple != want {
            return Err(format!("j_{m}: {triple:?}, expected {want:?}"));
        }
        detail.push(format!("j_{m}: 0 -> {small} -> {}", 2 * small));
        if r.sweep_checked == 0 {
            return Err(format!("n={n}: empty sweep"));
        }
    }
    Ok(format!("{}; caps 3, 5, 9", detail.join(", ")))
}

fn zero_bits() -> Outcome {
    let r = suites(&[("lemma29", 10)])?;
    Ok(format!("{} attained images over {} terms", r[0].checked, r[0].stats["terms"]))
}

fn block_theorem() -> Outcome {
    let start = Instant::now();
    let r = suites(&[("thm41", 12), ("cor42", 12)])?;
    let bundles = r[0].stats["bundles"];
    within(
        Duration::from_secs(600),
        start,
        format!("{bundles} bundles, {} checks, {} full-digit rows", r[0].checked, r[1].checked / 2),
    )
}

fn block_lemmas() -> Outcome {
    let runs: Vec<_> = ["lemma43", "lemma44", "lemma45", "lemma46", "lemma47", "lemma48"]
        .iter()
        .map(|&s| (s, 10))
        .collect();
    let r = suites(&runs)?;
    let parts: Vec<String> = r.iter().map(|r| format!("{} {}", r.suite, r.checked)).collect();
    Ok(parts.join(", "))
}

fn accelerated_grid() -> Outcome {
    let b = Backward::new(12);
    for x in 0..1u64 << 12 {
        for y in 0..1u64 << 12 {
            let got = accelerated_bs(x, y).map_err(|e| e.to_string())?;
            if got != b.bs(x, y) {
                return Err(format!("x={x} y={y}: {got} != {}", b.bs(x, y)));
            }
        }
    }
    Ok("2^24 pairs bit-exact".into())
}

fn accelerated_build() -> Outcome {
    let r = suites(&[("build-accel", 12)])?;
    let start = Instant::now();
    let opts = BuildOptions {
        accel: true,
        memory_budget: DEFAULT_MEMORY_BUDGET,
        ..BuildOptions::default()
    };
    let (t, stats) = CompressedTable::build_with(lvl(16), &opts).map_err(|e| e.to_string())?;
    if t.bytes() > 4 << 30 {
        return Err(format!("level 16 uses {} bytes", t.bytes()));
    }
    Ok(format!(
        "n <= 12 identical ({} fast rows); level 16 in {} bytes ({} fast rows), {:.1?}",
        r[0].stats["fast rows"],
        t.bytes(),
        stats.fast_rows,
        start.elapsed()
    ))
}

fn f_values() -> Outcome {
    let f4 = f_of(4, lvl(16)).map_err(|e| e.to_string())?;
    if f4 != GammaIndex::AboveCap {
        return Err(format!("F(4) at cap 16 is {f4}"));
    }
    let tables: Vec<Forward> = (0..=8).map(Forward::new).collect();
    let mut values = Vec::new();
    for n in 0..=2u64 {
        let got = f_of(n, lvl(8)).map_err(|e| e.to_string())?;
        let oracle = largest_zero_level(8, |lv| tower(&tables[lv as usize], n));
        match (got, oracle) {
            (GammaIndex::At(g), Some(o)) if g == o => values.push(g.to_string()),
            _ => return Err(format!("F({n}) at cap 8: {got}, oracle {oracle:?}")),
        }
    }
    Ok(format!("F(4) ABOVE_CAP at cap 16; F(0..=2) = {}", values.join(", ")))
}

fn cache_files() -> Outcome {
    let r = suites(&[("cache-roundtrip", 12), ("cache-fuzz", 12)])?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for n in 0..=12 {
        let path = dir.path().join(format!("{n}.lavr"));
        let t = CompressedTable::build(lvl(n)).map_err(|e| e.to_string())?;
        cache::write(&path, &t).map_err(|e| e.to_string())?;
        let back = cache::read(&path).map_err(|e| e.to_string())?;
        if back != t || std::fs::read(&path).map_err(|e| e.to_string())? != cache::encode(&back) {
            return Err(format!("file round trip differs at n={n}"));
        }
    }
    Ok(format!("13 levels round-trip; {} single-bit flips all rejected", r[1].checked))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("left distributivity in A_n, n <= 8", left_distributivity),
        ("two-operation laws in P_n, n <= 7", two_operation_laws),
        ("periods, reduction, shift and doubling", forward_structure),
        ("reversal A'_n = B_n, n <= 10", reversal),
        ("crit j_m = 2-adic valuation of m", crit_of_left_powers),
        ("iterated critical points for n = 0, 1, 2", iterated_crit),
        ("zero bit at attained images", zero_bits),
        ("block theorem inside B_12", block_theorem),
        ("block lemmas inside B_10", block_lemmas),
        ("accelerated bs on x, y < 2^12", accelerated_grid),
        ("accelerated build and level-16 budget", accelerated_build),
        ("F(4) indeterminate, small F determinate", f_values),
        ("cache round trip and corruption", cache_files),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
