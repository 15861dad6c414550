//! Process-wide tables, built on first use and immutable afterwards.
//!
//! A slot is written at most once; every reader sees either nothing or the
//! final table.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::level::{Level, MAX_LEVEL};
use crate::table::{BuildOptions, CompressedTable};

/// Highest level for which operations build a shared table implicitly.
/// Above it they fall back to memoized naive evaluation.
pub const SHARED_TABLE_MAX_LEVEL: u32 = 20;

static TABLES: [OnceLock<Arc<CompressedTable>>; MAX_LEVEL as usize + 1] =
    [const { OnceLock::new() }; MAX_LEVEL as usize + 1];

/// The shared table for `level`, building it if needed.
pub fn shared_table(level: Level) -> Result<Arc<CompressedTable>> {
    if level.get() > SHARED_TABLE_MAX_LEVEL {
        return Err(Error::Precondition(format!(
            "level {level} is above the shared-table limit {SHARED_TABLE_MAX_LEVEL}"
        )));
    }
    let slot = &TABLES[level.get() as usize];
    if let Some(t) = slot.get() {
        return Ok(Arc::clone(t));
    }
    let opts = BuildOptions {
        accel: true,
        ..BuildOptions::default()
    };
    let built = Arc::new(CompressedTable::build_with(level, &opts)?.0);
    // A concurrent builder may have won; either table is the same value.
    let _ = slot.set(built);
    Ok(Arc::clone(slot.get().expect("slot was just filled")))
}

/// Whether `level` is served by a shared table.
pub fn has_shared_table(level: Level) -> bool {
    level.get() <= SHARED_TABLE_MAX_LEVEL
}
