//! Shared inputs for the criterion benches.

use laver_core::Level;

pub fn level(n: u32) -> Level {
    Level::new(n).expect("bench level in range")
}
