//! Element budget for enumerated windows and boxes.
//!
//! The budget is read once from `KNESER_MAX_ELEMENTS` (a plain integer count of
//! group elements). Anything that would enumerate or materialize more elements
//! than this fails with [`Error::Resource`] instead of exhausting memory.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "KNESER_MAX_ELEMENTS";
pub const DEFAULT_MAX_ELEMENTS: u64 = 64_000_000;

static MAX_ELEMENTS: OnceLock<u64> = OnceLock::new();

pub fn max_elements() -> u64 {
    *MAX_ELEMENTS.get_or_init(|| {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_ELEMENTS)
    })
}

pub fn check(what: &str, count: u64) -> Result<()> {
    let max = max_elements();
    if count > max {
        return Err(Error::resource(format!(
            "{what} needs {count} elements, budget is {max} (set {BUDGET_ENV} to raise it)"
        )));
    }
    Ok(())
}
