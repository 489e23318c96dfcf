//! Enumeration and search limits, overridable from the environment.

/// Environment variable overriding [`Limits::enumeration_cap`].
pub const ENUM_CAP_VAR: &str = "SYNCLCS_ENUM_CAP";
/// Environment variable overriding [`Limits::search_budget`].
pub const SEARCH_BUDGET_VAR: &str = "SYNCLCS_SEARCH_BUDGET";

pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;
pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest affine solution set that may be materialized.
    pub enumeration_cap: u64,
    /// Node budget for backtracking searches.
    pub search_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration_cap: DEFAULT_ENUM_CAP, search_budget: DEFAULT_SEARCH_BUDGET }
    }
}

impl Limits {
    /// Defaults, with any valid environment overrides applied.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = read_var(ENUM_CAP_VAR) {
            limits.enumeration_cap = v;
        }
        if let Some(v) = read_var(SEARCH_BUDGET_VAR) {
            limits.search_budget = v;
        }
        limits
    }
}

fn read_var(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}
