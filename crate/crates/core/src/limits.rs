//! Size guards for exhaustive subset operations.

pub const DEFAULT_MAX_EDGES: usize = 16;
/// Upper bound for the override; tables over `2^E` stay addressable in memory.
pub const HARD_MAX_EDGES: usize = 24;

/// Edge/ground-set guard, overridable through `FEYNPOLY_MAX_EDGES`.
pub fn max_edges() -> usize {
    std::env::var("FEYNPOLY_MAX_EDGES")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(DEFAULT_MAX_EDGES, |n| n.min(HARD_MAX_EDGES))
}
