//! Size guards for the enumeration procedures. Every guard is configurable;
//! the defaults keep exhaustive searches comfortably small.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Carrier bound for relational hom enumeration.
    pub max_carrier: usize,
    /// Quantale bound for relational hom enumeration.
    pub max_quantale: usize,
    /// Candidate-space bound for functional hom and singleton enumeration.
    pub max_candidates: u64,
    /// Largest completed object for which the left zig-zag identity is
    /// re-verified by a double completion instead of being certified by the
    /// general theorem.
    pub double_completion_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 4,
            max_quantale: 6,
            max_candidates: 2_000_000,
            double_completion_cap: 8,
        }
    }
}
