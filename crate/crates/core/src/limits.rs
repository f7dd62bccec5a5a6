/// Caps on exhaustive enumeration. Exceeding a cap is always an explicit
/// error, never a silent approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    /// Maximum number of Boolean variables for full enumeration.
    pub brute_cap: usize,
    /// Maximum number of context variables when maximizing `P_ij`.
    pub pair_context_cap: usize,
    /// Maximum number of grid points for table-backed expansion.
    pub table_cap: usize,
}

pub const BRUTE_CAP_ENV: &str = "GIBBSCUT_BRUTE_CAP";

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            brute_cap: 14,
            pair_context_cap: 20,
            table_cap: 1 << 20,
        }
    }
}

impl SolverLimits {
    /// Defaults, with the brute-force cap overridden by `GIBBSCUT_BRUTE_CAP`
    /// when it parses as an integer.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(cap) = std::env::var(BRUTE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.brute_cap = cap;
        }
        limits
    }

    pub fn with_brute_cap(mut self, cap: usize) -> Self {
        self.brute_cap = cap;
        self
    }
}
