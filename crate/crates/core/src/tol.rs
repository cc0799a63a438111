/// Numerical tolerances shared across the crate.
///
/// Defaults are sized for double-precision eigensolvers on matrices of side
/// at most 64, whose backward error sits near 1e-13; each tolerance leaves a
/// margin of 10^2 to 10^4 over that floor.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    /// Max-abs entry of `M - M^dag` accepted as Hermitian.
    pub herm_tol: f64,
    /// Lowest eigenvalue accepted as positive semidefinite (as `-psd_tol`).
    pub psd_tol: f64,
    /// Accepted deviation of the trace from one.
    pub trace_tol: f64,
    /// Relative eigenvalue cutoff for rank counting.
    pub rank_tol: f64,
    /// Entrywise tolerance for matrix and marginal equality.
    pub eq_tol: f64,
    /// Minimum trace distance at which two states count as distinct.
    pub distinct_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            psd_tol: 1e-9,
            trace_tol: 1e-9,
            rank_tol: 1e-8,
            eq_tol: 1e-8,
            distinct_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> bool {
        self.herm_tol >= 0.0
            && self.psd_tol >= 0.0
            && self.trace_tol >= 0.0
            && self.rank_tol >= 0.0
            && self.eq_tol >= 0.0
            && self.distinct_tol >= 0.0
    }
}
