//! Design-space exploration: Monte Carlo SNR sweeps over operator pairs,
//! joins with a hardware cost table, constraint filtering, savings summaries
//! and Pareto fronts.

mod cost;
mod select;
mod sweep;

pub use cost::{record_savings, savings_summary, CostRecord, CostTable, Savings};
pub use select::{
    design_report, dominates, filter_constraints, join_costs, pareto_front, pareto_mask,
    Constraints, DesignPoint, DesignRecord, JoinReport, SnrWindow,
};
pub use sweep::{read_rows_csv, read_rows_path, snr_grid, sweep, write_rows_csv, AccuracyRow};

/// Bundled cost table: the accurate baseline plus the approximate pairs of
/// the reference study. Savings of `add16se_3BD+mul16s_HFB` and the mean
/// savings are reproduced exactly; other absolute values are illustrative.
pub const REFERENCE_COSTS_CSV: &str = include_str!("../../../../fixtures/reference_costs.csv");

/// Bundled accuracy rows (sweep CSV format) for the pairs of
/// [`REFERENCE_COSTS_CSV`]; illustrative, chosen to match the reported
/// constraint-selection outcomes.
pub const REFERENCE_ACCURACY_CSV: &str = include_str!("../../../../fixtures/reference_accuracy.csv");

pub fn reference_costs() -> CostTable {
    CostTable::from_reader(REFERENCE_COSTS_CSV.as_bytes()).expect("bundled cost fixture is valid")
}

pub fn reference_accuracy() -> Vec<AccuracyRow> {
    read_rows_csv(REFERENCE_ACCURACY_CSV.as_bytes()).expect("bundled accuracy fixture is valid")
}
