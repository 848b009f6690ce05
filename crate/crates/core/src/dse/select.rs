use serde::Serialize;

use super::cost::CostTable;
use super::sweep::AccuracyRow;
use crate::{Error, Result};

/// One operator pair's joined accuracy and hardware cost.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignPoint {
    pub pair_name: String,
    /// Mean absolute range deviation averaged over the SNR window (m).
    pub mean_abs_dev_m: f64,
    pub area_mm2: f64,
    pub power_mw: f64,
}

/// Inclusive SNR range used when averaging deviations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrWindow {
    pub min_db: f64,
    pub max_db: f64,
}

impl SnrWindow {
    /// Strictly positive SNRs only.
    pub const POSITIVE: SnrWindow = SnrWindow {
        min_db: f64::MIN_POSITIVE,
        max_db: f64::INFINITY,
    };

    pub fn contains(&self, snr_db: f64) -> bool {
        snr_db >= self.min_db && snr_db <= self.max_db
    }
}

/// User quality constraints; all bounds are strict.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Constraints {
    pub max_power_mw: Option<f64>,
    pub max_area_mm2: Option<f64>,
    pub max_dev_m: Option<f64>,
    pub snr_window: Option<SnrWindow>,
}

impl Constraints {
    pub fn has_bounds(&self) -> bool {
        self.max_power_mw.is_some() || self.max_area_mm2.is_some() || self.max_dev_m.is_some()
    }

    pub fn admits(&self, p: &DesignPoint) -> bool {
        self.max_power_mw.is_none_or(|b| p.power_mw < b)
            && self.max_area_mm2.is_none_or(|b| p.area_mm2 < b)
            && self.max_dev_m.is_none_or(|b| p.mean_abs_dev_m < b)
    }
}

/// Result of [`join_costs`]: the joined points plus every pair name that
/// appeared on only one side (or had no rows inside the window).
#[derive(Clone, Debug, PartialEq)]
pub struct JoinReport {
    pub points: Vec<DesignPoint>,
    pub skipped: Vec<String>,
}

/// Join accuracy rows with cost records, one point per pair present in both.
///
/// Points follow the order of first appearance in `rows`.
pub fn join_costs(
    rows: &[AccuracyRow],
    costs: &CostTable,
    window: Option<SnrWindow>,
) -> Result<JoinReport> {
    let mut order: Vec<&str> = Vec::new();
    for r in rows {
        if !order.contains(&r.pair_name.as_str()) {
            order.push(&r.pair_name);
        }
    }
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for name in &order {
        let Some(cost) = costs.get(name) else {
            skipped.push(name.to_string());
            continue;
        };
        let devs: Vec<f64> = rows
            .iter()
            .filter(|r| r.pair_name == *name && window.is_none_or(|w| w.contains(r.snr_db)))
            .map(|r| r.mean_abs_dev_m)
            .collect();
        if devs.is_empty() {
            skipped.push(name.to_string());
            continue;
        }
        points.push(DesignPoint {
            pair_name: name.to_string(),
            mean_abs_dev_m: devs.iter().sum::<f64>() / devs.len() as f64,
            area_mm2: cost.area_mm2,
            power_mw: cost.power_mw,
        });
    }
    for r in costs.records() {
        if !order.contains(&r.pair_name.as_str()) {
            skipped.push(r.pair_name.clone());
        }
    }
    Ok(JoinReport { points, skipped })
}

/// Points strictly inside every set bound.
pub fn filter_constraints(points: &[DesignPoint], constraints: &Constraints) -> Result<Vec<DesignPoint>> {
    if !constraints.has_bounds() {
        return Err(Error::InvalidParameter(
            "at least one of max power, max area or max deviation must be set".into(),
        ));
    }
    Ok(points.iter().filter(|p| constraints.admits(p)).cloned().collect())
}

/// `a` dominates `b`: no worse in deviation, area and power, better in one.
pub fn dominates(a: &DesignPoint, b: &DesignPoint) -> bool {
    let le = a.mean_abs_dev_m <= b.mean_abs_dev_m
        && a.area_mm2 <= b.area_mm2
        && a.power_mw <= b.power_mw;
    let lt = a.mean_abs_dev_m < b.mean_abs_dev_m || a.area_mm2 < b.area_mm2 || a.power_mw < b.power_mw;
    le && lt
}

/// `mask[i]` is true iff `points[i]` is not dominated by any other point.
pub fn pareto_mask(points: &[DesignPoint]) -> Vec<bool> {
    points
        .iter()
        .map(|p| !points.iter().any(|q| dominates(q, p)))
        .collect()
}

/// Non-dominated subset, in input order.
pub fn pareto_front(points: &[DesignPoint]) -> Vec<DesignPoint> {
    points
        .iter()
        .zip(pareto_mask(points))
        .filter(|&(_p, keep)| keep).map(|(p, _keep)| p.clone())
        .collect()
}

/// Row of the design-point JSON output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignRecord {
    pub pair: String,
    pub dev_m: f64,
    pub area_mm2: f64,
    pub power_mw: f64,
    pub pareto: bool,
    pub passes_constraints: bool,
}

/// Annotate every point with Pareto membership and constraint status. With
/// no bounds set every point passes.
pub fn design_report(points: &[DesignPoint], constraints: &Constraints) -> Vec<DesignRecord> {
    points
        .iter()
        .zip(pareto_mask(points))
        .map(|(p, pareto)| DesignRecord {
            pair: p.pair_name.clone(),
            dev_m: p.mean_abs_dev_m,
            area_mm2: p.area_mm2,
            power_mw: p.power_mw,
            pareto,
            passes_constraints: constraints.admits(p),
        })
        .collect()
}
