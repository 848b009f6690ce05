use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hardware cost of one operator pair's IFFT core.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    #[serde(rename = "pair")]
    pub pair_name: String,
    pub area_mm2: f64,
    pub power_mw: f64,
    #[serde(with = "flag")]
    pub baseline: bool,
    pub source: String,
}

mod flag {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*v as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match String::deserialize(d)?.trim() {
            "1" => Ok(true),
            "0" => Ok(false),
            other => Err(de::Error::custom(format!("baseline must be 0 or 1, got `{other}`"))),
        }
    }
}

/// Cost table with exactly one accurate baseline record.
#[derive(Clone, Debug, PartialEq)]
pub struct CostTable {
    records: Vec<CostRecord>,
}

impl CostTable {
    pub fn new(records: Vec<CostRecord>) -> Result<Self> {
        let baselines = records.iter().filter(|r| r.baseline).count();
        if baselines != 1 {
            return Err(Error::InvalidParameter(format!(
                "cost table needs exactly one baseline record, found {baselines}"
            )));
        }
        for r in &records {
            if !(r.area_mm2 > 0.0 && r.power_mw > 0.0) || !r.area_mm2.is_finite() || !r.power_mw.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "cost record `{}` must have positive area and power",
                    r.pair_name
                )));
            }
        }
        for (i, r) in records.iter().enumerate() {
            if records[..i].iter().any(|o| o.pair_name == r.pair_name) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate cost record `{}`",
                    r.pair_name
                )));
            }
        }
        Ok(CostTable { records })
    }

    /// Parse CSV with header `pair,area_mm2,power_mw,baseline,source`.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["pair", "area_mm2", "power_mw", "baseline", "source"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Parse(format!(
                "cost table header must be `{}`",
                expected.join(",")
            )));
        }
        let records = rdr.deserialize().collect::<std::result::Result<Vec<CostRecord>, _>>()?;
        Self::new(records)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn records(&self) -> &[CostRecord] {
        &self.records
    }

    pub fn baseline(&self) -> &CostRecord {
        self.records.iter().find(|r| r.baseline).expect("validated on construction")
    }

    pub fn get(&self, pair_name: &str) -> Option<&CostRecord> {
        self.records.iter().find(|r| r.pair_name == pair_name)
    }

    /// Every area and power multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.records
                .iter()
                .map(|r| CostRecord {
                    area_mm2: r.area_mm2 * factor,
                    power_mw: r.power_mw * factor,
                    ..r.clone()
                })
                .collect(),
        )
    }
}

/// Mean savings of the non-baseline records relative to the baseline, percent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Savings {
    pub mean_area_saving_pct: f64,
    pub mean_power_saving_pct: f64,
}

/// Per-record saving `(1 - value/baseline) * 100`, as (area, power).
pub fn record_savings(costs: &CostTable, record: &CostRecord) -> (f64, f64) {
    let base = costs.baseline();
    (
        (1.0 - record.area_mm2 / base.area_mm2) * 100.0,
        (1.0 - record.power_mw / base.power_mw) * 100.0,
    )
}

pub fn savings_summary(costs: &CostTable) -> Result<Savings> {
    let others: Vec<_> = costs.records().iter().filter(|r| !r.baseline).collect();
    if others.is_empty() {
        return Err(Error::DegenerateInput(
            "cost table has no non-baseline records".into(),
        ));
    }
    let (area, power) = others.iter().fold((0.0, 0.0), |(a, p), r| {
        let (ra, rp) = record_savings(costs, r);
        (a + ra, p + rp)
    });
    let n = others.len() as f64;
    Ok(Savings {
        mean_area_saving_pct: area / n,
        mean_power_saving_pct: power / n,
    })
}
