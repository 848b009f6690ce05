use std::io::Write;
use std::path::PathBuf;

use radar_dse::dse::{
    design_report, join_costs, read_rows_path, reference_accuracy, reference_costs, sweep, write_rows_csv,
    Constraints, CostTable, SnrWindow,
};
use radar_dse::errstat::{eval_adder_metrics, eval_mult_metrics, ErrorMetrics, EvalMode};
use radar_dse::fxp::{AdderModel, MultModel, OperatorPair};
use radar_dse::radar::{resilience_probe, Pipeline, ProbeBlock};
use serde::Serialize;

use crate::config::{parse_config, RunConfig, SnrGrid};
use crate::error::CliError;
use crate::{Command, Common, MetricsArgs, ParetoArgs, ProbeArgs, SimulateArgs, SweepArgs, OUT_DIR_ENV};

const PROFILE_FLOOR_DB: f64 = -120.0;
const DEFAULT_SIGMAS: [f64; 4] = [0.0, 0.05, 0.2, 0.5];

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Profile(a) => profile(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Metrics(a) => metrics(a),
        Command::Pareto(a) => pareto(a),
        Command::Probe(a) => probe(a),
    }
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    match &common.config {
        Some(path) => parse_config(path),
        None => Ok(RunConfig::default()),
    }
}

/// Write `bytes` to `--out`, to the output directory under `default_name`,
/// or to stdout.
fn emit(common: &Common, cfg: &RunConfig, default_name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let dir = common
        .output_dir
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    let path = match (&common.out, dir) {
        (Some(p), _) => p.clone(),
        (None, Some(d)) => {
            std::fs::create_dir_all(&d).map_err(|e| CliError::Io {
                path: d.clone(),
                source: e,
            })?;
            d.join(default_name)
        }
        (None, None) => {
            let mut out = std::io::stdout().lock();
            return out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                source: e,
            });
        }
    };
    std::fs::write(&path, bytes).map_err(|e| CliError::Io { path, source: e })
}

fn parse_snr(s: &str) -> Result<f64, CliError> {
    let t = s.trim().replace('\u{2212}', "-");
    let v = match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        _ => t.parse::<f64>().map_err(|e| CliError::Usage {
            message: format!("invalid snr `{s}`: {e}"),
        })?,
    };
    if v.is_nan() || v == f64::NEG_INFINITY {
        return Err(CliError::Usage {
            message: format!("invalid snr `{s}`"),
        });
    }
    Ok(v)
}

fn pair_or_default(pair: Option<&str>, cfg: &RunConfig) -> Result<OperatorPair, CliError> {
    match pair {
        Some(p) => Ok(p.parse()?),
        None => Ok(cfg.pairs[0].clone()),
    }
}

#[derive(Serialize)]
struct SimulateOutput {
    pair: String,
    snr_db: Option<f64>,
    seed: u64,
    estimator_mode: String,
    range_m: f64,
    peak_bin: usize,
    peak_power_db: Option<f64>,
    true_range_m: f64,
    cp_exceeded: bool,
}

fn single_run(a: &SimulateArgs) -> Result<(RunConfig, OperatorPair, f64, u64), CliError> {
    let mut cfg = load(&a.common)?;
    if let Some(m) = &a.estimator_mode {
        cfg.radar.estimator_mode = m.parse()?;
    }
    let pair = pair_or_default(a.pair.as_deref(), &cfg)?;
    let snr = parse_snr(&a.snr)?;
    let seed = a.seed.unwrap_or(cfg.seed);
    Ok((cfg, pair, snr, seed))
}

fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let (cfg, pair, snr, seed) = single_run(&a)?;
    let out = Pipeline::new(&cfg.radar, &cfg.target)?.run(&pair.kernel()?, snr, seed)?;
    let body = SimulateOutput {
        pair: pair.name.clone(),
        // JSON has no infinity; a noiseless run reports null.
        snr_db: snr.is_finite().then_some(snr),
        seed,
        estimator_mode: cfg.radar.estimator_mode.to_string(),
        range_m: out.estimate.range_m,
        peak_bin: out.estimate.peak_bin,
        peak_power_db: out.estimate.peak_power_db.is_finite().then_some(out.estimate.peak_power_db),
        true_range_m: cfg.target.range_m,
        cp_exceeded: out.cp_exceeded,
    };
    let mut text = serde_json::to_string_pretty(&body)?;
    text.push('\n');
    emit(&a.common, &cfg, "simulate.json", text.as_bytes())
}

fn profile(a: SimulateArgs) -> Result<(), CliError> {
    let (cfg, pair, snr, seed) = single_run(&a)?;
    let (profile, _) = Pipeline::new(&cfg.radar, &cfg.target)?.profile(&pair.kernel()?, snr, seed)?;
    let mut text = String::from("bin,range_m,power_norm,power_db\n");
    for bin in 0..profile.power.len() {
        text.push_str(&format!(
            "{bin},{},{},{}\n",
            profile.range_of(bin),
            profile.power[bin],
            profile.power_db(bin, PROFILE_FLOOR_DB)
        ));
    }
    emit(&a.common, &cfg, "profile.csv", text.as_bytes())
}

fn parse_grid(s: &str) -> Result<SnrGrid, CliError> {
    let parts: Vec<f64> = s
        .trim_matches(|c| c == '{' || c == '}')
        .split(',')
        .map(parse_snr)
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [start_db, stop_db, step_db] => Ok(SnrGrid {
            start_db,
            stop_db,
            step_db,
        }),
        _ => Err(CliError::Usage {
            message: format!("snr grid must be start,stop,step, got `{s}`"),
        }),
    }
}

fn run_sweep(a: SweepArgs) -> Result<(), CliError> {
    let cfg = load(&a.common)?;
    let pairs = if a.pairs.is_empty() {
        cfg.pairs.clone()
    } else {
        a.pairs.iter().map(|p| p.parse()).collect::<Result<Vec<OperatorPair>, _>>()?
    };
    let grid = match &a.snr_grid {
        Some(s) => parse_grid(s)?,
        None => cfg.snr_grid,
    };
    let rows = sweep(
        &cfg.radar,
        &cfg.target,
        &pairs,
        &grid.points()?,
        a.runs.unwrap_or(cfg.runs),
        a.seed.unwrap_or(cfg.seed),
    )?;
    let mut buf = Vec::new();
    write_rows_csv(&rows, &mut buf)?;
    emit(&a.common, &cfg, "sweep.csv", &buf)
}

enum Model {
    Adder(AdderModel),
    Mult(MultModel),
}

fn parse_model(token: &str) -> Result<Model, CliError> {
    if let Some(t) = token.strip_prefix("add:") {
        return Ok(Model::Adder(t.parse()?));
    }
    if let Some(t) = token.strip_prefix("mul:") {
        return Ok(Model::Mult(t.parse()?));
    }
    match token.parse::<AdderModel>() {
        Ok(m) => Ok(Model::Adder(m)),
        Err(adder_err) => token.parse::<MultModel>().map(Model::Mult).map_err(|_| {
            CliError::Usage {
                message: format!("`{token}` is neither an adder nor a multiplier model ({adder_err})"),
            }
        }),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn metrics(a: MetricsArgs) -> Result<(), CliError> {
    let cfg = load(&a.common)?;
    let seed = a.seed.unwrap_or(cfg.seed);
    let mode = match a.mode.as_str() {
        "exhaustive" => EvalMode::Exhaustive,
        "sampled" => EvalMode::Sampled {
            samples: a.samples,
            seed,
        },
        "auto" if a.width <= 8 => EvalMode::Exhaustive,
        "auto" => EvalMode::Sampled {
            samples: a.samples,
            seed,
        },
        other => {
            return Err(CliError::Usage {
                message: format!("unknown mode `{other}` (expected auto, exhaustive or sampled)"),
            })
        }
    };
    let mut text = String::from("name,width,mode,ep_pct,mae_pct,wce_pct,mre_pct,pairs\n");
    for token in &a.models {
        let m: ErrorMetrics = match parse_model(token)? {
            Model::Adder(model) => eval_adder_metrics(&model, a.width, mode)?,
            Model::Mult(model) => eval_mult_metrics(&model, a.width, mode)?,
        };
        text.push_str(&format!(
            "{token},{},{},{},{},{},{},{}\n",
            m.width,
            m.mode.as_str(),
            m.ep_pct,
            m.mae_pct,
            opt(m.wce_pct),
            m.mre_pct,
            m.pairs_evaluated
        ));
    }
    emit(&a.common, &cfg, "metrics.csv", text.as_bytes())
}

fn pareto(a: ParetoArgs) -> Result<(), CliError> {
    let cfg = load(&a.common)?;
    let costs = match a.cost.as_ref().or(cfg.cost_table.as_ref()) {
        Some(path) => CostTable::from_path(path)?,
        None => reference_costs(),
    };
    let rows = match &a.accuracy {
        Some(path) => read_rows_path(path)?,
        None => reference_accuracy(),
    };
    let window = if a.positive_snr {
        Some(SnrWindow::POSITIVE)
    } else if a.snr_min.is_some() || a.snr_max.is_some() {
        Some(SnrWindow {
            min_db: a.snr_min.unwrap_or(f64::NEG_INFINITY),
            max_db: a.snr_max.unwrap_or(f64::INFINITY),
        })
    } else {
        None
    };
    let constraints = Constraints {
        max_power_mw: a.max_power,
        max_area_mm2: a.max_area,
        max_dev_m: a.max_dev,
        snr_window: window,
    };
    let report = join_costs(&rows, &costs, window)?;
    for name in &report.skipped {
        eprintln!("skipped `{name}`: present in only one input");
    }
    let mut records = design_report(&report.points, &constraints);
    if !a.all {
        records.retain(|r| r.passes_constraints);
    }
    let mut text = serde_json::to_string_pretty(&records)?;
    text.push('\n');
    emit(&a.common, &cfg, "pareto.json", text.as_bytes())
}

fn probe(a: ProbeArgs) -> Result<(), CliError> {
    let cfg = load(&a.common)?;
    let block: ProbeBlock = a.block.parse()?;
    let sigmas = if a.sigmas.is_empty() {
        DEFAULT_SIGMAS.to_vec()
    } else {
        a.sigmas.clone()
    };
    let runs = a.runs.unwrap_or(cfg.runs);
    let seed = a.seed.unwrap_or(cfg.seed);
    let mut text = String::from("block,sigma,runs,mean_abs_dev_m\n");
    for sigma in sigmas {
        let dev = resilience_probe(&cfg.radar, &cfg.target, block, sigma, runs, seed)?;
        text.push_str(&format!("{block},{sigma},{runs},{dev}\n"));
    }
    emit(&a.common, &cfg, "probe.csv", text.as_bytes())
}
