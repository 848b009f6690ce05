//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{inverse_dft, oracle_add, oracle_mul, reference_flattened_peak, reference_peak_bin, reference_quotient, OracleTally};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radar_dse::dse::{
    dominates, filter_constraints, join_costs, pareto_front, record_savings, reference_accuracy,
    reference_costs, savings_summary, sweep, write_rows_csv, Constraints, DesignPoint,
};
use radar_dse::errstat::{eval_adder_metrics, eval_mult_metrics, EvalMode};
use radar_dse::fxp::{AdderModel, ComplexFx16, Counting, Fx16, MultModel, OperatorPair, PairKernel};
use radar_dse::radar::{
    resilience_probe, EstimatorMode, Pipeline, ProbeBlock, RadarConfig, TargetModel,
};
use radar_dse::transform::{bit_reverse_permute, IfftCore, TwiddleSign};

const ACC: PairKernel = PairKernel::ACCURATE;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within_budget(elapsed: Duration, budget_s: f64, what: &str) -> Result<(), String> {
    if elapsed.as_secs_f64() < budget_s {
        Ok(())
    } else {
        Err(format!("{what} took {:.2} s, budget {budget_s} s", elapsed.as_secs_f64()))
    }
}

fn fine_bin() -> f64 {
    RadarConfig::default().bin_to_m()
}

fn noiseless_range(cfg: &RadarConfig, tgt: &TargetModel) -> Result<(f64, usize), String> {
    let out = Pipeline::new(cfg, tgt)
        .and_then(|p| p.run(&ACC, f64::INFINITY, 1))
        .map_err(|e| e.to_string())?;
    Ok((out.estimate.range_m, out.estimate.peak_bin))
}

fn c1_golden() -> Check {
    let start = Instant::now();
    let tol = fine_bin();
    let (zp, zp_bin) = noiseless_range(&RadarConfig::default(), &TargetModel::default())?;
    ensure!((zp - 50.01).abs() <= tol, "zeropad range {zp:.4} m");
    let flat_cfg = RadarConfig {
        estimator_mode: EstimatorMode::Flattened,
        ..Default::default()
    };
    let still = TargetModel {
        velocity_mps: 0.0,
        ..Default::default()
    };
    let (fl, fl_bin) = noiseless_range(&flat_cfg, &still)?;
    ensure!((fl - 48.79).abs() <= tol, "flattened range {fl:.4} m");
    let elapsed = start.elapsed();
    let ref_zp = reference_peak_bin(&reference_quotient(50.0, 20.0));
    let ref_fl = reference_flattened_peak(&reference_quotient(50.0, 0.0));
    ensure!(zp_bin == ref_zp, "zeropad bin {zp_bin}, reference {ref_zp}");
    ensure!(fl_bin == ref_fl, "flattened bin {fl_bin}, reference {ref_fl}");
    within_budget(elapsed, 1.0, "golden runs")?;
    Ok(format!("zeropad {zp:.3} m (bin {zp_bin}), flattened {fl:.3} m (bin {fl_bin})"))
}

fn c2_high_snr() -> Check {
    let start = Instant::now();
    let rows = sweep(
        &RadarConfig::default(),
        &TargetModel::default(),
        &[OperatorPair::accurate()],
        &[-5.0, 10.0],
        100,
        2024,
    )
    .map_err(|e| e.to_string())?;
    within_budget(start.elapsed(), 30.0, "monte carlo")?;
    let (low, high) = (&rows[0], &rows[1]);
    ensure!((high.mean_range_m - 50.0).abs() <= 0.5, "mean at 10 dB {:.3} m", high.mean_range_m);
    ensure!(
        high.mean_abs_dev_m < low.mean_abs_dev_m,
        "dev at 10 dB {:.3} m not below dev at -5 dB {:.3} m",
        high.mean_abs_dev_m,
        low.mean_abs_dev_m
    );
    Ok(format!(
        "mean {:.3} m at 10 dB, dev {:.3} m (10 dB) < {:.3} m (-5 dB)",
        high.mean_range_m, high.mean_abs_dev_m, low.mean_abs_dev_m
    ))
}

fn c3_mild_models() -> Check {
    let mut pairs = vec![OperatorPair::accurate()];
    for k in 1..=4 {
        for t in 1..=6 {
            pairs.push(OperatorPair::new(AdderModel::Loa(k), MultModel::Tmul(t)));
        }
    }
    let snrs = [5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
    let rows = sweep(&RadarConfig::default(), &TargetModel::default(), &pairs, &snrs, 100, 7)
        .map_err(|e| e.to_string())?;
    let acc = &rows[..snrs.len()];
    let mut worst: (f64, String) = (0.0, String::new());
    for chunk in rows.chunks(snrs.len()).skip(1) {
        for (r, a) in chunk.iter().zip(acc) {
            let d = (r.mean_range_m - a.mean_range_m).abs();
            if d > worst.0 {
                worst = (d, format!("{} at {} dB", r.pair_name, r.snr_db));
            }
        }
    }
    ensure!(worst.0 <= 0.31, "deviation {:.3} m for {}", worst.0, worst.1);
    Ok(format!("{} pairs x {} SNRs, worst mean shift {:.3} m", pairs.len() - 1, snrs.len(), worst.0))
}

fn c4_ifft() -> Check {
    let n = 512;
    let core = IfftCore::new(n, TwiddleSign::Positive).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x: Vec<ComplexFx16> = (0..n)
            .map(|_| {
                let r = rng.random::<f64>().sqrt();
                let t = rng.random::<f64>() * std::f64::consts::TAU;
                ComplexFx16::quantize(r * t.cos(), r * t.sin())
            })
            .collect();
        let want = inverse_dft(&x.iter().map(|v| v.to_c64()).collect::<Vec<_>>());
        let got = core.run(&ACC, &x).map_err(|e| e.to_string())?;
        for (g, w) in got.iter().zip(&want) {
            let g = g.to_c64();
            worst = worst.max((g.re - w.re).abs()).max((g.im - w.im).abs());
        }
    }
    ensure!(worst <= 2f64.powi(-8), "max component error {worst:e}");

    // Impulse: every output is x0 / N. Constant: all energy in bin 0.
    let ulp3 = |got: Fx16, want: f64| (got.to_f64() - want).abs() <= 3.0 * Fx16::ULP;
    let half = ComplexFx16::quantize(0.5, 0.0);
    for size in [8, n] {
        let small = IfftCore::new(size, TwiddleSign::Positive).map_err(|e| e.to_string())?;
        let mut impulse = vec![ComplexFx16::ZERO; size];
        impulse[0] = half;
        let y = small.run(&ACC, &impulse).map_err(|e| e.to_string())?;
        let level = 0.5 / size as f64;
        ensure!(y.iter().all(|v| ulp3(v.re, level) && ulp3(v.im, 0.0)), "n={size}: impulse off by > 3 ulp");
        let y = small.run(&ACC, &vec![half; size]).map_err(|e| e.to_string())?;
        ensure!(ulp3(y[0].re, 0.5) && ulp3(y[0].im, 0.0), "n={size}: constant bin 0 = {:?}", y[0]);
        ensure!(y[1..].iter().all(|v| ulp3(v.re, 0.0) && ulp3(v.im, 0.0)), "n={size}: constant input leaks");
    }
    let mut impulse = vec![ComplexFx16::ZERO; n];
    impulse[0] = half;

    let counting = Counting::new(ACC);
    core.run(&counting, &impulse).map_err(|e| e.to_string())?;
    let butterflies = (n / 2 * n.trailing_zeros() as usize) as u64;
    ensure!(
        counting.muls() == 4 * butterflies && counting.adds() == 6 * butterflies,
        "{} muls and {} adds for {butterflies} butterflies",
        counting.muls(),
        counting.adds()
    );
    Ok(format!("max error {worst:.2e}, {butterflies} butterflies x (4 mul + 6 add)"))
}

fn adders(width: u32) -> Vec<AdderModel> {
    let mut v = vec![AdderModel::Acc];
    for k in 0..width {
        v.push(AdderModel::Loa(k));
        v.push(AdderModel::Tra(k));
    }
    v.extend([1, 2, 4, 8, 16].map(AdderModel::Bcp));
    v
}

fn mults(width: u32) -> Vec<MultModel> {
    let mut v = vec![MultModel::Acc];
    for k in 0..width {
        v.push(MultModel::Tmul(k));
        v.push(MultModel::Ppp(k));
    }
    v
}

fn c5_errstat_oracle() -> Check {
    let start = Instant::now();
    let width = 8;
    let mut checked = 0;
    let compare = |name: String, m: radar_dse::errstat::ErrorMetrics, o: OracleTally, out_bits: u32| -> Result<(), String> {
        let t = m.tally.ok_or_else(|| format!("{name}: no tally"))?;
        let same = t.pairs == o.pairs
            && t.mismatches == o.mismatches
            && t.abs_err_sum == o.abs_err_sum
            && t.max_abs_err == o.max_abs_err
            && t.rel_err_sum_q32 == o.rel_err_sum_q32
            && t.zero_exact == o.zero_exact
            && m.ep_pct == o.ep_pct()
            && m.mae_pct == o.mae_pct(out_bits)
            && m.wce_pct == Some(o.wce_pct(out_bits))
            && m.mre_pct == o.mre_pct();
        if same {
            Ok(())
        } else {
            Err(format!("{name}: {t:?} vs {o:?}"))
        }
    };
    for model in adders(width) {
        let m = eval_adder_metrics(&model, width, EvalMode::Exhaustive).map_err(|e| e.to_string())?;
        let (o, _) = OracleTally::brute(width, |a, b| (a + b, oracle_add(&model, width, a, b)));
        compare(model.to_string(), m, o, width + 1)?;
        checked += 1;
    }
    for model in mults(width) {
        let m = eval_mult_metrics(&model, width, EvalMode::Exhaustive).map_err(|e| e.to_string())?;
        let (o, _) = OracleTally::brute(width, |a, b| (a * b, oracle_mul(&model, width, a, b)));
        compare(model.to_string(), m, o, 2 * width)?;
        checked += 1;
    }
    within_budget(start.elapsed(), 60.0, "width-8 enumeration")?;
    Ok(format!("{checked} models identical to the gate-level enumerator"))
}

fn names(points: &[DesignPoint]) -> Vec<&str> {
    points.iter().map(|p| p.pair_name.as_str()).collect()
}

fn c6_fixture() -> Check {
    let costs = reference_costs();
    let points = join_costs(&reference_accuracy(), &costs, None).map_err(|e| e.to_string())?.points;
    let power = Constraints {
        max_power_mw: Some(300.0),
        ..Default::default()
    };
    let mut sel = names(&filter_constraints(&points, &power).map_err(|e| e.to_string())?)
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    sel.sort();
    ensure!(sel == ["add16se_3BD+mul16s_GV3", "add16se_3BD+mul16s_HFB"], "power filter gave {sel:?}");
    let both = Constraints {
        max_dev_m: Some(2.3),
        ..power
    };
    let sel = filter_constraints(&points, &both).map_err(|e| e.to_string())?;
    ensure!(names(&sel) == ["add16se_3BD+mul16s_HFB"], "power+dev filter gave {:?}", names(&sel));
    let s = savings_summary(&costs).map_err(|e| e.to_string())?;
    ensure!(
        (s.mean_area_saving_pct - 22.9).abs() <= 0.1 && (s.mean_power_saving_pct - 26.2).abs() <= 0.1,
        "savings {s:?}"
    );
    let hfb = costs.get("add16se_3BD+mul16s_HFB").ok_or("HFB record missing")?;
    let (area, pow) = record_savings(&costs, hfb);
    ensure!((pow - 44.4).abs() < 1e-9 && (area - 28.83).abs() < 1e-9, "HFB savings {area} / {pow}");
    Ok(format!(
        "savings ({:.2}%, {:.2}%), HFB ({area:.2}%, {pow:.2}%)",
        s.mean_area_saving_pct, s.mean_power_saving_pct
    ))
}

fn random_points(rng: &mut ChaCha8Rng) -> Vec<DesignPoint> {
    let n = rng.random_range(0..30);
    (0..n)
        .map(|i| DesignPoint {
            pair_name: format!("p{i}"),
            mean_abs_dev_m: rng.random_range(0..8) as f64 * 0.25,
            area_mm2: rng.random_range(0..8) as f64 * 0.1 + 0.1,
            power_mw: rng.random_range(0..8) as f64 * 30.0 + 100.0,
        })
        .collect()
}

fn c7_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for set in 0..1000 {
        let pts = random_points(&mut rng);
        let front = pareto_front(&pts);
        ensure!(pareto_front(&front) == front, "set {set}: front not idempotent");
        for p in &pts {
            let dominated = pts.iter().any(|q| dominates(q, p));
            ensure!(front.contains(p) != dominated, "set {set}: {} misclassified", p.pair_name);
        }
    }

    for bits in 0..=12 {
        let n = 1usize << bits;
        let x: Vec<u64> = (0..n).map(|_| rng.random()).collect();
        let twice = bit_reverse_permute(&bit_reverse_permute(&x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure!(twice == x, "bit reversal not an involution at n={n}");
    }

    for raw in i16::MIN..=i16::MAX {
        let v = Fx16::from_raw(raw);
        ensure!(Fx16::quantize(v.to_f64()) == v, "quantize round trip fails at {raw}");
    }

    let exact = |t: Option<radar_dse::errstat::ErrorTally>| t.is_some_and(|t| t.mismatches == 0 && t.abs_err_sum == 0);
    for model in [AdderModel::Loa(0), AdderModel::Tra(0), AdderModel::Bcp(8), AdderModel::Bcp(16)] {
        let m = eval_adder_metrics(&model, 8, EvalMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure!(exact(m.tally), "{model} differs from acc at 8 bits");
    }
    for model in [MultModel::Tmul(0), MultModel::Ppp(0)] {
        let m = eval_mult_metrics(&model, 8, EvalMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure!(exact(m.tally), "{model} differs from acc at 8 bits");
    }

    let pairs: Vec<OperatorPair> = ["acc+acc", "loa4+tmul6", "bcp4+ppp3"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let render = || -> Result<Vec<u8>, String> {
        let rows = sweep(&RadarConfig::default(), &TargetModel::default(), &pairs, &[-5.0, 0.0, 5.0], 10, 99)
            .map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    ensure!(render()? == render()?, "sweep csv differs between reruns");
    Ok("pareto (1000 sets), bit reversal, quantize, parameter 0, sweep determinism".into())
}

fn c8_resilience() -> Check {
    let cfg = RadarConfig::default();
    let tgt = TargetModel::default();
    let (base, _) = noiseless_range(&cfg, &tgt)?;
    let baseline_dev = (base - tgt.range_m).abs();
    let mut lines = Vec::new();
    for block in [ProbeBlock::EstimatorInput, ProbeBlock::DivisionInput] {
        let devs = [0.0, 0.05, 0.2, 0.5]
            .iter()
            .map(|&s| resilience_probe(&cfg, &tgt, block, s, 100, 8))
            .collect::<radar_dse::Result<Vec<f64>>>()
            .map_err(|e| e.to_string())?;
        ensure!(devs[0] == baseline_dev, "{block}: sigma 0 gives {} vs {baseline_dev}", devs[0]);
        ensure!(devs.windows(2).all(|w| w[0] <= w[1]), "{block}: not monotone {devs:?}");
        lines.push(format!("{block} {:?}", devs.iter().map(|d| (d * 1000.0).round() / 1000.0).collect::<Vec<_>>()));
    }
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("noiseless golden value", c1_golden),
        ("high-SNR monte carlo", c2_high_snr),
        ("mild approximation tolerance", c3_mild_models),
        ("IFFT conformance", c4_ifft),
        ("errstat oracle equivalence", c5_errstat_oracle),
        ("DSE fixture reproduction", c6_fixture),
        ("property suites", c7_properties),
        ("resilience probe sanity", c8_resilience),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
