use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use steno_core::catalog::write_synthetic_catalog;
use steno_core::io::{load_series_csv, save_series_csv, save_stroke_json};
use steno_core::noise::{measure_snr, NoiseLevel};
use steno_core::plan::build_stimulus_plan;
use steno_core::render::to_canvas;
use steno_core::session::SketchAction;
use steno_core::store::{SessionEvent, SessionStore};
use steno_core::stroke::{CanvasSpec, StrokeRecord};
use steno_core::TimeSeries;

fn steno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steno"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn wave(n: usize) -> TimeSeries {
    let ys = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            3.0 * t + (2.0 * std::f64::consts::PI * 8.0 * t).sin() + 0.3 * ((i * 37) % 11) as f64 / 11.0
        })
        .collect();
    TimeSeries::uniform(ys, (n - 1) as f64).unwrap()
}

#[test]
fn usage_errors_exit_2_and_data_errors_exit_3() {
    assert_eq!(steno(&["analyze", "--bogus"]).status.code(), Some(2));
    assert_eq!(steno(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(steno(&["--help"]).status.code(), Some(0));
    let out = steno(&["analyze", "--stimulus", "/nonexistent.csv", "--sketch", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn gen_stimuli_writes_files_at_the_labelled_snr() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("wave.csv");
    let base = wave(10_000);
    save_series_csv(&base, &data).unwrap();
    let out_dir = dir.path().join("stimuli");
    let out = steno(&["gen-stimuli", "--data", p(&data), "--seed", "4", "--out", p(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for level in NoiseLevel::ALL {
        let name = format!("wave_{}", level.tag());
        let noisy = load_series_csv(&out_dir.join(format!("{name}.csv"))).unwrap();
        assert!(out_dir.join(format!("{name}.svg")).exists());
        let measured = measure_snr(&base, &noisy).unwrap().db();
        match level.target_snr_db() {
            Some(target) => assert!((measured.unwrap() - target).abs() < 0.5, "{name}: {measured:?}"),
            None => assert_eq!(measured, None),
        }
    }

    // a single level, same seed, identical bytes
    let again = dir.path().join("again");
    let out = steno(&["gen-stimuli", "--data", p(&data), "--snr", "10", "--seed", "4", "--out", p(&again)]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(again.join("wave_10.csv")).unwrap(),
        std::fs::read(out_dir.join("wave_10.csv")).unwrap()
    );
    assert_eq!(std::fs::read_dir(&again).unwrap().count(), 2);
}

#[test]
fn analyze_identity_is_a_byte_stable_replicator() {
    let dir = tempfile::tempdir().unwrap();
    let stim = wave(400);
    let canvas = CanvasSpec::default();
    let stroke = StrokeRecord::from_canvas_series("s", "wave", canvas, &to_canvas(&stim, &canvas).unwrap());
    save_series_csv(&stim, &dir.path().join("s.csv")).unwrap();
    save_stroke_json(&stroke, &dir.path().join("k.json")).unwrap();
    let run = |name: &str| {
        let out_path = dir.path().join(name);
        let out = steno(&[
            "analyze",
            "--stimulus",
            p(&dir.path().join("s.csv")),
            "--sketch",
            p(&dir.path().join("k.json")),
            "--trend",
            "up",
            "--periodic",
            "--peaks",
            "--out",
            p(&out_path),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(out_path).unwrap()
    };
    let (a, b) = (run("r1.json"), run("r2.json"));
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["cluster"], "replicator");
    assert_eq!(v["grades"]["trend"], "very_well");
    assert_eq!(v["grades"]["periodicity"], "very_well");
    assert_eq!(v["grades"]["peaks_valleys"], "most");
    assert_eq!(v["grades"]["noise"], "very_well");
}

/// Sessions whose sketch error grows linearly with the noise level: each
/// sketch is the stimulus plus `c·g` with `c = 1 + level/2`. Every pipeline
/// stage is linear, so trend errors scale with `c` and the fitted change
/// from no noise to max noise is exactly +200%.
#[test]
fn report_recovers_the_analytic_percent_change() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = write_synthetic_catalog(dir.path(), 8, 400).unwrap();
    let store = SessionStore::in_dir(dir.path());
    let datasets = catalog.dataset_ids();
    for participant in 0..5 {
        let id = format!("p{participant:04}");
        store
            .append(&SessionEvent::Created {
                session: id.clone(),
                participant,
                seed: catalog.seed,
            })
            .unwrap();
        for a in build_stimulus_plan(&datasets, participant, catalog.seed).unwrap().assignments {
            let px = to_canvas(&catalog.stimulus(&a.dataset, a.level).unwrap(), &catalog.canvas).unwrap();
            let c = 1.0 + 0.5 * a.level.index() as f64;
            let ys = px
                .xs()
                .iter()
                .zip(px.ys())
                .map(|(x, y)| y + c * 5.0 * (-((x - 400.0) / 120.0).powi(2)).exp())
                .collect();
            let stroke = StrokeRecord::from_canvas_series(&id, &a.dataset, catalog.canvas, &px.with_ys(ys).unwrap());
            store
                .append(&SessionEvent::Sketch {
                    session: id.clone(),
                    stimulus: a.dataset,
                    action: SketchAction::Accept,
                    stroke: Some(stroke),
                })
                .unwrap();
        }
    }

    let out_path = dir.path().join("report.json");
    let plots = dir.path().join("plots");
    let out = steno(&[
        "report",
        "--sessions",
        p(dir.path()),
        "--out",
        p(&out_path),
        "--svg",
        p(&plots),
        "--samples",
        "2000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 45);
    let order: Vec<(String, u64)> = reports
        .iter()
        .map(|r| (r["session"].as_str().unwrap().to_string(), r["stimulus_index"].as_u64().unwrap()))
        .collect();
    let mut sorted = order.clone();
    sorted.sort();
    assert_eq!(order, sorted);

    let mut checked = 0;
    for r in v["regressions"].as_array().unwrap() {
        if r["metric"] == "trend_l2_fft" || r["metric"] == "trend_l2_loess" {
            let pct = r["fit"]["percent"].as_f64().unwrap();
            assert!((pct - 200.0).abs() < 1e-9, "{} {}: {pct}", r["dataset"], r["metric"]);
            checked += 1;
        }
    }
    assert_eq!(checked, 18);
    assert!(plots.join("apple_trend_l2_fft.svg").exists());
}

#[test]
fn demo_directory_feeds_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = steno(&["demo", "--out", p(dir.path()), "--participants", "2", "--samples", "300"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = steno(&["report", "--sessions", p(dir.path()), "--samples", "950"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 18);
}
