mod common;

use common::*;
use hopf_noise_cli::{Manifest, RunConfig};

#[test]
fn hopf_prints_the_critical_point() {
    let (h, rows) = parse_csv(&stdout(&run(&["hopf", "--tau", "12"])));
    let eta_c = column(&h, &rows, "eta_c")[0];
    assert!((eta_c - (-1.02887)).abs() < 5e-6, "{eta_c}");
    assert!(
        rows[0][1].trim_start_matches('-').len() >= 7,
        "needs 6 significant digits"
    );
    assert!(column(&h, &rows, "residual")[0] < 1e-10);
}

#[test]
fn longer_delay_lowers_the_frequency() {
    let w = |tau: &str| {
        let (h, rows) = parse_csv(&stdout(&run(&["hopf", "--tau", tau])));
        column(&h, &rows, "w_c")[0]
    };
    assert!(w("24") < w("12"));
}

#[test]
fn nonpositive_delay_is_a_usage_error() {
    for tau in ["0", "-3"] {
        let o = run(&["hopf", "--tau", tau]);
        assert_eq!(o.status.code(), Some(2), "tau = {tau}");
    }
    assert_eq!(run(&["hopf", "--tau", "abc"]).status.code(), Some(2));
}

#[test]
fn expand_round_trips_through_csv() {
    let (h, rows) = parse_csv(&stdout(&run(&["expand"])));
    let e = hopf_noise::expand(-0.05, 60.0).unwrap();
    let got = |name| column(&h, &rows, name)[0].to_bits();
    assert_eq!(got("x_o"), e.x_o.to_bits());
    assert_eq!(got("f_x_o"), e.f_x_o.to_bits());
    assert_eq!(got("eta"), e.eta.to_bits());
    assert_eq!(got("kappa"), e.kappa.to_bits());
    assert_eq!(got("nu"), e.nu.to_bits());
    assert!((e.x_o + 0.014663).abs() < 2e-6);
    assert!((e.eta + 0.622).abs() < 1e-3);
}

#[test]
fn zero_gain_fails() {
    let o = run(&["expand", "--gamma", "0"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
}

#[test]
fn sigma2_rows() {
    let (h, rows) = parse_csv(&stdout(&run(&["sigma2", "--noise", "0,1e-5,2e-5"])));
    assert_eq!(h, ["D", "sigma2", "se", "c_o", "mu", "eps_eff"]);
    let s = column(&h, &rows, "sigma2");
    let c_o = column(&h, &rows, "c_o");
    let mu = column(&h, &rows, "mu");
    assert_eq!((s[0], c_o[0], mu[0]), (0.0, 0.0, 0.0));
    assert_eq!(column(&h, &rows, "eps_eff")[0], -0.05);
    let r = s[2] / s[1];
    assert!((1.8..=2.2).contains(&r));
}

#[test]
fn noiseless_simulation_columns_coincide() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout(&run(&[
        "--out", out, "--trials", "5", "simulate", "--noise", "0",
    ]));
    let (h, rows) = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(
        h,
        [
            "t",
            "u_deterministic",
            "u_ensemble_mean",
            "u_ensemble_se",
            "u_corrected"
        ]
    );
    assert_eq!(rows.len(), 10_000 / 10 + 1);
    let det = column(&h, &rows, "u_deterministic");
    let mean = column(&h, &rows, "u_ensemble_mean");
    let corr = column(&h, &rows, "u_corrected");
    for k in 0..det.len() {
        assert!((det[k] - mean[k]).abs() <= 1e-12);
        assert!((det[k] - corr[k]).abs() <= 1e-12);
    }
    assert!(column(&h, &rows, "u_ensemble_se").iter().all(|&s| s == 0.0));
}

#[test]
fn simulation_writes_one_manifest_and_a_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout(&run(&[
        "--out",
        out,
        "--trials",
        "20",
        "--seed",
        "5",
        "simulate",
        "--steps",
        "3000",
        "--decimation",
        "7",
    ]));
    let manifests: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".json"))
        .collect();
    assert_eq!(manifests.len(), 1);
    let m = Manifest::read(&dir.path().join("manifest.json")).unwrap();
    assert_eq!(m.command, "simulate");
    assert_eq!(
        (m.master_seed, m.config.n_trials, m.config.n_steps),
        (5, 20, 3000)
    );
    assert!(m.derived.hopf.is_some() && m.derived.expansion.is_some());
    assert_eq!(m.derived.sigma2.len(), 1);
    let (_, rows) = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(rows.len(), 3000 / 7 + 1);
    let script = std::fs::read_to_string(dir.path().join("plot_trajectory.py")).unwrap();
    assert!(script.contains("trajectory.csv"));
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "tau = 24.0\ngamma = -0.08\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (h, rows) = parse_csv(&stdout(&run(&["--config", c, "hopf"])));
    assert_eq!(column(&h, &rows, "tau")[0], 24.0);
    let (h, rows) = parse_csv(&stdout(&run(&["--config", c, "hopf", "--tau", "12"])));
    assert_eq!(column(&h, &rows, "tau")[0], 12.0);
    let (h, rows) = parse_csv(&stdout(&run(&["--config", c, "expand"])));
    let e = hopf_noise::expand(-0.08, 60.0).unwrap();
    assert_eq!(column(&h, &rows, "x_o")[0], e.x_o);
}

#[test]
fn malformed_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "tua = 24.0\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "hopf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_worker_count_is_a_usage_error() {
    let o = bin()
        .env("HOPF_NOISE_WORKERS", "zero")
        .args(["hopf"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn noiseless_scan_columns_coincide() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout(&run(&[
        "--out",
        out,
        "--trials",
        "3",
        "scan",
        "--noise",
        "0",
        "--eps-min",
        "-0.2",
        "--eps-max",
        "0.1",
        "--eps-step",
        "0.05",
    ]));
    let (h, rows) = read_csv(&dir.path().join("scan.csv"));
    assert_eq!(rows.len(), 7);
    let a = column(&h, &rows, "amp_noise_free");
    assert_eq!(a, column(&h, &rows, "amp_ensemble"));
    assert_eq!(a, column(&h, &rows, "amp_corrected"));
    assert!(a.iter().all(|&x| x >= 0.0));
    for f in [
        "onset.csv",
        "manifest.json",
        "plot_amplitude_map.py",
        "plot_amplitude_curves.py",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn scan_replays_from_its_manifest() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    stdout(&run_with_workers(
        1,
        &[
            "--out",
            a.path().to_str().unwrap(),
            "--trials",
            "30",
            "--seed",
            "17",
            "scan",
            "--noise",
            "0,1e-5",
            "--eps-min",
            "-0.1",
            "--eps-max",
            "0.0",
            "--eps-step",
            "0.05",
            "--steps",
            "4000",
        ],
    ));
    let manifest = a.path().join("manifest.json");
    stdout(&run_with_workers(
        3,
        &[
            "--config",
            manifest.to_str().unwrap(),
            "--out",
            b.path().to_str().unwrap(),
            "scan",
        ],
    ));
    let sa = std::fs::read(a.path().join("scan.csv")).unwrap();
    let sb = std::fs::read(b.path().join("scan.csv")).unwrap();
    assert_eq!(sa, sb);
    let ma = Manifest::read(&manifest).unwrap();
    let mb = Manifest::read(&b.path().join("manifest.json")).unwrap();
    assert_eq!(ma.derived, mb.derived);
    assert_eq!(
        RunConfig {
            out: None,
            ..ma.config
        },
        RunConfig {
            out: None,
            ..mb.config
        }
    );
}
