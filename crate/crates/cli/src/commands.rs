use std::fs;
use std::io::Write;

use anyhow::Context;
use hopf_noise::experiments::{compare_with, sigma2_for, tail_rms};
use hopf_noise::{amplitude, onset_locator, scan as run_scan, AmplitudeColumn, OperatingPoint};

use crate::config::RunConfig;
use crate::manifest::{Derived, Manifest, Sigma2Entry};
use crate::output::{num, write_file, write_table};
use crate::plots;

pub const HOPF_HEADER: [&str; 6] = ["tau", "eta_c", "w_c", "re_d", "im_d", "residual"];
pub const EXPAND_HEADER: [&str; 5] = ["x_o", "f_x_o", "eta", "kappa", "nu"];
pub const SIGMA2_HEADER: [&str; 6] = ["D", "sigma2", "se", "c_o", "mu", "eps_eff"];
pub const TRAJECTORY_HEADER: [&str; 5] = [
    "t",
    "u_deterministic",
    "u_ensemble_mean",
    "u_ensemble_se",
    "u_corrected",
];
pub const SCAN_HEADER: [&str; 13] = [
    "eps",
    "D",
    "amp_noise_free",
    "amp_ensemble",
    "amp_corrected",
    "sigma2",
    "sigma2_se",
    "c_o",
    "mu",
    "eps_eff",
    "n_trials",
    "master_seed",
    "error",
];
pub const ONSET_HEADER: [&str; 5] = ["D", "column", "eps_onset", "threshold", "mu"];

/// Print `rows` to `out`, and when an output directory is configured also
/// save them as `file` beside a manifest.
fn emit(
    cfg: &RunConfig,
    command: &str,
    derived: Derived,
    file: &str,
    header: &[&str],
    rows: Vec<Vec<String>>,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    if let Some(dir) = &cfg.out {
        Manifest::new(command, cfg, derived, &[file]).write(dir)?;
        write_file(&dir.join(file), &[], header, rows.clone())?;
    }
    write_table(out, &[], header, rows)
}

pub fn hopf(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let h = hopf_noise::solve_hopf(cfg.tau)?;
    let row = vec![
        num(h.tau),
        num(h.eta_c),
        num(h.w_c),
        num(h.d.re),
        num(h.d.im),
        num(h.residual()),
    ];
    let derived = Derived {
        hopf: Some(h),
        ..Derived::default()
    };
    emit(
        cfg,
        "hopf",
        derived,
        "hopf.csv",
        &HOPF_HEADER,
        vec![row],
        out,
    )
}

pub fn expand(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let e = hopf_noise::expand(cfg.gamma, cfg.slope)?;
    let row = vec![
        num(e.x_o),
        num(e.f_x_o),
        num(e.eta),
        num(e.kappa),
        num(e.nu),
    ];
    let derived = Derived {
        expansion: Some(e),
        ..Derived::default()
    };
    emit(
        cfg,
        "expand",
        derived,
        "expand.csv",
        &EXPAND_HEADER,
        vec![row],
        out,
    )
}

fn operating_point(cfg: &RunConfig) -> anyhow::Result<OperatingPoint> {
    Ok(OperatingPoint::new(cfg.gamma, cfg.slope, cfg.tau)?)
}

fn derived_for(base: &OperatingPoint, sigma2: Vec<Sigma2Entry>) -> Derived {
    Derived {
        expansion: Some(base.expansion),
        hopf: Some(base.hopf),
        sigma2,
    }
}

pub fn sigma2(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let base = operating_point(cfg)?;
    let exp = cfg.experiment();
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for &d in &cfg.noise_grid {
        let est = sigma2_for(&base, d, &exp).with_context(|| format!("sigma2 at D = {d:e}"))?;
        let corr = base.correction(&est, cfg.eps)?;
        entries.push(Sigma2Entry::from(&est));
        rows.push(vec![
            num(d),
            num(est.sigma2),
            num(est.std_error),
            num(corr.c_o),
            num(corr.mu),
            num(corr.eps_eff),
        ]);
    }
    emit(
        cfg,
        "sigma2",
        derived_for(&base, entries),
        "sigma2.csv",
        &SIGMA2_HEADER,
        rows,
        out,
    )
}

fn write_script(dir: &std::path::Path, name: &str, body: &str) -> anyhow::Result<()> {
    fs::write(dir.join(name), body)?;
    Ok(())
}

pub fn simulate(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let base = operating_point(cfg)?;
    let exp = cfg.experiment();
    let dir = cfg.out_dir();
    let est = sigma2_for(&base, cfg.noise, &exp)?;
    Manifest::new(
        "simulate",
        cfg,
        derived_for(&base, vec![Sigma2Entry::from(&est)]),
        &["trajectory.csv", plots::TRAJECTORY_SCRIPT],
    )
    .write(&dir)?;

    let cmp = compare_with(&base, cfg.eps, &est, &exp)?;
    let window = exp.window(&base.hopf);
    let amp = |t: &hopf_noise::Trajectory| amplitude(t, &window).ok();
    let a_det = amp(&cmp.deterministic);
    let a_ens = amp(&cmp.ensemble.mean_trajectory);
    let a_cor = amp(&cmp.corrected);
    let rms = tail_rms(
        &cmp.ensemble.mean_trajectory.samples,
        &cmp.corrected.samples,
        0.5,
    );
    let show = |a: Option<f64>| a.map(num).unwrap_or_else(|| "n/a".into());

    let comments = vec![
        format!(
            "eps = {}, D = {}, n_trials = {}, seed = {}",
            cfg.eps, cfg.noise, cfg.n_trials, cfg.seed
        ),
        format!(
            "sigma2 = {}, mu = {}, eps_eff = {}, c_o = {}",
            cmp.correction.sigma2, cmp.correction.mu, cmp.correction.eps_eff, cmp.correction.c_o
        ),
        format!(
            "amplitude noise_free = {}, ensemble = {}, corrected = {}",
            show(a_det),
            show(a_ens),
            show(a_cor)
        ),
        format!("rms(ensemble - corrected) over last half = {rms}"),
    ];
    let mean = &cmp.ensemble.mean_trajectory;
    let rows = (0..mean.len()).step_by(cfg.decimation).map(|k| {
        vec![
            num(mean.time(k)),
            num(cmp.deterministic.samples[k]),
            num(mean.samples[k]),
            num(cmp.ensemble.std_error[k]),
            num(cmp.corrected.samples[k]),
        ]
    });
    write_file(
        &dir.join("trajectory.csv"),
        &comments,
        &TRAJECTORY_HEADER,
        rows,
    )?;
    write_script(&dir, plots::TRAJECTORY_SCRIPT, plots::TRAJECTORY)?;

    for c in &comments {
        writeln!(out, "{c}")?;
    }
    if let Some(a) = a_det.filter(|a| *a > 0.0) {
        writeln!(out, "rms / noise-free amplitude = {}", rms / a)?;
    }
    writeln!(out, "wrote {}", dir.join("trajectory.csv").display())?;
    Ok(())
}

pub fn scan(cfg: &RunConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let base = operating_point(cfg)?;
    let exp = cfg.experiment();
    let dir = cfg.out_dir();
    let eps_grid = cfg.eps_grid();
    let mut entries = Vec::new();
    for &d in &cfg.noise_grid {
        entries.push(Sigma2Entry::from(&sigma2_for(&base, d, &exp)?));
    }
    Manifest::new(
        "scan",
        cfg,
        derived_for(&base, entries.clone()),
        &[
            "scan.csv",
            "onset.csv",
            plots::AMPLITUDE_MAP_SCRIPT,
            plots::AMPLITUDE_CURVES_SCRIPT,
        ],
    )
    .write(&dir)?;

    let table = run_scan(&eps_grid, &cfg.noise_grid, &base, &exp)?;
    let failed = table.failed().count();
    let comments = vec![
        format!(
            "eps {}..{} step {}, D = {:?}, n_trials = {}, seed = {}",
            cfg.eps_min, cfg.eps_max, cfg.eps_step, cfg.noise_grid, cfg.n_trials, cfg.seed
        ),
        format!("failed cells: {failed}"),
    ];
    let rows = table.rows.iter().map(|r| {
        vec![
            num(r.eps),
            num(r.noise),
            num(r.amp_noise_free),
            num(r.amp_ensemble),
            num(r.amp_corrected),
            num(r.sigma2),
            num(r.sigma2_se),
            num(r.c_o),
            num(r.mu),
            num(r.eps_eff),
            r.n_trials.to_string(),
            r.master_seed.to_string(),
            r.error.clone().unwrap_or_default(),
        ]
    });
    write_file(&dir.join("scan.csv"), &comments, &SCAN_HEADER, rows)?;

    let threshold = cfg.threshold();
    let columns = [
        ("noise_free", AmplitudeColumn::NoiseFree),
        ("ensemble", AmplitudeColumn::Ensemble),
        ("corrected", AmplitudeColumn::Corrected),
    ];
    let mut onset_rows = Vec::new();
    for (d, entry) in cfg.noise_grid.iter().zip(&entries) {
        let mu = 3.0 * base.expansion.nu * entry.sigma2;
        for (name, col) in columns {
            let onset = match onset_locator(&table.rows, *d, col, threshold) {
                Ok(e) => num(e),
                Err(e) => {
                    log::warn!("no onset for D = {d:e}, {name}: {e}");
                    String::new()
                }
            };
            onset_rows.push(vec![
                num(*d),
                name.to_string(),
                onset,
                num(threshold),
                num(mu),
            ]);
        }
    }
    write_file(
        &dir.join("onset.csv"),
        &[],
        &ONSET_HEADER,
        onset_rows.clone(),
    )?;
    write_script(&dir, plots::AMPLITUDE_MAP_SCRIPT, plots::AMPLITUDE_MAP)?;
    write_script(
        &dir,
        plots::AMPLITUDE_CURVES_SCRIPT,
        plots::AMPLITUDE_CURVES,
    )?;

    if failed > 0 {
        writeln!(out, "warning: {failed} cells failed, see the error column")?;
    }
    write_table(&mut *out, &[], &ONSET_HEADER, onset_rows)?;
    writeln!(out, "wrote {}", dir.join("scan.csv").display())?;
    Ok(())
}
