//! Config-driven runs and the per-figure parameter presets.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::config::{ObservableKind, RunConfig};
use crate::error::{QuenchError, Result};
use crate::observables::ObservableSample;
use crate::output::write_csv;
use crate::simulation::{time_grid, Simulator};

/// Computes the series described by `config` without writing anything.
pub fn simulate(config: &RunConfig, threads: usize) -> Result<Vec<ObservableSample>> {
    config.validate()?;
    let protocol = config.protocol()?;
    let grid = time_grid(config.t_max, config.dt, protocol.boundaries())?;
    let sim = Simulator::new(protocol)?;
    sim.series(&grid, &config.sample_spec(), threads)
}

/// Runs `config` and writes the CSV to `config.output_path`, preceded by
/// `comments` as `#` lines. Returns the number of rows.
pub fn run_to_file(config: &RunConfig, threads: usize, comments: &[String]) -> Result<usize> {
    let rows = simulate(config, threads)?;
    if let Some(dir) = config.output_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = File::create(&config.output_path)?;
    write_csv(BufWriter::new(file), comments, &rows)?;
    Ok(rows.len())
}

/// One series of a figure preset.
#[derive(Clone, Debug)]
pub struct FigureRun {
    pub label: String,
    pub config: RunConfig,
    pub comments: Vec<String>,
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// The series behind figures 2-6. Every preset uses the quench of the
/// protocol figure (omega 3 -> 20, k = 2, T = 4); `base` supplies the output
/// path stem, `dt`, `ratio_delta` and `threads`. Assumptions beyond the
/// captions are stated in each series' comment lines.
pub fn figure_runs(base: &RunConfig, figure: u32) -> Result<Vec<FigureRun>> {
    use ObservableKind::*;
    // (n_sites, quenches, t_max, observables)
    let (series, note): (Vec<(usize, usize, f64)>, &str) = match figure {
        2 => (
            vec![(500, 1, 40.0), (500, 5, 40.0), (20, 1, 40.0), (20, 5, 40.0)],
            "gamma_r and gamma_r - beta_r; caption compares large and small N, N = 500 and N = 20 assumed",
        ),
        3 => (
            vec![(500, 1, 40.0), (500, 3, 40.0), (500, 5, 40.0)],
            "n(0, t) at N = 500; quench counts 1, 3, 5 assumed",
        ),
        4 => (
            vec![(500, 1, 40.0), (500, 3, 40.0), (500, 5, 40.0)],
            "entanglement entropy at N = 500; quench counts 1, 3, 5 assumed",
        ),
        5 => (
            vec![(500, 1, 100.0), (500, 3, 100.0), (500, 5, 100.0)],
            "OTOC between sites 1 and 6 at N = 500; quench counts 1, 3, 5 and t_max = 100 assumed",
        ),
        6 => (
            vec![(20, 5, 2500.0), (100, 5, 2500.0), (200, 5, 2500.0), (500, 5, 2500.0)],
            "OTOC between sites 1 and 6 with 5 quenches; sizes 20, 100, 200, 500 and t_max = 2500 \
             (long enough for the N = 200 quasi-recurrence) assumed",
        ),
        other => {
            return Err(QuenchError::Config(format!("no preset for figure {other}; choose 2 to 6")));
        }
    };
    let observables = match figure {
        2 => vec![RdmParams, Ratio],
        3 => vec![Momentum],
        4 => vec![Entropy],
        _ => vec![Otoc],
    };
    let multi_size = series.iter().any(|s| s.0 != series[0].0);
    Ok(series
        .into_iter()
        .map(|(n, q, t_max)| {
            let label = match (figure, multi_size) {
                (6, _) => format!("n{n}"),
                (_, true) => format!("n{n}_q{q}"),
                _ => format!("q{q}"),
            };
            let config = RunConfig {
                n_sites: n,
                omega_initial: 3.0,
                omega_final: 20.0,
                coupling: 2.0,
                quench_period: 4.0,
                num_quenches: q,
                t_max,
                dt: base.dt,
                otoc_sites: [1, 6],
                ratio_delta: base.ratio_delta,
                observables: observables.clone(),
                output_path: with_suffix(&base.output_path, &format!("fig{figure}_{label}")),
                threads: base.threads,
            };
            let comments = vec![
                format!("figure {figure} preset, series {label}"),
                format!(
                    "N = {n}, omega {} -> {}, k = {}, T = {}, quenches = {q}, t_max = {t_max}, dt = {}",
                    config.omega_initial, config.omega_final, config.coupling, config.quench_period, config.dt
                ),
                format!("assumption: {note}"),
            ];
            FigureRun {
                label,
                config,
                comments,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig::from_json(
            r#"{"n_sites": 10, "omega_initial": 3, "omega_final": 20, "coupling": 2,
                "quench_period": 4, "num_quenches": 1, "t_max": 10, "dt": 0.05,
                "output_path": "out/run.csv"}"#,
        )
        .unwrap()
    }

    #[test]
    fn presets_exist_for_figures_2_to_6() {
        for f in 2..=6 {
            let runs = figure_runs(&base(), f).unwrap();
            assert!(!runs.is_empty());
            for r in &runs {
                r.config.validate().unwrap();
                assert!(r.config.output_path.starts_with("out"));
                assert_eq!(r.config.dt, 0.05);
            }
        }
        assert!(figure_runs(&base(), 1).is_err());
        assert!(figure_runs(&base(), 7).is_err());
    }

    #[test]
    fn preset_names() {
        let runs = figure_runs(&base(), 5).unwrap();
        let names: Vec<_> = runs.iter().map(|r| r.config.output_path.clone()).collect();
        assert_eq!(names[0], PathBuf::from("out/run_fig5_q1.csv"));
        let runs = figure_runs(&base(), 6).unwrap();
        assert_eq!(runs[1].config.output_path, PathBuf::from("out/run_fig6_n100.csv"));
        let runs = figure_runs(&base(), 2).unwrap();
        assert_eq!(runs[3].label, "n20_q5");
    }

    #[test]
    fn writes_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = base();
        c.output_path = dir.path().join("nested/series.csv");
        let rows = run_to_file(&c, 1, &[]).unwrap();
        assert_eq!(rows, 201 + 0);
        let text = std::fs::read_to_string(&c.output_path).unwrap();
        assert_eq!(text.lines().count(), rows + 1);
        assert!(text.starts_with(crate::output::CSV_HEADER));
    }
}
