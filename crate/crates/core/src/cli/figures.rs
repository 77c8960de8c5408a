//! Bundled figure presets.
//!
//! Each preset fixes the swept axes (and, for line-cut panels, the curve
//! family) over ranges that bracket the entanglement thresholds of the
//! reference parameter set; base parameters and grid resolution remain
//! overridable. Colormap panels emit the `(axis1, axis2, e_n)` grid schema,
//! line-cut panels one `e_n@<value>` column per curve.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::sweep::{run_sweep, SweepAxis, SweepParameter, SweepRecord};

use super::{output, run_in_pool, CliError, RunConfig};

/// Default points per axis: fine enough to separate thresholds a few
/// hundredths apart on the coupling axes.
pub const DEFAULT_GRID_POINTS: usize = 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 7] = [
        FigurePreset::Fig2,
        FigurePreset::Fig3a,
        FigurePreset::Fig3b,
        FigurePreset::Fig4a,
        FigurePreset::Fig4b,
        FigurePreset::Fig5a,
        FigurePreset::Fig5b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3a => "fig3a",
            FigurePreset::Fig3b => "fig3b",
            FigurePreset::Fig4a => "fig4a",
            FigurePreset::Fig4b => "fig4b",
            FigurePreset::Fig5a => "fig5a",
            FigurePreset::Fig5b => "fig5b",
        }
    }

    /// The panel layout at the given per-axis resolution.
    pub fn panel(self, grid_points: usize) -> Result<PanelSpec, CliError> {
        use SweepParameter::*;
        let axis = |p, start, stop| {
            SweepAxis::new(p, start, stop, grid_points).map_err(CliError::from)
        };
        Ok(match self {
            FigurePreset::Fig2 => PanelSpec::Grid([
                axis(GCouplingA, 0.0, 0.3)?,
                axis(DeltaA, 0.5, 1.5)?,
            ]),
            FigurePreset::Fig3a => PanelSpec::Grid([
                axis(GammaA, 0.01, 0.6)?,
                axis(GCouplingA, 0.0, 0.3)?,
            ]),
            FigurePreset::Fig3b => PanelSpec::Lines {
                axis: axis(GammaA, 0.01, 0.6)?,
                curve: GCouplingA,
                values: &[0.15, 0.2, 0.3],
            },
            FigurePreset::Fig4a => PanelSpec::Grid([
                axis(GCouplingM, 0.0, 0.3)?,
                axis(GCouplingA, 0.0, 0.3)?,
            ]),
            FigurePreset::Fig4b => PanelSpec::Lines {
                axis: axis(GCouplingM, 0.0, 0.3)?,
                curve: GCouplingA,
                values: &[0.12, 0.15, 0.2],
            },
            FigurePreset::Fig5a => PanelSpec::Grid([
                axis(NTh, 0.0, 250.0)?,
                axis(GCouplingM, 0.0, 0.3)?,
            ]),
            FigurePreset::Fig5b => PanelSpec::Lines {
                axis: axis(GCouplingM, 0.0, 0.3)?,
                curve: NTh,
                values: &[20.0, 100.0, 200.0],
            },
        })
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigurePreset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigurePreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::UnknownPreset(s.to_string()))
    }
}

/// Axes (or axis plus curve family) of one figure panel.
#[derive(Debug, Clone)]
pub enum PanelSpec {
    Grid([SweepAxis; 2]),
    Lines {
        axis: SweepAxis,
        curve: SweepParameter,
        values: &'static [f64],
    },
}

/// Minimal decimal rendering of a curve value for CSV headers and legends
/// (`0.15`, `20`).
fn curve_label(value: f64) -> String {
    format!("e_n@{value}")
}

/// Replaces a preset's axes with explicitly configured ones, when present.
fn override_panel(panel: PanelSpec, configured: &[SweepAxis]) -> Result<PanelSpec, CliError> {
    if configured.is_empty() {
        return Ok(panel);
    }
    match (panel, configured) {
        (PanelSpec::Grid(_), [first, second]) => Ok(PanelSpec::Grid([*first, *second])),
        (PanelSpec::Lines { curve, values, .. }, [axis]) => Ok(PanelSpec::Lines {
            axis: *axis,
            curve,
            values,
        }),
        (PanelSpec::Grid(_), axes) => Err(CliError::Config(format!(
            "this preset is a 2D panel; override it with exactly two axes, got {}",
            axes.len()
        ))),
        (PanelSpec::Lines { .. }, axes) => Err(CliError::Config(format!(
            "this preset is a line cut; override it with exactly one axis, got {}",
            axes.len()
        ))),
    }
}

/// Runs one preset and writes `<name>.csv` plus `<name>.gp` into the output
/// directory. Returns the written paths. Configured axes (`axis`, `axis2`)
/// replace the preset ranges; `grid` rescales the point count.
pub fn cmd_figure(preset: FigurePreset, config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let grid_points = config.grid.unwrap_or(DEFAULT_GRID_POINTS);
    let out_dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(CliError::io(&out_dir))?;
    let csv_path = out_dir.join(format!("{}.csv", preset.name()));
    let script_path = out_dir.join(format!("{}.gp", preset.name()));
    let csv_name = format!("{}.csv", preset.name());

    match override_panel(preset.panel(grid_points)?, &config.axes)? {
        PanelSpec::Grid(axes) => {
            let records = run_in_pool(config.workers, || {
                run_sweep(&config.params, &axes, config.pair, config.tol_residual)
            })??;
            let names = [axes[0].parameter.name(), axes[1].parameter.name()];
            output::write_grid_csv(&csv_path, names, &records).map_err(CliError::io(&csv_path))?;
            output::write_image_plot_script(&script_path, &csv_name, names)
                .map_err(CliError::io(&script_path))?;
        }
        PanelSpec::Lines { axis, curve, values } => {
            let base = config.params;
            let pair = config.pair;
            let tol = config.tol_residual;
            let runs: Result<Vec<Vec<SweepRecord>>, _> = run_in_pool(config.workers, || {
                values
                    .iter()
                    .map(|value| {
                        let mut params = base;
                        curve.apply(&mut params, *value);
                        run_sweep(&params, &[axis], pair, tol)
                    })
                    .collect()
            })?;
            let columns: Vec<Vec<Option<f64>>> = runs?
                .into_iter()
                .map(|records| records.into_iter().map(|r| r.e_n).collect())
                .collect();
            let labels: Vec<String> = values.iter().map(|v| curve_label(*v)).collect();
            output::write_linecut_csv(&csv_path, &axis, &labels, &columns)
                .map_err(CliError::io(&csv_path))?;
            output::write_lines_plot_script(
                &script_path,
                &csv_name,
                axis.parameter.name(),
                &labels,
            )
            .map_err(CliError::io(&script_path))?;
        }
    }
    Ok(vec![csv_path, script_path])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_round_trip() {
        for preset in FigurePreset::ALL {
            assert_eq!(preset.name().parse::<FigurePreset>().unwrap(), preset);
        }
        assert!(matches!(
            "fig6".parse::<FigurePreset>(),
            Err(CliError::UnknownPreset(_))
        ));
    }

    #[test]
    fn panels_match_their_axes() {
        match FigurePreset::Fig2.panel(61).unwrap() {
            PanelSpec::Grid(axes) => {
                assert_eq!(axes[0].parameter, SweepParameter::GCouplingA);
                assert_eq!((axes[0].start, axes[0].stop), (0.0, 0.3));
                assert_eq!(axes[1].parameter, SweepParameter::DeltaA);
                assert_eq!((axes[1].start, axes[1].stop), (0.5, 1.5));
                assert_eq!(axes[0].count, 61);
            }
            other => panic!("fig2 should be a grid, got {other:?}"),
        }
        match FigurePreset::Fig5b.panel(21).unwrap() {
            PanelSpec::Lines { axis, curve, values } => {
                assert_eq!(axis.parameter, SweepParameter::GCouplingM);
                assert_eq!(curve, SweepParameter::NTh);
                assert_eq!(values, &[20.0, 100.0, 200.0]);
                assert_eq!(axis.count, 21);
            }
            other => panic!("fig5b should be lines, got {other:?}"),
        }
    }

    #[test]
    fn curve_labels_render_compactly() {
        assert_eq!(curve_label(0.15), "e_n@0.15");
        assert_eq!(curve_label(20.0), "e_n@20");
        assert_eq!(curve_label(200.0), "e_n@200");
    }

    #[test]
    fn configured_axes_replace_preset_ranges() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig {
            out: Some(dir.path().to_path_buf()),
            grid: Some(3),
            ..RunConfig::default()
        };
        config
            .axes
            .push(SweepAxis::new(SweepParameter::GCouplingA, 0.1, 0.25, 3).unwrap());
        // One axis cannot replace a 2D panel.
        assert!(cmd_figure(FigurePreset::Fig2, &config).is_err());
        // It can replace a line-cut axis.
        let written = cmd_figure(FigurePreset::Fig5b, &config).unwrap();
        let csv = std::fs::read_to_string(&written[0]).unwrap();
        assert!(csv.starts_with("g_coupling_a,e_n@20,e_n@100,e_n@200\n"));
        assert!(csv.contains("1.0000000000000001e-1,"));

        config
            .axes
            .push(SweepAxis::new(SweepParameter::DeltaA, 0.9, 1.1, 3).unwrap());
        let written = cmd_figure(FigurePreset::Fig2, &config).unwrap();
        let csv = std::fs::read_to_string(&written[0]).unwrap();
        assert!(csv.starts_with("g_coupling_a,delta_a,e_n\n"));
        assert_eq!(csv.lines().count(), 1 + 9);
    }

    #[test]
    fn figure_emission_writes_csv_and_script() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            out: Some(dir.path().to_path_buf()),
            grid: Some(5),
            workers: Some(2),
            ..RunConfig::default()
        };

        let written = cmd_figure(FigurePreset::Fig2, &config).unwrap();
        assert_eq!(written.len(), 2);
        let csv = std::fs::read_to_string(&written[0]).unwrap();
        assert!(csv.starts_with("g_coupling_a,delta_a,e_n\n"));
        assert_eq!(csv.lines().count(), 1 + 25);
        assert!(std::fs::read_to_string(&written[1]).unwrap().contains("fig2.csv"));

        let written = cmd_figure(FigurePreset::Fig5b, &config).unwrap();
        let csv = std::fs::read_to_string(&written[0]).unwrap();
        assert!(csv.starts_with("g_coupling_m,e_n@20,e_n@100,e_n@200\n"));
        assert_eq!(csv.lines().count(), 1 + 5);
    }
}
