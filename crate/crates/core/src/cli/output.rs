//! CSV and plot-script emission.
//!
//! Numbers are written in scientific notation with 17 significant digits so
//! files round-trip exactly and golden-file comparisons are byte-stable.
//! Missing values (unstable or failed points) are written as `NA`, never 0.
//! Plot scripts are plain gnuplot command files; the CSV stays the single
//! source of truth.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::sweep::{SweepAxis, SweepRecord};

use super::PointReport;

/// Full-precision scientific formatting used for every CSV number.
pub fn format_value(value: f64) -> String {
    format!("{value:.16e}")
}

fn format_optional(value: Option<f64>) -> String {
    match value {
        Some(v) => format_value(v),
        None => "NA".to_string(),
    }
}

/// Writes the full sweep schema: axis columns, stability, spectrum edge,
/// entanglement data, solver residual and a per-point error code.
pub fn write_sweep_csv(
    path: &Path,
    axes: &[SweepAxis],
    records: &[SweepRecord],
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let axis_names: Vec<&str> = axes.iter().map(|a| a.parameter.name()).collect();
    writeln!(
        out,
        "{},stable,spectral_abscissa,e_n,nu_minus,residual_norm,error",
        axis_names.join(",")
    )?;
    for record in records {
        let coords: Vec<String> = record.axis_values.iter().map(|v| format_value(*v)).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            coords.join(","),
            record.stable,
            format_value(record.spectral_abscissa),
            format_optional(record.e_n),
            format_optional(record.nu_minus),
            format_optional(record.residual_norm),
            record.error.map(|e| e.code()).unwrap_or("")
        )?;
    }
    out.flush()
}

/// Writes the compact 2D-grid schema `(axis1, axis2, e_n)` used by the
/// colormap figure presets.
pub fn write_grid_csv(
    path: &Path,
    axis_names: [&str; 2],
    records: &[SweepRecord],
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{},{},e_n", axis_names[0], axis_names[1])?;
    for record in records {
        writeln!(
            out,
            "{},{},{}",
            format_value(record.axis_values[0]),
            format_value(record.axis_values[1]),
            format_optional(record.e_n)
        )?;
    }
    out.flush()
}

/// Writes a line-cut schema: the swept axis plus one `e_n@<value>` column
/// per curve.
pub fn write_linecut_csv(
    path: &Path,
    axis: &SweepAxis,
    curve_labels: &[String],
    columns: &[Vec<Option<f64>>],
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{},{}", axis.parameter.name(), curve_labels.join(","))?;
    for (row, value) in axis.values().enumerate() {
        let cells: Vec<String> = columns
            .iter()
            .map(|column| format_optional(column[row]))
            .collect();
        writeln!(out, "{},{}", format_value(value), cells.join(","))?;
    }
    out.flush()
}

/// One-row CSV for the `point` command.
pub fn write_point_csv(path: &Path, report: &PointReport) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(
        out,
        "pair,stable,spectral_abscissa,e_n,nu_minus,residual_norm,physical"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        report.pair,
        report.stability.stable,
        format_value(report.stability.spectral_abscissa),
        format_optional(report.entanglement.map(|r| r.log_negativity)),
        format_optional(report.entanglement.map(|r| r.nu_minus)),
        format_optional(report.residual_norm),
        report
            .physical
            .map(|p| p.to_string())
            .unwrap_or_else(|| "NA".to_string())
    )?;
    out.flush()
}

/// gnuplot script rendering a 2D grid CSV as a colormap.
pub fn write_image_plot_script(
    path: &Path,
    csv_name: &str,
    axis_names: [&str; 2],
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# gnuplot script for {csv_name}")?;
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set datafile missing 'NA'")?;
    writeln!(out, "set xlabel '{}'", axis_names[1])?;
    writeln!(out, "set ylabel '{}'", axis_names[0])?;
    writeln!(out, "set cblabel 'E_N'")?;
    writeln!(out, "plot '{csv_name}' skip 1 using 2:1:3 with image notitle")?;
    out.flush()
}

/// gnuplot script rendering a line-cut CSV, one curve per column.
pub fn write_lines_plot_script(
    path: &Path,
    csv_name: &str,
    axis_name: &str,
    curve_labels: &[String],
) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# gnuplot script for {csv_name}")?;
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set datafile missing 'NA'")?;
    writeln!(out, "set xlabel '{axis_name}'")?;
    writeln!(out, "set ylabel 'E_N'")?;
    let plots: Vec<String> = curve_labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            format!(
                "'{csv_name}' skip 1 using 1:{} with lines title '{label}'",
                i + 2
            )
        })
        .collect();
    writeln!(out, "plot {}", plots.join(", \\\n     "))?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{PointError, SweepParameter};

    fn record(values: Vec<f64>, e_n: Option<f64>) -> SweepRecord {
        SweepRecord {
            axis_values: values,
            stable: e_n.is_some(),
            spectral_abscissa: -0.01,
            e_n,
            nu_minus: e_n.map(|v| 0.5 * (-v).exp()),
            residual_norm: e_n.map(|_| 1e-15),
            error: None,
        }
    }

    #[test]
    fn full_precision_round_trips() {
        for value in [0.1, 1.0 / 3.0, 6.739189650851227e-2, 1e-300, -2.5e17] {
            let text = format_value(value);
            assert_eq!(text.parse::<f64>().unwrap(), value, "lossy: {text}");
        }
        assert_eq!(format_value(f64::INFINITY).parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn sweep_csv_schema_is_pinned() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let axes = [
            SweepAxis::new(SweepParameter::GCouplingA, 0.0, 0.3, 2).unwrap(),
            SweepAxis::new(SweepParameter::DeltaA, 0.5, 1.5, 2).unwrap(),
        ];
        let mut records = vec![
            record(vec![0.0, 0.5], Some(0.0)),
            record(vec![0.0, 1.5], None),
        ];
        records[1].error = Some(PointError::ResidualExceeded);
        write_sweep_csv(&path, &axes, &records).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "g_coupling_a,delta_a,stable,spectral_abscissa,e_n,nu_minus,residual_norm,error"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("0.0000000000000000e0,5.0000000000000000e-1,true,"));
        let second = lines.next().unwrap();
        assert!(second.contains(",NA,NA,NA,residual_exceeded"));
        assert!(lines.next().is_none());
    }

    #[test]
    fn grid_csv_schema_is_pinned() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        write_grid_csv(
            &path,
            ["g_coupling_a", "delta_a"],
            &[record(vec![0.2, 1.0], Some(0.0674))],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("g_coupling_a,delta_a,e_n\n"));
    }

    #[test]
    fn linecut_csv_schema_is_pinned() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cut.csv");
        let axis = SweepAxis::new(SweepParameter::GCouplingM, 0.0, 0.3, 3).unwrap();
        let labels = vec!["e_n@20".to_string(), "e_n@100".to_string()];
        let columns = vec![
            vec![Some(0.0), Some(0.1), Some(0.2)],
            vec![Some(0.0), None, Some(0.05)],
        ];
        write_linecut_csv(&path, &axis, &labels, &columns).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "g_coupling_m,e_n@20,e_n@100");
        assert_eq!(lines.count(), 3);
        assert!(text.contains(",NA\n") || text.ends_with(",NA"));
    }

    #[test]
    fn plot_scripts_reference_the_csv() {
        let dir = tempfile::tempdir().unwrap();
        let image = dir.path().join("fig.gp");
        write_image_plot_script(&image, "fig.csv", ["g_coupling_a", "delta_a"]).unwrap();
        let text = std::fs::read_to_string(&image).unwrap();
        assert!(text.contains("with image"));
        assert!(text.contains("'fig.csv'"));
        assert!(text.contains("missing 'NA'"));

        let lines = dir.path().join("cut.gp");
        write_lines_plot_script(
            &lines,
            "cut.csv",
            "g_coupling_m",
            &["e_n@20".to_string(), "e_n@100".to_string()],
        )
        .unwrap();
        let text = std::fs::read_to_string(&lines).unwrap();
        assert!(text.contains("using 1:2"));
        assert!(text.contains("using 1:3"));
    }
}
