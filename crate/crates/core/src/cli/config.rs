//! Run configuration: defaults, flat key-value config files, and
//! command-line overrides.
//!
//! The file format is one `key = value` pair per line with `#` comments.
//! Unknown keys are rejected outright so a typo in a physics parameter
//! cannot silently fall back to a default.

use std::path::{Path, PathBuf};

use crate::entanglement::ModePair;
use crate::lyapunov::RESIDUAL_TOLERANCE;
use crate::model::SystemParams;
use crate::sweep::{SweepAxis, SweepParameter};

use super::CliError;

/// Fully resolved configuration for any of the commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    /// Sweep axes; one or two entries set via `axis` / `axis2`.
    pub axes: Vec<SweepAxis>,
    pub pair: ModePair,
    /// Output file (point, sweep) or directory (figure).
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    /// Relative Lyapunov residual above which a grid point is flagged.
    pub tol_residual: f64,
    /// Points per axis for figure presets; defaults to
    /// [`super::DEFAULT_GRID_POINTS`].
    pub grid: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::default(),
            axes: Vec::new(),
            pair: ModePair::optical_mechanical(),
            out: None,
            workers: None,
            tol_residual: RESIDUAL_TOLERANCE,
            grid: None,
        }
    }
}

/// Parses an axis specification `parameter:start:stop:count`.
pub fn parse_axis_spec(spec: &str) -> Result<SweepAxis, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(CliError::Config(format!(
            "axis spec '{spec}' must be parameter:start:stop:count"
        )));
    }
    let parameter: SweepParameter = parts[0].parse()?;
    let start = parse_float("axis start", parts[1])?;
    let stop = parse_float("axis stop", parts[2])?;
    let count = parts[3]
        .parse::<usize>()
        .map_err(|_| CliError::Config(format!("axis count '{}' is not an integer", parts[3])))?;
    Ok(SweepAxis::new(parameter, start, stop, count)?)
}

fn parse_float(what: &str, raw: &str) -> Result<f64, CliError> {
    raw.parse::<f64>()
        .map_err(|_| CliError::Config(format!("{what} '{raw}' is not a number")))
}

impl RunConfig {
    /// Applies every `key = value` line of a config file, in order.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: expected key = value, got '{}'",
                    path.display(),
                    index + 1,
                    raw.trim()
                ))
            })?;
            self.apply_kv(key.trim(), value.trim()).map_err(|err| {
                CliError::Config(format!("{}:{}: {}", path.display(), index + 1, err))
            })?;
        }
        Ok(())
    }

    /// Applies one override. Accepts every physical parameter by its field
    /// name plus the run-control keys `pair`, `out`, `workers`,
    /// `tol_residual`, `grid`, `axis` and `axis2`.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "omega_m" => self.params.omega_m = parse_float(key, value)?,
            "delta_tilde" => self.params.delta_tilde = parse_float(key, value)?,
            "delta_a" => self.params.delta_a = parse_float(key, value)?,
            "kappa" => self.params.kappa = parse_float(key, value)?,
            "gamma_a" => self.params.gamma_a = parse_float(key, value)?,
            "gamma_m" => self.params.gamma_m = parse_float(key, value)?,
            "g_coupling_a" => self.params.g_coupling_a = parse_float(key, value)?,
            "g_coupling_m" => self.params.g_coupling_m = parse_float(key, value)?,
            "n_th" => self.params.n_th = parse_float(key, value)?,
            "j_m" => self.params.j_m = parse_float(key, value)?,
            "theta" => self.params.theta = parse_float(key, value)?,
            "g_single_m" => self.params.g_single_m = parse_float(key, value)?,
            "g_single_a" => self.params.g_single_a = parse_float(key, value)?,
            "omega_m_si" => self.params.omega_m_si = Some(parse_float(key, value)?),
            "pair" => self.pair = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "workers" => {
                let workers = value.parse::<usize>().map_err(|_| {
                    CliError::Config(format!("workers '{value}' is not an integer"))
                })?;
                if workers == 0 {
                    return Err(CliError::Config("workers must be at least 1".into()));
                }
                self.workers = Some(workers);
            }
            "tol_residual" => {
                let tol = parse_float(key, value)?;
                if !(tol.is_finite() && tol > 0.0) {
                    return Err(CliError::Config(format!(
                        "tol_residual must be a positive number, got {value}"
                    )));
                }
                self.tol_residual = tol;
            }
            "grid" => {
                let grid = value.parse::<usize>().map_err(|_| {
                    CliError::Config(format!("grid '{value}' is not an integer"))
                })?;
                if grid < 2 {
                    return Err(CliError::Config("grid needs at least 2 points".into()));
                }
                self.grid = Some(grid);
            }
            "axis" => {
                let axis = parse_axis_spec(value)?;
                if self.axes.is_empty() {
                    self.axes.push(axis);
                } else {
                    self.axes[0] = axis;
                }
            }
            "axis2" => {
                let axis = parse_axis_spec(value)?;
                match self.axes.len() {
                    0 => {
                        return Err(CliError::Config(
                            "axis2 given before axis; set axis first".into(),
                        ))
                    }
                    1 => self.axes.push(axis),
                    _ => self.axes[1] = axis,
                }
            }
            unknown => {
                return Err(CliError::Config(format!("unknown key '{unknown}'")));
            }
        }
        Ok(())
    }

    /// Applies a list of `key=value` override arguments.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<(), CliError> {
        for item in overrides {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                CliError::Config(format!("override '{item}' must be key=value"))
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_are_the_reference_point() {
        let config = RunConfig::default();
        assert_eq!(config.params, SystemParams::default());
        assert_eq!(config.pair, ModePair::optical_mechanical());
        assert_eq!(config.tol_residual, RESIDUAL_TOLERANCE);
        assert!(config.axes.is_empty());
    }

    #[test]
    fn kv_overrides_set_fields() {
        let mut config = RunConfig::default();
        config.apply_kv("kappa", "0.05").unwrap();
        config.apply_kv("n_th", "20").unwrap();
        config.apply_kv("pair", "acoustic-mechanical").unwrap();
        config.apply_kv("workers", "3").unwrap();
        config.apply_kv("tol_residual", "1e-9").unwrap();
        config.apply_kv("grid", "11").unwrap();
        assert_eq!(config.params.kappa, 0.05);
        assert_eq!(config.params.n_th, 20.0);
        assert_eq!(config.pair, ModePair::acoustic_mechanical());
        assert_eq!(config.workers, Some(3));
        assert_eq!(config.tol_residual, 1e-9);
        assert_eq!(config.grid, Some(11));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut config = RunConfig::default();
        let err = config.apply_kv("kapa", "0.05").unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "got {err:?}");
        assert!(config.apply_kv("grid", "1").is_err());
        assert!(config.apply_kv("workers", "0").is_err());
        assert!(config.apply_kv("tol_residual", "-1").is_err());
        assert!(config.apply_kv("kappa", "abc").is_err());
    }

    #[test]
    fn axis_specs_parse_and_validate() {
        let axis = parse_axis_spec("g_coupling_a:0:0.3:61").unwrap();
        assert_eq!(axis.parameter, SweepParameter::GCouplingA);
        assert_eq!(axis.count, 61);
        assert!(parse_axis_spec("g_coupling_a:0:0.3").is_err());
        assert!(parse_axis_spec("nope:0:1:5").is_err());
        assert!(parse_axis_spec("g_coupling_a:0:0:5").is_err());
        assert!(parse_axis_spec("g_coupling_a:0:1:x").is_err());

        let mut config = RunConfig::default();
        assert!(config.apply_kv("axis2", "delta_a:0.5:1.5:5").is_err());
        config.apply_kv("axis", "g_coupling_a:0:0.3:5").unwrap();
        config.apply_kv("axis2", "delta_a:0.5:1.5:5").unwrap();
        assert_eq!(config.axes.len(), 2);
        // Re-setting replaces rather than appending.
        config.apply_kv("axis", "gamma_a:0.01:0.6:7").unwrap();
        assert_eq!(config.axes.len(), 2);
        assert_eq!(config.axes[0].parameter, SweepParameter::GammaA);
    }

    #[test]
    fn config_file_round_trip() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# reference overrides").unwrap();
        writeln!(file, "kappa = 0.03   # optical decay").unwrap();
        writeln!(file).unwrap();
        writeln!(file, "axis = g_coupling_a:0:0.3:11").unwrap();
        writeln!(file, "pair = optical-acoustic").unwrap();
        let mut config = RunConfig::default();
        config.apply_file(file.path()).unwrap();
        assert_eq!(config.params.kappa, 0.03);
        assert_eq!(config.axes.len(), 1);
        assert_eq!(config.pair, ModePair::optical_acoustic());
    }

    #[test]
    fn config_file_errors_carry_line_numbers() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "kappa = 0.03").unwrap();
        writeln!(file, "bogus = 1").unwrap();
        let mut config = RunConfig::default();
        let err = config.apply_file(file.path()).unwrap_err();
        let message = err.to_string();
        assert!(message.contains(":2:"), "missing line number: {message}");
        assert!(message.contains("bogus"), "missing key name: {message}");
    }

    #[test]
    fn override_list_requires_equals() {
        let mut config = RunConfig::default();
        assert!(config
            .apply_overrides(&["kappa=0.04".to_string()])
            .is_ok());
        assert!(config.apply_overrides(&["kappa".to_string()]).is_err());
    }
}
