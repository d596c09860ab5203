//! Experiment configuration: JSON file plus command-line overrides,
//! validated against module preconditions before dispatch.

use num_complex::Complex64;
use serde::Deserialize;

use std::fmt;
use std::path::Path;

/// Grid parameters as they appear in a config file.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_radial: usize,
    pub n_angular: usize,
    pub r_max: f64,
    #[serde(default)]
    pub boundary_panels: usize,
}

/// Raw config file contents. Unknown fields are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    /// Normalized quadratic-differential coefficients `a_2..`, one
    /// `[re, im]` pair per index.
    #[serde(default)]
    pub q_coeffs: Vec<[f64; 2]>,
    /// Circle-field coefficients `c_1..`, one `[re, im]` pair per index.
    #[serde(default)]
    pub fourier_coeffs: Vec<[f64; 2]>,
    pub order: Option<usize>,
    pub grid: Option<GridConfig>,
    pub fd_step: Option<f64>,
    pub j_max: Option<usize>,
    pub output_path: Option<String>,
}

/// Command-line overrides; every field mirrors a config key.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub fd_step: Option<f64>,
    pub j_max: Option<usize>,
    pub n_radial: Option<usize>,
    pub n_angular: Option<usize>,
    pub r_max: Option<f64>,
    pub boundary_panels: Option<usize>,
    pub q_coeffs: Option<Vec<[f64; 2]>>,
    pub fourier_coeffs: Option<Vec<[f64; 2]>>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Fully resolved and validated experiment parameters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub experiment: String,
    pub q_coeffs: Vec<Complex64>,
    pub fourier_coeffs: Vec<Complex64>,
    pub order: usize,
    pub n_radial: usize,
    pub n_angular: usize,
    pub r_max: f64,
    pub boundary_panels: usize,
    pub fd_step: f64,
    pub j_max: Option<usize>,
    pub output_path: Option<String>,
}

pub const EXPERIMENTS: &[&str] = &[
    "schwarzian-solve",
    "spherical-area",
    "second-variation",
    "vk-norm",
    "wp-compare",
    "average-check",
    "telescope-check",
    "cfrak-table",
    "appendix-suite",
    "regularized-limit",
];

pub fn load_file(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError(format!("invalid config: {e}")))
}

/// Parses a `re,im;re,im;...` pair list from the command line.
pub fn parse_pair_list(text: &str) -> Result<Vec<[f64; 2]>, ConfigError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(ConfigError(format!(
                    "expected 're,im' pairs separated by ';', got {pair:?}"
                )));
            }
            let re = parts[0]
                .parse::<f64>()
                .map_err(|e| ConfigError(format!("bad real part {:?}: {e}", parts[0])))?;
            let im = parts[1]
                .parse::<f64>()
                .map_err(|e| ConfigError(format!("bad imaginary part {:?}: {e}", parts[1])))?;
            Ok([re, im])
        })
        .collect()
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

/// Merges file config and overrides, fills defaults, and validates every
/// numeric field against the module preconditions.
pub fn resolve(
    experiment: &str,
    file: ExperimentConfig,
    over: Overrides,
) -> Result<Resolved, ConfigError> {
    if !EXPERIMENTS.contains(&experiment) {
        return Err(ConfigError(format!(
            "unknown experiment {experiment:?}; valid names: {}",
            EXPERIMENTS.join(", ")
        )));
    }
    if let Some(named) = &file.experiment {
        if named != experiment {
            return Err(ConfigError(format!(
                "config file names experiment {named:?} but {experiment:?} was requested"
            )));
        }
    }

    let q_pairs = over.q_coeffs.unwrap_or(file.q_coeffs);
    let fourier_pairs = over.fourier_coeffs.unwrap_or(file.fourier_coeffs);
    let order = over.order.or(file.order).unwrap_or(64);
    let fd_step = over.fd_step.or(file.fd_step).unwrap_or(1e-2);
    let j_max = over.j_max.or(file.j_max);

    // Experiment-specific grid defaults: boundary averages need strictly
    // interior, boundary-refined grids.
    let default_grid = match experiment {
        "average-check" => (24usize, 48usize, 0.99f64, 4usize),
        "telescope-check" => (16, 24, 0.99, 8),
        "regularized-limit" => (24, 32, 0.99, 14),
        _ => (64, 256, 1.0, 0),
    };
    let base = file.grid;
    let n_radial = over
        .n_radial
        .or(base.map(|g| g.n_radial))
        .unwrap_or(default_grid.0);
    let n_angular = over
        .n_angular
        .or(base.map(|g| g.n_angular))
        .unwrap_or(default_grid.1);
    let r_max = over.r_max.or(base.map(|g| g.r_max)).unwrap_or(default_grid.2);
    let boundary_panels = over
        .boundary_panels
        .or(base.map(|g| g.boundary_panels))
        .unwrap_or(default_grid.3);

    let resolved = Resolved {
        experiment: experiment.to_string(),
        q_coeffs: to_complex(&q_pairs),
        fourier_coeffs: to_complex(&fourier_pairs),
        order,
        n_radial,
        n_angular,
        r_max,
        boundary_panels,
        fd_step,
        j_max,
        output_path: file.output_path,
    };
    validate(&resolved)?;
    Ok(resolved)
}

fn validate(r: &Resolved) -> Result<(), ConfigError> {
    let fail = |msg: String| Err(ConfigError(msg));
    if !(4..=512).contains(&r.order) {
        return fail(format!("order must lie in [4, 512], got {}", r.order));
    }
    if r.n_radial < 2 || r.n_radial > 256 {
        return fail(format!("n_radial must lie in [2, 256], got {}", r.n_radial));
    }
    if r.n_angular < 4 || r.n_angular > 4096 {
        return fail(format!("n_angular must lie in [4, 4096], got {}", r.n_angular));
    }
    if !(r.r_max > 0.0 && r.r_max <= 1.0) {
        return fail(format!("r_max must lie in (0, 1], got {}", r.r_max));
    }
    if r.boundary_panels > 40 {
        return fail(format!(
            "boundary_panels must be at most 40, got {}",
            r.boundary_panels
        ));
    }
    if !(r.fd_step > 0.0 && r.fd_step <= 0.5) {
        return fail(format!("fd_step must lie in (0, 0.5], got {}", r.fd_step));
    }
    if let Some(j) = r.j_max {
        if !(2..=4096).contains(&j) {
            return fail(format!("j_max must lie in [2, 4096], got {j}"));
        }
    }
    if r.q_coeffs.len() > 63 || r.fourier_coeffs.len() > 63 {
        return fail("coefficient lists are limited to 63 entries".to_string());
    }
    let all_finite = r
        .q_coeffs
        .iter()
        .chain(r.fourier_coeffs.iter())
        .all(|c| c.re.is_finite() && c.im.is_finite());
    if !all_finite {
        return fail("coefficients must be finite".to_string());
    }
    // Boundary averages integrate against the hyperbolic measure; the
    // grid must stay strictly inside the disk.
    let needs_interior = matches!(
        r.experiment.as_str(),
        "average-check" | "telescope-check" | "regularized-limit"
    );
    if needs_interior && r.r_max >= 1.0 {
        return fail(format!(
            "{} integrates against the hyperbolic measure and needs r_max < 1",
            r.experiment
        ));
    }
    if r.experiment == "second-variation"
        && r.q_coeffs.is_empty()
        && r.fourier_coeffs.is_empty()
    {
        return fail("second-variation needs q_coeffs or fourier_coeffs".to_string());
    }
    // Tangent-carrying experiments must not silently truncate the vector
    // field: a_n sits at degree n + 1, c_n at degree n + 1.
    if matches!(r.experiment.as_str(), "spherical-area" | "second-variation") {
        let needed = (r.q_coeffs.len() + 2).max(r.fourier_coeffs.len() + 1);
        if r.order < needed {
            return fail(format!(
                "order {} is too small to carry the supplied tangent (need at least {needed})",
                r.order
            ));
        }
    }
    if r.experiment == "vk-norm" && r.fourier_coeffs.is_empty() {
        return fail("vk-norm needs fourier_coeffs".to_string());
    }
    if matches!(r.experiment.as_str(), "wp-compare" | "schwarzian-solve")
        && r.q_coeffs.is_empty()
    {
        return fail(format!("{} needs q_coeffs", r.experiment));
    }
    Ok(())
}
