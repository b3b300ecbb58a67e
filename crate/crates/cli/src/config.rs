//! The TOML experiment configuration accepted by `verify --config`.
//!
//! ```toml
//! seed = 7
//! curvatures = [-1.0]
//! directions = ["above", "below"]
//!
//! [space.sprinkle]
//! ambient = "ads"
//! count = 1000
//!
//! [checks]
//! diameter = true
//!
//! [output]
//! report = "ads.report"
//! margins = "ads-margins.csv"
//! ```
//!
//! Every key is optional and unknown keys are rejected. The effective
//! configuration, defaults included, is written into the report.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use lorcomp::comparison::{Direction, Formulation, SideMode, Tolerances};
use lorcomp::generators::{ambient_from_name, Amount, Region, SprinkleSpec, TauMode, DEFAULT_MAX_POINTS};
use lorcomp::verifier::{Budgets, Campaign, Checks, Locality, SpaceSource};

use crate::CliError;

/// Environment variable holding the default seed.
pub const SEED_VAR: &str = "LORCOMP_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub space: SpaceConfig,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_curvatures")]
    pub curvatures: Vec<f64>,
    #[serde(default = "default_directions")]
    pub directions: Vec<Direction>,
    #[serde(default = "default_formulations")]
    pub formulations: Vec<Formulation>,
    #[serde(default)]
    pub side_mode: SideMode,
    /// Triangles evaluated before the sampled ones.
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub locality: Locality,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_curvatures() -> Vec<f64> {
    vec![0.0]
}

fn default_directions() -> Vec<Direction> {
    vec![Direction::Above, Direction::Below]
}

fn default_formulations() -> Vec<Formulation> {
    Formulation::ALL.to_vec()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            space: SpaceConfig::default(),
            seed: None,
            curvatures: default_curvatures(),
            directions: default_directions(),
            formulations: default_formulations(),
            side_mode: SideMode::default(),
            triangles: Vec::new(),
            budgets: Budgets::default(),
            checks: Checks::default(),
            tolerances: Tolerances::default(),
            locality: Locality::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Exactly one of the three sources must be set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub file: Option<PathBuf>,
    pub fixture: Option<String>,
    pub sprinkle: Option<SprinkleConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SprinkleConfig {
    /// `minkowski`, `ads`, `desitter` or `cylinder`.
    pub ambient: String,
    /// Curvature of an anti-de Sitter or de Sitter ambient.
    #[serde(default)]
    pub curvature: Option<f64>,
    #[serde(default)]
    pub circumference: Option<f64>,
    /// Sprinkle into the whole anti-de Sitter strip instead of the globally
    /// hyperbolic patch.
    #[serde(default)]
    pub full_ads: bool,
    /// Causal diamond `t0,x0:t1,x1`.
    #[serde(default)]
    pub diamond: Option<String>,
    /// Rectangle `t0:t1,x0:x1`.
    #[serde(default)]
    pub rect: Option<String>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub density: Option<f64>,
    /// Defaults to the experiment seed.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tau_mode: TauMode,
    #[serde(default = "default_max_points")]
    pub max_points: usize,
}

fn default_max_points() -> usize {
    DEFAULT_MAX_POINTS
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub report: Option<PathBuf>,
    /// CSV of per-triangle worst margins.
    pub margins: Option<PathBuf>,
}

fn pair(s: &str) -> Option<(f64, f64)> {
    let (a, b) = s.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Parses a diamond `t0,x0:t1,x1`.
pub fn parse_diamond(s: &str) -> Result<Region, CliError> {
    let bad = || CliError::Config(format!("diamond '{s}' is not of the form t0,x0:t1,x1"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok(Region::diamond(pair(lo).ok_or_else(bad)?, pair(hi).ok_or_else(bad)?))
}

/// Parses a rectangle `t0:t1,x0:x1`.
pub fn parse_rect(s: &str) -> Result<Region, CliError> {
    let bad = || CliError::Config(format!("rectangle '{s}' is not of the form t0:t1,x0:x1"));
    let (t, x) = s.split_once(',').ok_or_else(bad)?;
    let range = |r: &str| -> Option<(f64, f64)> {
        let (a, b) = r.split_once(':')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    let (t0, t1) = range(t).ok_or_else(bad)?;
    let (x0, x1) = range(x).ok_or_else(bad)?;
    Ok(Region::Rect { t0, t1, x0, x1 })
}

/// The seed from a flag, else the configuration, else `LORCOMP_SEED`,
/// else zero.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag.or(config) {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_VAR}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

impl SprinkleConfig {
    pub fn new(ambient: &str) -> Self {
        Self {
            ambient: ambient.to_string(),
            curvature: None,
            circumference: None,
            full_ads: false,
            diamond: None,
            rect: None,
            count: None,
            density: None,
            seed: None,
            tau_mode: TauMode::default(),
            max_points: DEFAULT_MAX_POINTS,
        }
    }

    pub fn to_spec(&self, default_seed: u64) -> Result<SprinkleSpec, CliError> {
        let ambient = ambient_from_name(&self.ambient, self.curvature, self.circumference, self.full_ads)?;
        let region = match (&self.diamond, &self.rect) {
            (Some(_), Some(_)) => return Err(CliError::Config("give a diamond or a rectangle, not both".into())),
            (Some(d), None) => parse_diamond(d)?,
            (None, Some(r)) => parse_rect(r)?,
            (None, None) => SprinkleSpec::default_region(&ambient),
        };
        let amount = match (self.count, self.density) {
            (Some(n), None) => Amount::Count(n),
            (None, Some(d)) => Amount::Density(d),
            _ => return Err(CliError::Config("give exactly one of count and density".into())),
        };
        let mut spec = SprinkleSpec::new(ambient, region, amount, self.seed.unwrap_or(default_seed));
        spec.tau_mode = self.tau_mode;
        spec.max_points = self.max_points;
        Ok(spec)
    }
}

impl SpaceConfig {
    pub fn source(&self, default_seed: u64) -> Result<SpaceSource, CliError> {
        match (&self.file, &self.fixture, &self.sprinkle) {
            (Some(path), None, None) => Ok(SpaceSource::File { path: path.clone() }),
            (None, Some(name), None) => Ok(SpaceSource::Fixture { name: name.clone() }),
            (None, None, Some(s)) => Ok(SpaceSource::Sprinkle {
                spec: s.to_spec(default_seed)?,
            }),
            (None, None, None) => Err(CliError::Config("no space given".into())),
            _ => Err(CliError::Config(
                "give exactly one of space.file, space.fixture and space.sprinkle".into(),
            )),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// The configuration with its seed resolved.
    pub fn materialized(&self, seed_flag: Option<u64>) -> Result<Self, CliError> {
        let mut c = self.clone();
        let seed = resolve_seed(seed_flag, self.seed)?;
        c.seed = Some(seed);
        if let Some(s) = &mut c.space.sprinkle {
            s.seed = Some(s.seed.unwrap_or(seed));
        }
        Ok(c)
    }

    pub fn campaign(&self) -> Result<Campaign, CliError> {
        let seed = self.seed.unwrap_or(0);
        let mut c = Campaign::new(self.space.source(seed)?, self.curvatures.clone(), seed);
        c.directions = self.directions.clone();
        c.formulations = self.formulations.clone();
        c.side_mode = self.side_mode;
        c.triangles = self.triangles.clone();
        c.budgets = self.budgets;
        c.checks = self.checks;
        c.tolerances = self.tolerances;
        c.locality = self.locality;
        Ok(c.normalized()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lorcomp::verifier::DiamondParams;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml("seeds = 3").is_err());
        assert!(ExperimentConfig::from_toml("[budgets]\ntriangle = 3").is_err());
        assert!(ExperimentConfig::from_toml("[space.sprinkle]\nambient = \"ads\"\ncolour = 1").is_err());
    }

    #[test]
    fn defaults_are_filled_in() {
        let c = ExperimentConfig::from_toml("[space]\nfixture = \"gluing-basic\"").unwrap();
        assert_eq!(c.curvatures, vec![0.0]);
        assert_eq!(c.formulations.len(), 4);
        assert_eq!(c.budgets, Budgets::default());
        let m = c.materialized(Some(9)).unwrap();
        assert_eq!(m.seed, Some(9));
        assert_eq!(m.campaign().unwrap().seed, 9);
    }

    #[test]
    fn diamond_locality_parses() {
        let c = ExperimentConfig::from_toml("[locality]\nmode = \"diamonds\"\ncount = 3").unwrap();
        assert_eq!(
            c.locality,
            Locality::Diamonds(DiamondParams {
                count: 3,
                ..DiamondParams::default()
            })
        );
    }

    #[test]
    fn regions_parse() {
        assert_eq!(
            parse_diamond("0,0:4,0").unwrap(),
            Region::diamond((0.0, 0.0), (4.0, 0.0))
        );
        assert_eq!(
            parse_rect("0:1,-2:2").unwrap(),
            Region::Rect {
                t0: 0.0,
                t1: 1.0,
                x0: -2.0,
                x1: 2.0
            }
        );
        assert!(parse_diamond("0,0,4,0").is_err());
    }

    #[test]
    fn sprinkle_needs_one_amount() {
        let mut s = SprinkleConfig::new("minkowski");
        assert!(s.to_spec(1).is_err());
        s.count = Some(10);
        assert_eq!(s.to_spec(1).unwrap().seed, 1);
        s.density = Some(2.0);
        assert!(s.to_spec(1).is_err());
    }

    #[test]
    fn materialized_config_round_trips() {
        let c = ExperimentConfig::from_toml("[space.sprinkle]\nambient = \"minkowski\"\ncount = 5")
            .unwrap()
            .materialized(Some(4))
            .unwrap();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), c);
    }
}
