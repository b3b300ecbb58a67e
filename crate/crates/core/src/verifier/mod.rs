//! Whole-space verification campaigns.
//!
//! A [`Campaign`] names a space, a grid of curvatures, the directions and
//! formulations to test and the sampling budgets. [`run_campaign`] evaluates
//! every requested check on one seeded triangle sample and assembles a
//! [`VerificationReport`]. Sampling gives evidence only: a passing report
//! means no violation was found.

mod checks;
mod gluing;
mod local;
mod report;
mod run;

use std::path::PathBuf;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comparison::{ComparisonError, Direction, Formulation, SideMode, Tolerances, DEFAULT_SIDE_GRID};
use crate::generators::{fixture, sprinkle, GeneratorError, SprinkleSpec};
use crate::space::{read_cset, DiscreteSpace, SpaceError};

pub use checks::{
    check_diameter_bound, check_nondegeneracy_lemma, check_perimeter, nondegenerate_pairs, DiameterResult,
    LemmaWitness, NondegeneracyReport, NondegeneratePairs, PerimeterResult,
};
pub use gluing::{check_gluing, gluing_trial, random_flat_triangle, CaseTally, GluingReport, GluingTally, GluingTrial};
pub use local::{check_local_vs_global, sample_diamonds, Diamond, DiamondVerdict, LocalGlobalReport, UniquenessProxy};
pub use report::{
    CampaignStatus, HierarchyResult, Outcome, Runtime, SampleSummary, SpaceSummary, TriangleMargin, VerdictEntry,
    VerificationReport,
};

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error("invalid campaign: {0}")]
    InvalidCampaign(String),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Where the space of a campaign comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SpaceSource {
    Sprinkle {
        spec: SprinkleSpec,
    },
    Fixture {
        name: String,
    },
    File {
        path: PathBuf,
    },
    /// A space built by the caller and passed to [`run_campaign_on`].
    Provided {
        description: String,
    },
}

impl SpaceSource {
    pub fn load(&self) -> Result<DiscreteSpace, VerifierError> {
        match self {
            SpaceSource::Sprinkle { spec } => Ok(sprinkle(spec)?),
            SpaceSource::Fixture { name } => Ok(fixture(name)?.space),
            SpaceSource::File { path } => {
                let f = std::fs::File::open(path).map_err(|source| VerifierError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(read_cset(std::io::BufReader::new(f))?)
            }
            SpaceSource::Provided { description } => Err(VerifierError::InvalidCampaign(format!(
                "space '{description}' must be passed in directly"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Triangles sampled for the comparison checks.
    pub triangles: usize,
    /// Side-point pairs per triangle.
    pub pairs_per_triangle: usize,
    /// Sites per side for ambient geodesic sides.
    pub side_grid: usize,
    /// Triples sampled for the perimeter check.
    pub perimeter_triples: usize,
    /// Pairs sampled for the non-degeneracy fraction.
    pub nondegeneracy_pairs: usize,
    /// Configurations sampled for the sub-triangle non-degeneracy check.
    pub lemma_configurations: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            triangles: 500,
            pairs_per_triangle: 256,
            side_grid: DEFAULT_SIDE_GRID,
            perimeter_triples: 2000,
            nondegeneracy_pairs: 256,
            lemma_configurations: 64,
        }
    }
}

/// Optional checks besides the curvature-bound verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Checks {
    pub axioms: bool,
    /// Finite diameter against `D_K` for each `K < 0` of the grid.
    pub diameter: bool,
    /// Largest sampled perimeter against `2·D_K` for each `K < 0`.
    pub perimeter: bool,
    /// Sub-triangle non-degeneracy and equal angles along geodesics.
    pub nondegeneracy: bool,
    /// Per-triangle implications between curvatures of the grid.
    pub hierarchy: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            axioms: true,
            diameter: false,
            perimeter: false,
            nondegeneracy: false,
            hierarchy: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiamondParams {
    /// Number of diamonds sampled.
    pub count: usize,
    /// Largest `τ(p, q)` between the tips of a diamond.
    pub max_tau: f64,
    pub min_interior: usize,
    pub triangles_per_diamond: usize,
}

impl Default for DiamondParams {
    fn default() -> Self {
        Self {
            count: 16,
            max_tau: 1.5,
            min_interior: 8,
            triangles_per_diamond: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Locality {
    #[default]
    Global,
    /// Triangle checks inside sampled timelike diamonds, paired with the
    /// global verdict.
    Diamonds(DiamondParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub source: SpaceSource,
    pub curvatures: Vec<f64>,
    pub directions: Vec<Direction>,
    pub formulations: Vec<Formulation>,
    pub budgets: Budgets,
    pub seed: u64,
    pub locality: Locality,
    pub tolerances: Tolerances,
    pub side_mode: SideMode,
    pub checks: Checks,
    /// Triangles `(x, y, z)` evaluated before the sampled ones.
    pub triangles: Vec<[usize; 3]>,
}

impl Campaign {
    pub fn new(source: SpaceSource, curvatures: Vec<f64>, seed: u64) -> Self {
        Self {
            source,
            curvatures,
            directions: vec![Direction::Above, Direction::Below],
            formulations: Formulation::ALL.to_vec(),
            budgets: Budgets::default(),
            seed,
            locality: Locality::Global,
            tolerances: Tolerances::default(),
            side_mode: SideMode::Auto,
            checks: Checks::default(),
            triangles: Vec::new(),
        }
    }

    /// Checks the invariants and returns the campaign with directions and
    /// formulations sorted and de-duplicated.
    pub fn normalized(&self) -> Result<Campaign, VerifierError> {
        let bad = |m: String| Err(VerifierError::InvalidCampaign(m));
        if self.curvatures.is_empty() {
            return bad("the curvature grid is empty".into());
        }
        if let Some(k) = self.curvatures.iter().find(|k| !k.is_finite()) {
            return bad(format!("curvature {k} is not finite"));
        }
        if self.directions.is_empty() {
            return bad("no direction selected".into());
        }
        if self.formulations.is_empty() {
            return bad("no formulation selected".into());
        }
        let b = &self.budgets;
        for (name, v) in [
            ("triangles", b.triangles),
            ("pairs-per-triangle", b.pairs_per_triangle),
            ("side-grid", b.side_grid),
            ("perimeter-triples", b.perimeter_triples),
            ("nondegeneracy-pairs", b.nondegeneracy_pairs),
            ("lemma-configurations", b.lemma_configurations),
        ] {
            if v == 0 {
                return bad(format!("budget {name} must be positive"));
            }
        }
        if let Locality::Diamonds(d) = &self.locality {
            if d.count == 0 || d.triangles_per_diamond == 0 || d.min_interior == 0 {
                return bad("diamond budgets must be positive".into());
            }
            if !(d.max_tau > 0.0) {
                return bad(format!("diamond size {} must be positive", d.max_tau));
            }
        }
        let t = &self.tolerances;
        if ![t.tau, t.angle, t.axiom].iter().all(|v| *v >= 0.0 && v.is_finite()) {
            return bad("tolerances must be finite and non-negative".into());
        }
        let mut c = self.clone();
        let mut ks = Vec::new();
        for &k in &self.curvatures {
            if !ks.contains(&k) {
                ks.push(k);
            }
        }
        c.curvatures = ks;
        c.directions.sort();
        c.directions.dedup();
        c.formulations.sort();
        c.formulations.dedup();
        Ok(c)
    }
}

/// Loads the campaign's space and runs it.
pub fn run_campaign(c: &Campaign) -> Result<VerificationReport, VerifierError> {
    let sp = c.source.load()?;
    run_campaign_on(c, &sp, None)
}

/// Runs a campaign on a given space with at most `jobs` worker threads
/// (`None` for the default pool). The report does not depend on `jobs`.
pub fn run_campaign_on(
    c: &Campaign,
    sp: &DiscreteSpace,
    jobs: Option<usize>,
) -> Result<VerificationReport, VerifierError> {
    let c = c.normalized()?;
    let n = sp.len();
    if let Some(t) = c.triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
        return Err(VerifierError::InvalidCampaign(format!(
            "triangle {t:?} is out of range for a space of {n} points"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| VerifierError::InvalidCampaign(e.to_string()))?;
    pool.install(|| run::execute(&c, sp, jobs))
}

/// Independent seed for one purpose of a campaign.
pub(crate) fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Streams of [`derive_seed`].
pub(crate) mod streams {
    pub const TRIANGLES: u64 = 1;
    pub const PAIRS: u64 = 2;
    pub const PERIMETER: u64 = 3;
    pub const NONDEGENERATE: u64 = 4;
    pub const LEMMA: u64 = 5;
    pub const DIAMONDS: u64 = 6;
}
