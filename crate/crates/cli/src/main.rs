use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lorcomp::comparison::{Direction, Formulation, SideMode};
use lorcomp::generators::{fixture, sprinkle, TauMode};
use lorcomp::space::{write_cset, DEFAULT_AXIOM_TOLERANCE};
use lorcomp::verifier::{run_campaign_on, DiamondParams, Locality, Runtime};
use lorcomp_cli::config::{resolve_seed, ExperimentConfig, SprinkleConfig};
use lorcomp_cli::report::{margins_csv, render_report, summary, write_file};
use lorcomp_cli::reproduce::{polylines_csv, run_scenario, Scenario, ScenarioDetails};
use lorcomp_cli::{CliError, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION};

#[derive(Parser)]
#[command(
    name = "lorcomp",
    version,
    about = "Timelike curvature comparison on finite Lorentzian pre-length spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sprinkle a space or write a fixture to a `lorcomp-cset v1` file.
    Generate(GenerateArgs),
    /// Run a verification campaign and write a `lorcomp-report v1` file.
    Verify(VerifyArgs),
    /// Reproduce a worked example: cylinder, gluing or bonnet.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AmbientArg {
    Minkowski,
    Ads,
    Desitter,
    Cylinder,
}

impl AmbientArg {
    fn name(self) -> &'static str {
        match self {
            AmbientArg::Minkowski => "minkowski",
            AmbientArg::Ads => "ads",
            AmbientArg::Desitter => "desitter",
            AmbientArg::Cylinder => "cylinder",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TauModeArg {
    Inherited,
    IntrinsicWeighted,
    IntrinsicLink,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, required_unless_present = "fixture")]
    ambient: Option<AmbientArg>,
    /// Write a named fixture instead of sprinkling.
    #[arg(long, conflicts_with = "ambient")]
    fixture: Option<String>,
    /// Curvature of an anti-de Sitter or de Sitter ambient.
    #[arg(long = "K", allow_negative_numbers = true)]
    curvature: Option<f64>,
    #[arg(long)]
    circumference: Option<f64>,
    /// Use the whole anti-de Sitter strip.
    #[arg(long)]
    full_ads: bool,
    /// Causal diamond `t0,x0:t1,x1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "rect")]
    diamond: Option<String>,
    /// Rectangle `t0:t1,x0:x1`.
    #[arg(long, allow_hyphen_values = true)]
    rect: Option<String>,
    #[arg(long, conflicts_with = "density")]
    count: Option<usize>,
    /// Expected points per unit volume.
    #[arg(long)]
    density: Option<f64>,
    /// Defaults to LORCOMP_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "inherited")]
    tau_mode: TauModeArg,
    #[arg(long)]
    max_points: Option<usize>,
    /// Write the `tau` section even when it can be recomputed.
    #[arg(long)]
    force_tau: bool,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Above,
    Below,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationArg {
    Triangle,
    Monotonicity,
    Angle,
    Hinge,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideModeArg {
    Auto,
    Ambient,
    Chains,
}

#[derive(Args)]
struct VerifyArgs {
    /// A `lorcomp-cset v1` file; overrides the configured space.
    space: Option<PathBuf>,
    /// TOML experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Curvatures to test, repeated or comma separated.
    #[arg(long = "K", allow_hyphen_values = true, value_delimiter = ',')]
    curvatures: Vec<f64>,
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    #[arg(long, value_enum, value_delimiter = ',')]
    formulation: Vec<FormulationArg>,
    /// Compare the finite diameter with `D_K` for `K < 0`.
    #[arg(long)]
    diameter: bool,
    /// Compare sampled perimeters with `2 D_K` for `K < 0`.
    #[arg(long)]
    perimeter: bool,
    /// Check non-degeneracy of sub-triangles and equal angles.
    #[arg(long)]
    nondegeneracy: bool,
    /// Check triangles inside sampled timelike diamonds.
    #[arg(long)]
    local: bool,
    #[arg(long)]
    triangles: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    /// Triangle `x,y,z` to evaluate first; may be repeated.
    #[arg(long = "triangle")]
    given: Vec<String>,
    #[arg(long, value_enum)]
    side_mode: Option<SideModeArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// CSV of per-triangle worst margins.
    #[arg(long)]
    margins: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// cylinder, gluing or bonnet.
    scenario: String,
    /// Run the cylinder triangle checks inside timelike diamonds.
    #[arg(long)]
    local: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Directory for the report and the polyline CSV files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Reproduce(a) => reproduce(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<std::fs::File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let f = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(BufWriter::new(f))
}

fn generate(a: GenerateArgs) -> Result<u8, CliError> {
    let sp = match (&a.fixture, a.ambient) {
        (Some(name), _) => fixture(name)?.space,
        (None, Some(amb)) => {
            let mut s = SprinkleConfig::new(amb.name());
            s.curvature = a.curvature;
            s.circumference = a.circumference;
            s.full_ads = a.full_ads;
            s.diamond = a.diamond.clone();
            s.rect = a.rect.clone();
            s.count = a.count;
            s.density = a.density;
            s.tau_mode = match a.tau_mode {
                TauModeArg::Inherited => TauMode::Inherited,
                TauModeArg::IntrinsicWeighted => TauMode::IntrinsicWeighted,
                TauModeArg::IntrinsicLink => TauMode::IntrinsicLink,
            };
            if let Some(m) = a.max_points {
                s.max_points = m;
            }
            sprinkle(&s.to_spec(resolve_seed(a.seed, None)?)?)?
        }
        (None, None) => return Err(CliError::Config("give --ambient or --fixture".into())),
    };
    let mut w = create(&a.output)?;
    write_cset(&sp, &mut w, a.force_tau)
        .and_then(|_| std::io::Write::flush(&mut w))
        .map_err(|source| CliError::Io {
            path: a.output.clone(),
            source,
        })?;
    let axioms = sp.validate_axioms(DEFAULT_AXIOM_TOLERANCE);
    println!(
        "wrote {}: {} points, {} links",
        a.output.display(),
        sp.len(),
        sp.link_count()
    );
    println!(
        "axioms: {} ({} violations)",
        if axioms.pass { "pass" } else { "FAIL" },
        axioms.violation_count
    );
    Ok(EXIT_PASS)
}

fn parse_triangle(s: &str) -> Result<[usize; 3], CliError> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("triangle '{s}' is not of the form x,y,z")))?;
    v.try_into()
        .map_err(|_| CliError::Config(format!("triangle '{s}' needs three indices")))
}

fn default_report_path(config: &ExperimentConfig) -> PathBuf {
    if let Some(p) = &config.space.file {
        return p.with_extension("report");
    }
    if let Some(n) = &config.space.fixture {
        return PathBuf::from(format!("{n}.report"));
    }
    PathBuf::from("lorcomp.report")
}

fn verify(a: VerifyArgs) -> Result<u8, CliError> {
    let mut config = match &a.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(p) = &a.space {
        config.space = Default::default();
        config.space.file = Some(p.clone());
    }
    if !a.curvatures.is_empty() {
        config.curvatures = a.curvatures.clone();
    }
    match a.direction {
        Some(DirectionArg::Above) => config.directions = vec![Direction::Above],
        Some(DirectionArg::Below) => config.directions = vec![Direction::Below],
        Some(DirectionArg::Both) => config.directions = vec![Direction::Above, Direction::Below],
        None => {}
    }
    if !a.formulation.is_empty() {
        config.formulations = a
            .formulation
            .iter()
            .flat_map(|f| match f {
                FormulationArg::Triangle => vec![Formulation::Triangle],
                FormulationArg::Monotonicity => vec![Formulation::Monotonicity],
                FormulationArg::Angle => vec![Formulation::Angle],
                FormulationArg::Hinge => vec![Formulation::Hinge],
                FormulationArg::All => Formulation::ALL.to_vec(),
            })
            .collect();
    }
    config.checks.diameter |= a.diameter;
    config.checks.perimeter |= a.perimeter;
    config.checks.nondegeneracy |= a.nondegeneracy;
    if a.local && config.locality == Locality::Global {
        config.locality = Locality::Diamonds(DiamondParams::default());
    }
    if let Some(n) = a.triangles {
        config.budgets.triangles = n;
    }
    if let Some(n) = a.pairs {
        config.budgets.pairs_per_triangle = n;
    }
    for t in &a.given {
        config.triangles.push(parse_triangle(t)?);
    }
    if let Some(m) = a.side_mode {
        config.side_mode = match m {
            SideModeArg::Auto => SideMode::Auto,
            SideModeArg::Ambient => SideMode::Ambient,
            SideModeArg::Chains => SideMode::Chains,
        };
    }
    if a.report.is_some() {
        config.output.report = a.report.clone();
    }
    if a.margins.is_some() {
        config.output.margins = a.margins.clone();
    }
    let mut config = config.materialized(a.seed)?;
    if config.output.report.is_none() {
        config.output.report = Some(default_report_path(&config));
    }
    let campaign = config.campaign()?;
    let sp = campaign.source.load()?;
    let jobs = a.jobs.map(|j| j as usize);
    let report = run_campaign_on(&campaign, &sp, jobs)?;

    for line in summary(&report) {
        println!("{line}");
    }
    let text = render_report(
        "verify",
        &config,
        Some(&report),
        None::<&ScenarioDetails>,
        &report.runtime,
    )?;
    let path = config.output.report.as_ref().expect("report path was filled in");
    write_file(path, &text)?;
    println!("report: {}", path.display());
    if let Some(m) = &config.output.margins {
        write_file(m, &margins_csv(&report.margins))?;
        println!("margins: {}", m.display());
    }
    Ok(if report.status.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

fn reproduce(a: ReproduceArgs) -> Result<u8, CliError> {
    let scenario: Scenario = a.scenario.parse()?;
    let seed = resolve_seed(a.seed, None)?;
    let jobs = a.jobs.map(|j| j as usize);
    let start = Instant::now();
    let run = run_scenario(scenario, a.local, seed, jobs)?;
    for line in &run.lines {
        println!("{line}");
    }
    let runtime = match &run.report {
        Some(r) => r.runtime.clone(),
        None => Runtime {
            jobs,
            seconds: start.elapsed().as_secs_f64(),
            steps: Vec::new(),
        },
    };
    let name = scenario.as_str();
    let stem = if a.local {
        format!("{name}-local")
    } else {
        name.to_string()
    };
    let report_path = a.out_dir.join(format!("{stem}.report"));
    let text = render_report(
        &format!("reproduce {name}"),
        &run.config,
        run.report.as_ref(),
        Some(&run.details),
        &runtime,
    )?;
    write_file(&report_path, &text)?;
    let conf = a.out_dir.join(format!("{stem}-configuration.csv"));
    let comp = a.out_dir.join(format!("{stem}-comparison.csv"));
    write_file(&conf, &polylines_csv(&run.configuration))?;
    write_file(&comp, &polylines_csv(&run.comparison))?;
    println!("report: {}", report_path.display());
    println!("polylines: {} {}", conf.display(), comp.display());
    Ok(if run.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use lorcomp::verifier::SpaceSource;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_curvatures_parse() {
        let cli = Cli::try_parse_from(["lorcomp", "verify", "s.cset", "--K", "-1,-0.5", "--K", "0"]).unwrap();
        let Command::Verify(v) = cli.command else { panic!() };
        assert_eq!(v.curvatures, vec![-1.0, -0.5, 0.0]);
    }

    #[test]
    fn triangles_parse() {
        assert_eq!(parse_triangle("1, 2,3").unwrap(), [1, 2, 3]);
        assert!(parse_triangle("1,2").is_err());
    }

    #[test]
    fn fixture_source_names_the_report() {
        let mut c = ExperimentConfig::default();
        c.space.fixture = Some("gluing-basic".into());
        assert_eq!(default_report_path(&c), PathBuf::from("gluing-basic.report"));
        assert!(matches!(c.space.source(0).unwrap(), SpaceSource::Fixture { .. }));
    }
}
