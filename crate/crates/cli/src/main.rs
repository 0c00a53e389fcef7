//! `mvthresh` — symbolic reliability analysis of multi-state
//! truly-threshold systems from the command line.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mvthresh_core::{
    analyze_level, build_table, render_level_map, render_structure_map, render_sum_map,
    run_full_verification, ComponentDistribution, Error, LevelOverlays, MapFormat, MapLayout,
    Perspective, PreMethod, StateCap, SystemSpec,
};

use input::{SystemDefinitionFile, ToSpecError};

/// Symbolic analysis of multi-state truly-threshold reliability systems.
#[derive(Parser)]
#[command(name = "mvthresh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a system definition file is well-formed and coherent.
    Validate {
        /// JSON system definition.
        file: PathBuf,
    },
    /// Report boundary vectors, expressions and probabilities per level.
    Analyze(AnalyzeArgs),
    /// Render a multi-valued Karnaugh map.
    Map(MapArgs),
    /// Run the full cross-check suite against the brute-force oracle.
    Verify {
        /// JSON system definition.
        file: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// JSON system definition.
    file: PathBuf,
    /// Analyze a single level instead of all of them.
    #[arg(long)]
    level: Option<u32>,
    /// Read levels through success or failure expressions.
    #[arg(long, default_value = "success")]
    perspective: PerspectiveArg,
    /// Disjointing procedure for the probability-ready expressions.
    #[arg(long, default_value = "shelling")]
    method: MethodArg,
    /// Component probabilities: "uniform", or omit to use the file's probs.
    #[arg(long)]
    dist: Option<String>,
    /// Join expression terms with " + " instead of the OR glyph.
    #[arg(long)]
    ascii: bool,
    /// Write the exhaustively evaluated state table to a CSV file.
    #[arg(long, value_name = "PATH")]
    dump_table: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    /// JSON system definition.
    file: PathBuf,
    /// Render the binary map of one level instead of the structure map.
    #[arg(long)]
    level: Option<u32>,
    /// Force the level map perspective (default: success, or failure when
    /// --overlay mlv is given).
    #[arg(long)]
    perspective: Option<PerspectiveArg>,
    /// Render the weighted-sum map instead of the structure map.
    #[arg(long, conflicts_with_all = ["level", "overlay"])]
    sum: bool,
    /// Mark cells: MUVs, MLVs, or the disjoint-cover regions.
    #[arg(long, requires = "level")]
    overlay: Option<OverlayArg>,
    /// Disjointing procedure behind --overlay cover.
    #[arg(long, default_value = "shelling")]
    method: MethodArg,
    /// Output format.
    #[arg(long, default_value = "text")]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PerspectiveArg {
    Success,
    Failure,
}

impl From<PerspectiveArg> for Perspective {
    fn from(p: PerspectiveArg) -> Perspective {
        match p {
            PerspectiveArg::Success => Perspective::Success,
            PerspectiveArg::Failure => Perspective::Failure,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Shelling,
    Reflection,
    Expansion,
}

impl From<MethodArg> for PreMethod {
    fn from(m: MethodArg) -> PreMethod {
        match m {
            MethodArg::Shelling => PreMethod::Shelling,
            MethodArg::Reflection => PreMethod::Reflection,
            MethodArg::Expansion => PreMethod::Expansion,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OverlayArg {
    Muv,
    Mlv,
    Cover,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
}

/// Command failures sorted by exit code: usage problems exit 2, analysis
/// and verification failures exit 1.
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::LevelOutOfRange { .. } | Error::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn state_cap() -> Result<StateCap, CliError> {
    match std::env::var("MVTHRESH_STATE_CAP") {
        Ok(value) => value
            .parse::<u64>()
            .map(StateCap)
            .map_err(|_| CliError::Usage(format!("MVTHRESH_STATE_CAP={value} is not a number"))),
        Err(_) => Ok(StateCap::default()),
    }
}

fn load_spec(path: &Path) -> Result<(SystemDefinitionFile, SystemSpec), CliError> {
    let file = SystemDefinitionFile::load(path).map_err(CliError::Usage)?;
    let spec = file.to_spec().map_err(|e| match e {
        ToSpecError::Parse(msg) => CliError::Usage(msg),
        ToSpecError::Invalid(invalid) => CliError::Failure(invalid.to_string()),
    })?;
    Ok((file, spec))
}

fn resolve_distribution(
    file: &SystemDefinitionFile,
    spec: &SystemSpec,
    dist: Option<&str>,
) -> Result<Option<ComponentDistribution>, CliError> {
    match dist {
        Some("uniform") => Ok(Some(ComponentDistribution::uniform(spec))),
        Some(other) => Err(CliError::Usage(format!(
            "unknown distribution {other:?}; only \"uniform\" is built in"
        ))),
        None => file.distribution(spec).map_err(CliError::Usage),
    }
}

fn print_labels(file: &SystemDefinitionFile) {
    for (k, c) in file.components.iter().enumerate() {
        if let Some(labels) = &c.state_labels {
            let listed: Vec<String> = labels
                .iter()
                .enumerate()
                .map(|(v, l)| format!("{v}={l}"))
                .collect();
            println!("component {} states: {}", k + 1, listed.join(", "));
        }
    }
    if let Some(labels) = &file.system_state_labels {
        let listed: Vec<String> = labels
            .iter()
            .enumerate()
            .map(|(v, l)| format!("{v}={l}"))
            .collect();
        println!("system states: {}", listed.join(", "));
    }
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let (_, spec) = load_spec(path)?;
    println!(
        "ok: {} components, levels 0..={}, {} states",
        spec.component_count(),
        spec.top_level(),
        spec.state_space_size()
    );
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let cap = state_cap()?;
    let (file, spec) = load_spec(&args.file)?;
    let dist = resolve_distribution(&file, &spec, args.dist.as_deref())?;
    let perspective: Perspective = args.perspective.into();
    let method: PreMethod = args.method.into();

    println!(
        "system: {} components, levels 0..={}, {} states",
        spec.component_count(),
        spec.top_level(),
        spec.state_space_size()
    );
    print_labels(&file);
    println!();

    let levels: Vec<u32> = match args.level {
        Some(j) => vec![j],
        None => (1..=spec.top_level()).rev().collect(),
    };
    for level in levels {
        let report = analyze_level(&spec, level, perspective, method, dist.as_ref(), cap)?;
        print!("{}", report::format_level_report(&spec, &report, args.ascii));
        println!();
    }

    if let Some(d) = &dist {
        let probabilities = match perspective {
            Perspective::Success => {
                mvthresh_core::level_probabilities_success(&spec, d, method, cap)?
            }
            Perspective::Failure => {
                mvthresh_core::level_probabilities_failure(&spec, d, method, cap)?
            }
        };
        print!("{}", report::format_probability_report(&probabilities));
    }

    if let Some(path) = &args.dump_table {
        let table = build_table(&spec, cap)?;
        std::fs::write(path, table.to_csv(&spec))
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
        println!("state table written to {}", path.display());
    }
    Ok(())
}

fn cmd_map(args: &MapArgs) -> Result<(), CliError> {
    let cap = state_cap()?;
    let (_, spec) = load_spec(&args.file)?;
    let layout = MapLayout::default_for(&spec);
    let format = match args.format {
        FormatArg::Text => MapFormat::Text,
        FormatArg::Csv => MapFormat::Csv,
    };

    let rendered = if args.sum {
        render_sum_map(&spec, &layout, format, cap)?
    } else if let Some(level) = args.level {
        let explicit: Option<Perspective> = args.perspective.map(Into::into);
        match (args.overlay, explicit) {
            (Some(OverlayArg::Muv), Some(Perspective::Failure)) => {
                return Err(CliError::Usage(
                    "--overlay muv marks success maps; drop --perspective failure".into(),
                ))
            }
            (Some(OverlayArg::Mlv), Some(Perspective::Success)) => {
                return Err(CliError::Usage(
                    "--overlay mlv marks failure maps; drop --perspective success".into(),
                ))
            }
            _ => {}
        }
        // With an explicit perspective, `level` is the level whose
        // success/failure is mapped. Bare `--overlay mlv` instead reads
        // `level` as the MLV level, showing S{<=level}.
        let (map_level, perspective) = match (explicit, args.overlay) {
            (Some(p), _) => (level, p),
            (None, Some(OverlayArg::Mlv)) => (level + 1, Perspective::Failure),
            (None, _) => (level, Perspective::Success),
        };
        let overlays = LevelOverlays {
            boundary: matches!(args.overlay, Some(OverlayArg::Muv) | Some(OverlayArg::Mlv)),
            cover: match args.overlay {
                Some(OverlayArg::Cover) => Some(args.method.into()),
                _ => None,
            },
        };
        render_level_map(&spec, &layout, map_level, perspective, overlays, format, cap)?
    } else {
        render_structure_map(&spec, &layout, format, cap)?
    };
    print!("{rendered}");
    Ok(())
}

fn cmd_verify(path: &Path) -> Result<(), CliError> {
    let cap = state_cap()?;
    let (file, spec) = load_spec(path)?;
    let dist = file.distribution(&spec).map_err(CliError::Usage)?;
    let report = run_full_verification(&spec, dist.as_ref(), cap)?;
    print!("{}", report::format_verification_report(&report));
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failure("verification failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Map(args) => cmd_map(args),
        Command::Verify { file } => cmd_verify(file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
