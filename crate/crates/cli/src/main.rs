//! `sharpcut`: batch analysis of nonlocal games, LO/CE hierarchies, sharp
//! instruments and dilations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sharpcut_core::exclusivity::{check_ce, check_lo, check_weighted, kcbs_projectors, quantum_exclusivity_graph};
use sharpcut_core::games::{analyze, builtin_box, builtin_game, winning_graph, BuiltinGame, CorrelationBox, Game};
use sharpcut_core::graph::{SearchLimits, MAX_VERTICES_ENV};
use sharpcut_core::instruments::{
    dilation_deviation, is_repeatable, joint_from_orthogonal, max_projector_residual, naimark_dilate,
    satisfies_refinement_identity, shared_ancilla_dilation, sharpness, Check, SharpnessReport,
};
use sharpcut_core::io::{self, InstrumentDocument};
use sharpcut_core::labels::index_label;
use sharpcut_core::linalg;
use sharpcut_core::model::{Effect, State};
use sharpcut_core::{set_tolerance, tolerance, Error, DEFAULT_TOLERANCE};

const EXIT_VIOLATED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sharpcut",
    version,
    about = "Sharp measurements, LO/CE hierarchies and classical bounds of nonlocal games",
    after_help = "Exit status: 0 all checked bounds hold, 1 a bound is violated, \
                  2 input or validation error, 3 resource limit exceeded.\n\
                  Inputs may be file paths or built-ins: builtin:chsh, builtin:gyni:N, \
                  builtin:guess-the-product:N, builtin:guess-the-parity:N for games; \
                  builtin:pr, builtin:tsirelson, builtin:uniform, builtin:local for boxes; \
                  builtin:kcbs for check-ce."
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Numerical tolerance for every residual check [default: 1e-9]
    #[arg(long, global = true, value_name = "TAU")]
    tolerance: Option<f64>,
    /// Report format: aligned table (6 decimals) or JSON at full precision
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Where to write artifacts: the winning-graph edge list, the joint
    /// measurement, or the dilated POVM(s) plus `<stem>-ancilla.<ext>`; several
    /// dilated POVMs go to `<stem>-<k>.<ext>`
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Vertex cap for exact clique searches, lifted graphs included
    #[arg(long, global = true, env = MAX_VERTICES_ENV, value_name = "N",
          value_parser = clap::value_parser!(u32).range(1..))]
    max_vertices: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Args)]
struct Level {
    /// Hierarchy level L (number of independent copies)
    #[arg(long = "lo-level", visible_alias = "level", value_name = "L", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    level: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Classical value, LO LP bound, winning-graph invariants and box checks
    AnalyzeGame {
        game: String,
        /// Box to evaluate (repeatable)
        #[arg(long = "box", value_name = "BOX")]
        boxes: Vec<String>,
        #[command(flatten)]
        level: Level,
    },
    /// Local-orthogonality check of a box at levels 1..=L
    CheckLo {
        #[arg(value_name = "BOX")]
        bx: String,
        #[command(flatten)]
        level: Level,
    },
    /// Consistent-exclusivity check of projectors on a state at levels 1..=L
    CheckCe {
        effects: String,
        /// State file; defaults to |0⟩
        #[arg(long)]
        state: Option<String>,
        /// Use these probabilities instead of the state's
        #[arg(long, value_delimiter = ',', value_name = "P,...")]
        weights: Option<Vec<f64>>,
        #[command(flatten)]
        level: Level,
    },
    /// Repeatability, refinement identities and the Lüders-form test
    CheckSharp { instrument: String },
    /// Joint measurement from mutually orthogonal projectors
    JointMeasure { effects: String },
    /// Naimark dilation of one POVM, or a shared-ancilla dilation of several
    Dilate {
        #[arg(required = true, num_args = 1..)]
        povms: Vec<String>,
    },
}

/// Why a command could not produce a verdict.
enum Failure {
    Input(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn in_file(path: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{path}: {m}")),
        limit => limit,
    }
}

fn write_artifact(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_game(spec: &str) -> Result<Game, Failure> {
    match spec.strip_prefix("builtin:") {
        Some(rest) => {
            let (name, n) = match rest.split_once(':') {
                Some((name, n)) => {
                    let n = n
                        .parse()
                        .map_err(|_| Failure::Input(format!("bad party count in {spec:?}")))?;
                    (name, Some(n))
                }
                None => (rest, None),
            };
            let kind: BuiltinGame = name.parse()?;
            let default = if kind == BuiltinGame::Chsh || kind == BuiltinGame::GuessTheParity { 2 } else { 3 };
            Ok(builtin_game(kind, n.unwrap_or(default))?)
        }
        None => io::parse_game(&read(spec)?).map_err(in_file(spec)),
    }
}

fn load_box(spec: &str) -> Result<(String, CorrelationBox), Failure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok((name.to_string(), builtin_box(name)?)),
        None => {
            let name = Path::new(spec)
                .file_name()
                .and_then(|s| s.to_str())
                .map_or(spec, |s| s.split('.').next().unwrap_or(s))
                .to_string();
            Ok((name, io::parse_box(&read(spec)?).map_err(in_file(spec))?))
        }
    }
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) {
    match format {
        Format::Structured => print!("{}", io::to_structured(value)),
        Format::Table => print!("{}", table()),
    }
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().fold(String::new(), |mut out, (k, v)| {
        let _ = writeln!(out, "{k:<width$}  {v}");
        out
    })
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn analyze_game(g: &Global, limits: &SearchLimits, spec: &str, boxes: &[String], level: usize) -> Outcome {
    let game = load_game(spec)?;
    let boxes = boxes.iter().map(|b| load_box(b)).collect::<Result<Vec<_>, _>>()?;
    let report = analyze(&game, &boxes, level, limits)?;
    if let Some(path) = &g.out {
        write_artifact(path, &winning_graph(&game).graph.to_edge_list())?;
    }
    emit(g.format, &report, || report.to_table());
    Ok(report.all_bounds_hold())
}

#[derive(Serialize)]
struct LevelsReport<T> {
    levels: Vec<T>,
    pass: bool,
}

fn level_rows(checks: &[sharpcut_core::exclusivity::ExclusivityCheck]) -> Vec<(String, String)> {
    checks
        .iter()
        .map(|c| {
            (
                format!("level {}", c.level),
                format!(
                    "{} (max sum {:.6}, {} vertices searched)",
                    if c.pass { "pass" } else { "FAIL" },
                    c.max_sum,
                    c.searched_vertices
                ),
            )
        })
        .collect()
}

fn check_lo_cmd(g: &Global, limits: &SearchLimits, spec: &str, level: usize) -> Outcome {
    let (_, bx) = load_box(spec)?;
    let levels = (1..=level)
        .map(|l| check_lo(&bx, bx.scenario(), l, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let report = LevelsReport {
        pass: levels.iter().all(|c| c.pass),
        levels,
    };
    emit(g.format, &report, || table(&level_rows(&report.levels)));
    Ok(report.pass)
}

fn check_ce_cmd(
    g: &Global,
    limits: &SearchLimits,
    spec: &str,
    state: Option<&str>,
    weights: Option<&[f64]>,
    level: usize,
) -> Outcome {
    let effects: Vec<Effect> = if spec == "builtin:kcbs" {
        kcbs_projectors()
    } else {
        let (_, effects) = io::parse_effects(&read(spec)?).map_err(in_file(spec))?;
        effects.into_iter().map(|(_, e)| e).collect()
    };
    let system = effects.first().map(Effect::system).ok_or_else(|| Failure::Input("no effects".into()))?;
    let levels = match weights {
        Some(w) => {
            let graph = quantum_exclusivity_graph(&effects)?;
            (1..=level)
                .map(|l| check_weighted(&graph, w, l, limits))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => {
            let rho = match state {
                Some(path) => io::parse_state(&read(path)?).map_err(in_file(path))?,
                None => State::basis(system, 0),
            };
            (1..=level)
                .map(|l| check_ce(&effects, &rho, l, limits))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let report = LevelsReport {
        pass: levels.iter().all(|c| c.pass),
        levels,
    };
    emit(g.format, &report, || table(&level_rows(&report.levels)));
    Ok(report.pass)
}

#[derive(Serialize)]
struct SharpReport {
    sharp: bool,
    repeatability: Check,
    refinements: Vec<Check>,
    luders: SharpnessReport,
    verdict: String,
}

fn check_sharp_cmd(g: &Global, path: &str) -> Outcome {
    let InstrumentDocument {
        instrument,
        refinements,
    } = io::parse_instrument(&read(path)?).map_err(in_file(path))?;
    let repeatability = is_repeatable(&instrument);
    let refinements = refinements
        .iter()
        .map(|(r, grouping)| satisfies_refinement_identity(&instrument, r, grouping))
        .collect::<Result<Vec<_>, _>>()
        .map_err(in_file(path))?;
    let luders = sharpness(&instrument)?;
    let sharp = repeatability.holds && refinements.iter().all(|c| c.holds) && luders.sharp;
    let verdict = if sharp {
        "sharp".to_string()
    } else if !repeatability.holds {
        format!("not sharp: repeatability residual {}", fmt6(repeatability.residual))
    } else if let Some((i, c)) = refinements.iter().enumerate().find(|(_, c)| !c.holds) {
        format!("not sharp: refinement {} residual {}", i + 1, fmt6(c.residual))
    } else {
        let failure = luders.failure.map_or("unknown".into(), |f| format!("{f:?}"));
        format!("not sharp: not of Lüders form ({failure})")
    };
    let report = SharpReport {
        sharp,
        repeatability,
        refinements,
        luders,
        verdict,
    };
    emit(g.format, &report, || {
        let mut rows = vec![(
            "repeatable".to_string(),
            format!("{} (residual {})", yes_no(report.repeatability.holds), fmt6(report.repeatability.residual)),
        )];
        for (i, c) in report.refinements.iter().enumerate() {
            rows.push((
                format!("refinement {}", i + 1),
                format!("{} (residual {})", if c.holds { "holds" } else { "fails" }, fmt6(c.residual)),
            ));
        }
        rows.push(("Lüders form".into(), yes_no(report.luders.sharp)));
        rows.push(("projector residual".into(), fmt6(report.luders.projector_residual)));
        rows.push(("orthogonality residual".into(), fmt6(report.luders.orthogonality_residual)));
        rows.push(("branch residual".into(), fmt6(report.luders.branch_residual)));
        rows.push(("verdict".into(), report.verdict.clone()));
        table(&rows)
    });
    Ok(sharp)
}

fn fmt6(x: f64) -> String {
    if x != 0.0 && x.abs() < 5e-7 {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

#[derive(Serialize)]
struct ArtifactReport<T> {
    #[serde(flatten)]
    summary: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    artifact: Option<serde_json::Value>,
}

/// With `--out`, writes `files`; otherwise the artifact is embedded in
/// structured output or appended after the table.
fn emit_with_artifact<T: Serialize>(
    g: &Global,
    summary: T,
    rows: Vec<(String, String)>,
    artifact: &str,
    files: &[(PathBuf, String)],
) -> Result<(), Failure> {
    for (path, text) in files {
        write_artifact(path, text)?;
    }
    let embedded = match (&g.out, g.format) {
        (None, Format::Structured) => {
            Some(serde_json::from_str(artifact).map_err(|e| Failure::Input(e.to_string()))?)
        }
        _ => None,
    };
    let report = ArtifactReport {
        summary,
        artifact: embedded,
    };
    emit(g.format, &report, || {
        let mut text = table(&rows);
        if g.out.is_none() {
            text.push('\n');
            text.push_str(artifact);
        }
        text
    });
    Ok(())
}

/// `dir/stem.ext` becomes `dir/stem-tag.ext`.
fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-{tag}.{ext}"),
        None => format!("{stem}-{tag}"),
    };
    path.with_file_name(name)
}

#[derive(Serialize)]
struct JointSummary {
    outcomes: usize,
    max_deviation: f64,
    causality_residual: f64,
}

fn joint_measure_cmd(g: &Global, path: &str) -> Outcome {
    let (_, labelled) = io::parse_effects(&read(path)?).map_err(in_file(path))?;
    let effects: Vec<Effect> = labelled.iter().map(|(_, e)| e.clone()).collect();
    let (_, joint) = match joint_from_orthogonal(&effects) {
        Ok(j) => j,
        Err(Error::NotOrthogonal { first, second, residual }) => {
            eprintln!(
                "effects {:?} and {:?} are not orthogonal: residual {residual:e}",
                labelled[first].0, labelled[second].0
            );
            return Ok(false);
        }
        Err(Error::NotProjector { index, residual }) => {
            eprintln!("effect {:?} is not a projector: residual {residual:e}", labelled[index].0);
            return Ok(false);
        }
        Err(e) => return Err(in_file(path)(e)),
    };
    let k = effects.len();
    let max_deviation = effects
        .iter()
        .enumerate()
        .map(|(i, e)| {
            joint
                .effect(&index_label(i, k + 1))
                .map_or(f64::INFINITY, |j| linalg::op_norm(&(j.matrix() - e.matrix())))
        })
        .fold(0.0, f64::max);
    let summary = JointSummary {
        outcomes: joint.len(),
        max_deviation,
        causality_residual: joint.causality_residual(),
    };
    let rows = vec![
        ("outcomes".into(), summary.outcomes.to_string()),
        ("max |j_k - m_k|".into(), fmt6(summary.max_deviation)),
        ("causality residual".into(), fmt6(summary.causality_residual)),
    ];
    let ok = summary.max_deviation <= tolerance() && summary.causality_residual <= tolerance();
    let artifact = io::measurement_to_json(&joint);
    let files: Vec<_> = g.out.iter().map(|p| (p.clone(), artifact.clone())).collect();
    emit_with_artifact(g, summary, rows, &artifact, &files)?;
    Ok(ok)
}

#[derive(Serialize)]
struct DilationSummary {
    ancilla_dimension: usize,
    max_deviation: f64,
    max_projector_residual: f64,
}

fn dilate_cmd(g: &Global, paths: &[String]) -> Outcome {
    let measurements = paths
        .iter()
        .map(|p| io::parse_measurement(&read(p)?).map_err(in_file(p)))
        .collect::<Result<Vec<_>, _>>()?;
    let (ancilla, sigma, family, artifact) = if let [m] = measurements.as_slice() {
        let d = naimark_dilate(m)?;
        let text = io::dilation_to_json(&d);
        (d.ancilla, d.ancilla_state, vec![d.measurement], text)
    } else {
        let d = shared_ancilla_dilation(&measurements)?;
        let text = io::shared_dilation_to_json(&d);
        (d.ancilla, d.ancilla_state, d.family, text)
    };
    let mut max_deviation: f64 = 0.0;
    for (m, dilated) in measurements.iter().zip(&family) {
        max_deviation = max_deviation.max(dilation_deviation(m, dilated, &sigma)?);
    }
    let max_projector = family.iter().map(max_projector_residual).fold(0.0, f64::max);
    let summary = DilationSummary {
        ancilla_dimension: ancilla.dim(),
        max_deviation,
        max_projector_residual: max_projector,
    };
    let rows = vec![
        ("ancilla dimension".into(), ancilla.dim().to_string()),
        ("max statistics deviation".into(), fmt6(max_deviation)),
        ("max projector residual".into(), fmt6(max_projector)),
    ];
    let ok = max_deviation <= tolerance() && max_projector <= tolerance();
    // Each dilated measurement goes out in POVM format, the ancilla state
    // next to it in state format.
    let mut files = Vec::new();
    if let Some(out) = &g.out {
        if let [m] = family.as_slice() {
            files.push((out.clone(), io::measurement_to_json(m)));
        } else {
            files.extend(family.iter().enumerate().map(|(k, m)| {
                (sibling(out, &k.to_string()), io::measurement_to_json(m))
            }));
        }
        files.push((sibling(out, "ancilla"), io::state_to_json(&sigma)));
    }
    emit_with_artifact(g, summary, rows, &artifact, &files)?;
    Ok(ok)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let tol = g.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Input(format!("tolerance must be positive, got {tol}")));
    }
    set_tolerance(tol);
    let mut limits = SearchLimits::default();
    if let Some(n) = g.max_vertices {
        limits.max_vertices = n as usize;
    }
    match &cli.command {
        Command::AnalyzeGame { game, boxes, level } => analyze_game(g, &limits, game, boxes, level.level as usize),
        Command::CheckLo { bx, level } => check_lo_cmd(g, &limits, bx, level.level as usize),
        Command::CheckCe {
            effects,
            state,
            weights,
            level,
        } => check_ce_cmd(g, &limits, effects, state.as_deref(), weights.as_deref(), level.level as usize),
        Command::CheckSharp { instrument } => check_sharp_cmd(g, instrument),
        Command::JointMeasure { effects } => joint_measure_cmd(g, effects),
        Command::Dilate { povms } => dilate_cmd(g, povms),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATED),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(EXIT_LIMIT)
        }
    }
}
