//! Command dispatch. Commands return their exit code and output streams so
//! that tests can run them in-process.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gsokit_core::extensions::{
    enumerate_extensions_bounded, reconstruct, DEFAULT_ENUMERATION_BOUND,
};
use gsokit_core::model::{check_axioms, classify};
use gsokit_core::psl::translate;
use gsokit_core::{Error, GsoModel, GsoSpec, NodeId, Theory, Universe, ValidationReport};

use crate::document::{Document, DocumentError, ObservationFamily};
use crate::dot::{self, GraphKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Environment variable overriding the enumeration bound.
pub const LIMIT_VAR: &str = "GSOKIT_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "gsokit", version, about = "Check and explore gso-structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Univ,
    Spec,
    Gso,
    GsoMinus,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Univ => Theory::Univ,
            TheoryArg::Spec => Theory::Spec,
            TheoryArg::Gso => Theory::Gso,
            TheoryArg::GsoMinus => Theory::GsoMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Steps,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document against a theory; prints one violation per line
    Validate {
        file: PathBuf,
        /// Defaults to spec, gso or gso-minus by document kind
        #[arg(long, value_enum)]
        theory: Option<TheoryArg>,
    },
    /// List every stratified-order extension of a spec
    Extensions {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "steps")]
        format: Format,
        /// Stop after N extensions (exit 3 if there are more)
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Rebuild a spec from observation families
    Reconstruct {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Document whose occurrences fix the carrier
        #[arg(long)]
        carrier: Option<PathBuf>,
    },
    /// Classification data of a model of the full theory
    Classify { file: PathBuf },
    /// Translate a PSL-core model into an event-free gso model
    TranslatePsl { file: PathBuf },
    /// Graphviz rendering of one relation of a spec
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum)]
        graph: GraphKind,
        /// Draw the transitive reduction of earlier_than
        #[arg(long)]
        reduce: bool,
    },
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("gsokit: {stderr}\n") }
    }
}

/// Parse `args` (including the program name) and run the command.
/// `limit_var` is the value of [`LIMIT_VAR`], if set.
pub fn run<I, T>(args: I, limit_var: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command, limit_var),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            }
        }
    }
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(EXIT_INPUT, format_args!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Document, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(path, e))?;
    Document::parse(&text).map_err(|e| match e {
        DocumentError::Core(Error::InvalidSpec(v)) => {
            Outcome { code: EXIT_INVALID, stdout: format!("{v}\n"), stderr: String::new() }
        }
        e => input_error(path, e),
    })
}

/// Exit code for a library error.
fn core_error(e: Error) -> Outcome {
    match e {
        Error::CarrierTooLarge { .. } | Error::SizeLimit { .. } => Outcome::fail(EXIT_LIMIT, e),
        Error::InvalidSpec(v) | Error::NotAModel(v) => {
            Outcome { code: EXIT_INVALID, stdout: format!("{v}\n"), stderr: String::new() }
        }
        Error::InvalidClassificationData(_) | Error::InvalidDecomposition(_) => {
            Outcome { code: EXIT_INVALID, stdout: format!("{e}\n"), stderr: String::new() }
        }
        e => Outcome::fail(EXIT_INPUT, e),
    }
}

fn report(r: ValidationReport) -> Outcome {
    Outcome {
        code: if r.is_empty() { EXIT_OK } else { EXIT_INVALID },
        stdout: r.to_string(),
        stderr: String::new(),
    }
}

fn spec_as_model(s: GsoSpec) -> GsoModel {
    let individuals = s.domain().difference(&s.occurrences).cloned().collect();
    GsoModel::new(
        Universe {
            occurrences: s.occurrences.clone(),
            individuals,
            ..Universe::default()
        },
        s,
    )
}

fn execute(command: Command, limit_var: Option<&str>) -> Outcome {
    let result = match command {
        Command::Validate { file, theory } => validate(&file, theory),
        Command::Extensions { file, format, limit } => extensions(&file, format, limit, limit_var),
        Command::Reconstruct { files, carrier } => reconstruct_cmd(&files, carrier.as_deref()),
        Command::Classify { file } => load(&file).and_then(|doc| match doc {
            Document::Model(m) => classify(&m)
                .map(|d| Outcome::ok(Document::Classification(d).to_json()))
                .map_err(core_error),
            other => Err(wrong_kind(&file, "gso-model", &other)),
        }),
        Command::TranslatePsl { file } => load(&file).and_then(|doc| match doc {
            Document::Psl(p) => translate(&p)
                .map(|t| Outcome::ok(Document::Model(t.model).to_json()))
                .map_err(core_error),
            other => Err(wrong_kind(&file, "psl-model", &other)),
        }),
        Command::ExportDot { file, graph, reduce } => load(&file).and_then(|doc| {
            let spec = doc.into_spec().map_err(|e| input_error(&file, e))?;
            dot::export(&spec, graph, reduce).map(Outcome::ok).map_err(core_error)
        }),
    };
    result.unwrap_or_else(|o| o)
}

fn wrong_kind(path: &Path, expected: &'static str, found: &Document) -> Outcome {
    input_error(
        path,
        DocumentError::WrongKind { expected, found: found.kind() },
    )
}

fn validate(file: &Path, theory: Option<TheoryArg>) -> Result<Outcome, Outcome> {
    let doc = load(file)?;
    let checked = |m: &GsoModel, t: Theory| check_axioms(m, t).map(report).map_err(core_error);
    match doc {
        Document::Spec(s) => checked(&spec_as_model(s), theory.map_or(Theory::Spec, Into::into)),
        Document::Model(m) => checked(&m, theory.map_or(Theory::Gso, Into::into)),
        Document::Psl(p) => {
            let t = translate(&p).map_err(core_error)?;
            checked(&t.model, theory.map_or(Theory::GsoMinus, Into::into))
        }
        Document::Classification(d) => Ok(match d.validate() {
            Ok(()) => Outcome::ok(String::new()),
            Err(c) => Outcome { code: EXIT_INVALID, stdout: format!("{c}\n"), stderr: String::new() },
        }),
        Document::Family(f) => {
            let mut out = String::new();
            if let Some(carrier) = &f.carrier {
                for (i, (name, r)) in f.observations.iter().enumerate() {
                    if &r.carrier() != carrier {
                        let label = name.as_ref().map_or(format!("#{i}"), ToString::to_string);
                        writeln!(out, "observation {label}: carrier differs from occurrences").unwrap();
                    }
                }
            }
            Ok(Outcome {
                code: if out.is_empty() { EXIT_OK } else { EXIT_INVALID },
                stdout: out,
                stderr: String::new(),
            })
        }
    }
}

fn enumeration_bound(limit_var: Option<&str>) -> Result<usize, Outcome> {
    match limit_var {
        None => Ok(DEFAULT_ENUMERATION_BOUND),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Outcome::fail(EXIT_INPUT, format_args!("{LIMIT_VAR}={v:?} is not a number"))),
    }
}

fn extensions(
    file: &Path,
    format: Format,
    limit: Option<usize>,
    limit_var: Option<&str>,
) -> Result<Outcome, Outcome> {
    let spec = load(file)?.into_spec().map_err(|e| input_error(file, e))?;
    let omega = enumerate_extensions_bounded(&spec, enumeration_bound(limit_var)?).map_err(core_error)?;
    let shown = limit.unwrap_or(usize::MAX).min(omega.len());
    let members = &omega.members[..shown];
    let stdout = match format {
        Format::Steps => members.iter().map(|r| format!("{r}\n")).collect(),
        Format::Json => Document::Family(ObservationFamily {
            carrier: Some(spec.occurrences.clone()),
            observations: members.iter().map(|r| (None, r.clone())).collect(),
        })
        .to_json(),
    };
    if shown < omega.len() {
        return Ok(Outcome {
            code: EXIT_LIMIT,
            stdout,
            stderr: format!("gsokit: stopped after {shown} of {} extensions\n", omega.len()),
        });
    }
    Ok(Outcome::ok(stdout))
}

fn reconstruct_cmd(files: &[PathBuf], carrier: Option<&Path>) -> Result<Outcome, Outcome> {
    let mut runs = Vec::new();
    for f in files {
        match load(f)? {
            Document::Family(fam) => runs.extend(fam.observations.into_iter().map(|(_, r)| r)),
            other => return Err(wrong_kind(f, "observation-family", &other)),
        }
    }
    let carrier: BTreeSet<NodeId> = match carrier {
        Some(path) => load(path)?
            .carrier()
            .ok_or_else(|| input_error(path, "document declares no occurrences"))?,
        None => runs.first().map(|r| r.carrier()).unwrap_or_default(),
    };
    let family: Vec<_> = runs.iter().map(|r| r.to_order()).collect();
    let r = reconstruct(&carrier, &family).map_err(core_error)?;
    Ok(Outcome::ok(Document::Spec(r.into_spec()).to_json()))
}
