//! Command-line driver. `main.rs` only parses arguments and maps a
//! [`CliError`] to its exit code.

use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::ir::{to_canonical_json, validate, PlanDocument, SentenceDocument, SentencePlan};
use crate::lexicon::Lexicon;
use crate::realize::{realize_document, TemplateSet};
use crate::schema::{parse_schema_set, traverse_set, DataRecordSet, SchemaSet, DEFAULT_MAX_VISITS};
use crate::sentplan::{plan_sentences, Profile};

/// Pipeline stage a failure belongs to; each has its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Parse,
    Traverse,
    Sentplan,
    Realize,
    Io,
}

impl Stage {
    pub fn exit_code(&self) -> i32 {
        match self {
            Stage::Parse => 1,
            Stage::Traverse => 2,
            Stage::Sentplan => 3,
            Stage::Realize => 4,
            Stage::Io => 5,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Parse => "parse",
            Stage::Traverse => "traverse",
            Stage::Sentplan => "sentplan",
            Stage::Realize => "realize",
            Stage::Io => "io",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub stage: Stage,
    pub message: String,
}

impl CliError {
    fn new(stage: Stage, message: impl fmt::Display) -> Self {
        CliError {
            stage,
            message: message.to_string().replace('\n', " "),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(
    name = "nlgen",
    version,
    about = "Generate English documents from structured data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the whole pipeline and print the document.
    Generate(GenerateArgs),
    /// Traverse the schema and print the document plan as JSON.
    Plan(PlanArgs),
    /// Read a document plan (file or `-`) and print sentence plans as JSON.
    Sentences(SentencesArgs),
    /// Read sentence plans (file or `-`) and print the realized text.
    Realize(RealizeArgs),
}

#[derive(Debug, Args)]
pub struct Resources {
    /// Template file replacing the embedded templates.
    #[arg(long)]
    pub templates: Option<PathBuf>,
    /// Lexicon file replacing the embedded lexicon.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Profile::Fluent)]
    pub profile: Profile,
    #[command(flatten)]
    pub resources: Resources,
    /// Write the document plan JSON here.
    #[arg(long, value_name = "PATH", conflicts_with = "batch")]
    pub dump_plan: Option<PathBuf>,
    /// Write the sentence plan JSON here.
    #[arg(long, value_name = "PATH", conflicts_with = "batch")]
    pub dump_sentences: Option<PathBuf>,
    /// Generate one document per `*.json` data file in DIR.
    #[arg(long, value_name = "DIR")]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
}

#[derive(Debug, Args)]
pub struct SentencesArgs {
    #[arg(default_value = "-")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Profile::Fluent)]
    pub profile: Profile,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    #[arg(default_value = "-")]
    pub input: PathBuf,
    #[command(flatten)]
    pub resources: Resources,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new(Stage::Io, format!("cannot read {}: {e}", path.display())))
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::new(Stage::Io, format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        read_file(path)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::new(Stage::Io, format!("cannot write {}: {e}", path.display())))
}

fn write_out(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    out.write_all(s.as_bytes())
        .map_err(|e| CliError::new(Stage::Io, format!("cannot write output: {e}")))
}

pub fn load_schema(path: &Path) -> Result<SchemaSet, CliError> {
    let src = read_file(path)?;
    parse_schema_set(&src)
        .map_err(|e| CliError::new(Stage::Parse, format!("{}: {e}", path.display())))
}

pub fn load_data(path: &Path) -> Result<DataRecordSet, CliError> {
    let src = read_file(path)?;
    DataRecordSet::from_json(&src)
        .map_err(|e| CliError::new(Stage::Parse, format!("{}: {e}", path.display())))
}

pub fn load_lexicon(path: Option<&Path>) -> Result<Lexicon, CliError> {
    match path {
        None => Ok(Lexicon::embedded()),
        Some(p) => {
            let src = read_file(p)?;
            Lexicon::parse(&src)
                .map_err(|e| CliError::new(Stage::Parse, format!("{}: {e}", p.display())))
        }
    }
}

pub fn load_templates(path: Option<&Path>) -> Result<TemplateSet, CliError> {
    match path {
        None => Ok(TemplateSet::embedded()),
        Some(p) => {
            let src = read_file(p)?;
            TemplateSet::parse(&src)
                .map_err(|e| CliError::new(Stage::Parse, format!("{}: {e}", p.display())))
        }
    }
}

/// Stage one: content determination and text planning.
pub fn plan_document(schemas: &SchemaSet, data: &DataRecordSet) -> Result<PlanDocument, CliError> {
    let plan = traverse_set(schemas, data, DEFAULT_MAX_VISITS)
        .map_err(|e| CliError::new(Stage::Traverse, e))?;
    let sources = data.record_keys();
    if let Some(v) = validate(&plan, &data.entities, Some(&sources)).first() {
        return Err(CliError::new(
            Stage::Traverse,
            format!("invalid document plan: {v}"),
        ));
    }
    Ok(PlanDocument {
        entities: data.entities.clone(),
        plan,
    })
}

/// Stage two: sentence planning.
pub fn sentence_document(
    doc: &PlanDocument,
    profile: Profile,
) -> Result<SentenceDocument, CliError> {
    let sentences = plan_sentences(&doc.plan, &doc.entities, profile)
        .map_err(|e| CliError::new(Stage::Sentplan, e))?;
    Ok(SentenceDocument {
        entities: doc.entities.clone(),
        sentences,
    })
}

/// Stage three: realization. Non-empty documents end with a newline.
pub fn realize_text(
    doc: &SentenceDocument,
    lex: &Lexicon,
    templates: &TemplateSet,
) -> Result<String, CliError> {
    let mut text = realize_document(&doc.sentences, &doc.entities, lex, templates)
        .map_err(|e| CliError::new(Stage::Realize, e))?;
    if !text.is_empty() {
        text.push('\n');
    }
    Ok(text)
}

struct Pipeline<'a> {
    schemas: &'a SchemaSet,
    profile: Profile,
    lex: &'a Lexicon,
    templates: &'a TemplateSet,
}

impl Pipeline<'_> {
    fn run(
        &self,
        data: &DataRecordSet,
        dump_plan: Option<&Path>,
        dump_sentences: Option<&Path>,
    ) -> Result<String, CliError> {
        let plan = plan_document(self.schemas, data)?;
        if let Some(p) = dump_plan {
            write_file(p, &to_canonical_json(&plan))?;
        }
        let sentences = sentence_document(&plan, self.profile)?;
        if let Some(p) = dump_sentences {
            write_file(p, &to_canonical_json(&sentences))?;
        }
        realize_text(&sentences, self.lex, self.templates)
    }
}

fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| {
        CliError::new(
            Stage::Io,
            format!("cannot read directory {}: {e}", dir.display()),
        )
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| {
                CliError::new(
                    Stage::Io,
                    format!("cannot read directory {}: {e}", dir.display()),
                )
            })?
            .path();
        if path.is_file() && path.extension().is_some_and(|x| x == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let schemas = load_schema(&args.schema)?;
    let lex = load_lexicon(args.resources.lexicon.as_deref())?;
    let templates = load_templates(args.resources.templates.as_deref())?;
    let pipeline = Pipeline {
        schemas: &schemas,
        profile: args.profile,
        lex: &lex,
        templates: &templates,
    };

    let Some(dir) = &args.batch else {
        let data_path = args
            .data
            .as_deref()
            .expect("clap requires --data without --batch");
        let data = load_data(data_path)?;
        let text = pipeline.run(
            &data,
            args.dump_plan.as_deref(),
            args.dump_sentences.as_deref(),
        )?;
        return write_out(out, &text);
    };

    let files = batch_inputs(dir)?;
    // Each document is independent; results are printed in file-name order.
    let results: Vec<Result<String, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| {
                let pipeline = &pipeline;
                s.spawn(move || pipeline.run(&load_data(f)?, None, None))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("generation threads do not panic"))
            .collect()
    });
    // Nothing is printed unless every document succeeded.
    let mut text = String::new();
    for (file, result) in files.iter().zip(results) {
        let name = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        text.push_str(&format!("==> {name} <==\n{}", result?));
    }
    write_out(out, &text)
}

/// Accepts a sentence-plan dump, or a bare list of sentence plans that
/// mention no entities.
fn parse_sentence_document(src: &str) -> Result<SentenceDocument, CliError> {
    let malformed = |e: serde_json::Error| {
        CliError::new(Stage::Realize, format!("malformed sentence plans: {e}"))
    };
    if src.trim_start().starts_with('[') {
        let sentences: Vec<SentencePlan> = serde_json::from_str(src).map_err(malformed)?;
        return Ok(SentenceDocument {
            entities: Default::default(),
            sentences,
        });
    }
    serde_json::from_str(src).map_err(malformed)
}

/// Runs one command, writing generated output to `out`.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(args) => generate(args, out),
        Command::Plan(args) => {
            let schemas = load_schema(&args.schema)?;
            let data = load_data(&args.data)?;
            write_out(out, &to_canonical_json(&plan_document(&schemas, &data)?))
        }
        Command::Sentences(args) => {
            let src = read_input(&args.input, stdin)?;
            let doc: PlanDocument = serde_json::from_str(&src).map_err(|e| {
                CliError::new(Stage::Sentplan, format!("malformed document plan: {e}"))
            })?;
            write_out(
                out,
                &to_canonical_json(&sentence_document(&doc, args.profile)?),
            )
        }
        Command::Realize(args) => {
            let lex = load_lexicon(args.resources.lexicon.as_deref())?;
            let templates = load_templates(args.resources.templates.as_deref())?;
            let src = read_input(&args.input, stdin)?;
            let doc = parse_sentence_document(&src)?;
            write_out(out, &realize_text(&doc, &lex, &templates)?)
        }
    }
}
