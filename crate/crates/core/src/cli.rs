//! The `miq` command line.
//!
//! Exit codes: 0 success, 2 domain or validation failure, 3 I/O or parse
//! failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::document::{
    CatalogDocument, DocumentError, PlanDocument, ProfilesDocument, ResponsesDocument, Versioned,
};
use crate::grouping::{form_groups, GroupingConfig, Roster, SearchMode};
use crate::profile::{validate_catalog, AbilityCatalog, ScoringMode, Scorer, SwsVector};
use crate::quotient::{overlap_set, Intelligence};
use crate::render::{render_group, render_partition, render_sws, PartitionLayout, RadialScale, RenderStyle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "miq", version, about = "Multiple-intelligence profiles as a quotient space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an ability catalog.
    Validate { catalog: PathBuf },
    /// List or draw the reduced intelligence classes of a catalog.
    Partition {
        catalog: PathBuf,
        #[arg(long, value_enum, default_value_t = PartitionOutput::Text)]
        output: PartitionOutput,
        /// Join the rays' outermost elements into one web (svg only).
        #[arg(long)]
        joined: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score response sheets into spider-web vectors.
    Score {
        catalog: PathBuf,
        responses: PathBuf,
        /// Count against the original overlapping classes.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw one person's web or a group overlay.
    Render {
        profiles: PathBuf,
        #[arg(long, conflicts_with = "group", required_unless_present = "group")]
        person: Option<String>,
        #[arg(long, value_delimiter = ',')]
        group: Option<Vec<String>>,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Form complementary groups from scored profiles.
    Group {
        profiles: PathBuf,
        #[command(flatten)]
        grouping: GroupingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// validate, score, group and render in one go.
    Pipeline {
        catalog: PathBuf,
        responses: PathBuf,
        #[command(flatten)]
        grouping: GroupingArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartitionOutput {
    Text,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Greedy,
    Local,
    Exact,
}

impl From<ModeArg> for SearchMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Greedy => SearchMode::Greedy,
            ModeArg::Local => SearchMode::LocalSearch,
            ModeArg::Exact => SearchMode::Exact,
        }
    }
}

#[derive(Debug, Args)]
pub struct StyleArgs {
    /// Canvas width and height in pixels.
    #[arg(long, default_value_t = 480)]
    pub canvas: u32,
    /// Scale every axis to this score instead of the catalog ideal.
    #[arg(long)]
    pub fixed_max: Option<u32>,
    #[arg(long)]
    pub no_labels: bool,
}

impl StyleArgs {
    fn style(&self) -> RenderStyle {
        RenderStyle {
            canvas: self.canvas,
            scale: self.fixed_max.map_or(RadialScale::NormalizeByIdeal, RadialScale::FixedMax),
            axis_labels: !self.no_labels,
            ..RenderStyle::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct GroupingArgs {
    /// Nominal group size.
    #[arg(long)]
    pub size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Local)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum swap passes per local search.
    #[arg(long, default_value_t = 100)]
    pub budget: u32,
    /// Seeded random restarts for local mode.
    #[arg(long, default_value_t = 8)]
    pub restarts: u32,
}

impl GroupingArgs {
    fn config(&self) -> GroupingConfig {
        GroupingConfig {
            group_size: self.size,
            seed: self.seed,
            search_budget: self.budget,
            restarts: self.restarts,
            mode: self.mode.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Document {
        path: PathBuf,
        source: DocumentError,
    },
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Document { source, .. } if !source.is_validation() => EXIT_IO,
            _ => EXIT_DOMAIN,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, DocumentError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `text` to `path`, or to `stdout` when no path is given.
fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn load_catalog(path: &Path) -> Result<AbilityCatalog, CliError> {
    let doc = parse(path, CatalogDocument::from_json)?;
    doc.to_catalog().map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn checked_catalog(path: &Path) -> Result<AbilityCatalog, CliError> {
    let catalog = load_catalog(path)?;
    let findings = validate_catalog(&catalog);
    if !findings.is_empty() {
        let lines: Vec<String> = findings.iter().map(ToString::to_string).collect();
        return Err(CliError::Domain(format!(
            "{}: invalid catalog\n{}",
            path.display(),
            lines.join("\n")
        )));
    }
    Ok(catalog)
}

fn index_set(classes: &[Intelligence]) -> String {
    let idx: Vec<String> = classes.iter().map(|c| c.index().to_string()).collect();
    format!("{{{}}}", idx.join(","))
}

/// Plain-text listing of the reduced classes and the overlap set.
pub fn partition_listing(catalog: &AbilityCatalog) -> Result<String, CliError> {
    let family = catalog.family().map_err(domain)?;
    let partition = crate::quotient::disjointify(&family);
    let overlaps = overlap_set(&family);
    let memberships = family.memberships();

    let mut out = String::new();
    for class in Intelligence::ALL {
        let members = partition.reduced(class);
        let _ = writeln!(
            out,
            "C~{} {} ({} of {}):",
            class.index(),
            class.name(),
            members.len(),
            family.class(class).len()
        );
        for x in members {
            if overlaps.contains(x.as_str()) {
                let _ = writeln!(out, "  {x}  (resolved from {})", index_set(&memberships[x]));
            } else {
                let _ = writeln!(out, "  {x}");
            }
        }
    }
    let _ = writeln!(out, "overlap set V ({}):", overlaps.len());
    if overlaps.is_empty() {
        let _ = writeln!(out, "  (empty)");
    }
    for x in overlaps.members() {
        let _ = writeln!(
            out,
            "  {x}  resolved from {} -> {}",
            index_set(&memberships[x]),
            partition.class_of(x.as_str()).map_err(domain)?.index()
        );
    }
    Ok(out)
}

fn score_documents(
    catalog: &AbilityCatalog,
    responses_path: &Path,
    mode: ScoringMode,
) -> Result<ProfilesDocument, CliError> {
    let responses = parse(responses_path, ResponsesDocument::parse)?;
    let sheets = responses.to_sheets().map_err(|source| CliError::Document {
        path: responses_path.to_path_buf(),
        source,
    })?;
    let scorer = Scorer::new(catalog, mode).map_err(domain)?;
    let profiles = sheets
        .iter()
        .map(|sheet| scorer.profile(sheet))
        .collect::<Result<Vec<_>, _>>()
        .map_err(domain)?;
    Ok(ProfilesDocument::new(mode, scorer.ideal(), profiles))
}

fn group_document(profiles: &ProfilesDocument, config: &GroupingConfig) -> Result<PlanDocument, CliError> {
    let roster = Roster::new(profiles.profiles.clone(), profiles.ideal).map_err(domain)?;
    let plan = form_groups(&roster, config).map_err(domain)?;
    Ok(PlanDocument::from_plan(&plan, config, profiles.ideal))
}

fn group_svg(profiles: &ProfilesDocument, ids: &[String], style: &RenderStyle) -> Result<String, CliError> {
    let webs = ids
        .iter()
        .map(|id| {
            profiles
                .person(id)
                .map(|p| p.sws)
                .ok_or_else(|| CliError::Domain(format!("unknown person `{id}`")))
        })
        .collect::<Result<Vec<SwsVector>, _>>()?;
    let group_max = webs.iter().fold(SwsVector::ZERO, |acc, w| acc.join(w));
    render_group(&webs, &group_max, &profiles.ideal, style).map_err(domain)
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Validate { catalog } => {
            let parsed = match load_catalog(catalog) {
                Err(CliError::Document { path, source }) if source.is_validation() => {
                    emit(None, &format!("{source}\n"), stdout)?;
                    return Err(CliError::Document { path, source });
                }
                other => other?,
            };
            let findings = validate_catalog(&parsed);
            if findings.is_empty() {
                let family = parsed.family().map_err(domain)?;
                let text = format!(
                    "ok: {} abilities, {} shared between intelligences\n",
                    parsed.abilities.len(),
                    overlap_set(&family).len()
                );
                emit(None, &text, stdout)
            } else {
                let mut text = String::new();
                for f in &findings {
                    let _ = writeln!(text, "{f}");
                }
                emit(None, &text, stdout)?;
                Err(CliError::Domain(format!(
                    "{}: {} finding(s)",
                    catalog.display(),
                    findings.len()
                )))
            }
        }
        Command::Partition {
            catalog,
            output,
            joined,
            out,
        } => {
            let catalog = checked_catalog(catalog)?;
            let text = match output {
                PartitionOutput::Text => partition_listing(&catalog)?,
                PartitionOutput::Svg => {
                    let style = RenderStyle {
                        partition_layout: if *joined {
                            PartitionLayout::Joined
                        } else {
                            PartitionLayout::Axes
                        },
                        ..RenderStyle::default()
                    };
                    render_partition(&catalog.canonical().map_err(domain)?, &style).map_err(domain)?
                }
            };
            emit(out.as_deref(), &text, stdout)
        }
        Command::Score {
            catalog,
            responses,
            raw,
            out,
        } => {
            let catalog = checked_catalog(catalog)?;
            let mode = if *raw { ScoringMode::Raw } else { ScoringMode::Reduced };
            let doc = score_documents(&catalog, responses, mode)?;
            emit(out.as_deref(), &doc.to_json(), stdout)
        }
        Command::Render {
            profiles,
            person,
            group,
            style,
            out,
        } => {
            let doc = parse(profiles, ProfilesDocument::from_json)?;
            let style = style.style();
            let svg = match (person, group) {
                (Some(id), _) => {
                    let p = doc
                        .person(id)
                        .ok_or_else(|| CliError::Domain(format!("unknown person `{id}`")))?;
                    render_sws(&p.sws, &doc.ideal, &style).map_err(domain)?
                }
                (None, Some(ids)) => group_svg(&doc, ids, &style)?,
                (None, None) => return Err(CliError::Domain("give --person or --group".into())),
            };
            emit(out.as_deref(), &svg, stdout)
        }
        Command::Group {
            profiles,
            grouping,
            out,
        } => {
            let doc = parse(profiles, ProfilesDocument::from_json)?;
            let plan = group_document(&doc, &grouping.config())?;
            emit(out.as_deref(), &plan.to_json(), stdout)
        }
        Command::Pipeline {
            catalog,
            responses,
            grouping,
            out_dir,
        } => {
            let catalog = checked_catalog(catalog)?;
            fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
                path: out_dir.clone(),
                source,
            })?;
            let style = RenderStyle::default();
            let partition = catalog.canonical().map_err(domain)?;
            let mut files: BTreeMap<String, String> = BTreeMap::new();
            files.insert(
                "partition.svg".into(),
                render_partition(&partition, &style).map_err(domain)?,
            );
            let profiles = score_documents(&catalog, responses, ScoringMode::Reduced)?;
            let plan = group_document(&profiles, &grouping.config())?;
            for (i, g) in plan.groups.iter().enumerate() {
                files.insert(
                    format!("group-{:02}.svg", i + 1),
                    group_svg(&profiles, &g.members, &style)?,
                );
            }
            files.insert("profiles.json".into(), profiles.to_json());
            files.insert("plan.json".into(), plan.to_json());

            let mut summary = String::new();
            for (name, text) in &files {
                let path = out_dir.join(name);
                emit(Some(&path), text, stdout)?;
                let _ = writeln!(summary, "wrote {}", path.display());
            }
            let _ = writeln!(
                summary,
                "{} persons in {} groups, objective ({}, {})",
                profiles.profiles.len(),
                plan.groups.len(),
                plan.objective.min_balance,
                plan.objective.sum_balances
            );
            emit(None, &summary, stdout)
        }
    }
}

/// Runs the CLI with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here too
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_DOMAIN;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
