//! The `acsplit` command line. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process.
//!
//! Exit codes: 0 no errors, 1 error diagnostics (or `fmt --check`
//! found a difference), 2 usage, I/O or unloadable-input failures.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use acsplit_core::analyze::{impact_text, metrics_table, parse_element_ref, ImpactError};
use acsplit_core::diag::{has_errors, promote_warnings, sort_diagnostics};
use acsplit_core::link::{ElementRef, InlineError};
use acsplit_core::render::{report_json, to_dot, RenderOptions, Report};
use acsplit_core::validate::{capability_report, validate_bundle_full, validate_case_with};
use acsplit_core::{
    impact, inline_bundle, metrics_bundle, metrics_case, parse_bundle, parse_case, print_case, resolve_links,
    AssuranceCase, Bundle, CaseId, Decimal, Diagnostic, ResolvedBundle, Rule, SourceFile, UnitTable,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERRORS: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Name of the environment variable pointing at an extra units file.
pub const UNITS_ENV: &str = "AC_UNITS";

#[derive(Parser)]
#[command(name = "acsplit", version, about = "Check, link and analyze split technological/clinical assurance cases")]
struct Cli {
    /// Treat warnings as errors.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a case (.acd) or a bundle manifest (.acb).
    Validate {
        file: PathBuf,
        /// Write a JSON report to stdout instead of diagnostics to stderr.
        #[arg(long)]
        json: bool,
    },
    /// Resolve a bundle's away-references and print them.
    Link { file: PathBuf },
    /// List the elements affected by changing the given elements.
    Impact {
        file: PathBuf,
        /// Comma-separated CASE.ELEMENT references.
        #[arg(long, value_delimiter = ',', required = true)]
        changed: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print one clinical case with its technological support inlined.
    Inline {
        file: PathBuf,
        #[arg(long)]
        cac: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a case or bundle as a DOT digraph.
    Render {
        file: PathBuf,
        /// Comma-separated CASE.ELEMENT references to fill.
        #[arg(long, value_delimiter = ',')]
        highlight: Vec<String>,
        /// Leave out context, assumption and justification nodes.
        #[arg(long)]
        no_contexts: bool,
        /// Hide the elements below module claims.
        #[arg(long)]
        collapse_modules: bool,
        #[arg(long, default_value = "0.6")]
        rank_sep: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Structural metrics per case.
    Metrics {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Pretty-print a case file in canonical layout.
    Fmt {
        file: PathBuf,
        /// Exit 1 if the file is not already canonical; print nothing.
        #[arg(long)]
        check: bool,
    },
    /// Print the rule catalog.
    Rules {
        #[arg(long)]
        markdown: bool,
    },
}

/// Process environment the commands depend on.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub units_file: Option<PathBuf>,
}

impl Env {
    pub fn from_process() -> Self {
        Env { units_file: std::env::var_os(UNITS_ENV).filter(|v| !v.is_empty()).map(PathBuf::from) }
    }
}

enum Failure {
    Usage(String),
    Io(String),
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    strict: bool,
}

impl Io<'_> {
    /// Prints diagnostics and turns them into an exit code.
    fn finish(&mut self, mut diagnostics: Vec<Diagnostic>) -> i32 {
        sort_diagnostics(&mut diagnostics);
        if self.strict {
            promote_warnings(&mut diagnostics);
        }
        for d in &diagnostics {
            let _ = writeln!(self.err, "{d}");
        }
        exit_code(&diagnostics)
    }

    fn emit(&mut self, text: &str, output: Option<&Path>) -> Result<(), Failure> {
        match output {
            Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
            None => self.out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
        }
    }
}

fn exit_code(diagnostics: &[Diagnostic]) -> i32 {
    if diagnostics.iter().any(|d| d.rule == Rule::P8) {
        EXIT_FAILURE
    } else if has_errors(diagnostics) {
        EXIT_ERRORS
    } else {
        EXIT_OK
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_FAILURE
                }
            };
        }
    };
    let mut io = Io { out, err, strict: cli.strict };
    match dispatch(cli.command, env, &mut io) {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(io.err, "error: {message}");
            let _ = writeln!(io.err, "\nFor more information, try '--help'.");
            EXIT_FAILURE
        }
        Err(Failure::Io(message)) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, env: &Env, io: &mut Io<'_>) -> Outcome {
    match command {
        Command::Validate { file, json } => validate(&file, json, env, io),
        Command::Link { file } => link(&file, io),
        Command::Impact { file, changed, json } => impact_cmd(&file, &changed, json, io),
        Command::Inline { file, cac, output } => inline(&file, &cac, output.as_deref(), io),
        Command::Render { file, highlight, no_contexts, collapse_modules, rank_sep, output } => {
            let mut options = RenderOptions::default();
            options.show_contexts = !no_contexts;
            options.collapse_modules = collapse_modules;
            options.highlight = parse_refs(&highlight)?;
            let sep: Decimal = rank_sep
                .parse()
                .map_err(|_| Failure::Usage(format!("invalid --rank-sep '{rank_sep}'")))?;
            options.set_rank_sep(sep).map_err(|e| Failure::Usage(e.to_string()))?;
            render(&file, &options, output.as_deref(), io)
        }
        Command::Metrics { file, json } => metrics(&file, json, io),
        Command::Fmt { file, check } => fmt(&file, check, io),
        Command::Rules { markdown } => {
            let text = if markdown { rules_markdown() } else { rules_text() };
            io.emit(&text, None)?;
            Ok(EXIT_OK)
        }
    }
}

enum Input {
    Case(AssuranceCase),
    Bundle(Bundle),
}

struct Loaded {
    input: Option<Input>,
    /// Cases that parsed, even when the bundle as a whole did not.
    parsed: Vec<AssuranceCase>,
    diagnostics: Vec<Diagnostic>,
}

fn is_manifest(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "acb")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = read(path)?;
    let name = path.display().to_string();
    if !is_manifest(path) {
        let parsed = parse_case(&text, &name);
        return Ok(Loaded {
            parsed: parsed.case.iter().cloned().collect(),
            input: parsed.case.map(Input::Case),
            diagnostics: parsed.diagnostics,
        });
    }
    let dir = path.parent().unwrap_or(Path::new(""));
    let parsed = parse_bundle(&text, &name, |member| {
        let full = dir.join(member);
        fs::read_to_string(&full)
            .map(|text| SourceFile { name: full.display().to_string(), text })
            .map_err(|e| e.to_string())
    });
    Ok(Loaded { input: parsed.bundle.map(Input::Bundle), parsed: parsed.cases, diagnostics: parsed.diagnostics })
}

fn units(env: &Env) -> Result<UnitTable, Failure> {
    let mut table = UnitTable::builtin();
    if let Some(path) = &env.units_file {
        let text = read(path)?;
        table
            .extend_from_text(&text)
            .map_err(|e| Failure::Usage(format!("{UNITS_ENV}={}: {e}", path.display())))?;
    }
    Ok(table)
}

fn validate(path: &Path, json: bool, env: &Env, io: &mut Io<'_>) -> Outcome {
    let units = units(env)?;
    let loaded = load(path)?;
    let mut diagnostics = loaded.diagnostics;
    let mut capabilities = None;
    match &loaded.input {
        Some(Input::Case(case)) => diagnostics.extend(validate_case_with(case, &units)),
        Some(Input::Bundle(bundle)) => {
            diagnostics.extend(validate_bundle_full(bundle, &units));
            capabilities = Some(capability_report(bundle, &units));
        }
        None => {
            for case in &loaded.parsed {
                diagnostics.extend(validate_case_with(case, &units));
            }
        }
    }
    if !json {
        return Ok(io.finish(diagnostics));
    }
    sort_diagnostics(&mut diagnostics);
    if io.strict {
        promote_warnings(&mut diagnostics);
    }
    let report = Report { diagnostics: Some(&diagnostics), capabilities: capabilities.as_deref(), ..Default::default() };
    io.emit(&report_json(&report), None)?;
    Ok(exit_code(&diagnostics))
}

/// Loads a manifest and resolves it. `Err(code)` when either step failed
/// (diagnostics already printed).
fn resolved(path: &Path, io: &mut Io<'_>) -> Result<Result<(ResolvedBundle, Vec<Diagnostic>), i32>, Failure> {
    if !is_manifest(path) {
        return Err(Failure::Usage(format!("{} is not a bundle manifest (.acb)", path.display())));
    }
    let loaded = load(path)?;
    let mut diagnostics = loaded.diagnostics;
    let Some(Input::Bundle(bundle)) = loaded.input else {
        return Ok(Err(io.finish(diagnostics)));
    };
    let (resolved, link_diagnostics) = resolve_links(&bundle);
    diagnostics.extend(link_diagnostics);
    match resolved {
        Some(r) => Ok(Ok((r, diagnostics))),
        None => Ok(Err(io.finish(diagnostics))),
    }
}

fn link(path: &Path, io: &mut Io<'_>) -> Outcome {
    let (resolved, diagnostics) = match resolved(path, io)? {
        Ok(ok) => ok,
        Err(code) => return Ok(code),
    };
    let rows: Vec<(String, String)> = resolved
        .resolutions()
        .iter()
        .map(|((cc, ce), (tc, te))| (format!("{cc}.{ce}"), format!("{tc}.{te}")))
        .collect();
    let width = rows.iter().map(|(a, _)| a.chars().count()).max().unwrap_or(0);
    let mut text = String::new();
    for (from, to) in &rows {
        text.push_str(&format!("{from:<width$}  ->  {to}\n"));
    }
    text.push_str(&format!("{} resolution(s) in bundle {}\n", rows.len(), resolved.bundle().name));
    io.emit(&text, None)?;
    Ok(io.finish(diagnostics))
}

fn parse_refs(texts: &[String]) -> Result<BTreeSet<ElementRef>, Failure> {
    texts
        .iter()
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_element_ref(t).ok_or_else(|| Failure::Usage(format!("'{t}' is not a CASE.ELEMENT reference"))))
        .collect()
}

fn impact_cmd(path: &Path, changed: &[String], json: bool, io: &mut Io<'_>) -> Outcome {
    let changed = parse_refs(changed)?;
    let (resolved, diagnostics) = match resolved(path, io)? {
        Ok(ok) => ok,
        Err(code) => return Ok(code),
    };
    let report = impact(&resolved, &changed).map_err(|e| match e {
        ImpactError::UnknownCase(_) | ImpactError::UnknownElement(..) => Failure::Usage(e.to_string()),
    })?;
    let text = if json {
        report_json(&Report { impact: Some(&report), ..Default::default() })
    } else {
        impact_text(&report)
    };
    io.emit(&text, None)?;
    Ok(io.finish(diagnostics))
}

fn inline(path: &Path, cac: &str, output: Option<&Path>, io: &mut Io<'_>) -> Outcome {
    let cac = CaseId::new(cac).map_err(|e| Failure::Usage(e.to_string()))?;
    let (resolved, diagnostics) = match resolved(path, io)? {
        Ok(ok) => ok,
        Err(code) => return Ok(code),
    };
    let case = inline_bundle(&resolved, &cac).map_err(|e| match e {
        InlineError::UnknownCase(_) => Failure::Usage(e.to_string()),
    })?;
    io.emit(&print_case(&case), output)?;
    Ok(io.finish(diagnostics))
}

fn render(path: &Path, options: &RenderOptions, output: Option<&Path>, io: &mut Io<'_>) -> Outcome {
    if is_manifest(path) {
        let (resolved, diagnostics) = match resolved(path, io)? {
            Ok(ok) => ok,
            Err(code) => return Ok(code),
        };
        io.emit(&to_dot(&resolved, options), output)?;
        return Ok(io.finish(diagnostics));
    }
    let loaded = load(path)?;
    let Some(Input::Case(case)) = loaded.input else {
        return Ok(io.finish(loaded.diagnostics));
    };
    io.emit(&to_dot(&case, options), output)?;
    Ok(io.finish(loaded.diagnostics))
}

fn metrics(path: &Path, json: bool, io: &mut Io<'_>) -> Outcome {
    let loaded = load(path)?;
    let m = match &loaded.input {
        Some(Input::Case(case)) => metrics_case(case),
        Some(Input::Bundle(bundle)) => metrics_bundle(bundle),
        None => return Ok(io.finish(loaded.diagnostics)),
    };
    let text = if json {
        report_json(&Report { metrics: Some(&m), ..Default::default() })
    } else {
        metrics_table(&m)
    };
    io.emit(&text, None)?;
    Ok(io.finish(loaded.diagnostics))
}

fn fmt(path: &Path, check: bool, io: &mut Io<'_>) -> Outcome {
    if is_manifest(path) {
        return Err(Failure::Usage(format!("fmt formats case files (.acd), not {}", path.display())));
    }
    let text = read(path)?;
    let parsed = parse_case(&text, &path.display().to_string());
    let (Some(case), false) = (&parsed.case, parsed.has_errors()) else {
        return Ok(io.finish(parsed.diagnostics));
    };
    let printed = print_case(case);
    let code = io.finish(parsed.diagnostics.clone());
    if !check {
        io.emit(&printed, None)?;
        return Ok(code);
    }
    if printed != text {
        let _ = writeln!(io.err, "{}: not in canonical format", path.display());
        return Ok(EXIT_ERRORS);
    }
    Ok(code)
}

fn rules_text() -> String {
    let mut text = String::new();
    for (id, severity, description) in Rule::catalog() {
        text.push_str(&format!("{id:<3} {:<7} {description}\n", severity.as_str()));
    }
    text
}

/// The rule table as Markdown; `RULES.md` embeds exactly this text.
pub fn rules_markdown() -> String {
    let mut text = String::from("| Rule | Default severity | Checks |\n|------|------------------|--------|\n");
    for (id, severity, description) in Rule::catalog() {
        text.push_str(&format!("| {id} | {} | {} |\n", severity.as_str(), description.replace('|', "\\|")));
    }
    text
}
