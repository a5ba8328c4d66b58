//! One-shot commands, scripts and the REPL behind the `nonarch` binary.
//!
//! Every command produces a [`Document`]: a JSON value with exact rational
//! strings plus an exit code (0 success, 2 unresolved, 1 error or failed demo).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonarch::calculus::{derivative_with, limit, taylor, LimitOutcome};
use nonarch::lab::{self, DemoReport, SequenceSpec, Status};
use nonarch::order::FieldKind;
use nonarch::series::Precision;
use nonarch::syntax::parse_fn;
use nonarch::{parse_element_with, Element, Error, FieldContext, Rational};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
}

/// Settings shared by every command of a session.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub field: FieldKind,
    pub cutoff: Rational,
    pub terms: usize,
    pub format: Format,
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            field: FieldKind::LeviCivita,
            cutoff: Rational::from(16),
            terms: 512,
            format: Format::Plain,
            seed: 0,
        }
    }
}

impl SessionConfig {
    pub fn precision(&self) -> Precision {
        Precision {
            cutoff: self.cutoff.clone(),
            max_terms: self.terms,
        }
    }

    pub fn context(&self) -> FieldContext {
        FieldContext::with_precision(self.field, self.precision())
    }

    /// Applies `:set key value`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "field" => self.field = parse_field(value)?,
            "cutoff" => self.cutoff = parse_cutoff(value)?,
            "terms" => self.terms = parse_terms(value)?,
            "format" => {
                self.format = Format::from_str(value, true).map_err(|_| format!("unknown format {value:?}"))?
            }
            "seed" => self.seed = value.parse().map_err(|_| format!("bad seed {value:?}"))?,
            _ => return Err(format!("unknown setting {key:?} (field, cutoff, terms, format, seed)")),
        }
        Ok(())
    }

    fn describe(&self) -> Value {
        json!({
            "field": self.field.name(),
            "cutoff": self.cutoff.to_string(),
            "terms": self.terms,
            "format": if self.format == Format::Json { "json" } else { "plain" },
            "seed": self.seed,
        })
    }
}

fn parse_field(s: &str) -> Result<FieldKind, String> {
    s.parse::<FieldKind>().map_err(|e| e.to_string())
}

fn parse_cutoff(s: &str) -> Result<Rational, String> {
    let c: Rational = s.parse().map_err(|e: Error| e.to_string())?;
    if !c.is_positive() {
        return Err("cutoff must be positive".into());
    }
    Ok(c)
}

fn parse_terms(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("term budget must be a positive integer, got {s:?}")),
    }
}

/// Flags accepted both on the command line and on REPL lines.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// q, ratfunc, laurent, puiseux, puiseux:N or levicivita.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Absolute exponent cutoff for series expansions.
    #[arg(long, global = true)]
    pub cutoff: Option<String>,
    /// Hard ceiling on terms produced by one expansion.
    #[arg(long, global = true)]
    pub terms: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, config: &SessionConfig) -> Result<SessionConfig, String> {
        let mut c = config.clone();
        if let Some(f) = &self.field {
            c.field = parse_field(f)?;
        }
        if let Some(v) = &self.cutoff {
            c.cutoff = parse_cutoff(v)?;
        }
        if let Some(v) = &self.terms {
            c.terms = parse_terms(v)?;
        }
        if let Some(v) = self.format {
            c.format = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    NonArchimedean,
    Weierstrass,
    Monotone,
    Cauchy,
    Cantor,
    Frechet,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate an element expression in the current field.
    Eval {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Compare two elements: Less, Equal or Greater.
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Zero, NonzeroInfinitesimal, FiniteAppreciable or InfinitelyLarge.
    Classify {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Standard part of a finite element.
    St {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Valuation (`inf` for zero).
    Val {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Valuation norm `e^(-v)`.
    Norm {
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Derivative of a function of `x` at a rational point.
    Diff {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Infinitesimal increment (default t).
        #[arg(long, default_value = "t")]
        dx: String,
    },
    /// Limit of a function of `x` at a rational point.
    Limit {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Taylor coefficients of a function of `x` at a rational point.
    Taylor {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Run a completeness demo.
    Demo {
        #[arg(value_enum)]
        which: DemoKind,
        /// Size parameter (per-demo default).
        #[arg(long)]
        n: Option<u64>,
        /// First sequence for frechet, e.g. `periodic:0,1`.
        #[arg(long)]
        a: Option<String>,
        /// Second sequence for frechet, e.g. `const:1/2`.
        #[arg(long)]
        b: Option<String>,
    },
    /// Check field, order and valuation axioms on random samples.
    CheckAxioms {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Interactive loop (the default with no command).
    Repl,
}

#[derive(Debug, Parser)]
#[command(name = "nonarch", version, about = "Exact arithmetic and calculus in non-Archimedean ordered fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Run commands from a file, one per line.
    #[arg(long)]
    pub script: Option<std::path::PathBuf>,
}

/// A REPL or script line after `let` and `:set` are peeled off.
#[derive(Debug, Parser)]
#[command(name = "", no_binary_name = true, disable_version_flag = true)]
struct Line {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Document {
    pub code: i32,
    pub json: Value,
    pub plain: String,
}

impl Document {
    fn ok(command: &str, config: &SessionConfig, result: Value, plain: String) -> Document {
        Document {
            code: EXIT_OK,
            json: json!({"command": command, "field": config.field.name(), "status": "ok", "result": result}),
            plain,
        }
    }

    fn error(command: &str, config: &SessionConfig, err: &Error) -> Document {
        let (code, status) = if err.is_unresolved() {
            (EXIT_UNRESOLVED, "unresolved")
        } else {
            (EXIT_ERROR, "error")
        };
        let kind = error_kind(err);
        Document {
            code,
            json: json!({
                "command": command,
                "field": config.field.name(),
                "status": status,
                "error": {"kind": kind, "message": err.to_string()},
            }),
            plain: format!("error: {kind}: {err}"),
        }
    }

    fn usage(message: String) -> Document {
        Document {
            code: EXIT_ERROR,
            json: json!({"command": "usage", "status": "error", "error": {"kind": "Usage", "message": message}}),
            plain: message,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => self.plain.clone(),
            Format::Json => self.json.to_string(),
        }
    }
}

pub fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::DivisionByZero => "DivisionByZero",
        Error::Parse { .. } => "ParseError",
        Error::UnresolvedAtTruncation { .. } => "UnresolvedAtTruncation",
        Error::NotRepresentable(_) => "NotRepresentable",
        Error::NotFinite => "NotFinite",
        Error::Domain(_) => "Domain",
        Error::BudgetExceeded { .. } => "BudgetExceeded",
        Error::ExponentGroupViolation(_) => "ExponentGroupViolation",
        Error::UnsupportedSpec(_) => "UnsupportedSpec",
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Eval { .. } => "eval",
        Command::Cmp { .. } => "cmp",
        Command::Classify { .. } => "classify",
        Command::St { .. } => "st",
        Command::Val { .. } => "val",
        Command::Norm { .. } => "norm",
        Command::Diff { .. } => "diff",
        Command::Limit { .. } => "limit",
        Command::Taylor { .. } => "taylor",
        Command::Demo { .. } => "demo",
        Command::CheckAxioms { .. } => "check-axioms",
        Command::Repl => "repl",
    }
}

/// A binding is kept as source text so it can be rebuilt after `:set field`.
#[derive(Debug, Default)]
pub struct Session {
    pub config: SessionConfig,
    sources: Vec<(String, String)>,
    vars: HashMap<String, Element>,
}

impl Session {
    pub fn new(config: SessionConfig) -> Session {
        Session {
            config,
            sources: Vec::new(),
            vars: HashMap::new(),
        }
    }

    fn parse(&self, text: &str, config: &SessionConfig) -> Result<Element, Error> {
        parse_element_with(text, &config.context(), &self.vars)
    }

    /// Runs one command under `config`.
    pub fn run_with(&self, cmd: &Command, config: &SessionConfig) -> Document {
        let name = command_name(cmd);
        match self.execute(cmd, config) {
            Ok(doc) => doc,
            Err(e) => Document::error(name, config, &e),
        }
    }

    pub fn run(&self, cmd: &Command) -> Document {
        self.run_with(cmd, &self.config)
    }

    fn execute(&self, cmd: &Command, config: &SessionConfig) -> Result<Document, Error> {
        let name = command_name(cmd);
        let prec = config.precision();
        let doc = match cmd {
            Command::Eval { expr } => {
                let x = self.parse(&expr.join(" "), config)?;
                Document::ok(name, config, x.to_json(), x.to_string())
            }
            Command::Cmp { a, b } => {
                let ord = self.parse(a, config)?.compare(&self.parse(b, config)?)?;
                let word = match ord {
                    Ordering::Less => "Less",
                    Ordering::Equal => "Equal",
                    Ordering::Greater => "Greater",
                };
                Document::ok(name, config, json!(word), word.into())
            }
            Command::Classify { expr } => {
                let c = self.parse(&expr.join(" "), config)?.classify()?;
                Document::ok(name, config, serde_json::to_value(c).expect("serializes"), c.to_string())
            }
            Command::St { expr } => {
                let r = self.parse(&expr.join(" "), config)?.st()?;
                Document::ok(name, config, json!(r.to_string()), r.to_string())
            }
            Command::Val { expr } => {
                let v = self.parse(&expr.join(" "), config)?.valuation()?;
                Document::ok(name, config, json!(v.to_string()), v.to_string())
            }
            Command::Norm { expr } => {
                let n = self.parse(&expr.join(" "), config)?.norm()?;
                let v = n.valuation.to_string();
                Document::ok(
                    name,
                    config,
                    json!({"valuation": v, "display": n.display}),
                    format!("e^(-{v}) ~ {}", n.display),
                )
            }
            Command::Diff { f, at, dx } => {
                let f = parse_fn(f)?;
                let r: Rational = at.parse()?;
                let dx_ctx = FieldContext::with_precision(FieldKind::LeviCivita, prec.clone());
                let dx = parse_element_with(dx, &dx_ctx, &HashMap::new())?;
                let dx = dx.as_series().expect("levicivita elements are series");
                let d = derivative_with(&f, &r, dx, &prec)?;
                Document::ok(name, config, json!(d.to_string()), d.to_string())
            }
            Command::Limit { f, at } => {
                let f = parse_fn(f)?;
                let r: Rational = at.parse()?;
                let (label, witnesses) = match limit(&f, &r, &prec)? {
                    LimitOutcome::Limit(v) => {
                        let result = json!({"outcome": "Limit", "value": v.to_string()});
                        return Ok(Document::ok(name, config, result, v.to_string()));
                    }
                    LimitOutcome::NoLimit(w) => ("NoLimit", w),
                    LimitOutcome::Unresolved(w) => ("Unresolved", w),
                };
                let mut plain = label.to_string();
                for w in &witnesses {
                    let _ = write!(plain, "\n  dx = {}: {:?}", w.dx, w.approach);
                }
                let witnesses = serde_json::to_value(&witnesses).expect("witnesses serialize");
                let mut doc = Document::ok(name, config, json!({"outcome": label, "witnesses": witnesses}), plain);
                if label == "Unresolved" {
                    doc.code = EXIT_UNRESOLVED;
                    doc.json["status"] = json!("unresolved");
                }
                doc
            }
            Command::Taylor { f, at, order } => {
                let f = parse_fn(f)?;
                let r: Rational = at.parse()?;
                let coeffs: Vec<String> = taylor(&f, &r, *order, &prec)?.iter().map(|c| c.to_string()).collect();
                let plain = format!("[{}]", coeffs.join(", "));
                Document::ok(name, config, json!(coeffs), plain)
            }
            Command::Demo { which, n, a, b } => {
                let report = run_demo(*which, *n, a.as_deref(), b.as_deref(), config)?;
                match report {
                    DemoOutput::Report(r) => report_document(name, config, &r),
                    DemoOutput::Order(a, b, ord) => {
                        let word = format!("{ord:?}");
                        Document::ok(
                            name,
                            config,
                            json!({"a": a, "b": b, "order": word}),
                            format!("{a} vs {b}: {word}"),
                        )
                    }
                }
            }
            Command::CheckAxioms { cases } => {
                let r = lab::check_axioms(config.field, *cases, config.seed, &prec);
                report_document(name, config, &r)
            }
            Command::Repl => Document::usage("repl cannot be nested".into()),
        };
        Ok(doc)
    }

    /// Handles one REPL or script line; `None` for blank lines and comments.
    pub fn line(&mut self, text: &str) -> Option<Document> {
        let text = text.trim();
        if text.is_empty() || text.starts_with('#') {
            return None;
        }
        if let Some(rest) = text.strip_prefix(':') {
            return Some(self.meta(rest));
        }
        if let Some(rest) = text.strip_prefix("let ") {
            return Some(self.bind(rest));
        }
        let Some(words) = shlex::split(text) else {
            return Some(Document::usage("unbalanced quotes".into()));
        };
        let line = match Line::try_parse_from(words) {
            Ok(l) => l,
            Err(e) => return Some(Document::usage(e.to_string().trim_end().to_string())),
        };
        let config = match line.overrides.apply(&self.config) {
            Ok(c) => c,
            Err(e) => return Some(Document::usage(e)),
        };
        Some(self.run_with(&line.command, &config))
    }

    fn meta(&mut self, rest: &str) -> Document {
        let words: Vec<&str> = rest.split_whitespace().collect();
        match words.as_slice() {
            ["set", key, value] => match self.config.set(key, value) {
                Ok(()) => {
                    let dropped = if *key == "field" { self.rebind() } else { Vec::new() };
                    let mut plain = format!("{key} = {value}");
                    if !dropped.is_empty() {
                        let _ = write!(plain, " (dropped: {})", dropped.join(", "));
                    }
                    Document::ok("set", &self.config, json!({"config": self.config.describe(), "dropped": dropped}), plain)
                }
                Err(e) => Document::usage(e),
            },
            ["show"] => {
                let mut plain = self.config.describe().to_string();
                for (name, _) in &self.sources {
                    if let Some(v) = self.vars.get(name) {
                        let _ = write!(plain, "\n{name} = {v}");
                    }
                }
                Document::ok("show", &self.config, self.config.describe(), plain)
            }
            ["help"] => Document::ok("help", &self.config, json!(HELP), HELP.into()),
            _ => Document::usage(format!("unknown directive :{rest} (try :help)")),
        }
    }

    fn bind(&mut self, rest: &str) -> Document {
        let Some((name, expr)) = rest.split_once('=') else {
            return Document::usage("expected `let NAME = EXPR`".into());
        };
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || name == "t" {
            return Document::usage(format!("cannot bind {name:?}"));
        }
        match self.parse(expr.trim(), &self.config) {
            Ok(v) => {
                let doc = Document::ok("let", &self.config, json!({"name": name, "value": v.to_json()}), format!("{name} = {v}"));
                self.sources.retain(|(n, _)| n != name);
                self.sources.push((name.to_string(), expr.trim().to_string()));
                self.vars.insert(name.to_string(), v);
                doc
            }
            Err(e) => Document::error("let", &self.config, &e),
        }
    }

    /// Re-evaluates bindings in the new field; returns the names that fail.
    fn rebind(&mut self) -> Vec<String> {
        self.vars.clear();
        let mut dropped = Vec::new();
        let sources = std::mem::take(&mut self.sources);
        for (name, expr) in sources {
            match self.parse(&expr, &self.config) {
                Ok(v) => {
                    self.vars.insert(name.clone(), v);
                    self.sources.push((name, expr));
                }
                Err(_) => dropped.push(name),
            }
        }
        dropped
    }

    /// Runs every line of `input`, writing rendered documents to `out`.
    /// Returns the worst exit code seen (error over unresolved over ok).
    pub fn run_lines<R: BufRead, W: std::io::Write>(&mut self, input: R, out: &mut W, prompt: bool) -> std::io::Result<i32> {
        let mut worst = EXIT_OK;
        if prompt {
            write!(out, "> ")?;
            out.flush()?;
        }
        for line in input.lines() {
            let line = line?;
            if matches!(line.trim(), ":quit" | ":q" | ":exit") {
                break;
            }
            if let Some(doc) = self.line(&line) {
                writeln!(out, "{}", doc.render(self.config.format))?;
                worst = worse(worst, doc.code);
            }
            if prompt {
                write!(out, "> ")?;
                out.flush()?;
            }
        }
        Ok(worst)
    }
}

fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        EXIT_OK => 0,
        EXIT_UNRESOLVED => 1,
        _ => 2,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

const HELP: &str = "commands: eval EXPR | cmp A B | classify EXPR | st EXPR | val EXPR | norm EXPR
          diff F --at R [--dx D] | limit F --at R | taylor F --at R [--order N]
          demo NAME [--n N] [--a SPEC --b SPEC] | check-axioms [--cases N]
session:  let NAME = EXPR | :set field|cutoff|terms|format|seed VALUE | :show | :quit
quote arguments that contain spaces, e.g. cmp \"1 + t\" \"1\"";

enum DemoOutput {
    Report(DemoReport),
    Order(String, String, lab::FrechetOrder),
}

fn run_demo(which: DemoKind, n: Option<u64>, a: Option<&str>, b: Option<&str>, config: &SessionConfig) -> Result<DemoOutput, Error> {
    let field = config.field;
    let report = match which {
        DemoKind::NonArchimedean => lab::demo_non_archimedean(field, n.unwrap_or(1000))?,
        DemoKind::Weierstrass => lab::demo_weierstrass_failure(field, n.unwrap_or(100))?,
        DemoKind::Monotone => lab::demo_monotone_failure(field, n.unwrap_or(50))?,
        DemoKind::Cauchy => lab::demo_cauchy_completeness(n.unwrap_or(50))?,
        DemoKind::Cantor => lab::demo_cantor_gap(n.unwrap_or(12))?,
        DemoKind::Frechet => match (a, b) {
            (None, None) => lab::demo_frechet(),
            (Some(a), Some(b)) => {
                let (sa, sb) = (SequenceSpec::parse(a)?, SequenceSpec::parse(b)?);
                let ord = lab::frechet_compare(&sa, &sb)?;
                return Ok(DemoOutput::Order(sa.to_string(), sb.to_string(), ord));
            }
            _ => return Err(Error::UnsupportedSpec("frechet needs both --a and --b".into())),
        },
    };
    Ok(DemoOutput::Report(report))
}

fn report_document(name: &str, config: &SessionConfig, report: &DemoReport) -> Document {
    let (code, status) = match report.status() {
        Status::Pass | Status::NotApplicable => (EXIT_OK, "ok"),
        Status::Unresolved => (EXIT_UNRESOLVED, "unresolved"),
        Status::Fail => (EXIT_ERROR, "fail"),
    };
    Document {
        code,
        json: json!({"command": name, "field": config.field.name(), "status": status, "result": report.to_json()}),
        plain: report.to_string(),
    }
}
