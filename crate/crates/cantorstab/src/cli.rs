//! Command-line interface.
//!
//! Points are written `u(v)` for the eventually periodic word `u v v v ...`,
//! cylinders by their prefix (`""` or `ε` for the whole space) and elements
//! as generator words such as `a*b^-1*c`.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use cantorstab_core::conjugator::{
    build_conjugator, conjugation_suite, samples_off_first_stage, verify_certificate, Outcome,
};
use cantorstab_core::engine::{germ_classes, GermBudget};
use cantorstab_core::family::GroupFamily;
use cantorstab_core::search::{
    cylinder_orbit, local_minimality_witness, minimality_witness, rist_generators, rist_search, RistCache,
};
use cantorstab_core::{BoundaryPoint, Budgets, Cylinder, DepthSchedule, SearchBudget};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::doc::{
    self, CertificateDoc, ClassifyDoc, ElementDoc, Envelope, GermsDoc, LabelledElementDoc, LocalMinimalityDoc,
    MinimalityDoc, OrbitDoc, RistDoc, VerifyDoc,
};
use crate::error::{CliError, ExitCode};
use crate::family_file::load_family;
use crate::output::{scale_from_env, write_atomic};

#[derive(Debug, Parser)]
#[command(name = "cantorstab", version, about = "Stabilisers of group actions on Cantor space")]
pub struct Cli {
    /// Preset (grigorchuk, odometer-full, prefix-v) or a family JSON file.
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Exit with code 4 when a budget runs out before a definite answer.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BudgetArgs {
    /// Longest generator word searched.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_word_len: Option<u64>,
    /// States visited by a search before it gives up.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: Option<u64>,
    /// Section-closure budget of the identity test.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub id_budget: Option<u64>,
    /// State budget for images of points.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub point_budget: Option<u64>,
    /// Transporter retries, each with a word length two longer.
    #[arg(long, global = true)]
    pub retries: Option<u64>,
    /// Extra depth of W_i below V_i; 0 makes W_i = V_i.
    #[arg(long, global = true)]
    pub margin: Option<u64>,
    /// Depth to which germs and conjugates are compared.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub germ_depth: Option<u64>,
}

impl BudgetArgs {
    pub fn apply(&self, mut b: Budgets) -> Budgets {
        let set = |slot: &mut usize, v: Option<u64>| {
            if let Some(v) = v {
                *slot = v as usize;
            }
        };
        set(&mut b.search.max_word_len, self.max_word_len);
        set(&mut b.search.max_states, self.max_states);
        set(&mut b.id_budget, self.id_budget);
        set(&mut b.point_budget, self.point_budget);
        set(&mut b.retries, self.retries);
        set(&mut b.margin, self.margin);
        set(&mut b.germ_depth, self.germ_depth);
        b
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regular or singular point, with germ evidence on request.
    Classify {
        /// Eventually periodic point, e.g. 1(10).
        #[arg(long)]
        point: String,
        /// Also count germ classes of stabiliser elements.
        #[arg(long)]
        germs: bool,
        /// Longest stabiliser word used for germ evidence.
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
    },
    /// Build a conjugator certificate moving x to y.
    Conjugate {
        /// Source point.
        #[arg(long)]
        x: String,
        /// Target point.
        #[arg(long)]
        y: String,
        /// Builds stages at depths 1..=depth.
        #[arg(long, required_unless_present = "depths", value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        /// Explicit comma-separated depth schedule.
        #[arg(long, value_delimiter = ',', conflicts_with = "depth")]
        depths: Option<Vec<usize>>,
        /// Write the certificate JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate and optionally run the conjugation suite.
    Verify {
        /// Certificate JSON file.
        certificate: PathBuf,
        /// Rigid-stabiliser samples off U_1 for the conjugation suite.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Orbit of a seed cylinder, or the minimality witness over all seeds.
    Orbit {
        /// Seed cylinder prefix; all seeds when absent.
        #[arg(long)]
        seed: Option<String>,
        /// Cylinder depth.
        #[arg(long)]
        depth: usize,
    },
    /// Elements of the rigid stabiliser of a cylinder.
    Rist {
        /// Cylinder prefix; empty for the whole space.
        #[arg(long)]
        cylinder: String,
        /// Longest generator word enumerated.
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
        /// Use the family oracle, falling back to enumeration.
        #[arg(long)]
        oracle: bool,
        /// Also report the orbit structure on sub-cylinders of this depth.
        #[arg(long)]
        local_depth: Option<usize>,
    },
    /// Germ classes of stabiliser elements at a point.
    Germs {
        /// Eventually periodic point.
        #[arg(long)]
        point: String,
        /// Longest stabiliser word enumerated.
        #[arg(long, default_value_t = 4)]
        maxlen: usize,
        /// Neighbourhood depth; defaults to --germ-depth.
        #[arg(long)]
        max_depth: Option<usize>,
    },
}

/// Result of a command: the exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: ExitCode,
    pub stdout: String,
    pub stderr: String,
}

pub fn main_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::Usage.code() } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = run(&cli);
    let _ = out.write_all(result.stdout.as_bytes());
    let _ = err.write_all(result.stderr.as_bytes());
    result.code.code()
}

pub fn run(cli: &Cli) -> CommandOutput {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => CommandOutput {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn family(cli: &Cli) -> Result<GroupFamily, CliError> {
    match &cli.family {
        Some(spec) => load_family(spec),
        None => Err(CliError::Parse("--family is required".into())),
    }
}

fn budgets(cli: &Cli) -> Result<Budgets, CliError> {
    scale_from_env(cli.budgets.apply(Budgets::default()))
}

fn point(family: &GroupFamily, s: &str) -> Result<BoundaryPoint, CliError> {
    BoundaryPoint::parse(family.alphabet(), s).map_err(|e| CliError::Parse(format!("point {s:?}: {e}")))
}

fn cylinder(family: &GroupFamily, s: &str) -> Result<Cylinder, CliError> {
    Cylinder::parse(family.alphabet(), s).map_err(|e| CliError::Parse(format!("cylinder {s:?}: {e}")))
}

fn gen_names(family: &GroupFamily) -> Vec<String> {
    family.generators().iter().map(|(n, _)| n.clone()).collect()
}

struct Report {
    code: ExitCode,
    stdout: String,
    stderr: String,
}

impl Report {
    fn new<T: Serialize>(cli: &Cli, schema: &str, body: T, text: String, started: Instant) -> Self {
        let stdout = match cli.format {
            Format::Json => {
                let mut env = Envelope::new(schema, body);
                env.meta.elapsed_ms = Some(started.elapsed().as_millis() as u64);
                env.to_json()
            }
            Format::Text => text,
        };
        Report {
            code: ExitCode::Ok,
            stdout,
            stderr: String::new(),
        }
    }

    fn code(mut self, code: ExitCode) -> Self {
        self.code = code;
        self
    }

    fn finish(self) -> CommandOutput {
        CommandOutput {
            code: self.code,
            stdout: self.stdout,
            stderr: self.stderr,
        }
    }
}

fn budget_code(cli: &Cli, exceeded: bool) -> ExitCode {
    if cli.strict && exceeded {
        ExitCode::BudgetExceeded
    } else {
        ExitCode::Ok
    }
}

fn dispatch(cli: &Cli) -> Result<CommandOutput, CliError> {
    let started = Instant::now();
    match &cli.command {
        Command::Classify { point: p, germs, maxlen } => {
            let f = family(cli)?;
            let b = budgets(cli)?;
            let x = point(&f, p)?;
            let class = f.classify(&x);
            let report = if *germs {
                Some(germ_classes(&f, &x, germ_budget(b, *maxlen, None))?)
            } else {
                None
            };
            let doc = ClassifyDoc::new(f.name(), &x, class, report.as_ref());
            let mut text = format!("{class}\n");
            if let Some(g) = &doc.germs {
                text.push_str(&germs_text(g));
            }
            let exceeded = doc.germs.as_ref().is_some_and(germs_exceeded);
            Ok(Report::new(cli, doc::CLASSIFY_SCHEMA, doc, text, started)
                .code(budget_code(cli, exceeded))
                .finish())
        }
        Command::Conjugate {
            x,
            y,
            depth,
            depths,
            out,
        } => conjugate(cli, x, y, *depth, depths.as_deref(), out.as_deref(), started),
        Command::Verify { certificate, samples } => verify(cli, certificate, *samples, started),
        Command::Orbit { seed, depth } => {
            let f = family(cli)?;
            let b = budgets(cli)?;
            // Word length is unbounded unless asked for: Schreier graphs can be long paths.
            let search = SearchBudget {
                max_word_len: cli.budgets.max_word_len.map_or(usize::MAX, |v| v as usize),
                max_states: b.search.max_states,
            };
            let gens = f.generator_elements();
            let names = gen_names(&f);
            match seed {
                Some(s) => {
                    let seed = cylinder(&f, s)?;
                    let cert = cylinder_orbit(&gens, &seed, *depth, search)?;
                    let doc = OrbitDoc::new(&cert, &names);
                    let text = format!(
                        "{} cylinders reached from [{}] at depth {}{}\n",
                        doc.reached_count,
                        doc.seed,
                        doc.depth,
                        if doc.truncated { " (truncated)" } else { "" }
                    );
                    let exceeded = doc.truncated;
                    Ok(Report::new(cli, doc::ORBIT_SCHEMA, doc, text, started)
                        .code(budget_code(cli, exceeded))
                        .finish())
                }
                None => {
                    let w = minimality_witness(&gens, f.alphabet(), *depth, search)?;
                    let doc = MinimalityDoc::new(f.name(), &w, &names);
                    let text = format!(
                        "minimality {} ({}){}\n",
                        doc.holds,
                        doc.label,
                        if doc.truncated { ", truncated" } else { "" }
                    );
                    let exceeded = doc.truncated;
                    Ok(Report::new(cli, doc::MINIMALITY_SCHEMA, doc, text, started)
                        .code(budget_code(cli, exceeded))
                        .finish())
                }
            }
        }
        Command::Rist {
            cylinder: c,
            maxlen,
            oracle,
            local_depth,
        } => {
            let f = family(cli)?;
            let b = budgets(cli)?;
            let u = cylinder(&f, c)?;
            let search = SearchBudget {
                max_word_len: *maxlen,
                max_states: b.search.max_states,
            };
            let mut cache = RistCache::new();
            let (source, elements) = if *oracle {
                let gens = rist_generators(&f, &u, search, b.id_budget, &mut cache)?;
                let from_oracle = f.rist_oracle(&u)?.is_some_and(|o| !o.is_empty());
                let labelled = gens
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (format!("#{i}"), g.clone()))
                    .collect::<Vec<_>>();
                (if from_oracle { "oracle" } else { "search" }, labelled)
            } else {
                ("search", rist_search(&f, &u, search, b.id_budget, &mut cache)?)
            };
            let local = match local_depth {
                Some(d) => Some(LocalMinimalityDoc::new(&local_minimality_witness(
                    &f,
                    &u,
                    *d,
                    search,
                    b.id_budget,
                    &mut cache,
                )?)),
                None => None,
            };
            let doc = RistDoc {
                family: f.name().to_string(),
                cylinder: doc::cylinder_string(&u),
                source: source.to_string(),
                max_word_len: *maxlen,
                elements: elements
                    .iter()
                    .map(|(label, g)| LabelledElementDoc {
                        label: label.clone(),
                        element: ElementDoc::from_element(g),
                    })
                    .collect(),
                local_minimality: local,
            };
            let mut text = format!("{} elements of rist({}) from {}\n", doc.elements.len(), u, doc.source);
            for (label, g) in &elements {
                text.push_str(&format!("  {label}: {g}\n"));
            }
            if let Some(l) = &doc.local_minimality {
                text.push_str(&format!(
                    "local minimality at depth {}: {} (minimal on u: {})\n",
                    l.depth, l.holds, l.minimal_on_u
                ));
            }
            let exceeded = doc.local_minimality.as_ref().is_some_and(|l| l.truncated);
            Ok(Report::new(cli, doc::RIST_SCHEMA, doc, text, started)
                .code(budget_code(cli, exceeded))
                .finish())
        }
        Command::Germs {
            point: p,
            maxlen,
            max_depth,
        } => {
            let f = family(cli)?;
            let b = budgets(cli)?;
            let x = point(&f, p)?;
            let report = germ_classes(&f, &x, germ_budget(b, *maxlen, *max_depth))?;
            let doc = GermsDoc::new(&report);
            let text = germs_text(&doc);
            let exceeded = germs_exceeded(&doc);
            Ok(Report::new(cli, doc::GERMS_SCHEMA, doc, text, started)
                .code(budget_code(cli, exceeded))
                .finish())
        }
    }
}

fn germ_budget(b: Budgets, maxlen: usize, max_depth: Option<usize>) -> GermBudget {
    GermBudget {
        max_word_len: maxlen,
        max_depth: max_depth.unwrap_or(b.germ_depth),
        id_budget: b.id_budget,
        max_states: b.point_budget,
        max_elements: b.search.max_states,
    }
}

fn germs_exceeded(g: &GermsDoc) -> bool {
    g.undecided > 0 || g.classes.iter().any(|c| c.provisional)
}

fn germs_text(g: &GermsDoc) -> String {
    let mut s = format!(
        "{} germ classes at {} (lower bound {}, {} stabilising elements)\n",
        g.classes.len(),
        g.point,
        g.lower_bound,
        g.stabilising
    );
    for c in &g.classes {
        s.push_str(&format!(
            "  {}: {}{} [{} members]\n",
            c.representative,
            c.verdict,
            if c.provisional { " provisional" } else { "" },
            c.members
        ));
    }
    s
}

fn conjugate(
    cli: &Cli,
    x: &str,
    y: &str,
    depth: Option<u64>,
    depths: Option<&[usize]>,
    out: Option<&std::path::Path>,
    started: Instant,
) -> Result<CommandOutput, CliError> {
    let f = family(cli)?;
    let b = budgets(cli)?;
    let (x, y) = (point(&f, x)?, point(&f, y)?);
    let schedule = match (depth, depths) {
        (_, Some(ds)) => DepthSchedule::new(ds.to_vec()).map_err(|e| CliError::Parse(e.to_string()))?,
        (Some(d), None) => DepthSchedule::up_to(d as usize),
        (None, None) => return Err(CliError::Parse("--depth or --depths is required".into())),
    };
    let built = build_conjugator(&f, &x, &y, &schedule, b, &mut RistCache::new());
    let (cert, failure) = match built {
        Ok(c) => (c, None),
        Err(fail) => (fail.partial, Some(fail.error)),
    };
    let mut env = Envelope::new(doc::CERTIFICATE_SCHEMA, CertificateDoc::from_certificate(&cert));
    env.meta.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    env.meta.warnings = cert.warnings.clone();
    if let Some(e) = &failure {
        env.meta.status = Some(format!("partial: {e}"));
    }
    let json = env.to_json();
    if let Some(path) = out {
        write_atomic(path, &json)?;
    }
    let mut stderr = String::new();
    for w in &cert.warnings {
        stderr.push_str(&format!("warning: {w}\n"));
    }
    let code = match &failure {
        Some(e) => {
            stderr.push_str(&format!(
                "error: stage {} failed: {e}\n",
                cert.stages.len()
            ));
            ExitCode::SearchFailed
        }
        None => ExitCode::Ok,
    };
    let stdout = match (cli.format, out) {
        (Format::Json, None) => json,
        (Format::Json, Some(_)) => String::new(),
        (Format::Text, _) => {
            let mut s = format!(
                "{} stages from {} to {} over {}\n",
                cert.stages.len() - 1,
                cert.x,
                cert.y,
                cert.family
            );
            for st in &cert.stages[1..] {
                s.push_str(&format!(
                    "  stage {}: U={} V={} W={} |g|={}\n",
                    st.index,
                    st.u,
                    st.v,
                    st.w,
                    st.g.size()
                ));
            }
            if out.is_none() {
                s.push_str(&json);
            }
            s
        }
    };
    Ok(CommandOutput { code, stdout, stderr })
}

fn verify(cli: &Cli, path: &std::path::Path, samples: usize, started: Instant) -> Result<CommandOutput, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let env = doc::read_envelope::<CertificateDoc>(&text, doc::CERTIFICATE_SCHEMA)?;
    let f = match &cli.family {
        Some(spec) => load_family(spec)?,
        None => GroupFamily::preset(&env.body.family).ok_or_else(|| {
            CliError::Schema(format!(
                "certificate family {:?} is not a preset; pass --family",
                env.body.family
            ))
        })?,
    };
    if f.name() != env.body.family {
        return Err(CliError::Schema(format!(
            "certificate is for {:?}, not {:?}",
            env.body.family,
            f.name()
        )));
    }
    let cert = env.body.to_certificate(&f)?;
    // The certificate's own budgets, overridden by explicit flags only.
    let b = cli.budgets.apply(cert.budgets);
    let report = verify_certificate(&cert, b);
    let suite = if samples > 0 {
        let picked = samples_off_first_stage(&f, &cert, samples, b, &mut RistCache::new())?;
        Some(conjugation_suite(&cert, &picked, b))
    } else {
        None
    };
    let doc = VerifyDoc::new(&report, suite.as_ref());
    let mut text = String::new();
    for c in &report.checks {
        if c.outcome != Outcome::Pass {
            text.push_str(&format!("{} stage {} {}: {}\n", c.outcome, c.stage, c.name, c.detail));
        }
    }
    text.push_str(&format!(
        "{} checks: {} PASS, {} FAIL, {} UNKNOWN\n",
        report.checks.len(),
        report.count(Outcome::Pass),
        report.count(Outcome::Fail),
        report.count(Outcome::Unknown)
    ));
    if let Some(s) = &doc.suite {
        text.push_str(&format!(
            "conjugation suite: {} PASS, {} FAIL, {} UNKNOWN, {} SKIPPED\n",
            s.pass, s.fail, s.unknown, s.skipped
        ));
    }
    text.push_str(if doc.passed { "PASS\n" } else { "FAIL\n" });
    let failed = report.count(Outcome::Fail) > 0 || doc.suite.as_ref().is_some_and(|s| s.fail > 0);
    let code = if doc.passed {
        ExitCode::Ok
    } else if !failed && cli.strict {
        ExitCode::BudgetExceeded
    } else {
        ExitCode::VerificationFailed
    };
    Ok(Report::new(cli, doc::VERIFY_SCHEMA, doc, text, started).code(code).finish())
}
