//! `dlforecast`: runs the forecast pipeline end to end or one stage at a time.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dlforecast_core::model::LocationRegistry;
use dlforecast_core::pipeline::bulletin_from_conclusions;
use dlforecast_core::tournament::{strategy_by_name, STRATEGY_NAMES};
use dlforecast_core::{
    conclusions, load_kb, parse_source_map, parse_theory, render_document, run_pipeline, serialize_theory,
    validate_source_map, ConclusionSet, Format, KnowledgeBase, LabeledMap, LexiconTable, PipelineOptions, Severity,
    Templates, TimeRef,
};
use rust_decimal::Decimal;

#[derive(Parser)]
#[command(name = "dlforecast", version, about = "Blend competing weather forecasts with defeasible logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a defeasible theory from source maps.
    Tournament {
        #[command(flatten)]
        inputs: Inputs,
        /// Where to write the theory (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a theory file and print its conclusions as JSON.
    Reason {
        theory: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a bulletin from a conclusions file.
    Bulletin {
        conclusions: PathBuf,
        #[command(flatten)]
        render: Render,
        /// Issue time written into the bulletin header.
        #[arg(long, default_value = "h0")]
        now: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every stage: maps to bulletin.
    Pipeline {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        render: Render,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the generated theory here.
        #[arg(long)]
        emit_theory: Option<PathBuf>,
        /// Also write the conclusion set here.
        #[arg(long)]
        emit_conclusions: Option<PathBuf>,
        /// Print per-stage timings to stderr.
        #[arg(long)]
        timings: bool,
    },
    /// Check source maps and the knowledge base without running anything.
    Validate {
        #[arg(long = "source")]
        sources: Vec<PathBuf>,
        #[arg(long)]
        obs: Option<PathBuf>,
        #[arg(long)]
        kb: Option<PathBuf>,
        #[arg(long)]
        locations: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Inputs {
    /// Source map JSON (repeatable).
    #[arg(long = "source", required = true)]
    sources: Vec<PathBuf>,
    /// Observation map JSON.
    #[arg(long)]
    obs: Option<PathBuf>,
    /// Knowledge base JSON with model accuracies and overrides.
    #[arg(long)]
    kb: PathBuf,
    /// Reference time: ISO-8601 instant or symbolic `h0`.
    #[arg(long, default_value = "h0")]
    now: String,
    /// Override the knowledge base's minimum accuracy.
    #[arg(long)]
    min_accuracy: Option<Decimal>,
    /// Extra named points, JSON `{"Name": {"lat":…,"lon":…} | null}`.
    #[arg(long)]
    locations: Option<PathBuf>,
    #[arg(long, default_value = "biased-blend", value_parser = clap::builder::PossibleValuesParser::new(STRATEGY_NAMES))]
    strategy: String,
}

#[derive(Args)]
struct Render {
    /// Lexicon override JSON.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Sentence template JSON.
    #[arg(long)]
    templates: Option<PathBuf>,
    #[arg(long, default_value = "text", value_parser = ["text", "html", "json"])]
    format: String,
}

fn read(stage: &str, what: &str, path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("{stage} stage: cannot read {what} `{}`", path.display()))
}

fn write_out(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("cannot write `{}`", p.display())),
        None => std::io::stdout().write_all(content.as_bytes()).context("cannot write to stdout"),
    }
}

fn parse_now(now: &str) -> Result<TimeRef> {
    now.parse().map_err(|e| anyhow!("invalid --now `{now}`: {e}"))
}

fn load_registry(stage: &str, path: Option<&Path>) -> Result<LocationRegistry> {
    match path {
        Some(p) => LocationRegistry::from_json(&read(stage, "locations", p)?)
            .with_context(|| format!("{stage} stage: invalid locations `{}`", p.display())),
        None => Ok(LocationRegistry::default()),
    }
}

fn load_knowledge(stage: &str, path: &Path, min_accuracy: Option<Decimal>) -> Result<KnowledgeBase> {
    let mut kb = load_kb(&read(stage, "kb", path)?)
        .with_context(|| format!("{stage} stage: invalid kb `{}`", path.display()))?;
    if let Some(t) = min_accuracy {
        kb.set_min_accuracy(t).context("invalid --min-accuracy")?;
    }
    Ok(kb)
}

fn load_maps(inputs: &Inputs, registry: &LocationRegistry) -> Result<Vec<LabeledMap>> {
    let mut lams = Vec::new();
    for path in inputs.sources.iter().chain(&inputs.obs) {
        let doc = read("ingest", "source map", path)?;
        let maps = parse_source_map(&doc, registry)
            .with_context(|| format!("ingest stage: invalid source map `{}`", path.display()))?;
        lams.extend(maps);
    }
    Ok(lams)
}

struct Renderer {
    lexicon: LexiconTable,
    templates: Templates,
    format: Format,
}

impl Renderer {
    fn load(render: &Render) -> Result<Self> {
        let lexicon = match &render.lexicon {
            Some(p) => LexiconTable::from_json(&read("bulletin", "lexicon", p)?)
                .with_context(|| format!("bulletin stage: invalid lexicon `{}`", p.display()))?,
            None => LexiconTable::default(),
        };
        let templates = match &render.templates {
            Some(p) => Templates::from_json(&read("bulletin", "templates", p)?)
                .with_context(|| format!("bulletin stage: invalid templates `{}`", p.display()))?,
            None => Templates::default(),
        };
        Ok(Renderer {
            lexicon,
            templates,
            format: render.format.parse()?,
        })
    }
}

fn warn_undetermined(set: &ConclusionSet) {
    if !set.undetermined.is_empty() {
        let list: Vec<String> = set.undetermined.iter().map(ToString::to_string).collect();
        eprintln!("warning: undetermined literals (derivation loop): {}", list.join(", "));
    }
}

fn cmd_tournament(inputs: &Inputs, out: Option<&Path>) -> Result<()> {
    let registry = load_registry("ingest", inputs.locations.as_deref())?;
    let kb = load_knowledge("tournament", &inputs.kb, inputs.min_accuracy)?;
    let lams = load_maps(inputs, &registry)?;
    let now = parse_now(&inputs.now)?;
    let strategy = strategy_by_name(&inputs.strategy)?;
    let t = dlforecast_core::build_theory(&lams, &kb, &now, strategy.as_ref()).context("tournament stage")?;
    write_out(out, &serialize_theory(&t.theory))
}

fn cmd_reason(theory: &Path, out: Option<&Path>) -> Result<()> {
    let text = String::from_utf8(read("reason", "theory", theory)?)
        .with_context(|| format!("reason stage: theory `{}` is not UTF-8", theory.display()))?;
    let theory_doc =
        parse_theory(&text).with_context(|| format!("reason stage: invalid theory `{}`", theory.display()))?;
    let set = conclusions(&theory_doc);
    warn_undetermined(&set);
    write_out(out, &set.to_json())
}

fn cmd_bulletin(path: &Path, render: &Render, now: &str, out: Option<&Path>) -> Result<()> {
    let text = String::from_utf8(read("bulletin", "conclusions", path)?)
        .with_context(|| format!("bulletin stage: conclusions `{}` are not UTF-8", path.display()))?;
    let set = ConclusionSet::from_json(&text)
        .with_context(|| format!("bulletin stage: invalid conclusions `{}`", path.display()))?;
    let r = Renderer::load(render)?;
    let now = parse_now(now)?;
    let doc = bulletin_from_conclusions(&set, &r.lexicon, Some(&now)).context("bulletin stage")?;
    let rendered = render_document(&doc, r.format, &r.templates).context("bulletin stage")?;
    write_out(out, &rendered)
}

struct PipelineArgs<'a> {
    inputs: &'a Inputs,
    render: &'a Render,
    out: Option<&'a Path>,
    emit_theory: Option<&'a Path>,
    emit_conclusions: Option<&'a Path>,
    timings: bool,
}

fn cmd_pipeline(args: PipelineArgs<'_>) -> Result<()> {
    let inputs = args.inputs;
    let registry = load_registry("ingest", inputs.locations.as_deref())?;
    let kb = load_knowledge("tournament", &inputs.kb, inputs.min_accuracy)?;
    let lams = load_maps(inputs, &registry)?;
    let r = Renderer::load(args.render)?;
    let strategy = strategy_by_name(&inputs.strategy)?;
    let opts = PipelineOptions {
        kb: &kb,
        now: parse_now(&inputs.now)?,
        strategy: strategy.as_ref(),
        lexicon: &r.lexicon,
        templates: &r.templates,
        format: r.format,
    };
    let run = run_pipeline(&lams, &opts)?;
    warn_undetermined(&run.conclusions);
    if let Some(p) = args.emit_theory {
        write_out(Some(p), &serialize_theory(&run.tournament.theory))?;
    }
    if let Some(p) = args.emit_conclusions {
        write_out(Some(p), &run.conclusions.to_json())?;
    }
    if args.timings {
        for (stage, d) in &run.timings {
            eprintln!("{stage:<12} {:>10.3} ms", d.as_secs_f64() * 1000.0);
        }
    }
    write_out(args.out, &run.rendered)
}

fn cmd_validate(sources: &[PathBuf], obs: Option<&Path>, kb: Option<&Path>, locations: Option<&Path>) -> Result<()> {
    let registry = load_registry("validate", locations)?;
    let mut errors = 0;
    for path in sources.iter().map(PathBuf::as_path).chain(obs) {
        let doc = read("validate", "source map", path)?;
        for d in validate_source_map(&doc, &registry) {
            if d.severity == Severity::Error {
                errors += 1;
            }
            println!("{}: {d}", path.display());
        }
    }
    if let Some(p) = kb {
        if let Err(e) = load_kb(&read("validate", "kb", p)?) {
            errors += 1;
            println!("{}: error: {e}", p.display());
        }
    }
    if errors > 0 {
        bail!("validation found {errors} error(s)");
    }
    println!("ok");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Tournament { inputs, out } => cmd_tournament(inputs, out.as_deref()),
        Command::Reason { theory, out } => cmd_reason(theory, out.as_deref()),
        Command::Bulletin {
            conclusions,
            render,
            now,
            out,
        } => cmd_bulletin(conclusions, render, now, out.as_deref()),
        Command::Pipeline {
            inputs,
            render,
            out,
            emit_theory,
            emit_conclusions,
            timings,
        } => cmd_pipeline(PipelineArgs {
            inputs,
            render,
            out: out.as_deref(),
            emit_theory: emit_theory.as_deref(),
            emit_conclusions: emit_conclusions.as_deref(),
            timings: *timings,
        }),
        Command::Validate {
            sources,
            obs,
            kb,
            locations,
        } => cmd_validate(sources, obs.as_deref(), kb.as_deref(), locations.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
