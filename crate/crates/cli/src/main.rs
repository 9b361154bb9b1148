use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use ckb_core::dsl::{self, Diagnostic};
use ckb_core::graph::{compose_instances, zoom, NodePath};
use ckb_core::{
    compose_types, rank_candidates, render, send, timeline_csv, Kb, Message, Scalar, Target, Value,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ckb",
    version,
    about = "Load, inspect and query two-level object knowledge bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate knowledge-base files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print an instance's inherited attributes or its internal tree.
    Show {
        file: PathBuf,
        instance: String,
        #[command(flatten)]
        view: View,
        /// Re-root on the sub-object at this path first.
        #[arg(long)]
        zoom: Option<String>,
        #[arg(long)]
        at: Option<String>,
    },
    /// Rank every instance of a type against an observed object.
    Match {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        observe: PathBuf,
        #[arg(long = "type")]
        type_name: String,
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Presence and reliability of each sub-object over time, as CSV.
    Timeline {
        file: PathBuf,
        instance: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        step: String,
    },
    /// Compose two types (and optionally two instances) and write the result.
    Compose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        type_a: String,
        #[arg(long)]
        type_b: String,
        #[arg(long = "as")]
        name: String,
        #[arg(long, requires_all = ["inst_b", "id"])]
        inst_a: Option<String>,
        #[arg(long, requires_all = ["inst_a", "id"])]
        inst_b: Option<String>,
        #[arg(long, requires_all = ["inst_a", "inst_b"])]
        id: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Send a message to an instance and print the reply.
    Send {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        to: String,
        #[arg(long)]
        msg: String,
        #[arg(long = "arg", allow_hyphen_values = true)]
        args: Vec<String>,
        #[arg(long)]
        at: Option<String>,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct View {
    #[arg(long)]
    attrs: bool,
    #[arg(long)]
    tree: bool,
}

/// A failed command: what to print on stderr and the exit code.
struct Failure {
    code: u8,
    lines: Vec<String>,
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            lines: vec![format!("error: {e}")],
        }
    }

    fn usage(msg: String) -> Self {
        Failure {
            code: 2,
            lines: vec![format!("error: {msg}")],
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn report(diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{d}");
    }
}

fn diagnostics_failure(diags: Vec<Diagnostic>) -> Failure {
    Failure {
        code: 1,
        lines: diags.iter().map(Diagnostic::to_string).collect(),
    }
}

/// Loads files in order into one base; later files may use earlier types.
fn load(files: &[PathBuf]) -> Result<Kb, Failure> {
    let mut kb = Kb::new();
    for path in files {
        let text = read(path)?;
        let warnings = dsl::load_into(&mut kb, &path.display().to_string(), &text)
            .map_err(diagnostics_failure)?;
        report(&warnings);
    }
    Ok(kb)
}

fn time(raw: &Option<String>) -> Result<f64, Failure> {
    match raw {
        None => Ok(0.0),
        Some(s) => number(s),
    }
}

fn number(s: &str) -> Result<f64, Failure> {
    f64::parse_decimal(s).ok_or_else(|| Failure::usage(format!("`{s}` is not a decimal number")))
}

fn argument(s: &str) -> Value<f64> {
    match f64::parse_decimal(s) {
        Some(n) => Value::Number(n),
        None => Value::Symbol(s.to_string()),
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { files } => load(&files).map(|_| String::new()),
        Command::Show {
            file,
            instance,
            view,
            zoom: zoom_path,
            at,
        } => {
            let kb = load(&[file])?;
            let mut inst = kb.instance(&instance).map_err(Failure::domain)?.clone();
            if let Some(p) = zoom_path {
                let path: NodePath = p.parse().map_err(Failure::domain)?;
                inst = zoom(&inst, &path).map_err(Failure::domain)?;
            }
            if view.tree {
                render::tree_text(&kb, &inst, &time(&at)?).map_err(Failure::domain)
            } else if at.is_some() {
                render::attributes_at_text(&kb, &inst, &time(&at)?).map_err(Failure::domain)
            } else {
                Ok(render::attributes_text(&inst))
            }
        }
        Command::Match {
            files,
            observe,
            type_name,
            at,
            json,
        } => {
            let kb = load(&files)?;
            let t = time(&at)?;
            let text = read(&observe)?;
            let obs = dsl::parse_observation_file(&kb, &observe.display().to_string(), &text)
                .map_err(diagnostics_failure)?;
            report(&obs.warnings);
            let reports =
                rank_candidates(&kb, &type_name, &obs.instance, &t).map_err(Failure::domain)?;
            Ok(if json {
                render::json_text(&render::match_report_json(
                    &obs.instance.id,
                    &type_name,
                    &t,
                    &reports,
                ))
            } else {
                render::match_report_text(&reports)
            })
        }
        Command::Timeline {
            file,
            instance,
            from,
            to,
            step,
        } => {
            let kb = load(&[file])?;
            let inst = kb.instance(&instance).map_err(Failure::domain)?;
            timeline_csv(&kb, inst, &number(&from)?, &number(&to)?, &number(&step)?)
                .map_err(Failure::domain)
        }
        Command::Compose {
            files,
            type_a,
            type_b,
            name,
            inst_a,
            inst_b,
            id,
            out,
        } => {
            let mut kb = load(&files)?;
            compose_types(&mut kb, &type_a, &type_b, &name).map_err(Failure::domain)?;
            if let (Some(a), Some(b), Some(id)) = (inst_a, inst_b, id) {
                let a = kb.instance(&a).map_err(Failure::domain)?;
                let b = kb.instance(&b).map_err(Failure::domain)?;
                let composed = compose_instances(&kb, a, b, &name, &id).map_err(Failure::domain)?;
                kb.add_instance(composed).map_err(Failure::domain)?;
            }
            fs::write(&out, dsl::serialize_kb(&kb))
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", out.display())))?;
            Ok(String::new())
        }
        Command::Send {
            files,
            to,
            msg,
            args,
            at,
        } => {
            let mut kb = load(&files)?;
            let mut message = Message::new(msg, Target::Instance(to))
                .with_args(args.iter().map(|a| argument(a)).collect());
            if at.is_some() {
                message = message.at(time(&at)?);
            }
            let reply = send(&mut kb, &message).map_err(Failure::domain)?;
            Ok(reply.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            for line in &failure.lines {
                eprintln!("{line}");
            }
            ExitCode::from(failure.code)
        }
    }
}
