//! `hecke`: build and verify KL data, balanced representations, the
//! asymptotic ring and its cellular basis.

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use config::{split_list, JobConfig, Stage, Suite};
use run::{write_findings, Findings, Session, Status};

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Exact Hecke algebra computations with unequal parameters")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// JSON config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `A3`, `B2`, `I2:7`, `H3`, ...
    #[arg(long, global = true)]
    system: Option<String>,
    /// `equal`, `universal`, or per-generator vectors like `0,1;1,0`.
    #[arg(long, global = true)]
    weights: Option<String>,
    /// `natural` or a priority list like `1,0`.
    #[arg(long, global = true)]
    order: Option<String>,
    /// Comma list of `builtin`, `builtin:seminormal`, `builtin:dihedral` or files.
    #[arg(long, global = true)]
    reps: Option<String>,
    /// Comma list from kl, reps, jring, cell.
    #[arg(long, global = true)]
    stages: Option<String>,
    /// `all`, `none`, or a comma list of suites.
    #[arg(long, global = true)]
    verify: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Artifact directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the configured stages (the default).
    Run,
    /// Representation checks.
    Rep {
        #[command(subcommand)]
        action: RepCmd,
    },
    /// The asymptotic ring.
    Jring {
        #[command(subcommand)]
        action: JringCmd,
    },
    /// The cellular basis.
    Cell {
        #[command(subcommand)]
        action: CellCmd,
    },
    /// Summarize the artifacts in `--out`.
    Report,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum RepCmd {
    /// Load the representations and check the braid relations.
    Validate,
    /// a, f and Schur elements.
    Schur,
    /// Balancedness certificates.
    Balance,
    /// Leading coefficients and the orthogonality relations.
    Leading,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum JringCmd {
    Build,
    Verify,
    CompareKl,
    Blocks,
}

#[derive(Subcommand, Debug)]
enum CellCmd {
    Build,
    Verify,
    Phi,
    Specialize {
        /// Target weights, e.g. `1;1` or `3;1`.
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "natural")]
        target_order: String,
    },
}

fn build_config(o: &Opts) -> Result<JobConfig, String> {
    let mut c = match &o.config {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    if let Some(s) = &o.system {
        c.system = s.clone();
    }
    if let Some(s) = &o.weights {
        c.weights = s.clone();
    }
    if let Some(s) = &o.order {
        c.order = s.clone();
    }
    if let Some(s) = &o.reps {
        c.reps = split_list(s);
    }
    if let Some(s) = &o.stages {
        c.stages = split_list(s).iter().map(|x| x.parse()).collect::<Result<_, _>>()?;
    }
    if let Some(s) = &o.verify {
        c.verify = split_list(s);
    }
    if let Some(s) = o.seed {
        c.seed = s;
    }
    if let Some(j) = o.jobs {
        c.jobs = j;
    }
    if let Some(p) = &o.out {
        c.out = p.clone();
    }
    Ok(c)
}

/// Stages and suites implied by a subcommand.
fn narrow(c: &mut JobConfig, stage: Stage, suites: &[Suite]) {
    c.stages = vec![stage];
    c.verify = suites.iter().map(|s| s.name().to_string()).collect();
}

fn print_suites(f: &Findings) {
    for r in &f.suites {
        let st = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        println!("{:<10} {st}  {}", r.name, r.detail);
    }
    for e in &f.errors {
        println!("error: {e}");
    }
}

fn print_json(path: &std::path::Path, keys: &[&str]) {
    let Ok(text) = std::fs::read_to_string(path) else { return };
    let Ok(v) = serde_json::from_str::<Value>(&text) else { return };
    for k in keys {
        println!("{k}: {}", serde_json::to_string_pretty(&v[*k]).unwrap_or_default());
    }
}

fn input_error(msg: String, out: &std::path::Path, seed: u64) -> ExitCode {
    eprintln!("error: {msg}");
    let f = Findings {
        schema_version: run::SCHEMA_VERSION,
        seed,
        status: "input-error".into(),
        suites: Vec::new(),
        errors: vec![msg],
    };
    write_findings(out, &f);
    ExitCode::from(3)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut c = match build_config(&cli.opts) {
        Ok(c) => c,
        Err(e) => return input_error(e, cli.opts.out.as_deref().unwrap_or("hecke-out".as_ref()), 0),
    };
    let cmd = cli.cmd.unwrap_or(Cmd::Run);
    if let Cmd::Report = cmd {
        return match report::report(&c.out) {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(3)
            }
        };
    }
    let mut specialize = None;
    match &cmd {
        Cmd::Run | Cmd::Report => {}
        Cmd::Rep { action } => match action {
            RepCmd::Validate => narrow(&mut c, Stage::Reps, &[]),
            RepCmd::Schur => narrow(&mut c, Stage::Reps, &[]),
            RepCmd::Balance => narrow(&mut c, Stage::Reps, &[Suite::Balance]),
            RepCmd::Leading => narrow(&mut c, Stage::Reps, &[Suite::Schur]),
        },
        Cmd::Jring { action } => match action {
            JringCmd::Build | JringCmd::Blocks => narrow(&mut c, Stage::Jring, &[]),
            JringCmd::Verify => narrow(&mut c, Stage::Jring, &[Suite::Ring]),
            JringCmd::CompareKl => narrow(&mut c, Stage::Jring, &[Suite::GammaKl]),
        },
        Cmd::Cell { action } => match action {
            CellCmd::Build => narrow(&mut c, Stage::Cell, &[]),
            CellCmd::Verify => narrow(&mut c, Stage::Cell, &[Suite::Cell]),
            CellCmd::Phi => narrow(&mut c, Stage::Cell, &[Suite::Phi]),
            CellCmd::Specialize { target, target_order } => {
                narrow(&mut c, Stage::Cell, &[]);
                specialize = Some((target.clone(), target_order.clone()));
            }
        },
    }
    c.close_stages();
    if let Err(e) = c.validate() {
        return input_error(e, &c.out, c.seed);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(c.jobs).build_global() {
        eprintln!("warning: {e}");
    }
    let out = c.out.clone();
    let mut session = match Session::new(c) {
        Ok(s) => s,
        Err(e) => return input_error(e, &out, 0),
    };
    let mut findings = session.run();
    if let Some((t, o)) = specialize {
        if findings.status == "pass" {
            if let Err(e) = session.specialize(&t, &o) {
                session.errors.push(e.to_string());
            }
            findings = session.findings();
        }
    }
    write_findings(&out, &findings);
    print_suites(&findings);
    match &cmd {
        Cmd::Rep { action: RepCmd::Schur | RepCmd::Validate | RepCmd::Balance } => {
            for p in &session.prepared {
                println!(
                    "{:<16} dim {:>3}  a = {:<8} f = {:<12} balanced = {}",
                    p.label(),
                    p.dim(),
                    p.schur.a_lambda.to_string(),
                    p.schur.f_lambda.to_string(),
                    p.certificate.balanced
                );
            }
        }
        Cmd::Rep { action: RepCmd::Leading } => {
            for p in &session.prepared {
                println!("{:<16} leading support {} elements", p.label(), p.leading.support().len());
            }
        }
        Cmd::Jring { action: JringCmd::Blocks } => print_json(&out.join("jring.json"), &["blocks", "d_set"]),
        Cmd::Cell { action: CellCmd::Build } => print_json(&out.join("cell.json"), &["order_hasse", "l_good_primes", "transition_det"]),
        _ => {}
    }
    println!("status: {} (artifacts in {})", findings.status, out.display());
    ExitCode::from(findings.exit_code() as u8)
}
