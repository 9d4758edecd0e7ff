use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use dualspider::diagram::Diagram;
use dualspider::hilb::{eval, ComplexTensor, HilbError, Interpretation};
use dualspider::protocols::{build_state_transfer, build_teleportation, Mode, ProtocolError, VerificationReport};
use dualspider::rules::{registry, Context, Normalizer, RuleError, RuleSet, DEFAULT_BUDGET};
use dualspider::structures::{
    builtin, check_frobenius, epsilon_from_dualiser, info_flow_check, snake_residual, Builtin, TOL,
};
use dualspider::C64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::interp::{parse_interp, InterpError, InterpFile};
use crate::lang::{parse, print, ParseError};
use crate::render::{to_ascii, to_dot};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NOT_PROVED: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dualspider", version, about = "String diagrams with dual basis structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a diagram and check its well-formedness.
    Validate { file: PathBuf },
    /// Evaluate a diagram to a tensor.
    Eval {
        file: PathBuf,
        #[arg(long)]
        interp: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a diagram to normal form.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        rewrite: RewriteArgs,
    },
    /// Prove two diagrams equal by rewriting both to normal form.
    ProveEqual {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        rewrite: RewriteArgs,
    },
    /// Check every branch of a built-in protocol.
    Verify {
        #[arg(value_enum)]
        protocol: ProtocolName,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = RulesArg::All)]
        rules: RulesArg,
        #[arg(long)]
        json: bool,
    },
    /// Check the laws of the built-in structures and every rewrite rule.
    Selfcheck,
    /// Draw a diagram.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
pub struct RewriteArgs {
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = RulesArg::All)]
    rules: RulesArg,
    /// Dimensions and box tags the rewriter may use.
    #[arg(long)]
    interp: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ProtocolName {
    Teleport,
    StateTransfer,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Numeric,
    Diagrammatic,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum RulesArg {
    All,
    NoFrobenius,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Format {
    Dot,
    Ascii,
}

impl From<RulesArg> for RuleSet {
    fn from(r: RulesArg) -> Self {
        match r {
            RulesArg::All => RuleSet::All,
            RulesArg::NoFrobenius => RuleSet::NoFrobenius,
        }
    }
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Diagrammatic => Mode::Diagrammatic,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Interp { path: String, source: InterpError },
    #[error("{path}: invalid diagram:\n{}", violations.join("\n"))]
    Invalid { path: String, violations: Vec<String> },
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rule(RuleError::BudgetExhausted(_)) => EXIT_BUDGET,
            CliError::Rule(RuleError::NotProved { .. } | RuleError::BoundaryMismatch) => EXIT_NOT_PROVED,
            _ => EXIT_USAGE,
        }
    }
}

/// What a command prints and how it exits.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn load_diagram(path: &Path) -> Result<Diagram, CliError> {
    let d = parse(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })?;
    d.validate().map_err(|vs| CliError::Invalid {
        path: path.display().to_string(),
        violations: vs.iter().map(|v| v.to_string()).collect(),
    })?;
    Ok(d)
}

fn load_interp(path: &Path) -> Result<InterpFile, CliError> {
    parse_interp(&read(path)?).map_err(|source| CliError::Interp { path: path.display().to_string(), source })
}

fn rewrite_context(args: &RewriteArgs) -> Result<Context, CliError> {
    Ok(match &args.interp {
        Some(p) => load_interp(p)?.context,
        None => Context::new(),
    })
}

/// Twelve significant digits, so output is stable across platforms.
fn fixed(x: f64) -> f64 {
    let y: f64 = format!("{x:.11e}").parse().expect("formatted float");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

fn fixed_text(x: f64) -> String {
    format!("{:.11e}", fixed(x))
}

fn complex_json(z: C64) -> Value {
    json!([fixed(z.re), fixed(z.im)])
}

fn tensor_text(t: &ComplexTensor) -> String {
    let mut out = format!("shape {:?}\n", t.shape());
    let shape = t.shape().to_vec();
    let mut index = vec![0usize; shape.len()];
    for z in t.data() {
        let _ = writeln!(out, "{:?} {} {}", index, fixed_text(z.re), fixed_text(z.im));
        for axis in (0..shape.len()).rev() {
            index[axis] += 1;
            if index[axis] < shape[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
    out
}

fn tensor_json(t: &ComplexTensor) -> Value {
    let entries: Vec<Value> = t.data().iter().map(|z| complex_json(*z)).collect();
    json!({ "entries": entries, "shape": t.shape() })
}

fn report_json(name: &str, r: &VerificationReport) -> Value {
    let branches: Vec<Value> = r
        .branches
        .iter()
        .map(|b| {
            let trace: Vec<String> = b.proof.as_ref().map_or(Vec::new(), |p| p.left.to_text().lines().map(String::from).collect());
            json!({
                "equal_to_identity": b.equal_to_identity,
                "outcome": b.outcome,
                "residual": fixed(b.residual),
                "scalar": complex_json(b.scalar),
                "status": b.status.as_str(),
                "trace": trace,
            })
        })
        .collect();
    json!({
        "branches": branches,
        "completeness_constant": r.completeness_constant.map(complex_json),
        "mode": format!("{:?}", r.mode).to_lowercase(),
        "passed": r.passed(),
        "protocol": name,
    })
}

fn selfcheck() -> Outcome {
    let mut laws: Vec<(&str, &str, f64)> = Vec::new();
    for b in Builtin::ALL {
        let s = builtin(b);
        let frob = check_frobenius(&s).expect("built-in shapes");
        laws.extend(frob.rows().map(|(law, r)| (b.name(), law, r)));
        laws.push((b.name(), "dualiser-unitarity", s.dualiser().unitarity_residual()));
        laws.push((b.name(), "snake", snake_residual(&epsilon_from_dualiser(&s))));
        let flow = info_flow_check(&s);
        laws.push((b.name(), "information-flow", flow.left.max(flow.right)));
    }
    let rules: Vec<(&str, f64)> = registry()
        .iter()
        .map(|rule| (rule.name.as_str(), rule.certify().map_or(f64::INFINITY, |c| c.max_residual())))
        .collect();

    let mut out = format!("{:<10} {:<20} residual\n", "structure", "law");
    for (who, law, r) in &laws {
        let _ = writeln!(out, "{who:<10} {law:<20} {r:.3e}");
    }
    let _ = writeln!(out, "\n{:<31} residual", "rule");
    for (name, r) in &rules {
        let _ = writeln!(out, "{name:<31} {r:.3e}");
    }
    let worst = laws.iter().map(|l| l.2).chain(rules.iter().map(|r| r.1)).fold(0.0, f64::max);
    let pass = worst <= TOL;
    let _ = writeln!(out, "\nmax residual {worst:.3e}: {}", if pass { "PASS" } else { "FAIL" });
    Outcome { stdout: out, stderr: String::new(), code: if pass { EXIT_OK } else { EXIT_NOT_PROVED } }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Validate { file } => {
            let d = load_diagram(&file)?;
            let (ins, outs) = d.boundary_signature();
            let list = |ts: Vec<_>| ts.iter().map(|t: &dualspider::WireType| t.to_string()).collect::<Vec<_>>().join(", ");
            Ok(Outcome::ok(format!("valid: [{}] -> [{}], {} nodes\n", list(ins), list(outs), d.node_count())))
        }
        Command::Eval { file, interp, json } => {
            let d = load_diagram(&file)?;
            let i: Interpretation = load_interp(&interp)?.interpretation;
            let t = eval(&d, &i)?;
            Ok(Outcome::ok(if json { format!("{}\n", tensor_json(&t)) } else { tensor_text(&t) }))
        }
        Command::Normalize { file, trace, rewrite } => {
            let d = load_diagram(&file)?;
            let ctx = rewrite_context(&rewrite)?;
            let t = Normalizer::new(rewrite.rules.into(), ctx).budget(rewrite.budget).run(&d)?;
            let mut out = if trace { t.to_text() } else { String::new() };
            let _ = writeln!(out, "{}", print(&t.result));
            Ok(Outcome::ok(out))
        }
        Command::ProveEqual { left, right, rewrite } => {
            let (f, g) = (load_diagram(&left)?, load_diagram(&right)?);
            let ctx = rewrite_context(&rewrite)?;
            let normalizer = Normalizer::new(rewrite.rules.into(), ctx).budget(rewrite.budget);
            match normalizer.prove_equal(&f, &g) {
                Ok(p) => Ok(Outcome::ok(format!("{}proved\n", p.to_text()))),
                Err(RuleError::NotProved { left, right }) => Ok(Outcome {
                    stdout: String::new(),
                    stderr: format!("not proved; normal forms differ\nleft:\n{left}right:\n{right}"),
                    code: EXIT_NOT_PROVED,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { protocol, mode, rules, json } => {
            let p = match protocol {
                ProtocolName::Teleport => build_teleportation(),
                ProtocolName::StateTransfer => build_state_transfer(),
            };
            let r = p.verify(mode.into(), rules.into())?;
            let stdout = if json { format!("{}\n", report_json(p.name, &r)) } else { format!("protocol: {}\n{r}", p.name) };
            Ok(Outcome { stdout, stderr: String::new(), code: if r.passed() { EXIT_OK } else { EXIT_NOT_PROVED } })
        }
        Command::Selfcheck => Ok(selfcheck()),
        Command::Render { file, format } => {
            let d = load_diagram(&file)?;
            Ok(Outcome::ok(match format {
                Format::Dot => to_dot(&d),
                Format::Ascii => to_ascii(&d),
            }))
        }
    }
}
