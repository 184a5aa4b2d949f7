//! Command implementations behind the `qle` binary.
//!
//! Each command returns a [`RunReport`] and an exit code; the binary only
//! parses arguments and prints. Exit codes: 0 success, 2 unreadable or
//! malformed input, 3 validation failure, 4 dimension mismatch, 5 unexpected
//! proposition outcome, 6 orthogonal pre/post-selection.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::harness::{
    strong_subadditivity_search, two_draw_comparison, verify_proposition, PropositionId,
    SamplerConfig, Status, DEFAULT_TOLERANCE,
};
use crate::io::{inputs_digest, MatrixFile, PvmFile, RunReport};
use crate::linalg::BipartiteDims;
use crate::postselect::{
    abl_probabilities, postselected_logical_entropy, pre_post_state, relation_diagnostic,
    weak_logical_entropy, weak_values, PrePostPair,
};
use crate::quantum::{
    fidelity, logical_divergence, logical_divergence_forms, logical_entropy, measured_state,
    outcome_probabilities, purity, pvm_logical_entropy, relative_logical_entropy,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;
pub const EXIT_ORTHOGONAL: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "qle", version, about = "Logical entropy of quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// L(ρ), purity and spectrum; with --pvm also L_π(ρ), L(ρ') and d(ρ||ρ').
    Entropy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pvm: Option<PathBuf>,
    },
    /// Logical divergence and fidelity of two states.
    Divergence {
        #[arg(long = "in", num_args = 1, required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Relative logical entropy L(A/B) of a bipartite state.
    Relative {
        #[arg(long = "in")]
        input: PathBuf,
        /// Factor dimensions `a,b` when the file does not carry them.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
    /// Seeded checks of the propositions; `ssa` runs the strong-subadditivity search.
    Verify(VerifyArgs),
    /// Weak values, ABL probabilities and both post-selected entropies.
    Postselect {
        #[arg(long)]
        pre: PathBuf,
        #[arg(long)]
        post: PathBuf,
        #[arg(long)]
        pvm: PathBuf,
    },
    /// Monte Carlo two-draw estimate of L_π(ρ).
    Sample {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pvm: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Comma-separated ids (1a..1d, 2..12, ssa) or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub prop: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn parse(path: &Path, msg: impl std::fmt::Display) -> Self {
        Self { code: EXIT_PARSE, message: format!("{}: {msg}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } | Error::LengthMismatch(..) => EXIT_DIMENSION,
            Error::OrthogonalSelection(_) => EXIT_ORTHOGONAL,
            _ => EXIT_VALIDATION,
        };
        Self { code, message: e.to_string() }
    }
}

/// Outcome of one command.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub code: i32,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    command: &'a [String],
    error: ErrorBody<'a>,
    version: &'static str,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    exit_code: i32,
    message: &'a str,
}

/// JSON document printed on stdout when a command fails.
pub fn error_json(argv: &[String], failure: &Failure) -> String {
    serde_json::to_string_pretty(&ErrorReport {
        command: argv,
        error: ErrorBody { exit_code: failure.code, message: &failure.message },
        version: env!("CARGO_PKG_VERSION"),
    })
    .expect("plain data serializes")
}

struct Input {
    path: PathBuf,
    bytes: Vec<u8>,
}

impl Input {
    fn read(path: &Path) -> Result<Self, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::parse(path, e))?;
        Ok(Self { path: path.to_path_buf(), bytes })
    }

    fn text(&self) -> Result<&str, Failure> {
        std::str::from_utf8(&self.bytes).map_err(|e| Failure::parse(&self.path, e))
    }

    fn matrix_file(&self) -> Result<MatrixFile, Failure> {
        MatrixFile::parse(self.text()?).map_err(|e| Failure::parse(&self.path, e))
    }

    fn pvm_file(&self) -> Result<PvmFile, Failure> {
        PvmFile::parse(self.text()?).map_err(|e| Failure::parse(&self.path, e))
    }
}

fn digest(inputs: &[&Input]) -> String {
    let bytes: Vec<&[u8]> = inputs.iter().map(|i| i.bytes.as_slice()).collect();
    inputs_digest(&bytes)
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Entropy { input, pvm } => cmd_entropy(argv, input, pvm.as_deref()),
        Command::Divergence { inputs } => cmd_divergence(argv, inputs),
        Command::Relative { input, dims } => cmd_relative(argv, input, dims.as_deref()),
        Command::Verify(args) => cmd_verify(argv, args),
        Command::Postselect { pre, post, pvm } => cmd_postselect(argv, pre, post, pvm),
        Command::Sample { input, pvm, trials, seed } => cmd_sample(argv, input, pvm, *trials, *seed),
    }
}

fn ok(report: RunReport) -> Result<Outcome, Failure> {
    Ok(Outcome { report, code: EXIT_OK })
}

pub fn cmd_entropy(argv: Vec<String>, input: &Path, pvm: Option<&Path>) -> Result<Outcome, Failure> {
    let rho_in = Input::read(input)?;
    let pvm_in = pvm.map(Input::read).transpose()?;
    let rho_file = rho_in.matrix_file()?;
    let pvm_file = pvm_in.as_ref().map(Input::pvm_file).transpose()?;
    let rho = rho_file.density()?;

    let mut all = vec![&rho_in];
    all.extend(pvm_in.as_ref());
    let mut report = RunReport::new(argv, digest(&all), None);
    report.insert("logical_entropy", logical_entropy(&rho));
    report.insert("purity", purity(&rho));
    report.insert("eigenvalues", rho.eigenvalues());
    if let Some(f) = pvm_file {
        let pvm = f.pvm()?;
        let measured = measured_state(&rho, &pvm)?;
        report.insert("outcome_probabilities", outcome_probabilities(&rho, &pvm)?);
        report.insert("pvm_logical_entropy", pvm_logical_entropy(&rho, &pvm)?);
        report.insert("measured_logical_entropy", logical_entropy(&measured));
        report.insert("divergence_to_measured", logical_divergence(&rho, &measured)?);
        report.insert("pvm_non_degenerate", pvm.is_non_degenerate());
    }
    ok(report)
}

pub fn cmd_divergence(argv: Vec<String>, inputs: &[PathBuf]) -> Result<Outcome, Failure> {
    if inputs.len() != 2 {
        return Err(Failure {
            code: EXIT_PARSE,
            message: format!("divergence needs exactly two --in files, got {}", inputs.len()),
        });
    }
    let a_in = Input::read(&inputs[0])?;
    let b_in = Input::read(&inputs[1])?;
    let (fa, fb) = (a_in.matrix_file()?, b_in.matrix_file()?);
    let (rho, sigma) = (fa.density()?, fb.density()?);
    let forms = logical_divergence_forms(&rho, &sigma)?;
    let mut report = RunReport::new(argv, digest(&[&a_in, &b_in]), None);
    report.insert("divergence", forms.definitional);
    report.insert("divergence_forms", forms);
    report.insert("fidelity", fidelity(&rho, &sigma)?);
    ok(report)
}

pub fn cmd_relative(argv: Vec<String>, input: &Path, dims: Option<&[usize]>) -> Result<Outcome, Failure> {
    let rho_in = Input::read(input)?;
    let f = rho_in.matrix_file()?;
    let mut rho = f.density()?;
    if let Some(d) = dims {
        rho = rho.with_dims(d.to_vec())?;
    }
    let bd: BipartiteDims = rho.bipartite_dims()?;
    let rel = relative_logical_entropy(&rho)?;
    let mut report = RunReport::new(argv, digest(&[&rho_in]), None);
    report.insert("dims", [bd.dim_a, bd.dim_b]);
    report.insert("relative_logical_entropy", rel);
    if !rel.matches_quarter_factor {
        report
            .warnings
            .push("L(A/B) does not equal -(1/4) d(rho_AB || I/d x rho_B); it equals -d(...) with unit factor".into());
    }
    ok(report)
}

enum Target {
    Prop(PropositionId),
    Ssa,
}

fn parse_targets(props: &[String]) -> Result<Vec<Target>, Failure> {
    let mut out = Vec::new();
    for p in props {
        match p.trim() {
            "all" => out.extend(PropositionId::ALL.into_iter().map(Target::Prop)),
            "ssa" => out.push(Target::Ssa),
            other => out.push(Target::Prop(other.parse().map_err(|e: Error| Failure {
                code: EXIT_PARSE,
                message: e.to_string(),
            })?)),
        }
    }
    Ok(out)
}

pub fn cmd_verify(argv: Vec<String>, args: &VerifyArgs) -> Result<Outcome, Failure> {
    let targets = parse_targets(&args.prop)?;
    let cfg = SamplerConfig::with_tolerance(args.seed, args.trials, args.dims.clone(), args.tol)?;
    let mut results = Vec::new();
    let mut all_expected = true;
    let mut report = RunReport::new(argv, inputs_digest(&[]), Some(args.seed));
    for t in &targets {
        let r = match t {
            Target::Prop(id) => {
                if *id == PropositionId::P9 {
                    report
                        .warnings
                        .push("proposition 9: strict inequalities are checked as non-strict with tolerance".into());
                }
                verify_proposition(*id, &cfg)
            }
            Target::Ssa => strong_subadditivity_search(&cfg),
        };
        let expected = match t {
            Target::Prop(_) => r.status == Status::Verified,
            Target::Ssa => r.status == Status::CounterexampleFoundAsExpected,
        };
        if !expected {
            all_expected = false;
            report.warnings.push(format!("proposition {}: unexpected status {:?}", r.id, r.status));
        }
        results.push(r);
    }
    report.insert("config", &cfg);
    report.insert("all_expected", all_expected);
    report.insert("propositions", results);
    Ok(Outcome { report, code: if all_expected { EXIT_OK } else { EXIT_VERIFY } })
}

pub fn cmd_postselect(argv: Vec<String>, pre: &Path, post: &Path, pvm: &Path) -> Result<Outcome, Failure> {
    let (pre_in, post_in, pvm_in) = (Input::read(pre)?, Input::read(post)?, Input::read(pvm)?);
    let (pre_f, post_f, pvm_f) = (pre_in.matrix_file()?, post_in.matrix_file()?, pvm_in.pvm_file()?);
    let pair = PrePostPair::new(pre_f.vector()?, post_f.vector()?)?;
    let pvm = pvm_f.pvm()?;
    let rho = pre_post_state(&pair);
    let weak = weak_values(&rho, &pvm)?;
    let abl = abl_probabilities(&rho, &pvm)?;
    let lw = weak_logical_entropy(&rho, &pvm)?;
    let diag = relation_diagnostic(&rho, &pvm)?;

    let mut report = RunReport::new(argv, digest(&[&pre_in, &post_in, &pvm_in]), None);
    let overlap = pair.overlap();
    report.insert("overlap", [overlap.re, overlap.im]);
    report.insert("weak_values", weak.iter().map(|w| [w.re, w.im]).collect::<Vec<_>>());
    report.insert("abl_unnormalized", &abl.unnormalized);
    report.insert("abl_normalized", &abl.normalized);
    report.insert("postselected_logical_entropy", postselected_logical_entropy(&rho, &pvm)?);
    report.insert("weak_logical_entropy", [lw.re, lw.im]);
    if !diag.agree {
        report.warnings.push(format!(
            "postselected entropy {} differs from |weak entropy|^2 = {} by {}",
            diag.postselected, diag.weak_modulus_squared, diag.abs_difference
        ));
    }
    report.insert("relation_diagnostic", diag);
    ok(report)
}

pub fn cmd_sample(argv: Vec<String>, input: &Path, pvm: &Path, trials: u64, seed: u64) -> Result<Outcome, Failure> {
    let (rho_in, pvm_in) = (Input::read(input)?, Input::read(pvm)?);
    let (rho_f, pvm_f) = (rho_in.matrix_file()?, pvm_in.pvm_file()?);
    let rho = rho_f.density()?;
    let pvm = pvm_f.pvm()?;
    let cmp = two_draw_comparison(&rho, &pvm, trials, seed)?;
    let mut report = RunReport::new(argv, digest(&[&rho_in, &pvm_in]), Some(seed));
    report.insert("estimate", cmp.estimate);
    report.insert("analytic", cmp.analytic);
    report.insert("sigma", cmp.sigma);
    report.insert("z_score", cmp.z_score);
    report.insert("trials", cmp.trials);
    ok(report)
}
