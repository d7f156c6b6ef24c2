//! `gen`, `mul`, `analyze` and `verify`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use skewmm::matmul::{freivalds_rounds, naive_mul_report, MulReport};
use skewmm::structure::{random_dense, random_layered, LayerSet};
use skewmm::{det_mul, freivalds, mat_to_skew, mc_mul, naive_mul, CycCtx, FreivaldsOutcome, RatMatrix};

use crate::error::CliError;
use crate::matrix_file::MatrixFile;
use crate::{Algo, AnalyzeArgs, GenArgs, MulArgs, VerifyArgs};

pub(crate) fn context(p: u64) -> Result<Arc<CycCtx>, CliError> {
    CycCtx::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

/// `None` for `dense`, otherwise the listed layers.
pub fn parse_layers(p: u64, text: &str) -> Result<Option<LayerSet>, CliError> {
    if text == "dense" {
        return Ok(None);
    }
    let n = (p - 1) as usize;
    let mut layers = Vec::new();
    for tok in text.split(',') {
        let i: usize = tok
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad layer `{tok}`")))?;
        if i >= n {
            return Err(CliError::Usage(format!("layer {i} outside 0..{n}")));
        }
        layers.push(i);
    }
    Ok(Some(layers.into_iter().collect()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn generate(p: u64, layers: &str, seed: u64, range: i64) -> Result<MatrixFile, CliError> {
    let ctx = context(p)?;
    let matrix = match parse_layers(p, layers)? {
        None => random_dense(&ctx, seed, range),
        Some(set) => random_layered(&ctx, &set, seed, range)?,
    };
    Ok(MatrixFile::new(p, matrix))
}

pub fn gen(args: &GenArgs) -> Result<(), CliError> {
    let file = generate(args.p, &args.layers, args.seed, args.coeff_range)?;
    emit(args.output.as_deref(), &file.to_text())
}

fn load_pair(a: &Path, b: &Path) -> Result<(MatrixFile, MatrixFile), CliError> {
    let fa = MatrixFile::read(a)?;
    let fb = MatrixFile::read(b)?;
    if fa.p != fb.p {
        return Err(CliError::Format {
            path: b.display().to_string(),
            message: format!("p={} does not match p={} of {}", fb.p, fa.p, a.display()),
        });
    }
    Ok((fa, fb))
}

/// The JSON object `mul` prints on stderr.
#[derive(Debug, Serialize)]
pub struct MulSummary {
    pub algorithm: Algo,
    pub p: u64,
    pub t_used: usize,
    pub final_bound: usize,
    pub iterations: usize,
    pub rational_mul_count: u64,
    pub eval_mul_count: u64,
    pub fallback: bool,
    pub wall_time_ms: f64,
    /// Agreement with the schoolbook product, when requested.
    pub check: Option<bool>,
}

pub fn multiply(
    algo: Algo,
    ctx: &Arc<CycCtx>,
    a: &RatMatrix,
    b: &RatMatrix,
    nu: Option<f64>,
    seed: u64,
) -> Result<(RatMatrix, MulReport), CliError> {
    Ok(match algo {
        Algo::Naive => naive_mul_report(a, b)?,
        Algo::Det => det_mul(ctx, a, b)?,
        Algo::Mc => {
            let nu = nu.ok_or_else(|| CliError::Usage("--nu is required for --algo mc".into()))?;
            if !(nu > 0.0 && nu < 1.0) {
                return Err(CliError::Usage(format!("--nu {nu} is outside (0, 1)")));
            }
            mc_mul(ctx, a, b, nu, seed)?
        }
    })
}

pub fn mul(args: &MulArgs) -> Result<(), CliError> {
    let (fa, fb) = load_pair(&args.a, &args.b)?;
    let ctx = context(fa.p)?;
    let (product, report) = multiply(args.algo, &ctx, &fa.matrix, &fb.matrix, args.nu, args.seed)?;
    let check = if args.check {
        Some(product == naive_mul(&fa.matrix, &fb.matrix)?)
    } else {
        None
    };
    let summary = MulSummary {
        algorithm: args.algo,
        p: fa.p,
        t_used: report.t_used,
        final_bound: report.final_bound,
        iterations: report.iterations,
        rational_mul_count: report.rational_mul_count,
        eval_mul_count: report.eval_mul_count,
        fallback: report.fallback,
        wall_time_ms: report.wall_time.as_secs_f64() * 1e3,
        check,
    };
    emit(args.output.as_deref(), &MatrixFile::new(fa.p, product).to_text())?;
    eprintln!("{}", serde_json::to_string(&summary).expect("plain struct"));
    if args.algo == Algo::Det && check == Some(false) {
        return Err(CliError::NotEqual("deterministic product differs from the schoolbook product".into()));
    }
    Ok(())
}

/// Lines printed by `analyze`.
pub fn analysis(file: &MatrixFile) -> Result<Vec<String>, CliError> {
    let ctx = context(file.p)?;
    let f = mat_to_skew(&ctx, &file.matrix)?;
    let mut lines = vec![
        format!("p: {}", file.p),
        format!("skew-sparsity: {}", f.sparsity()),
        format!("support: {}", f.support()),
    ];
    for (e, c) in f.terms() {
        lines.push(format!("norm x^{e}: {}", c.l1_norm()));
    }
    Ok(lines)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let file = MatrixFile::read(&args.file)?;
    let mut text = analysis(&file)?.join("\n");
    text.push('\n');
    emit(None, &text)
}

pub fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let rounds = freivalds_rounds(args.mu).map_err(|e| CliError::Usage(e.to_string()))?;
    let paths: [&PathBuf; 3] = [&args.m, &args.a, &args.b];
    let (fm, fa) = load_pair(paths[0], paths[1])?;
    let (_, fb) = load_pair(paths[0], paths[2])?;
    let outcome = freivalds(&fm.matrix, &fa.matrix, &fb.matrix, args.mu, args.seed)?;
    let verdict = match outcome {
        FreivaldsOutcome::Equal => "equal",
        FreivaldsOutcome::NotEqual => "not equal",
    };
    emit(None, &format!("rounds: {rounds}\nresult: {verdict}\n"))?;
    match outcome {
        FreivaldsOutcome::Equal => Ok(()),
        FreivaldsOutcome::NotEqual => Err(CliError::NotEqual("M != A·B".into())),
    }
}
