//! `bench`: operation counts over (p, t, algorithm, seed) cells.
//!
//! For a target t the pair is A on layer set I = {0} and B on
//! K = {0, …, t−1}, so I + K = K has exactly t elements. A uses the cell
//! seed and B the seed plus 2^32. Records are JSON lines, written in cell
//! order. SKEWMM_THREADS sets how many cells run at once (default 1).

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use skewmm::structure::{random_layered, LayerSet};
use skewmm::{naive_mul, CycCtx};

use crate::commands::{context, multiply};
use crate::error::CliError;
use crate::{Algo, BenchArgs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub p: u64,
    pub t: usize,
    pub algorithm: Algo,
    pub layers_a: Vec<usize>,
    pub layers_b: Vec<usize>,
    pub seed: u64,
    pub t_used: usize,
    pub final_bound: usize,
    pub iterations: usize,
    pub rational_mul_count: u64,
    pub eval_mul_count: u64,
    pub fallback: bool,
    pub wall_time_ms: f64,
    /// Agreement with the schoolbook product; absent unless checked.
    pub correct: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub p: u64,
    pub t: usize,
    pub algo: Algo,
    pub seed: u64,
}

/// `a..b` (inclusive) or a comma-separated list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("bad seed list `{text}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

pub fn run_cell(
    ctx: &Arc<CycCtx>,
    cell: &Cell,
    nu: f64,
    range: i64,
    check: bool,
) -> Result<BenchRecord, CliError> {
    let layers_a: LayerSet = [0].into_iter().collect();
    let layers_b: LayerSet = (0..cell.t).collect();
    let a = random_layered(ctx, &layers_a, cell.seed, range)?;
    let b = random_layered(ctx, &layers_b, cell.seed.wrapping_add(1 << 32), range)?;
    let (product, report) = multiply(cell.algo, ctx, &a, &b, Some(nu), cell.seed)?;
    let correct = if check {
        Some(product == naive_mul(&a, &b)?)
    } else {
        None
    };
    Ok(BenchRecord {
        p: cell.p,
        t: cell.t,
        algorithm: cell.algo,
        layers_a: layers_a.iter().collect(),
        layers_b: layers_b.iter().collect(),
        seed: cell.seed,
        t_used: report.t_used,
        final_bound: report.final_bound,
        iterations: report.iterations,
        rational_mul_count: report.rational_mul_count,
        eval_mul_count: report.eval_mul_count,
        fallback: report.fallback,
        wall_time_ms: report.wall_time.as_secs_f64() * 1e3,
        correct,
    })
}

fn threads() -> Result<usize, CliError> {
    match std::env::var("SKEWMM_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!("SKEWMM_THREADS={v} is not a positive integer"))),
        },
    }
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let seeds = parse_seeds(&args.seeds)?;
    if !(args.nu > 0.0 && args.nu < 1.0) {
        return Err(CliError::Usage(format!("--nu {} is outside (0, 1)", args.nu)));
    }
    let mut cells = Vec::new();
    let mut contexts = Vec::new();
    for &p in &args.p_list {
        let ctx = context(p)?;
        for &t in &args.t_list {
            if t == 0 || t > ctx.n() {
                return Err(CliError::Usage(format!("t={t} outside 1..={} for p={p}", ctx.n())));
            }
            for &algo in &args.algos {
                for &seed in &seeds {
                    cells.push((contexts.len(), Cell { p, t, algo, seed }));
                }
            }
        }
        contexts.push(ctx);
    }
    let work = |(k, cell): &(usize, Cell)| run_cell(&contexts[*k], cell, args.nu, args.coeff_range, args.check);
    let records: Vec<Result<BenchRecord, CliError>> = match threads()? {
        1 => cells.iter().map(work).collect(),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| cells.par_iter().map(work).collect()),
    };
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(&record?).expect("plain struct"));
        out.push('\n');
    }
    match &args.json {
        Some(path) => write_file(path, &out),
        None => std::io::stdout()
            .write_all(out.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path.display(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1..5").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_seeds("3,9, 4").unwrap(), vec![3, 9, 4]);
        assert!(parse_seeds("5..1").is_err());
        assert!(parse_seeds("x").is_err());
    }
}
