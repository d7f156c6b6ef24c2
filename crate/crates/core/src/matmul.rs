//! Matrix multiplication: the schoolbook oracle, the deterministic
//! sumset-bounded algorithm, and the Monte Carlo algorithm that discovers the
//! product's sparsity by doubling and certifies it with Freivalds' test.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::counter;
use crate::cyclotomic::CycCtx;
use crate::error::{dim_err, Error, Result};
use crate::matrix::{Cubic, RatMatrix, RectMul};
use crate::skewpoly::{
    batch_evaluate_via_matrices, evaluation_points, interpolate_known_support, sparse_interpolate,
    sumset,
};
use crate::transform::{mat_to_skew, phi_orientation, skew_to_mat};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Naive,
    Deterministic,
    MonteCarlo,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Deterministic => "det",
            Algorithm::MonteCarlo => "mc",
        }
    }
}

/// Instrumentation for one multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulReport {
    pub algorithm: Algorithm,
    /// Sumset size (deterministic) or sparsity of the recovered product
    /// (Monte Carlo); p − 1 for the naive product.
    pub t_used: usize,
    /// Sparsity bound T of the accepted round (Monte Carlo only).
    pub final_bound: usize,
    /// Doubling rounds executed (Monte Carlo only).
    pub iterations: usize,
    /// All rational multiplications performed.
    pub rational_mul_count: u64,
    /// Rational multiplications spent evaluating the product polynomial.
    pub eval_mul_count: u64,
    /// Monte Carlo hit the T = p − 1 cap without a passing test and fell
    /// back to the schoolbook product.
    pub fallback: bool,
    pub wall_time: Duration,
}

impl MulReport {
    fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            t_used: 0,
            final_bound: 0,
            iterations: 0,
            rational_mul_count: 0,
            eval_mul_count: 0,
            fallback: false,
            wall_time: Duration::ZERO,
        }
    }
}

fn check_pair(ctx: &CycCtx, a: &RatMatrix, b: &RatMatrix) -> Result<()> {
    let n = ctx.n();
    for m in [a, b] {
        if m.rows() != n || m.cols() != n {
            return Err(dim_err(
                format!("{n}x{n}"),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
    }
    Ok(())
}

/// Schoolbook product of two square matrices of equal size.
pub fn naive_mul(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(dim_err(
            format!("{0}x{0}", a.rows()),
            format!("{}x{}", b.rows(), b.cols()),
        ));
    }
    a.try_mul(b)
}

/// Deterministic multiplication with the cubic evaluation kernel.
pub fn det_mul(ctx: &Arc<CycCtx>, a: &RatMatrix, b: &RatMatrix) -> Result<(RatMatrix, MulReport)> {
    det_mul_with(ctx, a, b, &Cubic)
}

/// Deterministic multiplication.
///
/// The product polynomial is supported on S = sumset(φ⁻¹(A), φ⁻¹(B)), so it
/// is determined by its values at v₁⁰..v₁^{|S|−1}. Those values are read off
/// `points · A · B` without ever forming the product polynomial, then the
/// known-support Vandermonde system recovers it.
pub fn det_mul_with(
    ctx: &Arc<CycCtx>,
    a: &RatMatrix,
    b: &RatMatrix,
    hook: &dyn RectMul,
) -> Result<(RatMatrix, MulReport)> {
    check_pair(ctx, a, b)?;
    let start = Instant::now();
    // probed once per context; kept out of the count so reports are reproducible
    let orientation = phi_orientation(ctx)?;
    let mut report = MulReport::new(Algorithm::Deterministic);
    let (result, total) = counter::measure(|| -> Result<RatMatrix> {
        let f_a = mat_to_skew(ctx, a)?;
        let f_b = mat_to_skew(ctx, b)?;
        let (left, right) = orientation.product_operands(&f_a, &f_b);
        let support = sumset(left, right);
        report.t_used = support.len();
        if support.is_empty() {
            return Ok(RatMatrix::zeros(ctx.n(), ctx.n()));
        }
        let points = evaluation_points(ctx, 0, support.len());
        // row-vector coordinates: the product acts as "apply A, then B"
        let (evals, eval_muls) =
            counter::measure(|| batch_evaluate_via_matrices(ctx, &points, a, b, hook));
        report.eval_mul_count = eval_muls;
        let product = interpolate_known_support(ctx, &evals?, &support)?;
        Ok(skew_to_mat(&product))
    });
    report.rational_mul_count = total;
    report.wall_time = start.elapsed();
    Ok((result?, report))
}

/// Result of a Freivalds test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FreivaldsOutcome {
    Equal,
    NotEqual,
}

/// Number of rounds k = ⌈log₂(1/μ)⌉, i.e. the least k with 2^{−k} ≤ μ.
pub fn freivalds_rounds(mu: f64) -> Result<u32> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::BadProbability(mu));
    }
    let mut k = 0;
    let mut miss = 1.0f64;
    while miss > mu {
        miss *= 0.5;
        k += 1;
    }
    Ok(k)
}

/// Uniform bits from ChaCha20 (rand_chacha 0.9, `seed_from_u64`), taken from
/// each 64-bit output most-significant bit first.
pub struct BitSource {
    rng: ChaCha20Rng,
    word: u64,
    left: u32,
}

impl BitSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            word: 0,
            left: 0,
        }
    }

    pub fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.word >> 63 == 1;
        self.word <<= 1;
        self.left -= 1;
        bit
    }

    /// A 0/1 vector of length `n`.
    pub fn bit_vector(&mut self, n: usize) -> Vec<Rational> {
        (0..n)
            .map(|_| Rational::from_integer(u8::from(self.next_bit()).into()))
            .collect()
    }
}

/// Tests M = A·B with ⌈log₂(1/μ)⌉ rounds of random 0/1 probes.
pub fn freivalds(
    m: &RatMatrix,
    a: &RatMatrix,
    b: &RatMatrix,
    mu: f64,
    seed: u64,
) -> Result<FreivaldsOutcome> {
    freivalds_with(m, a, b, mu, &mut BitSource::new(seed))
}

/// Freivalds' test drawing its probes from an existing bit stream.
pub fn freivalds_with(
    m: &RatMatrix,
    a: &RatMatrix,
    b: &RatMatrix,
    mu: f64,
    bits: &mut BitSource,
) -> Result<FreivaldsOutcome> {
    let rounds = freivalds_rounds(mu)?;
    let n = m.rows();
    for x in [m, a, b] {
        if x.rows() != n || x.cols() != n {
            return Err(dim_err(
                format!("{n}x{n}"),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
    }
    for _ in 0..rounds {
        let y = bits.bit_vector(n);
        let lhs = m.mul_vec(&y)?;
        let rhs = a.mul_vec(&b.mul_vec(&y)?)?;
        if lhs != rhs {
            return Ok(FreivaldsOutcome::NotEqual);
        }
    }
    Ok(FreivaldsOutcome::Equal)
}

/// Monte Carlo multiplication with the cubic evaluation kernel.
pub fn mc_mul(
    ctx: &Arc<CycCtx>,
    a: &RatMatrix,
    b: &RatMatrix,
    nu: f64,
    seed: u64,
) -> Result<(RatMatrix, MulReport)> {
    mc_mul_with(ctx, a, b, nu, seed, &Cubic)
}

/// Monte Carlo multiplication.
///
/// For T = 1, 2, 4, … (capped at p − 1) recovers a T-sparse candidate from
/// 2T evaluations of the product, and accepts it once Freivalds' test at
/// μ = ν/⌈log₂(p−1)⌉ says it equals A·B. Evaluations carry over between
/// rounds, so each round only computes the new ones. If the test still fails
/// at the cap the schoolbook product is returned and the report is flagged.
pub fn mc_mul_with(
    ctx: &Arc<CycCtx>,
    a: &RatMatrix,
    b: &RatMatrix,
    nu: f64,
    seed: u64,
    hook: &dyn RectMul,
) -> Result<(RatMatrix, MulReport)> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::BadProbability(nu));
    }
    check_pair(ctx, a, b)?;
    let start = Instant::now();
    let cap = ctx.n();
    let log_n = usize::BITS - (cap - 1).leading_zeros();
    let mu = nu / f64::from(log_n.max(1));
    let mut bits = BitSource::new(seed);
    let mut report = MulReport::new(Algorithm::MonteCarlo);
    let (result, total) = counter::measure(|| -> Result<RatMatrix> {
        let mut evals = Vec::new();
        let mut bound = 1usize;
        loop {
            report.iterations += 1;
            report.final_bound = bound;
            let need = 2 * bound;
            if evals.len() < need {
                let points = evaluation_points(ctx, evals.len(), need);
                let (fresh, muls) =
                    counter::measure(|| batch_evaluate_via_matrices(ctx, &points, a, b, hook));
                report.eval_mul_count += muls;
                evals.extend(fresh?);
            }
            // a bound below the true sparsity may make interpolation fail;
            // that is just another rejected guess
            if let Ok(candidate) = sparse_interpolate(ctx, &evals[..need], bound) {
                let m = skew_to_mat(&candidate);
                if freivalds_with(&m, a, b, mu, &mut bits)? == FreivaldsOutcome::Equal {
                    report.t_used = candidate.sparsity();
                    return Ok(m);
                }
            }
            if bound == cap {
                report.fallback = true;
                report.t_used = cap;
                return naive_mul(a, b);
            }
            bound = (2 * bound).min(cap);
        }
    });
    report.rational_mul_count = total;
    report.wall_time = start.elapsed();
    Ok((result?, report))
}

/// Schoolbook product with a report, for uniform dispatch.
pub fn naive_mul_report(a: &RatMatrix, b: &RatMatrix) -> Result<(RatMatrix, MulReport)> {
    let start = Instant::now();
    let (m, muls) = counter::measure(|| naive_mul(a, b));
    let mut report = MulReport::new(Algorithm::Naive);
    report.t_used = a.rows();
    report.rational_mul_count = muls;
    report.wall_time = start.elapsed();
    Ok((m?, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn rounds() {
        assert_eq!(freivalds_rounds(0.5).unwrap(), 1);
        assert_eq!(freivalds_rounds(0.25).unwrap(), 2);
        assert_eq!(freivalds_rounds(0.01).unwrap(), 7);
        assert_eq!(freivalds_rounds(0.9).unwrap(), 1);
        for bad in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(freivalds_rounds(bad).is_err());
        }
    }

    #[test]
    fn naive_examples() {
        let a = RatMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        let b = RatMatrix::from_ints(&[&[5, -1], &[0, 2]]);
        assert_eq!(naive_mul(&a, &b).unwrap(), RatMatrix::from_ints(&[&[5, 3], &[15, 5]]));
        assert_eq!(naive_mul(&RatMatrix::identity(2), &b).unwrap(), b);
        assert!(naive_mul(&a, &RatMatrix::zeros(2, 2)).unwrap().is_zero());
        assert!(naive_mul(&a, &RatMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn det_identity() {
        let ctx = CycCtx::new(7).unwrap();
        let id = RatMatrix::identity(6);
        let (m, rep) = det_mul(&ctx, &id, &id).unwrap();
        assert_eq!(m, id);
        assert_eq!(rep.t_used, 1);
    }

    #[test]
    fn det_zero() {
        let ctx = CycCtx::new(5).unwrap();
        let a = RatMatrix::from_fn(4, 4, |i, j| q((i * 4 + j) as i64));
        let (m, rep) = det_mul(&ctx, &a, &RatMatrix::zeros(4, 4)).unwrap();
        assert!(m.is_zero());
        assert_eq!(rep.t_used, 0);
    }

    #[test]
    fn det_dense_p5() {
        let ctx = CycCtx::new(5).unwrap();
        let a = RatMatrix::from_fn(4, 4, |i, j| Rational::new((((i * 7 + j * 3) % 5) as i64 - 2).into(), (1 + (i as i64 % 2)).into()));
        let b = RatMatrix::from_fn(4, 4, |i, j| q(((i * 5 + j * 11) % 7) as i64 - 3));
        let (m, rep) = det_mul(&ctx, &a, &b).unwrap();
        assert_eq!(m, naive_mul(&a, &b).unwrap());
        assert_eq!(rep.t_used, 4);
    }

    #[test]
    fn freivalds_accepts_true_product() {
        let a = RatMatrix::from_fn(6, 6, |i, j| q((i as i64 - j as i64) * 3 + 1));
        let b = RatMatrix::from_fn(6, 6, |i, j| q((i * j) as i64 % 4));
        let m = naive_mul(&a, &b).unwrap();
        for seed in 0..50 {
            assert_eq!(freivalds(&m, &a, &b, 0.01, seed).unwrap(), FreivaldsOutcome::Equal);
        }
        let mut bad = m.clone();
        bad[(2, 3)] += q(1);
        // 7 rounds, each catches the error with probability 1/2
        let caught = (0..50)
            .filter(|&s| freivalds(&bad, &a, &b, 0.01, s).unwrap() == FreivaldsOutcome::NotEqual)
            .count();
        assert!(caught >= 45);
    }

    #[test]
    fn bit_source_is_reproducible() {
        let mut a = BitSource::new(11);
        let mut b = BitSource::new(11);
        let xs: Vec<bool> = (0..200).map(|_| a.next_bit()).collect();
        let ys: Vec<bool> = (0..200).map(|_| b.next_bit()).collect();
        assert_eq!(xs, ys);
        let ones = xs.iter().filter(|&&x| x).count();
        assert!((60..140).contains(&ones));
    }

    #[test]
    fn mc_identity() {
        let ctx = CycCtx::new(7).unwrap();
        let id = RatMatrix::identity(6);
        let (m, rep) = mc_mul(&ctx, &id, &id, 0.1, 1).unwrap();
        assert_eq!(m, id);
        assert_eq!(rep.final_bound, 1);
        assert_eq!(rep.iterations, 1);
        assert!(!rep.fallback);
    }

    #[test]
    fn mc_rejects_bad_nu() {
        let ctx = CycCtx::new(5).unwrap();
        let id = RatMatrix::identity(4);
        assert!(matches!(mc_mul(&ctx, &id, &id, 1.0, 0), Err(Error::BadProbability(_))));
    }
}
