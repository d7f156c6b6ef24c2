//! Structure of skew-sparse matrices.
//!
//! X = φ(x) is the cyclic up-shift and Y = φ(β); the products XⁱYʲ form a
//! basis of all (p−1)×(p−1) matrices. The layer Lᵢ = Xⁱ·L₀ collects the
//! images of aₑ xⁱ, so a matrix lies in ⊕_{i∈I} Lᵢ exactly when its
//! preimage under φ is supported on I.
//!
//! Row formula for powers of Y: row s(i) of Yʲ is the normal-basis
//! coordinate vector of β^{j−i}, i.e. E_{q(j−i)} when j > i, E_{q(p+j−i)}
//! when j < i, and the all-(−1) row J when j = i. With j − i taken in
//! 1..p−1 this covers 0 ≤ j ≤ p − 1 without further boundary cases
//! (j = 0 gives E_{q(p−i)} = E_{s(i)}, the identity row).

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cyclotomic::{CycCtx, CycElem};
use crate::error::{dim_err, Error, Result};
use crate::matrix::RatMatrix;
use crate::skewpoly::{SkewPoly, SupportSet};
use crate::transform::{mat_to_skew, skew_to_mat};
use crate::Rational;

/// Layer indices I ⊆ Z_{p−1}.
pub type LayerSet = SupportSet;

fn unit_row(n: usize, k: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); n];
    row[k - 1] = Rational::one();
    row
}

/// Cyclic up-shift: ones on the superdiagonal and in the lower-left corner.
pub fn build_x(ctx: &CycCtx) -> RatMatrix {
    let n = ctx.n();
    RatMatrix::from_fn(n, n, |i, j| {
        if j == (i + 1) % n {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Rows E_{s₁}, …, J (row k), …, E_{s_{p−1}} with r^{sⱼ−1} ≡ r^{j−1} + 1.
pub fn build_y(ctx: &CycCtx) -> RatMatrix {
    let n = ctx.n();
    let p = ctx.p();
    let rows = (1..=n)
        .map(|j| {
            if j == ctx.k_idx() {
                vec![-Rational::one(); n]
            } else {
                let target = (ctx.r_pow(j as i64 - 1) + 1) % p;
                unit_row(n, ctx.q(target))
            }
        })
        .collect();
    RatMatrix::from_rows(rows).expect("square")
}

/// Row s(i) of Yʲ, for 1 ≤ i ≤ p − 1 and 0 ≤ j ≤ p − 1.
pub fn y_power_row(ctx: &CycCtx, j: usize, i: usize) -> Result<Vec<Rational>> {
    let n = ctx.n();
    if !(1..=n).contains(&i) {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            range: format!("1..={n}"),
        });
    }
    if j > n {
        return Err(Error::IndexOutOfRange {
            index: j as i64,
            range: format!("0..={n}"),
        });
    }
    Ok(match j.cmp(&i) {
        std::cmp::Ordering::Greater => unit_row(n, ctx.q(j - i)),
        std::cmp::Ordering::Less => unit_row(n, ctx.q(ctx.p() + j - i)),
        std::cmp::Ordering::Equal => vec![-Rational::one(); n],
    })
}

/// Yʲ assembled from the row formula.
pub fn y_power(ctx: &CycCtx, j: usize) -> Result<RatMatrix> {
    let n = ctx.n();
    let mut m = RatMatrix::zeros(n, n);
    for i in 1..=n {
        let row = y_power_row(ctx, j, i)?;
        let target = ctx.s(i) - 1;
        for (col, v) in row.into_iter().enumerate() {
            m[(target, col)] = v;
        }
    }
    Ok(m)
}

fn check_count(n: usize, c: &[Rational]) -> Result<()> {
    if c.len() != n {
        return Err(dim_err(format!("{n} values"), c.len()));
    }
    Ok(())
}

/// Toeplitz P(c₁..c_{p−1}): entry (i, j) is c_{(i−j) mod p}, zero on the
/// diagonal. Its size is `c.len()`.
pub fn build_p(c: &[Rational]) -> RatMatrix {
    let n = c.len();
    let p = n + 1;
    RatMatrix::from_fn(n, n, |i, j| {
        let k = (i + p - j) % p;
        if k == 0 {
            Rational::zero()
        } else {
            c[k - 1].clone()
        }
    })
}

/// Q(c₁..c_{p−1}): row i is constant cᵢ.
pub fn build_q(c: &[Rational]) -> RatMatrix {
    let n = c.len();
    RatMatrix::from_fn(n, n, |i, _| c[i].clone())
}

/// Permutation matrices A (rows E_{s(i)}) and B (columns E_{q(i)}ᵀ).
pub fn build_ab_perm(ctx: &CycCtx) -> (RatMatrix, RatMatrix) {
    let n = ctx.n();
    let a = RatMatrix::from_fn(n, n, |i, j| {
        if ctx.s(i + 1) == j + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let b = RatMatrix::from_fn(n, n, |i, j| {
        if ctx.q(j + 1) == i + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    (a, b)
}

/// Entry (i, j) is 1 iff p divides i + j (1-based).
pub fn antidiag(n: usize) -> RatMatrix {
    RatMatrix::from_fn(n, n, |i, j| {
        if i + j + 2 == n + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// XⁱYʲ for 0 ≤ i ≤ p − 2, 1 ≤ j ≤ p − 1: Yʲ with rows shifted up by i.
pub fn layer_basis_elem(ctx: &CycCtx, i: usize, j: usize) -> Result<RatMatrix> {
    let n = ctx.n();
    if i >= n {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            range: format!("0..{n}"),
        });
    }
    if !(1..=n).contains(&j) {
        return Err(Error::IndexOutOfRange {
            index: j as i64,
            range: format!("1..={n}"),
        });
    }
    Ok(y_power(ctx, j)?.shift_rows_up(i as i64))
}

/// Skew-sparsity of C and the layers it occupies.
pub fn skew_sparsity(ctx: &Arc<CycCtx>, c: &RatMatrix) -> Result<(usize, LayerSet)> {
    let f = mat_to_skew(ctx, c)?;
    Ok((f.sparsity(), f.support()))
}

/// Random integer-coordinate element with entries in [−range, range], nonzero.
pub fn random_elem<R: Rng>(ctx: &CycCtx, rng: &mut R, range: i64) -> CycElem {
    let range = range.max(1);
    loop {
        let coords: Vec<i64> = (0..ctx.n()).map(|_| rng.random_range(-range..=range)).collect();
        let e = CycElem::from_ints(&coords);
        if !e.is_zero() {
            return e;
        }
    }
}

/// Random matrix in ⊕_{i∈I} Lᵢ with skew support exactly I.
pub fn random_layered(
    ctx: &Arc<CycCtx>,
    layers: &LayerSet,
    seed: u64,
    range: i64,
) -> Result<RatMatrix> {
    if layers.is_empty() {
        return Err(Error::EmptyLayerSet);
    }
    if let Some(bad) = layers.iter().find(|&e| e >= ctx.n()) {
        return Err(Error::IndexOutOfRange {
            index: bad as i64,
            range: format!("0..{}", ctx.n()),
        });
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let terms: Vec<(i64, CycElem)> = layers
        .iter()
        .map(|e| (e as i64, random_elem(ctx, &mut rng, range)))
        .collect();
    Ok(skew_to_mat(&SkewPoly::from_terms(ctx, terms)?))
}

/// Random dense matrix with integer entries in [−range, range].
pub fn random_dense(ctx: &CycCtx, seed: u64, range: i64) -> RatMatrix {
    let range = range.max(1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = ctx.n();
    RatMatrix::from_fn(n, n, |_, _| {
        Rational::from_integer(rng.random_range(-range..=range).into())
    })
}

/// Both sides of A·φ(Σ cⱼβʲ)·B = (P(c) − Q(c))·antidiag.
pub fn l0_characterization_check(ctx: &Arc<CycCtx>, c: &[Rational]) -> Result<(RatMatrix, RatMatrix)> {
    check_count(ctx.n(), c)?;
    let elem = CycElem::from_coeffs(c.to_vec());
    let phi = skew_to_mat(&SkewPoly::constant(ctx, elem)?);
    let (a, b) = build_ab_perm(ctx);
    let lhs = &(&a * &phi) * &b;
    let rhs = &(&build_p(c) - &build_q(c)) * &antidiag(ctx.n());
    Ok((lhs, rhs))
}

/// Which conjugation of P − Q reproduces φ(Σ cⱼβʲ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConjugationSide {
    /// φ(a) = A⁻¹ (P − Q) A
    InverseLeft,
    /// φ(a) = A (P − Q) A⁻¹
    InverseRight,
    Both,
    Neither,
}

/// Compares φ(Σ cⱼβʲ) with A⁻¹(P−Q)A and A(P−Q)A⁻¹ (A is a permutation,
/// so A⁻¹ = Aᵀ).
pub fn conjugation_side(ctx: &Arc<CycCtx>, c: &[Rational]) -> Result<ConjugationSide> {
    check_count(ctx.n(), c)?;
    let phi = skew_to_mat(&SkewPoly::constant(ctx, CycElem::from_coeffs(c.to_vec()))?);
    let (a, _) = build_ab_perm(ctx);
    let at = a.transpose();
    let pq = &build_p(c) - &build_q(c);
    let left = phi == &(&at * &pq) * &a;
    let right = phi == &(&a * &pq) * &at;
    Ok(match (left, right) {
        (true, true) => ConjugationSide::Both,
        (true, false) => ConjugationSide::InverseLeft,
        (false, true) => ConjugationSide::InverseRight,
        (false, false) => ConjugationSide::Neither,
    })
}

/// The up-shift by i that carries L₀ onto Lᵢ: row k moves to row k − i.
pub fn shift_to_layer(c: &RatMatrix, i: usize) -> RatMatrix {
    c.shift_rows_up(i as i64)
}
