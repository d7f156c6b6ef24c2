//! The algebra isomorphism φ between the quotient skew polynomial ring and
//! (p−1)×(p−1) rational matrices.
//!
//! φ(f) has as row i the normal-basis coordinates of f(vᵢ). Going back,
//! μ = (1/p)·W·(C·v) where W is the σ-circulant matrix with entries
//! 1/v_{i+j−1} − 1, the inverse of V = (v_{i+j−1}) up to the factor p.
//! Every entry of V and W is a power of β (minus one), so both directions
//! reduce to coordinate rotations and additions.

use std::sync::Arc;

use num_traits::One;

use crate::cyclotomic::{CycCtx, CycElem};
use crate::error::{dim_err, Error, Result};
use crate::matrix::RatMatrix;
use crate::skewpoly::SkewPoly;
use crate::Rational;

/// How φ turns skew products into matrix products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// φ(f ∗ g) = φ(f)·φ(g)
    Direct,
    /// φ(f ∗ g) = φ(g)·φ(f)
    Reversed,
}

impl Orientation {
    /// Orders the preimages of A and B so that φ(left ∗ right) = A·B.
    pub fn product_operands<'a, T>(self, of_a: &'a T, of_b: &'a T) -> (&'a T, &'a T) {
        match self {
            Orientation::Direct => (of_a, of_b),
            Orientation::Reversed => (of_b, of_a),
        }
    }
}

/// V with (i, j) entry v_{i+j−1}, indices mod p − 1.
pub fn build_v(ctx: &CycCtx) -> Vec<Vec<CycElem>> {
    let n = ctx.n();
    (0..n)
        .map(|i| (0..n).map(|j| ctx.v((i + j + 1) as i64)).collect())
        .collect()
}

/// W with (i, j) entry 1/v_{i+j−1} − 1.
pub fn build_w(ctx: &CycCtx) -> Vec<Vec<CycElem>> {
    let n = ctx.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = ctx.v_exponent((i + j + 1) as i64) as i64;
                    &ctx.beta_pow(-e) - &ctx.one()
                })
                .collect()
        })
        .collect()
}

fn check_square(ctx: &CycCtx, c: &RatMatrix) -> Result<()> {
    let n = ctx.n();
    if c.rows() != n || c.cols() != n {
        return Err(dim_err(
            format!("{n}x{n}"),
            format!("{}x{}", c.rows(), c.cols()),
        ));
    }
    Ok(())
}

/// φ⁻¹(C).
pub fn mat_to_skew(ctx: &Arc<CycCtx>, c: &RatMatrix) -> Result<SkewPoly> {
    check_square(ctx, c)?;
    let n = ctx.n();
    // bₖ has normal coordinates row k of C
    let b: Vec<CycElem> = (0..n)
        .map(|k| ctx.from_normal_coords(c.row(k)))
        .collect::<Result<_>>()?;
    let total = b.iter().fold(ctx.zero(), |acc, x| &acc + x);
    let inv_p = Rational::new(One::one(), (ctx.p() as i64).into());
    let terms = (0..n).map(|i| {
        let mut acc = -&total;
        for (k, bk) in b.iter().enumerate() {
            let e = ctx.r_pow((i + k) as i64) as i64;
            acc = &acc + &bk.mul_beta_pow(-e);
        }
        (i as i64, acc.scale(&inv_p))
    });
    SkewPoly::from_terms(ctx, terms)
}

/// φ(f): row i holds the normal coordinates of f(vᵢ) = Σⱼ μⱼ v_{i+j}.
pub fn skew_to_mat(f: &SkewPoly) -> RatMatrix {
    let ctx = f.ctx();
    let n = ctx.n();
    let rows = (0..n)
        .map(|i| {
            let mut acc = ctx.zero();
            for (j, mu) in f.terms() {
                acc = &acc + &mu.mul_beta_pow(ctx.r_pow((i + j) as i64) as i64);
            }
            ctx.normal_coords(&acc).expect("same context")
        })
        .collect();
    RatMatrix::from_rows(rows).expect("square")
}

/// Determines (once per context) whether φ preserves or reverses products,
/// by comparing φ(f ∗ g) with both orderings for f = x, g = β·x².
pub fn phi_orientation(ctx: &Arc<CycCtx>) -> Result<Orientation> {
    if let Some(o) = ctx.orientation.get() {
        return Ok(*o);
    }
    let f = SkewPoly::x_pow(ctx, 1);
    let g = SkewPoly::monomial(ctx, ctx.beta_pow(1), 2)?;
    let (mf, mg) = (skew_to_mat(&f), skew_to_mat(&g));
    let prod = skew_to_mat(&f.try_mul(&g)?);
    let direct = prod == &mf * &mg;
    let reversed = prod == &mg * &mf;
    let o = match (direct, reversed) {
        (true, false) => Orientation::Direct,
        (false, true) => Orientation::Reversed,
        _ => return Err(Error::InconsistentOrientation),
    };
    Ok(*ctx.orientation.get_or_init(|| o))
}
