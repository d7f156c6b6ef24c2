#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewmm::{CycCtx, CycElem, RatMatrix, Rational, SkewPoly};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ctx(p: u64) -> Arc<CycCtx> {
    CycCtx::new(p).unwrap()
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

pub fn elem(p: usize) -> impl Strategy<Value = CycElem> {
    proptest::collection::vec(rational(), p - 1).prop_map(CycElem::from_coeffs)
}

pub fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=4).into())
}

pub fn rand_elem<R: Rng>(ctx: &CycCtx, rng: &mut R) -> CycElem {
    CycElem::from_coeffs((0..ctx.n()).map(|_| rand_rational(rng)).collect())
}

pub fn rand_nonzero_elem<R: Rng>(ctx: &CycCtx, rng: &mut R) -> CycElem {
    loop {
        let e = rand_elem(ctx, rng);
        if !e.is_zero() {
            return e;
        }
    }
}

pub fn rand_matrix<R: Rng>(n: usize, rng: &mut R) -> RatMatrix {
    RatMatrix::from_fn(n, n, |_, _| rand_rational(rng))
}

pub fn rand_int_matrix<R: Rng>(n: usize, rng: &mut R) -> RatMatrix {
    RatMatrix::from_fn(n, n, |_, _| q(rng.random_range(-9i64..=9)))
}

/// Random polynomial with exactly `t` terms on random distinct exponents.
pub fn rand_poly<R: Rng>(ctx: &Arc<CycCtx>, t: usize, rng: &mut R) -> SkewPoly {
    let mut exps: Vec<usize> = (0..ctx.n()).collect();
    for i in 0..exps.len() {
        let j = rng.random_range(i..exps.len());
        exps.swap(i, j);
    }
    let terms: Vec<(i64, CycElem)> = exps[..t]
        .iter()
        .map(|&e| (e as i64, rand_nonzero_elem(ctx, rng)))
        .collect();
    SkewPoly::from_terms(ctx, terms).unwrap()
}
