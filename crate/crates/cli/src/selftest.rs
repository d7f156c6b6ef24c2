//! `selftest`: exact checks of the algebraic facts the algorithms rely on.

use std::collections::BTreeMap;
use std::io::Write;

use skewmm::skewpoly::sparse_interpolate;
use skewmm::structure::{
    antidiag, build_ab_perm, build_x, build_y, conjugation_side, l0_characterization_check,
    random_dense, random_layered, y_power, ConjugationSide, LayerSet,
};
use skewmm::transform::{build_v, build_w};
use skewmm::{
    det_mul, mat_to_skew, mc_mul, naive_mul, phi_orientation, skew_to_mat, CycCtx, CycElem,
    Orientation, RatMatrix, Rational, SkewPoly,
};

use crate::error::CliError;

pub const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

fn power(m: &RatMatrix, j: usize) -> RatMatrix {
    (0..j).fold(RatMatrix::identity(m.rows()), |acc, _| &acc * m)
}

fn vw_is_p_identity(ctx: &CycCtx) -> bool {
    let (v, w) = (build_v(ctx), build_w(ctx));
    let n = ctx.n();
    let p = Rational::from_integer((ctx.p() as i64).into());
    (0..n).all(|i| {
        (0..n).all(|k| {
            let entry = (0..n).fold(ctx.zero(), |acc, j| &acc + &(&v[i][j] * &w[j][k]));
            let expect = if i == k { CycElem::rational(ctx.p(), &p) } else { ctx.zero() };
            entry == expect
        })
    })
}

fn join(ps: &[u64]) -> String {
    ps.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

struct Runner<'a> {
    out: &'a mut dyn Write,
    passed: usize,
}

impl Runner<'_> {
    fn check(&mut self, name: &str, p: u64, ok: impl FnOnce() -> Result<bool, skewmm::Error>) -> Result<(), CliError> {
        let label = format!("{name} (p={p})");
        match ok() {
            Ok(true) => {
                self.passed += 1;
                self.line(&format!("ok    {label}"))
            }
            Ok(false) => Err(CliError::Selftest(label)),
            Err(e) => Err(CliError::Selftest(format!("{label}: {e}"))),
        }
    }

    fn line(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "{text}").map_err(|e| CliError::io("<stdout>", e))
    }
}

/// Runs every check at every prime, stopping at the first failure.
pub fn run(out: &mut dyn Write) -> Result<(), CliError> {
    let mut r = Runner { out, passed: 0 };
    let mut orientations = BTreeMap::new();
    let mut sides: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for p in PRIMES {
        let ctx = CycCtx::new(p)?;
        let n = ctx.n();
        r.check("VW = pI", p, || Ok(vw_is_p_identity(&ctx)))?;
        r.check("phi roundtrip on matrices", p, || {
            let m = random_dense(&ctx, p, 9);
            Ok(skew_to_mat(&mat_to_skew(&ctx, &m)?) == m)
        })?;
        r.check("phi roundtrip on polynomials", p, || {
            let layers: LayerSet = [0, n / 2].into_iter().collect();
            let f = mat_to_skew(&ctx, &random_layered(&ctx, &layers, p, 9)?)?;
            Ok(f.support() == layers && mat_to_skew(&ctx, &skew_to_mat(&f))? == f)
        })?;
        r.check("phi(x) = X and phi(beta) = Y", p, || {
            let beta = SkewPoly::constant(&ctx, ctx.beta_pow(1))?;
            Ok(skew_to_mat(&SkewPoly::x_pow(&ctx, 1)) == build_x(&ctx) && skew_to_mat(&beta) == build_y(&ctx))
        })?;
        let y = build_y(&ctx);
        r.check("sum of Y^j = -I", p, || {
            let sum = (1..=n).fold(RatMatrix::zeros(n, n), |acc, j| &acc + &power(&y, j));
            Ok(sum == RatMatrix::identity(n).scale(&Rational::from_integer((-1).into())))
        })?;
        r.check("row formula for Y^j", p, || {
            for j in 0..=n {
                if y_power(&ctx, j)? != power(&y, j) {
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        r.check("AB = antidiagonal", p, || {
            let (a, b) = build_ab_perm(&ctx);
            Ok(&a * &b == antidiag(n))
        })?;
        // rows of a random matrix serve as coefficient vectors c
        let samples: Vec<Vec<Rational>> = random_dense(&ctx, 40 + p, 5).row_vecs();
        r.check("A phi(a) B = (P - Q) antidiagonal", p, || {
            for c in &samples {
                let (lhs, rhs) = l0_characterization_check(&ctx, c)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        let mut side = None;
        r.check("conjugation side is consistent", p, || {
            let found: Vec<ConjugationSide> = samples
                .iter()
                .map(|c| conjugation_side(&ctx, c))
                .collect::<Result<_, _>>()?;
            side = Some(found[0]);
            Ok(found.iter().all(|s| *s == found[0]) && found[0] != ConjugationSide::Neither)
        })?;
        sides.entry(format!("{:?}", side.expect("checked"))).or_default().push(p);
        let orientation = phi_orientation(&ctx)?;
        orientations.insert(p, orientation);
        r.check("products follow the probed orientation", p, || {
            let f = mat_to_skew(&ctx, &random_dense(&ctx, p + 1, 4))?;
            let g = mat_to_skew(&ctx, &random_dense(&ctx, p + 2, 4))?;
            let (mf, mg) = (skew_to_mat(&f), skew_to_mat(&g));
            let expect = match orientation {
                Orientation::Direct => &mf * &mg,
                Orientation::Reversed => &mg * &mf,
            };
            Ok(skew_to_mat(&f.try_mul(&g)?) == expect)
        })?;
        r.check("deterministic product = schoolbook product", p, || {
            let a = random_dense(&ctx, 10 * p, 9);
            let b = random_layered(&ctx, &[1].into_iter().collect(), 10 * p + 1, 9)?;
            Ok(det_mul(&ctx, &a, &b)?.0 == naive_mul(&a, &b)?)
        })?;
        r.check("Monte Carlo product = schoolbook product", p, || {
            let a = random_layered(&ctx, &[0].into_iter().collect(), 20 * p, 9)?;
            let b = random_layered(&ctx, &[0, n - 1].into_iter().collect(), 20 * p + 1, 9)?;
            Ok(mc_mul(&ctx, &a, &b, 0.01, p)?.0 == naive_mul(&a, &b)?)
        })?;
        r.check("sparse interpolation roundtrip", p, || {
            let layers: LayerSet = (0..n.min(2)).collect();
            let f = mat_to_skew(&ctx, &random_layered(&ctx, &layers, 30 * p, 9)?)?;
            let bound = n.min(3);
            let values = (0..2 * bound as u64)
                .map(|l| f.evaluate(&ctx.power_of_v1(l)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(sparse_interpolate(&ctx, &values, bound)? == f)
        })?;
    }
    let first = orientations[&PRIMES[0]];
    if orientations.values().any(|o| *o != first) {
        return Err(CliError::Selftest("phi orientation differs between primes".into()));
    }
    r.line("")?;
    r.line(&format!("VW = pI verified for p ∈ {{{}}}", join(&PRIMES)))?;
    let rule = match first {
        Orientation::Direct => "phi(f*g) = phi(f)·phi(g)",
        Orientation::Reversed => "phi(f*g) = phi(g)·phi(f)",
    };
    r.line(&format!("phi orientation: {first:?} ({rule})"))?;
    for (side, ps) in &sides {
        let form = match side.as_str() {
            "InverseLeft" => "phi(a) = A⁻¹(P−Q)A",
            "InverseRight" => "phi(a) = A(P−Q)A⁻¹",
            _ => "phi(a) = A⁻¹(P−Q)A = A(P−Q)A⁻¹",
        };
        r.line(&format!("conjugation side: {side} for p ∈ {{{}}} ({form})", join(ps)))?;
    }
    let passed = r.passed;
    r.line(&format!("{passed} checks passed"))
}
