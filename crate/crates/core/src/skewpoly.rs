//! The quotient skew polynomial ring Q(β)[x; σ]/(x^{p−1} − 1).
//!
//! Multiplication follows x · c = σ(c) · x. A polynomial acts on Q(β) by
//! `Σ aₑ xᵉ ↦ (b ↦ Σ aₑ σᵉ(b))`, and this action is multiplicative:
//! `(f ∗ g)(b) = f(g(b))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::cyclotomic::{CycCtx, CycElem};
use crate::error::{dim_err, Error, Result};
use crate::linalg::{self, Field};
use crate::matrix::{RatMatrix, RectMul};
use crate::modular::Embedding;
use crate::Rational;

/// Sorted set of exponents in Z_{p−1}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SupportSet(BTreeSet<usize>);

impl SupportSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary integers, reducing them mod `modulus`.
    pub fn from_exponents(modulus: usize, elems: impl IntoIterator<Item = i64>) -> Self {
        Self(
            elems
                .into_iter()
                .map(|e| e.rem_euclid(modulus as i64) as usize)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(&e)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// {a + b mod modulus}.
    pub fn sum_with(&self, other: &Self, modulus: usize) -> Self {
        let mut out = BTreeSet::new();
        for a in &self.0 {
            for b in &other.0 {
                out.insert((a + b) % modulus);
            }
        }
        Self(out)
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Sparse skew polynomial; only nonzero coefficients are stored.
#[derive(Clone)]
pub struct SkewPoly {
    ctx: Arc<CycCtx>,
    terms: BTreeMap<usize, CycElem>,
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p() && self.terms == other.terms
    }
}

impl Eq for SkewPoly {}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly(p={}; ", self.ctx.p())?;
        for (e, c) in &self.terms {
            write!(f, "[{c:?}]x^{e} ")?;
        }
        write!(f, ")")
    }
}

impl SkewPoly {
    pub fn zero(ctx: &Arc<CycCtx>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms, reducing exponents mod p − 1.
    pub fn from_terms(
        ctx: &Arc<CycCtx>,
        terms: impl IntoIterator<Item = (i64, CycElem)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ctx);
        for (e, c) in terms {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    /// c · xᵉ
    pub fn monomial(ctx: &Arc<CycCtx>, c: CycElem, e: i64) -> Result<Self> {
        Self::from_terms(ctx, [(e, c)])
    }

    pub fn constant(ctx: &Arc<CycCtx>, c: CycElem) -> Result<Self> {
        Self::monomial(ctx, c, 0)
    }

    pub fn one(ctx: &Arc<CycCtx>) -> Self {
        Self::constant(ctx, ctx.one()).expect("same context")
    }

    /// The polynomial xᵉ.
    pub fn x_pow(ctx: &Arc<CycCtx>, e: i64) -> Self {
        Self::monomial(ctx, ctx.one(), e).expect("same context")
    }

    /// Σ cⱼ xᵉʲ with rational coefficients.
    pub fn from_rational_terms(ctx: &Arc<CycCtx>, terms: &[(i64, Rational)]) -> Self {
        Self::from_terms(
            ctx,
            terms.iter().map(|(e, c)| (*e, CycElem::rational(ctx.p(), c))),
        )
        .expect("same context")
    }

    fn add_term(&mut self, e: i64, c: CycElem) -> Result<()> {
        if c.p() != self.ctx.p() {
            return Err(Error::ContextMismatch {
                left: self.ctx.p() as u64,
                right: c.p() as u64,
            });
        }
        let e = e.rem_euclid(self.ctx.n() as i64) as usize;
        let merged = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(e, merged);
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<CycCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> SupportSet {
        self.terms.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &CycElem)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: usize) -> CycElem {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.p() != other.ctx.p() {
            return Err(Error::ContextMismatch {
                left: self.ctx.p() as u64,
                right: other.ctx.p() as u64,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e as i64, c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (*e as i64, a.scale(c)));
        Self::from_terms(&self.ctx, terms).expect("same context")
    }

    /// Skew product: (a xˢ) ∗ (b xᵏ) = a σˢ(b) x^{s+k}, exponents mod p − 1.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx);
        for (&s, a) in &self.terms {
            for (&k, b) in &other.terms {
                let twisted = self.ctx.sigma(b, s as i64)?;
                out.add_term((s + k) as i64, a * &twisted)?;
            }
        }
        Ok(out)
    }

    /// f(b) = Σ aₑ σᵉ(b).
    pub fn evaluate(&self, b: &CycElem) -> Result<CycElem> {
        let mut acc = self.ctx.zero();
        for (&e, a) in &self.terms {
            acc = acc.try_add(&a.try_mul(&self.ctx.sigma(b, e as i64)?)?)?;
        }
        Ok(acc)
    }
}

/// supp(f) + supp(g) mod p − 1.
pub fn sumset(f: &SkewPoly, g: &SkewPoly) -> SupportSet {
    f.support().sum_with(&g.support(), f.ctx.n())
}

/// Rows are the normal-basis coordinates of v₁^ℓ for ℓ in `from..to`.
pub fn evaluation_points(ctx: &CycCtx, from: usize, to: usize) -> RatMatrix {
    let rows = (from..to)
        .map(|l| {
            ctx.normal_coords(&ctx.power_of_v1(l as u64))
                .expect("same context")
        })
        .collect();
    RatMatrix::from_rows(rows).unwrap_or_else(|_| RatMatrix::zeros(0, ctx.n()))
}

/// Evaluates f ∗ g at the points whose normal-basis coordinates are the rows
/// of `points`, given the matrices of the inner map g and the outer map f.
///
/// Each result row `points[i] · inner · outer` is already the coordinate
/// vector of the answer in the normal basis.
pub fn batch_evaluate_via_matrices(
    ctx: &CycCtx,
    points: &RatMatrix,
    inner: &RatMatrix,
    outer: &RatMatrix,
    hook: &dyn RectMul,
) -> Result<Vec<CycElem>> {
    let n = ctx.n();
    if points.cols() != n {
        return Err(dim_err(format!("{n} columns"), points.cols()));
    }
    for m in [inner, outer] {
        if m.rows() != n || m.cols() != n {
            return Err(dim_err(
                format!("{n}x{n}"),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
    }
    let stage = hook.multiply(points, inner)?;
    let out = hook.multiply(&stage, outer)?;
    (0..out.rows())
        .map(|i| ctx.from_normal_coords(out.row(i)))
        .collect()
}

/// Solves Σⱼ cⱼ nⱼ^k = a_k (k = 0..t−1) for nodes nⱼ = β^{node_exps[j]}.
///
/// Uses the master polynomial Π(z) = ∏ (z − nⱼ): with qⱼ = Π/(z − nⱼ),
/// Σ_k qⱼ,ₖ a_k = cⱼ qⱼ(nⱼ). Multiplying by a node is a coordinate rotation,
/// so only the t² products qⱼ,ₖ·a_k and t inversions are general field work.
pub fn solve_transposed_vandermonde(
    p: usize,
    node_exps: &[usize],
    values: &[CycElem],
) -> Result<Vec<CycElem>> {
    let t = node_exps.len();
    if values.len() < t {
        return Err(Error::TooFewValues {
            needed: t,
            got: values.len(),
        });
    }
    let zero = CycElem::zero(p);
    // Π, ascending coefficients, monic of degree t
    let mut master = vec![CycElem::one(p)];
    for &x in node_exps {
        let mut next = vec![zero.clone(); master.len() + 1];
        for (k, c) in master.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &c.mul_beta_pow(x as i64);
        }
        master = next;
    }
    node_exps
        .iter()
        .map(|&x| {
            // synthetic division by (z − β^x)
            let mut quot = vec![zero.clone(); t];
            let mut carry = zero.clone();
            for k in (1..=t).rev() {
                carry = &master[k] + &carry.mul_beta_pow(x as i64);
                quot[k - 1] = carry.clone();
            }
            let mut denom = zero.clone();
            for c in quot.iter().rev() {
                denom = &denom.mul_beta_pow(x as i64) + c;
            }
            let numer = quot
                .iter()
                .zip(values)
                .fold(zero.clone(), |acc, (q, a)| &acc + &(q * a));
            let inv = denom.inv().map_err(|_| Error::Singular)?;
            Ok(&numer * &inv)
        })
        .collect()
}

/// Recovers f with supp(f) ⊆ `support` from `values[ℓ] = f(v₁^ℓ)`,
/// ℓ = 0..|support|−1.
pub fn interpolate_known_support(
    ctx: &Arc<CycCtx>,
    values: &[CycElem],
    support: &SupportSet,
) -> Result<SkewPoly> {
    let t = support.len();
    if values.len() < t {
        return Err(Error::TooFewValues {
            needed: t,
            got: values.len(),
        });
    }
    let exps: Vec<usize> = support.iter().collect();
    // σᵉ(v₁) = v_{e+1} = β^{r^e}
    let nodes: Vec<usize> = exps.iter().map(|&e| ctx.r_pow(e as i64)).collect();
    let coeffs = solve_transposed_vandermonde(ctx.p(), &nodes, &values[..t])?;
    SkewPoly::from_terms(ctx, exps.into_iter().map(|e| e as i64).zip(coeffs))
}

/// Recovers f from `values[ℓ] = f(v₁^ℓ)`, ℓ = 0..2T−1, given #f ≤ T.
///
/// Finds t = #f as the rank of the T×T Toeplitz matrix of values, solves the
/// t×t Toeplitz system for the locator polynomial Λ(z) = ∏ (z − v_{eⱼ+1}),
/// locates its roots among v₁..v_{p−1} by exhaustive evaluation, and solves
/// the transposed Vandermonde system for the coefficients.
///
/// The rank, Λ and its roots are computed in a prime-field image of Q(β),
/// where elimination does not suffer coefficient growth. The support found
/// there is only a guess: the coefficients are then computed exactly and the
/// result is accepted only if it reproduces all 2T values. Two polynomials of
/// sparsity ≤ T that agree on 2T consecutive powers of v₁ are equal, so an
/// accepted answer is exact. Three primes are tried; `NoSparseFit` after
/// that means the values do not come from a T-sparse polynomial, unless all
/// three primes divide some nonzero minor of the value matrices.
pub fn sparse_interpolate(ctx: &Arc<CycCtx>, values: &[CycElem], bound: usize) -> Result<SkewPoly> {
    check_values(ctx, values, bound)?;
    let values = &values[..2 * bound];
    for attempt in 0..3 {
        let emb = Embedding::nth(ctx.p(), attempt);
        let Some(images) = values.iter().map(|a| emb.image(a)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let Ok(roots) = locate_support(ctx, &images, bound, |e| emb.omega_pow(e as i64)) else {
            continue;
        };
        let f = interpolate_known_support(ctx, values, &roots.into_iter().collect())?;
        if reproduces(&f, values) {
            return Ok(f);
        }
    }
    Err(Error::NoSparseFit { bound })
}

/// The same recovery carried out entirely over Q(β). Much slower; kept as
/// a reference.
pub fn sparse_interpolate_exact(
    ctx: &Arc<CycCtx>,
    values: &[CycElem],
    bound: usize,
) -> Result<SkewPoly> {
    check_values(ctx, values, bound)?;
    let roots = locate_support(ctx, &values[..2 * bound], bound, |e| ctx.beta_pow(e as i64))?;
    interpolate_known_support(ctx, values, &roots.into_iter().collect())
}

fn check_values(ctx: &CycCtx, values: &[CycElem], bound: usize) -> Result<()> {
    if values.len() < 2 * bound {
        return Err(Error::TooFewValues {
            needed: 2 * bound,
            got: values.len(),
        });
    }
    if let Some(bad) = values.iter().find(|a| a.p() != ctx.p()) {
        return Err(Error::ContextMismatch {
            left: ctx.p() as u64,
            right: bad.p() as u64,
        });
    }
    Ok(())
}

/// Exponents e whose node β^{r^e} is a root of the locator polynomial built
/// from `values`. `node(k)` maps an exponent of β to the field of `values`.
fn locate_support<F: Field>(
    ctx: &CycCtx,
    values: &[F],
    bound: usize,
    node: impl Fn(usize) -> F,
) -> Result<Vec<usize>> {
    let toeplitz = |size: usize| -> Vec<Vec<F>> {
        (0..size)
            .map(|i| (0..size).map(|k| values[size - 1 - i + k].clone()).collect())
            .collect()
    };
    let t = linalg::rank(&toeplitz(bound))?;
    if t == 0 {
        return Ok(Vec::new());
    }
    let rhs: Vec<F> = (0..t)
        .map(|i| values[0].zero_like().minus(&values[2 * t - 1 - i]))
        .collect();
    let lambda = linalg::solve(&toeplitz(t), &rhs)?;

    let mut roots = Vec::with_capacity(t);
    for e in 0..ctx.n() {
        let z = node(ctx.r_pow(e as i64));
        // Horner on z^t + λ_{t−1} z^{t−1} + ⋯ + λ_0
        let mut acc = values[0].one_like();
        for l in lambda.iter().rev() {
            acc = acc.times(&z).plus(l);
        }
        if acc.is_zero_elem() {
            roots.push(e);
        }
    }
    if roots.len() != t {
        return Err(Error::MissingRoots {
            found: roots.len(),
            expected: t,
        });
    }
    Ok(roots)
}

/// Whether f(v₁^ℓ) = values[ℓ] for every ℓ.
fn reproduces(f: &SkewPoly, values: &[CycElem]) -> bool {
    let ctx = f.ctx();
    values.iter().enumerate().all(|(l, want)| {
        // f(β^ℓ) = Σ a_e β^{ℓ·r^e}
        let got = f.terms().fold(ctx.zero(), |acc, (e, a)| {
            &acc + &a.mul_beta_pow((l * ctx.r_pow(e as i64)) as i64)
        });
        &got == want
    })
}
